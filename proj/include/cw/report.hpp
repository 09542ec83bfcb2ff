#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>

#include <json.hpp>

#include "cw/alphabet.hpp"
#include "cw/counted_word.hpp"
#include "cw/engine.hpp"
#include "cw/system.hpp"

namespace cw {

// Machine-readable account of one verification run: the verdict, one record
// per refinement round (search outcome, iteration and word counts, wall
// time), the final resolution, and the witness when one exists.  Everything
// except the timing fields is deterministic for a fixed model and
// configuration.

inline std::string verdict_name(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::Unreachable:
      return "unreachable";
    case VerdictKind::Reachable:
      return "reachable";
    case VerdictKind::OutOfBudget:
      return "budget-exhausted";
  }
  return "unknown";
}

// A round either proves the target unreachable, finds a trace (a genuine
// one only in the round that produced the final witness), or times out.
inline std::string round_outcome_name(SearchOutcome outcome, bool genuine) {
  switch (outcome) {
    case SearchOutcome::Unreachable:
      return "safe";
    case SearchOutcome::TraceFound:
      return genuine ? "unsafe" : "refined";
    case SearchOutcome::OutOfBudget:
      return "budget";
  }
  return "unknown";
}

inline nlohmann::json run_report(const ParameterizedSystem& sys,
                                 const std::string& model,
                                 Direction direction, const Verdict& verdict,
                                 bool include_trace) {
  nlohmann::json j;
  j["model"] = model;
  j["direction"] = direction == Direction::Forward ? "forward" : "backward";
  j["verdict"] = verdict_name(verdict.kind);

  nlohmann::json rounds = nlohmann::json::array();
  for (size_t i = 0; i < verdict.refinements.size(); ++i) {
    const RefinementRecord& r = verdict.refinements[i];
    const bool last = i + 1 == verdict.refinements.size();
    nlohmann::json row;
    row["index"] = i;
    row["seconds"] = r.seconds;
    row["steps"] = r.stats.steps;
    row["words"] = r.stats.words;
    row["outcome"] = round_outcome_name(
        r.outcome, last && verdict.kind == VerdictKind::Reachable);
    rounds.push_back(std::move(row));
  }
  j["refinements"] = std::move(rounds);

  nlohmann::json rho = nlohmann::json::object();
  for (uint32_t q = 0; q < sys.alphabet.size(); ++q) {
    const uint32_t k = verdict.final_rho.at(StateId{q});
    if (k > 0) {
      rho[sys.alphabet.name(StateId{q})] = k;
    }
  }
  j["final_resolution"] = std::move(rho);

  if (verdict.witness) {
    nlohmann::json w;
    nlohmann::json run = nlohmann::json::array();
    for (const Configuration& c : verdict.witness->run) {
      run.push_back(to_text(c, sys.alphabet));
    }
    w["run"] = std::move(run);
    w["transitions"] = verdict.witness->transitions;
    j["witness"] = std::move(w);
  }

  if (include_trace && verdict.trace) {
    nlohmann::json t;
    nlohmann::json words = nlohmann::json::array();
    for (const CountedWord& phi : verdict.trace->words) {
      words.push_back(to_text(phi, sys.alphabet));
    }
    t["words"] = std::move(words);
    t["transitions"] = verdict.trace->transitions;
    j["trace"] = std::move(t);
  }
  return j;
}

}  // namespace cw
