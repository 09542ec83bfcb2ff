#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cw/engine.hpp"
#include "cw/error.hpp"
#include "cw/model_parser.hpp"
#include "cw/oracle.hpp"
#include "cw/report.hpp"

namespace cw {

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw UsageError("cannot read '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

// One "--rho state:k" entry; the split is at the last ':' because state
// names may contain colons of their own.
inline void apply_rho_entry(Resolution& rho, const Alphabet& sigma,
                            const std::string& entry) {
  const size_t colon = entry.rfind(':');
  if (colon == std::string::npos || colon + 1 == entry.size()) {
    throw UsageError("expected state:k, got '" + entry + "'");
  }
  const std::optional<StateId> q = sigma.find(entry.substr(0, colon));
  if (!q) {
    throw UsageError("unknown state in '" + entry + "'");
  }
  uint32_t k = 0;
  for (size_t i = colon + 1; i < entry.size(); ++i) {
    if (entry[i] < '0' || entry[i] > '9') {
      throw UsageError("threshold is not a number in '" + entry + "'");
    }
    k = k * 10 + static_cast<uint32_t>(entry[i] - '0');
  }
  rho.thresholds.set(*q, k);
}

inline std::string seconds_text(double s) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(3) << s << " s";
  return std::move(out).str();
}

}  // namespace detail

// Command-line driver.  Exit codes: 0 the bad set is unreachable, 1 it is
// reachable (a concrete witness was found), 2 a budget ran out first,
// anything above 2 is a usage or model error (64 bad arguments, 65 the
// model file does not parse; the argument parser's own failures use its
// codes, all above 2).
inline int run_cli(std::vector<std::string> args, std::ostream& out,
                   std::ostream& err) {
  CLI::App app{"safety checker for linearly ordered parameterized systems",
               "cwcheck"};
  app.require_subcommand(1);

  CLI::App* verify_cmd = app.add_subcommand(
      "verify", "prove the bad set unreachable or extract a concrete run");
  std::string verify_model;
  std::string direction_name = "backward";
  double budget = 1200.0;
  std::size_t max_refinements = 0;
  std::vector<std::string> rho_entries;
  bool with_trace = false;
  std::string report_path;
  verify_cmd->add_option("model", verify_model, "model file")
      ->required()
      ->check(CLI::ExistingFile);
  verify_cmd->add_option("--direction", direction_name,
                         "explore from the initial set (forward) or from the "
                         "bad set (backward)")
      ->check(CLI::IsMember({"forward", "backward"}))
      ->capture_default_str();
  verify_cmd
      ->add_option("--budget", budget, "per-round time budget in seconds")
      ->capture_default_str();
  verify_cmd
      ->add_option("--max-refinements", max_refinements,
                   "refinement cap, 0 = unlimited")
      ->capture_default_str();
  verify_cmd->add_option("--rho", rho_entries,
                         "initial resolution entry state:k (repeatable)");
  verify_cmd->add_flag("--trace", with_trace,
                       "include the last symbolic trace in the output");
  verify_cmd->add_option("--report", report_path,
                         "write a JSON run report to this file");

  CLI::App* oracle_cmd = app.add_subcommand(
      "oracle", "explicit-state check at a fixed process count");
  std::string oracle_model;
  uint32_t oracle_n = 2;
  oracle_cmd->add_option("model", oracle_model, "model file")
      ->required()
      ->check(CLI::ExistingFile);
  oracle_cmd->add_option("--n", oracle_n, "number of processes")->required();

  CLI::App* denote_cmd = app.add_subcommand(
      "denote", "enumerate short configurations a counted word denotes");
  std::string denote_model;
  std::string word_literal;
  uint32_t max_len = 4;
  denote_cmd->add_option("model", denote_model, "model file")
      ->required()
      ->check(CLI::ExistingFile);
  denote_cmd->add_option(
      "--word", word_literal,
      "counted-word literal; without it the model's own initial and bad "
      "words are dumped");
  denote_cmd
      ->add_option("--max-len", max_len, "maximum configuration length")
      ->capture_default_str();

  try {
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (verify_cmd->parsed()) {
      const ParameterizedSystem sys =
          parse_model(detail::read_file(verify_model));
      Resolution rho = Resolution::zero(sys.alphabet.size());
      for (const std::string& entry : rho_entries) {
        detail::apply_rho_entry(rho, sys.alphabet, entry);
      }
      const Direction direction = direction_name == "forward"
                                      ? Direction::Forward
                                      : Direction::Backward;
      EngineConfig config;
      config.step_budget_seconds = budget;
      config.max_refinements = max_refinements;
      const Verdict verdict = verify(sys, direction, rho, config);

      for (size_t i = 0; i < verdict.refinements.size(); ++i) {
        const RefinementRecord& r = verdict.refinements[i];
        const bool last = i + 1 == verdict.refinements.size();
        out << "round " << i << ": "
            << round_outcome_name(
                   r.outcome, last && verdict.kind == VerdictKind::Reachable)
            << " (steps " << r.stats.steps << ", words " << r.stats.words
            << ", " << detail::seconds_text(r.seconds) << ")\n";
      }
      out << "verdict: " << verdict_name(verdict.kind) << "\n";
      std::string rho_text;
      for (uint32_t q = 0; q < sys.alphabet.size(); ++q) {
        const uint32_t k = verdict.final_rho.at(StateId{q});
        if (k > 0) {
          rho_text += (rho_text.empty() ? "" : " ") +
                      sys.alphabet.name(StateId{q}) + ":" + std::to_string(k);
        }
      }
      out << "final resolution: " << (rho_text.empty() ? "all zero" : rho_text)
          << "\n";
      if (verdict.witness) {
        out << "witness: " << to_text(verdict.witness->run.front(),
                                      sys.alphabet)
            << "\n";
        for (size_t i = 0; i < verdict.witness->transitions.size(); ++i) {
          out << "  " << verdict.witness->transitions[i] << ": "
              << to_text(verdict.witness->run[i + 1], sys.alphabet) << "\n";
        }
      }
      if (with_trace && verdict.trace) {
        out << "trace: " << to_text(verdict.trace->words.front(), sys.alphabet)
            << "\n";
        for (size_t i = 0; i < verdict.trace->transitions.size(); ++i) {
          out << "  " << verdict.trace->transitions[i] << ": "
              << to_text(verdict.trace->words[i + 1], sys.alphabet) << "\n";
        }
      }
      if (!report_path.empty()) {
        std::ofstream rf(report_path);
        rf << run_report(sys, verify_model, direction, verdict, with_trace)
                  .dump(2)
           << "\n";
        if (!rf) {
          throw UsageError("cannot write '" + report_path + "'");
        }
      }
      switch (verdict.kind) {
        case VerdictKind::Unreachable:
          return 0;
        case VerdictKind::Reachable:
          return 1;
        case VerdictKind::OutOfBudget:
          return 2;
      }
    }

    if (oracle_cmd->parsed()) {
      const ParameterizedSystem sys =
          parse_model(detail::read_file(oracle_model));
      const oracle::ReachResult result = oracle::explicit_reach(sys, oracle_n);
      out << "n=" << oracle_n << ": " << result.reached.size()
          << " reachable configurations, bad "
          << (result.bad_hit ? "reachable" : "unreachable") << "\n";
      return result.bad_hit ? 1 : 0;
    }

    if (denote_cmd->parsed()) {
      const ParameterizedSystem sys =
          parse_model(detail::read_file(denote_model));
      const auto dump = [&](const std::string& label, const CountedWord& w) {
        out << label << " " << to_text(w, sys.alphabet) << "\n";
        for (const Configuration& c : oracle::enumerate_denotation(w, max_len)) {
          out << "  " << (c.empty() ? "eps" : to_text(c, sys.alphabet))
              << "\n";
        }
      };
      if (!word_literal.empty()) {
        dump("word", parse_counted_word(word_literal, sys.alphabet));
      } else {
        for (const CountedWord& w : sys.init_set) {
          dump("init", w);
        }
        for (const CountedWord& w : sys.bad_set) {
          dump("bad", w);
        }
      }
      return 0;
    }
  } catch (const ParseError& e) {
    err << "model error: " << e.what() << "\n";
    return 65;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 64;
  }
  return 64;
}

}  // namespace cw
