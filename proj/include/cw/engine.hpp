#pragma once

// Reachability engine.  Three layers:
//   - check_reachability: a budget-bounded worklist search over counted
//     words whose successors are relaxed under a resolution, returning a
//     trace when the target set is met;
//   - analyze_trace: walks a trace back against the search direction and
//     either extracts a concrete witness run or returns a strictly stronger
//     resolution that rules the trace out;
//   - verify: alternates the two until Unreachable, Reachable, or budget
//     exhaustion.

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "cw/meet.hpp"
#include "cw/separation.hpp"
#include "cw/system.hpp"

namespace cw {

// Search orientation.  Forward explores successors of the initial set until
// the bad set is met; Backward explores predecessors of the bad set until
// the initial set is met.  The two wirings differ only in which symbolic set
// plays source and target and in which of post/pre expands the frontier.
enum class Direction {
  Forward,
  Backward,
};

struct EngineConfig {
  // Wall-clock budget for a single reachability round.
  double step_budget_seconds = 1200.0;
  // Maximum number of reachability rounds; 0 means unlimited.
  std::size_t max_refinements = 0;
};

struct StepStats {
  uint64_t steps = 0;  // worklist entries popped
  uint64_t words = 0;  // relaxed successor words generated
};

// An alternating sequence of counted words and transition ids: words[i + 1]
// is a relaxed successor of words[i] under transitions[i], and words.front()
// belongs to the search's source set.
struct Trace {
  std::vector<CountedWord> words;
  std::vector<std::string> transitions;

  friend bool operator==(const Trace&, const Trace&) = default;
};

// A concrete violation: run[i + 1] is a step_concrete successor of run[i]
// under transitions[i]; the run starts in the initial set's denotation and
// ends in the bad set's.
struct Witness {
  std::vector<Configuration> run;
  std::vector<std::string> transitions;

  friend bool operator==(const Witness&, const Witness&) = default;
};

enum class SearchOutcome {
  Unreachable,
  TraceFound,
  OutOfBudget,
};

namespace detail {

// 4-bit saturating thermometer per state for the first 16 states: bit j of a
// lane is set when the count exceeds j.  Pointwise inclusion of counts then
// implies sig(a) & ~sig(b) == 0, giving a one-word necessary condition for
// Parikh inclusion (exact up to counts of 3, saturating above).
inline uint64_t parikh_signature(const Multiset& m) {
  uint64_t sig = 0;
  const uint32_t lanes = m.size() < 16 ? m.size() : 16;
  for (uint32_t q = 0; q < lanes; ++q) {
    const uint64_t c = std::min<uint32_t>(m.at(StateId{q}), 4);
    sig |= ((uint64_t{1} << c) - 1) << (q * 4);
  }
  return sig;
}

}  // namespace detail

// One node of the search forest: a frontier word plus the edge that produced
// it.  Nodes are appended and never removed — an evicted entry may still be
// the parent of a live one — so a trace can be rebuilt from any node by
// walking the parent chain.
struct TraceNode {
  CountedWord word;
  std::string transition;  // edge label from the parent; empty for a seed
  const TraceNode* parent = nullptr;
};

// One frontier entry: a node of the search forest.  The word's base Parikh
// image and that image's bit signature are cached because the subsumption
// scans filter on them.
struct SearchEntry {
  const TraceNode* node = nullptr;
  Multiset parikh;
  uint64_t signature = 0;

  const CountedWord& word() const { return node->word; }
};

// Working and visited sets of the search, exposed so callers can observe
// invariants: the word components of work ∪ visited form an entailment
// antichain after every iteration.  The working set is bucketed by word size
// and consumed smallest-first (FIFO within a size): only words no larger can
// subsume a candidate, so expanding the small, general words first evicts
// large frontier words before they are ever expanded.  The forest owns every
// word accepted into the search and `rejected` owns the distinct words
// turned away, so the duplicate filter can hold stable pointers to both.
struct SearchState {
  std::map<std::size_t, std::deque<SearchEntry>> work;
  std::vector<SearchEntry> visited;
  StepStats stats;
  std::deque<TraceNode> forest;
  std::deque<CountedWord> rejected;
  std::unordered_map<uint64_t, std::vector<const CountedWord*>> seen;

  bool work_empty() const {
    for (const auto& [size, bucket] : work) {
      if (!bucket.empty()) {
        return false;
      }
    }
    return true;
  }
};

using SearchObserver = std::function<void(const SearchState&)>;

struct SearchResult {
  SearchOutcome outcome = SearchOutcome::Unreachable;
  std::optional<Trace> trace;  // present iff outcome == TraceFound
  StepStats stats;
};

namespace detail {

inline const std::vector<CountedWord>& source_set(const ParameterizedSystem& sys,
                                                  Direction d) {
  return d == Direction::Forward ? sys.init_set : sys.bad_set;
}

inline const std::vector<CountedWord>& target_set(const ParameterizedSystem& sys,
                                                  Direction d) {
  return d == Direction::Forward ? sys.bad_set : sys.init_set;
}

// Frontier expansion along the search direction.
inline std::vector<CountedWord> step_along(const CountedWord& phi,
                                           const Transition& t, Direction d) {
  return d == Direction::Forward ? post_word(phi, t) : pre_word(phi, t);
}

// Expansion against the search direction, used when walking a trace back.
inline std::vector<CountedWord> step_against(const CountedWord& phi,
                                             const Transition& t, Direction d) {
  return d == Direction::Forward ? pre_word(phi, t) : post_word(phi, t);
}

// Structural hash of a counted word, used only to bucket the duplicate
// filter; equality is always re-checked on the bucket's members.
inline uint64_t hash_step(uint64_t h, uint64_t v) {
  return (h ^ v) * 0x100000001b3ULL;
}

inline uint64_t word_key(const CountedWord& word) {
  uint64_t h = 0xcbf29ce484222325ULL;
  const uint32_t n = word.alphabet_size();
  h = hash_step(h, word.size());
  for (std::size_t i = 0; i < word.size(); ++i) {
    const Tuple& t = word.at(i);
    h = hash_step(h, t.state.index);
    for (uint32_t q = 0; q < n; ++q) {
      const Atom l = t.left.at(StateId{q});
      const Atom r = t.right.at(StateId{q});
      h = hash_step(h, (uint64_t{l.bound} << 2) | (l.is_eq() ? 1u : 0u));
      h = hash_step(h, (uint64_t{r.bound} << 2) | (r.is_eq() ? 3u : 2u));
    }
  }
  return h;
}

// The trace leading to a forest node, rebuilt by walking the parent chain.
inline Trace trace_of(const TraceNode* node) {
  Trace trace;
  for (const TraceNode* cur = node; cur != nullptr; cur = cur->parent) {
    trace.words.push_back(cur->word);
    if (cur->parent != nullptr) {
      trace.transitions.push_back(cur->transition);
    }
  }
  std::reverse(trace.words.begin(), trace.words.end());
  std::reverse(trace.transitions.begin(), trace.transitions.end());
  return trace;
}

// Antichain insertion: drops the candidate if a resident word already covers
// its denotation, otherwise evicts every resident the candidate covers (from
// both the working and the visited set) and appends it to the working set.
// The bit signature, word size and base Parikh inclusion are necessary for
// entailment and gate the expensive injection search.  A candidate equal to
// any word seen before is dropped outright, which cannot change the outcome:
// every word ever accepted stays covered by some resident (an evictor must
// cover the evictee, and coverage is transitive), and every word ever
// rejected was covered by a resident when it was rejected, so an equal
// candidate would be rejected by the subsumption scan anyway.
inline void insert_candidate(SearchState& state, CountedWord word,
                             const TraceNode* parent,
                             const std::string& transition) {
  std::vector<const CountedWord*>& bucket = state.seen[word_key(word)];
  for (const CountedWord* prior : bucket) {
    if (*prior == word) {
      return;
    }
  }
  Multiset parikh = Multiset::parikh(word.base(), word.alphabet_size());
  const uint64_t signature = parikh_signature(parikh);
  const auto covered = [&](const SearchEntry& resident) {
    return (resident.signature & ~signature) == 0 &&
           resident.word().size() <= word.size() &&
           resident.parikh.included_in(parikh) &&
           entailment_injection(resident.word(), word);
  };
  const auto work_covered = [&] {
    // Only residents no larger than the candidate can cover it, so buckets
    // past its size are skipped.
    const auto stop = state.work.upper_bound(word.size());
    for (auto it = state.work.begin(); it != stop; ++it) {
      if (std::any_of(it->second.begin(), it->second.end(), covered)) {
        return true;
      }
    }
    return false;
  };
  if (std::any_of(state.visited.begin(), state.visited.end(), covered) ||
      work_covered()) {
    state.rejected.push_back(std::move(word));
    bucket.push_back(&state.rejected.back());
    return;
  }
  const auto covers = [&](const SearchEntry& resident) {
    return (signature & ~resident.signature) == 0 &&
           word.size() <= resident.word().size() &&
           parikh.included_in(resident.parikh) &&
           entailment_injection(word, resident.word());
  };
  // Symmetrically, the candidate can only cover residents at least its size.
  for (auto it = state.work.lower_bound(word.size()); it != state.work.end();
       ++it) {
    std::erase_if(it->second, covers);
  }
  std::erase_if(state.visited, covers);
  state.forest.push_back(TraceNode{std::move(word), transition, parent});
  bucket.push_back(&state.forest.back().word);
  state.work[state.forest.back().word.size()].push_back(
      SearchEntry{&state.forest.back(), std::move(parikh), signature});
}

}  // namespace detail

// Worklist reachability check under the resolution `rho`.  Smallest words
// are expanded first (FIFO among equal sizes), which keeps the discipline
// deterministic for a fixed system and settles the general words before the
// specific ones they subsume get a turn.  The observer, when given, runs
// after every completed iteration.
inline SearchResult check_reachability(const ParameterizedSystem& sys,
                                       const Resolution& rho,
                                       Direction direction,
                                       double budget_seconds = 1200.0,
                                       const SearchObserver& observe = {}) {
  const std::vector<CountedWord>& source = detail::source_set(sys, direction);
  const std::vector<CountedWord>& target = detail::target_set(sys, direction);
  CW_CHECK(!source.empty() && !target.empty(),
           "reachability needs nonempty source and target sets");

  SearchState state;
  // Seeds enter unrelaxed; the subsumption check prunes redundant ones.
  for (const CountedWord& e : source) {
    detail::insert_candidate(state, e, nullptr, std::string());
  }

  const auto start = std::chrono::steady_clock::now();
  const auto out_of_budget = [&start, budget_seconds] {
    const std::chrono::duration<double> elapsed =
        std::chrono::steady_clock::now() - start;
    return elapsed.count() > budget_seconds;
  };

  while (!state.work_empty()) {
    if (out_of_budget()) {
      return SearchResult{SearchOutcome::OutOfBudget, std::nullopt, state.stats};
    }
    auto bucket_it = state.work.begin();
    while (bucket_it->second.empty()) {
      bucket_it = state.work.erase(bucket_it);
    }
    SearchEntry current = std::move(bucket_it->second.front());
    bucket_it->second.pop_front();
    ++state.stats.steps;
    if (meets_any(current.word(), target)) {
      return SearchResult{SearchOutcome::TraceFound,
                          detail::trace_of(current.node), state.stats};
    }
    // The visited copy may be evicted by one of its own successors, so the
    // expansion below works from the local entry.
    state.visited.push_back(current);
    for (const Transition& t : sys.transitions) {
      std::vector<CountedWord> next;
      for (CountedWord& x : detail::step_along(current.word(), t, direction)) {
        detail::push_unique(next, relax(x, rho));
      }
      state.stats.words += next.size();
      for (CountedWord& w : next) {
        detail::insert_candidate(state, std::move(w), current.node, t.id);
      }
    }
    if (observe) {
      observe(state);
    }
  }
  return SearchResult{SearchOutcome::Unreachable, std::nullopt, state.stats};
}

using Analysis = std::variant<Witness, Resolution>;

// Replays a trace level by level against the search direction.  Level i
// holds the words whose configurations can still complete the trace's
// suffix; when a level empties, the trace is spurious and a separating
// resolution is returned.  When level 0 still meets the source set, the
// trace is genuine and a concrete run is extracted from the levels.
inline Analysis analyze_trace(const ParameterizedSystem& sys, const Trace& trace,
                              const Resolution& rho, Direction direction) {
  const std::vector<CountedWord>& source = detail::source_set(sys, direction);
  const std::vector<CountedWord>& target = detail::target_set(sys, direction);

  CW_CHECK(!trace.words.empty(), "a trace carries at least one word");
  CW_CHECK(trace.words.size() == trace.transitions.size() + 1,
           "trace words and transitions must alternate");
  CW_CHECK(std::find(source.begin(), source.end(), trace.words.front()) !=
               source.end(),
           "a trace must start in the source set");

  const std::size_t m = trace.transitions.size();

  // Unrelaxed successor sets along the trace; each words[i + 1] must be the
  // relaxation of one of their members.
  std::vector<std::vector<CountedWord>> posts(m);
  for (std::size_t i = 0; i < m; ++i) {
    const Transition& t = sys.transition(trace.transitions[i]);
    posts[i] = detail::step_along(trace.words[i], t, direction);
    const auto matches = [&](const CountedWord& x) {
      return relax(x, rho) == trace.words[i + 1];
    };
    CW_CHECK(std::any_of(posts[i].begin(), posts[i].end(), matches),
             "trace edge is not a relaxed successor");
  }

  std::vector<std::vector<CountedWord>> currents(m + 1);
  currents[m] = meet_sets({trace.words.back()}, target);
  CW_CHECK(!currents[m].empty(), "the final trace word must meet the target set");

  for (std::size_t i = m; i-- > 0;) {
    const Transition& t = sys.transition(trace.transitions[i]);
    std::vector<CountedWord> preimage;
    for (const CountedWord& w : currents[i + 1]) {
      for (CountedWord& p : detail::step_against(w, t, direction)) {
        detail::push_unique(preimage, std::move(p));
      }
    }
    currents[i] = meet_sets(preimage, {trace.words[i]});
    if (currents[i].empty()) {
      // The word at level i cannot reach the still-feasible tail of the
      // trace; separate its unrelaxed successors from that tail.
      return xi(posts[i], currents[i + 1], rho);
    }
  }

  std::vector<CountedWord> inter = meet_sets(currents[0], source);
  if (inter.empty()) {
    // Dead for traces seeded verbatim in the source set (every level-0 word
    // entails the seed), but kept so externally assembled traces are still
    // analyzed; the separation preconditions fail loudly if this fires with
    // a seeded trace.
    return xi({trace.words.front()}, source, rho);
  }

  // The trace is genuine.  Each configuration denoted by a level has, by the
  // exactness of the symbolic steps, a concrete neighbour denoted by the
  // next level, so a greedy walk cannot get stuck.
  std::vector<Configuration> run;
  std::vector<std::string> fired;
  run.push_back(inter.front().base());
  for (std::size_t i = 0; i < m; ++i) {
    const Transition& t = sys.transition(trace.transitions[i]);
    const std::vector<Configuration> nexts = direction == Direction::Forward
                                                 ? step_concrete(run.back(), t)
                                                 : step_concrete_pre(run.back(), t);
    const auto inside = [&currents, i](const Configuration& c) {
      return std::any_of(
          currents[i + 1].begin(), currents[i + 1].end(),
          [&c](const CountedWord& w) { return models(c, w); });
    };
    const auto pick = std::find_if(nexts.begin(), nexts.end(), inside);
    CW_INTERNAL(pick != nexts.end(),
                "a feasible trace level lost all concrete neighbours");
    run.push_back(*pick);
    fired.push_back(t.id);
  }
  if (direction == Direction::Backward) {
    // Levels were walked from the bad side towards the initial one; flip the
    // run so it reads initial-to-bad.
    std::reverse(run.begin(), run.end());
    std::reverse(fired.begin(), fired.end());
  }
  return Witness{std::move(run), std::move(fired)};
}

// True when the witness is a genuine violation: the run starts in the
// initial set's denotation, replays under the concrete semantics, and ends
// in the bad set's denotation.
inline bool witness_replays(const ParameterizedSystem& sys, const Witness& w) {
  if (w.run.empty() || w.run.size() != w.transitions.size() + 1) {
    return false;
  }
  const auto modeled = [](const Configuration& c,
                          const std::vector<CountedWord>& set) {
    return std::any_of(set.begin(), set.end(), [&c](const CountedWord& phi) {
      return models(c, phi);
    });
  };
  if (!modeled(w.run.front(), sys.init_set) ||
      !modeled(w.run.back(), sys.bad_set)) {
    return false;
  }
  for (std::size_t i = 0; i + 1 < w.run.size(); ++i) {
    const std::vector<Configuration> nexts =
        step_concrete(w.run[i], sys.transition(w.transitions[i]));
    if (std::find(nexts.begin(), nexts.end(), w.run[i + 1]) == nexts.end()) {
      return false;
    }
  }
  return true;
}

enum class VerdictKind {
  Unreachable,
  Reachable,
  OutOfBudget,
};

// One reachability round: the resolution in force, the outcome, search
// statistics, wall-clock time, and the trace found (when there was one).
struct RefinementRecord {
  Resolution rho;
  SearchOutcome outcome = SearchOutcome::Unreachable;
  StepStats stats;
  double seconds = 0.0;
  std::optional<Trace> trace;
};

struct Verdict {
  VerdictKind kind = VerdictKind::OutOfBudget;
  std::optional<Witness> witness;  // present iff kind == Reachable
  std::optional<Trace> trace;      // the confirmed trace iff Reachable
  std::vector<RefinementRecord> refinements;
  Resolution final_rho;
};

// The refinement loop: search, and on a trace either report it genuine or
// strengthen the resolution and search again.  Every returned resolution is
// checked to make strict progress, so the loop cannot cycle.
inline Verdict verify(const ParameterizedSystem& sys, Direction direction,
                      Resolution rho, const EngineConfig& config = {}) {
  std::vector<RefinementRecord> records;
  while (true) {
    if (config.max_refinements != 0 &&
        records.size() >= config.max_refinements) {
      return Verdict{VerdictKind::OutOfBudget, std::nullopt, std::nullopt,
                     std::move(records), std::move(rho)};
    }
    const auto start = std::chrono::steady_clock::now();
    SearchResult search =
        check_reachability(sys, rho, direction, config.step_budget_seconds);
    const std::chrono::duration<double> elapsed =
        std::chrono::steady_clock::now() - start;
    records.push_back(RefinementRecord{rho, search.outcome, search.stats,
                                       elapsed.count(), search.trace});
    if (search.outcome == SearchOutcome::Unreachable) {
      return Verdict{VerdictKind::Unreachable, std::nullopt, std::nullopt,
                     std::move(records), std::move(rho)};
    }
    if (search.outcome == SearchOutcome::OutOfBudget) {
      return Verdict{VerdictKind::OutOfBudget, std::nullopt, std::nullopt,
                     std::move(records), std::move(rho)};
    }
    Analysis analysis = analyze_trace(sys, *search.trace, rho, direction);
    if (Witness* w = std::get_if<Witness>(&analysis)) {
      return Verdict{VerdictKind::Reachable, std::move(*w),
                     std::move(search.trace), std::move(records),
                     std::move(rho)};
    }
    Resolution next = std::get<Resolution>(std::move(analysis));
    CW_INTERNAL(rho.thresholds.included_in(next.thresholds) && !(next == rho),
                "refinement must strictly strengthen the resolution");
    rho = std::move(next);
  }
}

}  // namespace cw
