#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cw/meet.hpp"

namespace cw {

// Quantifier of a global guard: the firing process requires a witness
// (Exists) or a blanket condition (Forall) among the processes strictly to
// its left, strictly to its right, or on both sides combined.
enum class Quant {
  ExistsL,
  ExistsR,
  ExistsLR,
  ForallL,
  ForallR,
  ForallLR,
};

struct Guard {
  Quant quant = Quant::ExistsL;
  std::vector<StateId> witnesses;

  bool allows(StateId q) const {
    return std::find(witnesses.begin(), witnesses.end(), q) != witnesses.end();
  }

  friend bool operator==(const Guard&, const Guard&) = default;
};

// A process moves from `source` to `target`; a guard, when present, must be
// satisfied by the states of the other processes.
struct Transition {
  std::string id;
  StateId source;
  StateId target;
  std::optional<Guard> guard;

  friend bool operator==(const Transition&, const Transition&) = default;
};

struct ParameterizedSystem {
  Alphabet alphabet;
  std::vector<Transition> transitions;
  StateId init_state;
  // Symbolic initial and bad sets.  Their words must be strengthened: the
  // symbolic step operators require it of their inputs.
  std::vector<CountedWord> init_set;
  std::vector<CountedWord> bad_set;

  const Transition& transition(const std::string& id) const {
    for (const Transition& t : transitions) {
      if (t.id == id) {
        return t;
      }
    }
    throw UsageError("unknown transition id: " + id);
  }
};

namespace detail {

inline bool guard_holds(const Guard& g, const Configuration& c, size_t pos) {
  const auto left_begin = c.begin();
  const auto left_end = c.begin() + pos;
  const auto right_begin = c.begin() + pos + 1;
  const auto right_end = c.end();
  const auto in = [&g](StateId q) { return g.allows(q); };
  switch (g.quant) {
    case Quant::ExistsL:
      return std::any_of(left_begin, left_end, in);
    case Quant::ExistsR:
      return std::any_of(right_begin, right_end, in);
    case Quant::ExistsLR:
      return std::any_of(left_begin, left_end, in) ||
             std::any_of(right_begin, right_end, in);
    case Quant::ForallL:
      return std::all_of(left_begin, left_end, in);
    case Quant::ForallR:
      return std::all_of(right_begin, right_end, in);
    case Quant::ForallLR:
      return std::all_of(left_begin, left_end, in) &&
             std::all_of(right_begin, right_end, in);
  }
  return false;
}

inline void push_unique_config(std::vector<Configuration>& out,
                               Configuration c) {
  if (std::find(out.begin(), out.end(), c) == out.end()) {
    out.push_back(std::move(c));
  }
}

}  // namespace detail

// All one-step successors of a configuration under one transition.
inline std::vector<Configuration> step_concrete(const Configuration& c,
                                                const Transition& t) {
  std::vector<Configuration> out;
  for (size_t i = 0; i < c.size(); ++i) {
    if (c[i] != t.source) {
      continue;
    }
    if (t.guard && !detail::guard_holds(*t.guard, c, i)) {
      continue;
    }
    Configuration next = c;
    next[i] = t.target;
    detail::push_unique_config(out, std::move(next));
  }
  return out;
}

// All one-step predecessors: configurations c' with c' -> c under t.  The
// guard is evaluated in the predecessor, where the firing process is still
// in the source state.
inline std::vector<Configuration> step_concrete_pre(const Configuration& c,
                                                    const Transition& t) {
  std::vector<Configuration> out;
  for (size_t i = 0; i < c.size(); ++i) {
    if (c[i] != t.target) {
      continue;
    }
    Configuration prev = c;
    prev[i] = t.source;
    if (t.guard && !detail::guard_holds(*t.guard, prev, i)) {
      continue;
    }
    detail::push_unique_config(out, std::move(prev));
  }
  return out;
}

namespace detail {

// Counter update shared by every post case: one occurrence of the source
// state turns into one occurrence of the target state, as seen by every
// counter whose side contains the firing position.  Equivalent to adding the
// target's unit Parikh image and subtracting the source's, which leaves every
// atom other than the two touched states unchanged.
inline Counter swap_occurrence(const Counter& cr, StateId target,
                               StateId source) {
  if (cr.is_bottom()) {
    return cr;
  }
  Counter out = cr;
  out.set_unchecked(target.index,
                    atom_plus(out.at_unchecked(target.index), Atom::eq(1)));
  const AtomDiff d =
      atom_minus(out.at_unchecked(source.index), Atom::eq(1));
  if (!d.value) {
    return Counter::bottom(cr.alphabet_size());
  }
  out.set_unchecked(source.index, *d.value);
  return out;
}

// Applies the shared update to prefix right counters and suffix left
// counters around the firing position, replaces the fired state, and
// assembles the candidate word.  Returns nothing if a counter bottoms out.
inline std::optional<CountedWord> assemble_fired(
    const CountedWord& prefix, const Counter& fired_left, StateId fired_state,
    const Counter& fired_right, const CountedWord& suffix, StateId target,
    StateId source) {
  if (fired_left.is_bottom() || fired_right.is_bottom()) {
    return std::nullopt;
  }
  std::vector<Tuple> tuples;
  tuples.reserve(prefix.size() + 1 + suffix.size());
  for (const Tuple& t : prefix.tuples()) {
    Counter r = swap_occurrence(t.right, target, source);
    if (t.left.is_bottom() || r.is_bottom()) {
      return std::nullopt;
    }
    tuples.push_back(Tuple{t.left, t.state, std::move(r)});
  }
  tuples.push_back(Tuple{fired_left, fired_state, fired_right});
  for (const Tuple& t : suffix.tuples()) {
    Counter l = swap_occurrence(t.left, target, source);
    if (l.is_bottom() || t.right.is_bottom()) {
      return std::nullopt;
    }
    tuples.push_back(Tuple{std::move(l), t.state, t.right});
  }
  return CountedWord(prefix.alphabet_size(), std::move(tuples));
}

inline bool base_within(const CountedWord& w, const Guard& g) {
  for (const Tuple& t : w.tuples()) {
    if (!g.allows(t.state)) {
      return false;
    }
  }
  return true;
}

// Meets the given counter with the zero-pin of everything outside the
// guard's witness set.
inline Counter restrict_outside(const Counter& cr, const Counter& zero_pin) {
  return cr.meet(zero_pin);
}

}  // namespace detail

// Symbolic successor computation.  For every placement of the source state
// in the word, fires the transition there: the fired position becomes the
// target state, counters that straddle it exchange one source occurrence for
// one target occurrence, Forall guards additionally pin the guarded side's
// counters to the witness set, and Exists guards materialize a witness on
// the guarded side first.  Results are strengthened, filtered for
// well-formedness and pruned to an antichain.
//
// `phi` must be strengthened: the fired-position placement relies on the
// boundary counters already carrying every derivable equality.
inline std::vector<CountedWord> post_word(const CountedWord& phi,
                                          const Transition& t) {
  const uint32_t n = phi.alphabet_size();

  std::vector<StateId> outside;
  Counter zero_pin = Counter::top(n);
  if (t.guard) {
    for (uint32_t i = 0; i < n; ++i) {
      if (!t.guard->allows(StateId{i})) {
        outside.push_back(StateId{i});
      }
    }
    zero_pin = Counter::pinned_zero(n, outside);
  }

  std::vector<CountedWord> candidates;
  const auto collect = [&candidates](std::optional<CountedWord> w) {
    if (w) {
      candidates.push_back(std::move(*w));
    }
  };

  for (const Insertion& ins : insert_positions(t.source, phi)) {
    const CountedWord& prefix = ins.prefix;
    const CountedWord& suffix = ins.suffix;
    const Counter& l = ins.inserted.left;
    const Counter& r = ins.inserted.right;

    if (!t.guard) {
      collect(detail::assemble_fired(prefix, l, t.target, r, suffix, t.target,
                                     t.source));
      continue;
    }

    const Quant quant = t.guard->quant;
    const bool forall = quant == Quant::ForallL || quant == Quant::ForallR ||
                        quant == Quant::ForallLR;
    if (forall) {
      const bool on_left = quant != Quant::ForallR;
      const bool on_right = quant != Quant::ForallL;
      if (on_left && !detail::base_within(prefix, *t.guard)) {
        continue;
      }
      if (on_right && !detail::base_within(suffix, *t.guard)) {
        continue;
      }
      Counter fl = l;
      Counter fr = r;
      CountedWord p2 = prefix;
      CountedWord s2 = suffix;
      if (on_left) {
        // Everything to the left must stay within the witness set.
        fl = detail::restrict_outside(fl, zero_pin);
        for (size_t i = 0; i < p2.size(); ++i) {
          p2.at(i).left = detail::restrict_outside(p2.at(i).left, zero_pin);
        }
      }
      if (on_right) {
        fr = detail::restrict_outside(fr, zero_pin);
        for (size_t i = 0; i < s2.size(); ++i) {
          s2.at(i).right = detail::restrict_outside(s2.at(i).right, zero_pin);
        }
      }
      collect(detail::assemble_fired(p2, fl, t.target, fr, s2, t.target,
                                     t.source));
      continue;
    }

    // Exists guards: place a witness on the guarded side, then fire as in
    // the local case.  Fragment insertions skip the well-formedness filter;
    // the assembled word is filtered below.
    const bool try_left = quant != Quant::ExistsR;
    const bool try_right = quant != Quant::ExistsL;
    for (StateId p : t.guard->witnesses) {
      if (try_left) {
        for (const Insertion& wit : insert_positions(p, prefix, false)) {
          CountedWord widened =
              concat3(wit.prefix, wit.inserted, wit.suffix);
          collect(detail::assemble_fired(widened, l, t.target, r, suffix,
                                         t.target, t.source));
        }
      }
      if (try_right) {
        for (const Insertion& wit : insert_positions(p, suffix, false)) {
          CountedWord widened =
              concat3(wit.prefix, wit.inserted, wit.suffix);
          collect(detail::assemble_fired(prefix, l, t.target, r, widened,
                                         t.target, t.source));
        }
      }
    }
  }

  std::vector<CountedWord> out;
  for (CountedWord& cand : candidates) {
    std::optional<CountedWord> s = try_strengthen(std::move(cand));
    if (!s || !well_formed(*s)) {
      continue;
    }
    detail::push_unique(out, std::move(*s));
  }
  prune_to_antichain(out);
  return out;
}

// Symbolic predecessor computation: the post of the reversed transition with
// the same guard.
inline std::vector<CountedWord> pre_word(const CountedWord& phi,
                                         const Transition& t) {
  Transition reversed{t.id, t.target, t.source, t.guard};
  return post_word(phi, reversed);
}

}  // namespace cw
