#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "cw/counted_word.hpp"

namespace cw {

// One way of placing a given state inside a word: either an explicit base
// position that already carries the state, or a gap between positions whose
// neighboring boundary counters tolerate it.  The concatenation
// prefix * inserted * suffix is always entailed-from the source word.
struct Insertion {
  CountedWord prefix;
  Tuple inserted;
  CountedWord suffix;

  friend bool operator==(const Insertion&, const Insertion&) = default;
};

inline CountedWord concat3(const CountedWord& prefix, const Tuple& middle,
                           const CountedWord& suffix) {
  std::vector<Tuple> tuples;
  tuples.reserve(prefix.size() + 1 + suffix.size());
  for (const Tuple& t : prefix.tuples()) {
    tuples.push_back(t);
  }
  tuples.push_back(middle);
  for (const Tuple& t : suffix.tuples()) {
    tuples.push_back(t);
  }
  return CountedWord(prefix.alphabet_size(), std::move(tuples));
}

// All ways to place `q` in `phi`: every base position labeled q, plus every
// gap whose right-neighbor prefix counter and left-neighbor suffix counter
// both leave q unconstrained (boundary counters of the empty fragment are
// Top).  A gap insertion borrows its counters from the neighbors: the left
// counter of the suffix and the right counter of the prefix.
//
// `filter_well_formed` drops gap candidates whose assembled word is not well
// formed.  Callers that insert into fragments of a larger word (where the
// fragment's counters reference positions outside it) must disable it and
// filter the final assembled word instead.
inline std::vector<Insertion> insert_positions(StateId q,
                                               const CountedWord& phi,
                                               bool filter_well_formed = true) {
  std::vector<Insertion> out;
  const uint32_t n = phi.alphabet_size();
  for (size_t i = 0; i < phi.size(); ++i) {
    if (phi.at(i).state == q) {
      out.push_back(Insertion{phi.slice(0, i), phi.at(i),
                              phi.slice(i + 1, phi.size())});
    }
  }
  for (size_t cut = 0; cut <= phi.size(); ++cut) {
    const Counter r = cut > 0 ? phi.at(cut - 1).right : Counter::top(n);
    const Counter l = cut < phi.size() ? phi.at(cut).left : Counter::top(n);
    if (!r.in_context(q) || !l.in_context(q)) {
      continue;
    }
    Insertion cand{phi.slice(0, cut), Tuple{l, q, r},
                   phi.slice(cut, phi.size())};
    if (filter_well_formed &&
        !well_formed(concat3(cand.prefix, cand.inserted, cand.suffix))) {
      continue;
    }
    out.push_back(std::move(cand));
  }
  return out;
}

namespace detail {

inline void push_unique(std::vector<CountedWord>& out, CountedWord w) {
  for (const CountedWord& existing : out) {
    if (existing == w) {
      return;
    }
  }
  out.push_back(std::move(w));
}

}  // namespace detail

// Constrained shuffle of two words.  Every result interleaves the two bases,
// optionally merging equal-state positions; a position taken from one word
// alone must be tolerated by the other word's boundary counters around the
// current split, and a merged position takes the meet of both counter pairs.
// Worked iteratively with an explicit stack; each frame records how many
// tuples of each input have been consumed.
inline std::vector<CountedWord> zip(const CountedWord& a,
                                    const CountedWord& b) {
  CW_CHECK(a.alphabet_size() == b.alphabet_size(),
           "zip over different alphabets");
  const uint32_t n = a.alphabet_size();
  const Counter top = Counter::top(n);

  struct Frame {
    CountedWord z;
    size_t i = 0;
    size_t j = 0;
  };

  std::vector<CountedWord> out;
  std::vector<Frame> stack;
  stack.push_back(Frame{CountedWord(n), 0, 0});

  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();

    const bool left_left = f.i < a.size();
    const bool right_left = f.j < b.size();

    if (!left_left && !right_left) {
      detail::push_unique(out, std::move(f.z));
      continue;
    }

    if (left_left) {
      // Consume a position of `a` alone: the other word's neighbors around
      // its current split must leave the state unconstrained.
      const Tuple& head = a.at(f.i);
      const Counter& before = f.j > 0 ? b.at(f.j - 1).right : top;
      const Counter& after = f.j < b.size() ? b.at(f.j).left : top;
      if (before.in_context(head.state) && after.in_context(head.state)) {
        Frame next{f.z, f.i + 1, f.j};
        next.z.push_back(head);
        stack.push_back(std::move(next));
      }
    }

    if (left_left && right_left) {
      // Merge the two heads into a single position.
      const Tuple& ha = a.at(f.i);
      const Tuple& hb = b.at(f.j);
      if (ha.state == hb.state) {
        Counter l = ha.left.meet(hb.left);
        Counter r = ha.right.meet(hb.right);
        if (!l.is_bottom() && !r.is_bottom()) {
          Frame next{f.z, f.i + 1, f.j + 1};
          next.z.push_back(Tuple{std::move(l), ha.state, std::move(r)});
          stack.push_back(std::move(next));
        }
      }
    }

    if (right_left) {
      // Consume a position of `b` alone, symmetrically.
      const Tuple& head = b.at(f.j);
      const Counter& before = f.i > 0 ? a.at(f.i - 1).right : top;
      const Counter& after = f.i < a.size() ? a.at(f.i).left : top;
      if (before.in_context(head.state) && after.in_context(head.state)) {
        Frame next{f.z, f.i, f.j + 1};
        next.z.push_back(head);
        stack.push_back(std::move(next));
      }
    }
  }
  return out;
}

// Drops every word whose denotation is covered by another element, keeping
// the weakest representatives; the union of denotations is unchanged.
inline void prune_to_antichain(std::vector<CountedWord>& words) {
  std::vector<bool> dead(words.size(), false);
  for (size_t i = 0; i < words.size(); ++i) {
    if (dead[i]) {
      continue;
    }
    for (size_t j = i + 1; j < words.size(); ++j) {
      if (dead[j]) {
        continue;
      }
      if (entailed_by(words[i], words[j])) {
        dead[j] = true;
      } else if (entailed_by(words[j], words[i])) {
        dead[i] = true;
        break;
      }
    }
  }
  std::vector<CountedWord> kept;
  kept.reserve(words.size());
  for (size_t i = 0; i < words.size(); ++i) {
    if (!dead[i]) {
      kept.push_back(std::move(words[i]));
    }
  }
  words = std::move(kept);
}

// Symbolic intersection: the union of the survivors' denotations equals the
// intersection of the inputs' denotations, and every survivor entails both
// inputs.  Expects strengthened well-formed inputs.
inline std::vector<CountedWord> meet_words(const CountedWord& a,
                                           const CountedWord& b) {
  std::vector<CountedWord> out;
  for (CountedWord& z : zip(a, b)) {
    std::optional<CountedWord> s = try_strengthen(std::move(z));
    if (!s || !well_formed(*s)) {
      continue;
    }
    detail::push_unique(out, std::move(*s));
  }
  prune_to_antichain(out);
  return out;
}

// Pairwise meets of two sets, pruned to an antichain.
inline std::vector<CountedWord> meet_sets(const std::vector<CountedWord>& as,
                                          const std::vector<CountedWord>& bs) {
  std::vector<CountedWord> out;
  for (const CountedWord& a : as) {
    for (const CountedWord& b : bs) {
      for (CountedWord& m : meet_words(a, b)) {
        detail::push_unique(out, std::move(m));
      }
    }
  }
  prune_to_antichain(out);
  return out;
}

// Emptiness-only variant of meet_sets({e}, set): stops at the first witness.
inline bool meets_any(const CountedWord& e,
                      const std::vector<CountedWord>& set) {
  for (const CountedWord& other : set) {
    if (!meet_words(e, other).empty()) {
      return true;
    }
  }
  return false;
}

}  // namespace cw
