#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "cw/meet.hpp"

namespace cw {

// Positive and/or formula over atoms "v_q > k".  Satisfying resolutions form
// an upward-closed set: raising thresholds never falsifies an atom.
class Avoid {
public:
  enum class Kind { True, False, Atom, And, Or };

  static Avoid yes() { return Avoid(Kind::True); }
  static Avoid no() { return Avoid(Kind::False); }

  static Avoid atom(StateId q, uint32_t k) {
    Avoid a(Kind::Atom);
    a.state_ = q;
    a.bound_ = k;
    return a;
  }

  static Avoid conj(Avoid a, Avoid b) {
    if (a.kind_ == Kind::False || b.kind_ == Kind::True) {
      return a;
    }
    if (b.kind_ == Kind::False || a.kind_ == Kind::True) {
      return b;
    }
    Avoid out(Kind::And);
    out.absorb(std::move(a), Kind::And);
    out.absorb(std::move(b), Kind::And);
    return std::move(out).collapse();
  }

  static Avoid disj(Avoid a, Avoid b) {
    if (a.kind_ == Kind::True || b.kind_ == Kind::False) {
      return a;
    }
    if (b.kind_ == Kind::True || a.kind_ == Kind::False) {
      return b;
    }
    Avoid out(Kind::Or);
    out.absorb(std::move(a), Kind::Or);
    out.absorb(std::move(b), Kind::Or);
    return std::move(out).collapse();
  }

  Kind kind() const { return kind_; }
  StateId state() const { return state_; }
  uint32_t bound() const { return bound_; }
  const std::vector<Avoid>& children() const { return children_; }

  bool eval(const Resolution& rho) const {
    switch (kind_) {
      case Kind::True:
        return true;
      case Kind::False:
        return false;
      case Kind::Atom:
        return rho.at(state_) > bound_;
      case Kind::And:
        for (const Avoid& c : children_) {
          if (!c.eval(rho)) {
            return false;
          }
        }
        return true;
      case Kind::Or:
        for (const Avoid& c : children_) {
          if (c.eval(rho)) {
            return true;
          }
        }
        return false;
    }
    return false;
  }

  friend bool operator==(const Avoid&, const Avoid&) = default;

private:
  explicit Avoid(Kind kind) : kind_(kind) {}

  // Flattens nested nodes of the same kind and drops structural duplicates.
  void absorb(Avoid node, Kind flatten) {
    if (node.kind_ == flatten) {
      for (Avoid& c : node.children_) {
        absorb(std::move(c), flatten);
      }
    } else if (std::find(children_.begin(), children_.end(), node) ==
               children_.end()) {
      children_.push_back(std::move(node));
    }
  }

  Avoid collapse() && {
    if (children_.size() == 1) {
      return std::move(children_.front());
    }
    return std::move(*this);
  }

  Kind kind_;
  StateId state_{};
  uint32_t bound_ = 0;
  std::vector<Avoid> children_;
};

// Requirement for a resolution to exclude `q` from the relaxed context of
// `cr`: impossible (hence false) when the unrelaxed counter already
// tolerates q, since relaxing can only widen the context.
inline Avoid reasons_context(StateId q, const Counter& cr) {
  CW_CHECK(!cr.is_bottom(), "context of the empty counter");
  if (cr.in_context(q)) {
    return Avoid::no();
  }
  return Avoid::atom(q, cr.precision().at(q));
}

// Requirements for a resolution to keep the meet of (the relaxation of) `cr`
// with `cr2` empty: one alternative per state whose unrelaxed atoms already
// conflict.  Empty when the unrelaxed counters are compatible.
inline Avoid reasons_meet(const Counter& cr, const Counter& cr2) {
  CW_CHECK(!cr.is_bottom() && !cr2.is_bottom(),
           "reasons over the empty counter");
  Avoid out = Avoid::no();
  const uint32_t n = cr.alphabet_size();
  for (uint32_t i = 0; i < n; ++i) {
    const StateId q{i};
    if (!atom_meet(cr.at(q), cr2.at(q))) {
      out = Avoid::disj(std::move(out), Avoid::atom(q, cr.precision().at(q)));
    }
  }
  return out;
}

struct SeparationRun {
  std::vector<CountedWord> words;
  Avoid avoid = Avoid::yes();
};

namespace detail {

// Shuffle exploration of (relaxed, other) exactly as in zip, tracking the
// unrelaxed twin of `relaxed` in lockstep.  The avoid formula conjoins, over
// every explored branch, the child's formula or an alternative reason (drawn
// from the unrelaxed counters) for a stronger resolution to close the branch
// itself.  Solo consumption of `relaxed` offers no such reason: its own
// counters do not gate that branch.
inline SeparationRun augzip_from(const CountedWord& relaxed,
                                 const CountedWord& unrelaxed,
                                 const CountedWord& other,
                                 const CountedWord& z, size_t i, size_t j) {
  SeparationRun res;
  const uint32_t n = relaxed.alphabet_size();
  const Counter top = Counter::top(n);
  const bool left_left = i < relaxed.size();
  const bool right_left = j < other.size();

  if (!left_left && !right_left) {
    res.words.push_back(z);
    res.avoid = Avoid::no();
    return res;
  }

  if (left_left) {
    const Tuple& head = relaxed.at(i);
    const Counter& before = j > 0 ? other.at(j - 1).right : top;
    const Counter& after = j < other.size() ? other.at(j).left : top;
    if (before.in_context(head.state) && after.in_context(head.state)) {
      CountedWord z2 = z;
      z2.push_back(head);
      SeparationRun child =
          augzip_from(relaxed, unrelaxed, other, z2, i + 1, j);
      for (CountedWord& w : child.words) {
        push_unique(res.words, std::move(w));
      }
      res.avoid = Avoid::conj(std::move(res.avoid), std::move(child.avoid));
    }
  }

  if (left_left && right_left) {
    const Tuple& ha = relaxed.at(i);
    const Tuple& hb = other.at(j);
    if (ha.state == hb.state) {
      Counter l = ha.left.meet(hb.left);
      Counter r = ha.right.meet(hb.right);
      if (!l.is_bottom() && !r.is_bottom()) {
        CountedWord z2 = z;
        z2.push_back(Tuple{std::move(l), ha.state, std::move(r)});
        SeparationRun child =
            augzip_from(relaxed, unrelaxed, other, z2, i + 1, j + 1);
        for (CountedWord& w : child.words) {
          push_unique(res.words, std::move(w));
        }
        Avoid reasons =
            Avoid::disj(reasons_meet(unrelaxed.at(i).left, hb.left),
                        reasons_meet(unrelaxed.at(i).right, hb.right));
        res.avoid = Avoid::conj(
            std::move(res.avoid),
            Avoid::disj(std::move(child.avoid), std::move(reasons)));
      }
    }
  }

  if (right_left) {
    const Tuple& head = other.at(j);
    const Counter& before = i > 0 ? relaxed.at(i - 1).right : top;
    const Counter& after = i < relaxed.size() ? relaxed.at(i).left : top;
    if (before.in_context(head.state) && after.in_context(head.state)) {
      CountedWord z2 = z;
      z2.push_back(head);
      SeparationRun child =
          augzip_from(relaxed, unrelaxed, other, z2, i, j + 1);
      for (CountedWord& w : child.words) {
        push_unique(res.words, std::move(w));
      }
      const Counter& hat_before =
          i > 0 ? unrelaxed.at(i - 1).right : top;
      const Counter& hat_after =
          i < unrelaxed.size() ? unrelaxed.at(i).left : top;
      Avoid reasons = Avoid::disj(reasons_context(head.state, hat_before),
                                  reasons_context(head.state, hat_after));
      res.avoid = Avoid::conj(
          std::move(res.avoid),
          Avoid::disj(std::move(child.avoid), std::move(reasons)));
    }
  }

  return res;
}

}  // namespace detail

// Instrumented shuffle of a relaxed word against another word.  `unrelaxed`
// must be the pre-relaxation twin of `relaxed` (same base, positionwise
// corresponding tuples).  Any resolution satisfying the returned formula,
// joined pointwise with the one that produced `relaxed`, empties the
// shuffle.
inline SeparationRun augzip(const CountedWord& relaxed,
                            const CountedWord& unrelaxed,
                            const CountedWord& other) {
  CW_CHECK(relaxed.size() == unrelaxed.size() &&
               relaxed.base() == unrelaxed.base(),
           "relaxed word does not track its unrelaxed twin");
  return detail::augzip_from(relaxed, unrelaxed, other,
                             CountedWord(relaxed.alphabet_size()), 0, 0);
}

namespace detail {

inline std::pair<uint64_t, bool> resolution_weight_less(
    const Resolution& a, const Resolution& b, uint32_t n) {
  uint64_t ta = 0;
  uint64_t tb = 0;
  for (uint32_t i = 0; i < n; ++i) {
    ta += a.at(StateId{i});
    tb += b.at(StateId{i});
  }
  if (ta != tb) {
    return {ta, ta < tb};
  }
  for (uint32_t i = 0; i < n; ++i) {
    if (a.at(StateId{i}) != b.at(StateId{i})) {
      return {ta, a.at(StateId{i}) < b.at(StateId{i})};
    }
  }
  return {ta, false};
}

}  // namespace detail

// Cheapest satisfying resolution under a greedy rule: conjunctions join
// children pointwise, disjunctions keep the child with the smallest total
// (ties broken lexicographically).  Returns nothing when the formula is
// unsatisfiable, i.e. contains an unavoidable `false`.
inline std::optional<Resolution> solve_avoid(const Avoid& f,
                                             uint32_t alphabet_size) {
  switch (f.kind()) {
    case Avoid::Kind::True:
      return Resolution::zero(alphabet_size);
    case Avoid::Kind::False:
      return std::nullopt;
    case Avoid::Kind::Atom: {
      Resolution r = Resolution::zero(alphabet_size);
      r.thresholds.set(f.state(), f.bound() + 1);
      return r;
    }
    case Avoid::Kind::And: {
      Resolution acc = Resolution::zero(alphabet_size);
      for (const Avoid& c : f.children()) {
        std::optional<Resolution> sub = solve_avoid(c, alphabet_size);
        if (!sub) {
          return std::nullopt;
        }
        acc = acc.max_with(*sub);
      }
      return acc;
    }
    case Avoid::Kind::Or: {
      std::optional<Resolution> best;
      for (const Avoid& c : f.children()) {
        std::optional<Resolution> sub = solve_avoid(c, alphabet_size);
        if (!sub) {
          continue;
        }
        if (!best ||
            detail::resolution_weight_less(*sub, *best, alphabet_size)
                .second) {
          best = std::move(sub);
        }
      }
      return best;
    }
  }
  return std::nullopt;
}

// Separation: given symbolic sets with an empty exact meet whose relaxation
// under `rho` meets anyway, returns a pointwise-stronger resolution whose
// relaxation of E no longer meets E2.  Falls back to thresholds above every
// equality bound in E (making relaxation the identity there) when the
// formula-based refinement fails.
inline Resolution xi(const std::vector<CountedWord>& E,
                     const std::vector<CountedWord>& E2,
                     const Resolution& rho) {
  CW_CHECK(!E.empty() && !E2.empty(), "separation of an empty set");
  const uint32_t n = E.front().alphabet_size();

  CW_CHECK(meet_sets(E, E2).empty(),
           "separation requires an empty exact meet");
  std::vector<CountedWord> relaxed;
  relaxed.reserve(E.size());
  for (const CountedWord& e : E) {
    relaxed.push_back(relax(e, rho));
  }
  CW_CHECK(!meet_sets(relaxed, E2).empty(),
           "separation requires the relaxed meet to be nonempty");

  Avoid total = Avoid::yes();
  for (size_t i = 0; i < E.size(); ++i) {
    for (const CountedWord& e2 : E2) {
      SeparationRun run = augzip(relaxed[i], E[i], e2);
      total = Avoid::conj(std::move(total), std::move(run.avoid));
    }
  }

  const auto relaxed_meet_empty = [&](const Resolution& candidate) {
    std::vector<CountedWord> r;
    r.reserve(E.size());
    for (const CountedWord& e : E) {
      r.push_back(relax(e, candidate));
    }
    return meet_sets(r, E2).empty();
  };

  if (std::optional<Resolution> solved = solve_avoid(total, n)) {
    Resolution rho_max = rho.max_with(*solved);
    if (relaxed_meet_empty(rho_max)) {
      CW_INTERNAL(!(rho_max == rho), "separation produced no progress");
      return rho_max;
    }
  }

  Resolution fallback = Resolution::zero(n);
  for (const CountedWord& e : E) {
    for (const Tuple& t : e.tuples()) {
      fallback.thresholds = fallback.thresholds.max_with(t.left.precision());
      fallback.thresholds = fallback.thresholds.max_with(t.right.precision());
    }
  }
  Resolution rho_max = rho.max_with(fallback);
  CW_INTERNAL(relaxed_meet_empty(rho_max),
              "identity relaxation must restore the empty meet");
  CW_INTERNAL(!(rho_max == rho), "separation produced no progress");
  return rho_max;
}

}  // namespace cw
