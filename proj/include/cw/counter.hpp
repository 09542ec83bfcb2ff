#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <vector>

#include "cw/alphabet.hpp"
#include "cw/error.hpp"

namespace cw {

// One per-state constraint of a counter: either "exactly k" or "at least k"
// occurrences of the state.
struct Atom {
  enum class Kind : uint8_t { Eq, Geq };

  Kind kind = Kind::Geq;
  uint32_t bound = 0;

  static constexpr Atom eq(uint32_t k) { return Atom{Kind::Eq, k}; }
  static constexpr Atom geq(uint32_t k) { return Atom{Kind::Geq, k}; }

  bool is_eq() const { return kind == Kind::Eq; }
  bool is_geq() const { return kind == Kind::Geq; }

  bool holds(uint32_t n) const { return is_eq() ? n == bound : n >= bound; }

  friend constexpr auto operator<=>(const Atom&, const Atom&) = default;
};

// Conjunction of atoms yielding an unsatisfiable constraint, e.g. after a
// contradictory meet.
inline std::optional<Atom> atom_meet(Atom a, Atom b) {
  if (a.is_eq() && b.is_eq()) {
    if (a.bound == b.bound) {
      return a;
    }
    return std::nullopt;
  }
  if (a.is_eq()) {  // b is Geq
    if (a.bound >= b.bound) {
      return a;
    }
    return std::nullopt;
  }
  if (b.is_eq()) {
    return atom_meet(b, a);
  }
  return Atom::geq(a.bound > b.bound ? a.bound : b.bound);
}

// Logical implication between atoms: every count admitted by `strong` is
// admitted by `weak`.
inline bool atom_implies(Atom strong, Atom weak) {
  if (weak.is_eq()) {
    return strong.is_eq() && strong.bound == weak.bound;
  }
  // weak is Geq
  return strong.bound >= weak.bound;
}

inline Atom atom_plus(Atom a, Atom b) {
  if (a.is_eq() && b.is_eq()) {
    return Atom::eq(a.bound + b.bound);
  }
  return Atom::geq(a.bound + b.bound);
}

struct AtomDiff {
  std::optional<Atom> value;
  bool exact = true;
};

// Best representable constraint on {x - y | x in [[a]], y in [[b]], x >= y}.
// The set is empty exactly when value is nullopt.  The one inexact case is
// Eq(a) - Geq(b) with a > b: the exact set is the finite interval [0, a-b],
// which has no atom; we return Geq(0) and flag the loss.
inline AtomDiff atom_minus(Atom a, Atom b) {
  if (a.is_eq() && b.is_eq()) {
    if (a.bound >= b.bound) {
      return {Atom::eq(a.bound - b.bound), true};
    }
    return {std::nullopt, true};
  }
  if (a.is_geq() && b.is_eq()) {
    return {Atom::geq(a.bound >= b.bound ? a.bound - b.bound : 0), true};
  }
  if (a.is_geq() && b.is_geq()) {
    return {Atom::geq(0), true};
  }
  // Eq(a) - Geq(b)
  if (a.bound < b.bound) {
    return {std::nullopt, true};
  }
  if (a.bound == b.bound) {
    return {Atom::eq(0), true};
  }
  return {Atom::geq(0), false};
}

struct CounterDiff;

// A counter: one atom per state of the alphabet, read as a conjunction, or
// the unsatisfiable bottom counter.  Counters denote multisets over the
// alphabet.  The class keeps a canonical form: bottom stores no atoms, so
// structural equality coincides with equality of the chosen normal form.
class Counter {
public:
  Counter() = default;

  static Counter top(uint32_t alphabet_size) {
    Counter cr;
    cr.atoms_.assign(alphabet_size, Atom::geq(0));
    return cr;
  }

  static Counter bottom(uint32_t alphabet_size) {
    Counter cr;
    cr.bottom_ = true;
    cr.alphabet_size_ = alphabet_size;
    return cr;
  }

  static Counter all_eq_zero(uint32_t alphabet_size) {
    Counter cr;
    cr.atoms_.assign(alphabet_size, Atom::eq(0));
    return cr;
  }

  // The Parikh image of the single-letter word q: exactly one q, nothing else.
  static Counter unit(uint32_t alphabet_size, StateId q) {
    Counter cr = all_eq_zero(alphabet_size);
    CW_CHECK(q.index < alphabet_size, "state index out of range");
    cr.atoms_[q.index] = Atom::eq(1);
    return cr;
  }

  // Pins every state in `pinned` to zero and leaves the rest unconstrained.
  static Counter pinned_zero(uint32_t alphabet_size,
                             const std::vector<StateId>& pinned) {
    Counter cr = top(alphabet_size);
    for (StateId q : pinned) {
      CW_CHECK(q.index < alphabet_size, "state index out of range");
      cr.atoms_[q.index] = Atom::eq(0);
    }
    return cr;
  }

  static Counter of_atoms(std::vector<Atom> atoms) {
    Counter cr;
    cr.atoms_ = std::move(atoms);
    return cr;
  }

  bool is_bottom() const { return bottom_; }

  uint32_t alphabet_size() const {
    return bottom_ ? alphabet_size_ : static_cast<uint32_t>(atoms_.size());
  }

  Atom at(StateId q) const {
    CW_CHECK(!bottom_, "bottom counter has no atoms");
    CW_CHECK(q.index < atoms_.size(), "state index out of range");
    return atoms_[q.index];
  }

  // Unchecked variants for hot loops; the counter must not be bottom and the
  // index must be in range.
  Atom at_unchecked(uint32_t q) const { return atoms_[q]; }
  void set_unchecked(uint32_t q, Atom a) { atoms_[q] = a; }

  void set(StateId q, Atom a) {
    CW_CHECK(!bottom_, "bottom counter has no atoms");
    CW_CHECK(q.index < atoms_.size(), "state index out of range");
    atoms_[q.index] = a;
  }

  bool accepts(const Multiset& m) const {
    if (bottom_) {
      return false;
    }
    CW_CHECK(m.size() == atoms_.size(), "alphabet size mismatch");
    for (uint32_t i = 0; i < atoms_.size(); ++i) {
      if (!atoms_[i].holds(m.at(StateId{i}))) {
        return false;
      }
    }
    return true;
  }

  Counter meet(const Counter& other) const {
    check_same_alphabet(other);
    if (bottom_ || other.bottom_) {
      return bottom(alphabet_size());
    }
    Counter out;
    out.atoms_.reserve(atoms_.size());
    for (size_t i = 0; i < atoms_.size(); ++i) {
      std::optional<Atom> a = atom_meet(atoms_[i], other.atoms_[i]);
      if (!a) {
        return bottom(alphabet_size());
      }
      out.atoms_.push_back(*a);
    }
    return out;
  }

  // this <= other in the entailment order: every multiset admitted by
  // `other` is admitted by this counter.
  bool entailed_by(const Counter& other) const {
    check_same_alphabet(other);
    if (other.bottom_) {
      return true;
    }
    if (bottom_) {
      return false;
    }
    for (size_t i = 0; i < atoms_.size(); ++i) {
      if (!atom_implies(other.atoms_[i], atoms_[i])) {
        return false;
      }
    }
    return true;
  }

  Counter plus(const Counter& other) const {
    check_same_alphabet(other);
    if (bottom_ || other.bottom_) {
      return bottom(alphabet_size());
    }
    Counter out;
    out.atoms_.reserve(atoms_.size());
    for (size_t i = 0; i < atoms_.size(); ++i) {
      out.atoms_.push_back(atom_plus(atoms_[i], other.atoms_[i]));
    }
    return out;
  }

  CounterDiff minus_checked(const Counter& other) const;

  Counter minus(const Counter& other) const;

  // Precision: how much relaxation budget each equality consumes.  A lower
  // bound costs nothing, an equality with constant k costs k + 1.
  Multiset precision() const {
    CW_CHECK(!bottom_, "precision of bottom counter");
    Multiset m(static_cast<uint32_t>(atoms_.size()));
    for (uint32_t i = 0; i < atoms_.size(); ++i) {
      if (atoms_[i].is_eq()) {
        m.set(StateId{i}, atoms_[i].bound + 1);
      }
    }
    return m;
  }

  // q is in the context iff the counter puts no upper bound on q, i.e. the
  // atom at q is a lower bound.
  bool in_context(StateId q) const {
    CW_CHECK(!bottom_, "context of bottom counter");
    CW_CHECK(q.index < atoms_.size(), "state index out of range");
    return atoms_[q.index].is_geq();
  }

  std::vector<StateId> context() const {
    CW_CHECK(!bottom_, "context of bottom counter");
    std::vector<StateId> out;
    for (uint32_t i = 0; i < atoms_.size(); ++i) {
      if (atoms_[i].is_geq()) {
        out.push_back(StateId{i});
      }
    }
    return out;
  }

  // Keeps equalities below the per-state threshold and widens the rest to
  // lower bounds with the same constant.
  Counter relax(const Resolution& rho) const {
    CW_CHECK(!bottom_, "relax of bottom counter");
    CW_CHECK(rho.thresholds.size() == atoms_.size(), "alphabet size mismatch");
    Counter out = *this;
    for (uint32_t i = 0; i < atoms_.size(); ++i) {
      if (out.atoms_[i].is_eq() && out.atoms_[i].bound >= rho.at(StateId{i})) {
        out.atoms_[i] = Atom::geq(out.atoms_[i].bound);
      }
    }
    return out;
  }

  friend bool operator==(const Counter&, const Counter&) = default;

private:
  void check_same_alphabet(const Counter& other) const {
    CW_CHECK(alphabet_size() == other.alphabet_size(),
             "alphabet size mismatch");
  }

  bool bottom_ = false;
  uint32_t alphabet_size_ = 0;  // meaningful only when bottom_
  std::vector<Atom> atoms_;     // empty iff bottom_
};

struct CounterDiff {
  Counter value;
  bool exact = true;
};

inline CounterDiff Counter::minus_checked(const Counter& other) const {
  check_same_alphabet(other);
  if (bottom_ || other.bottom_) {
    return {bottom(alphabet_size()), true};
  }
  Counter out;
  out.atoms_.reserve(atoms_.size());
  bool exact = true;
  for (size_t i = 0; i < atoms_.size(); ++i) {
    AtomDiff d = atom_minus(atoms_[i], other.atoms_[i]);
    if (!d.value) {
      // One empty component empties the product, which bottom represents
      // exactly regardless of losses elsewhere.
      return {bottom(alphabet_size()), true};
    }
    exact = exact && d.exact;
    out.atoms_.push_back(*d.value);
  }
  return {out, exact};
}

inline Counter Counter::minus(const Counter& other) const {
  return minus_checked(other).value;
}

}  // namespace cw
