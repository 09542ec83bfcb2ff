#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cw/error.hpp"

namespace cw {

// Index of a process state in the alphabet of a system.
struct StateId {
  uint32_t index = 0;

  friend constexpr auto operator<=>(StateId, StateId) = default;
};

// The finite set of process states, in declaration order.  Declaration order
// fixes the index of every state and thereby the layout of counters.
class Alphabet {
public:
  Alphabet() = default;

  explicit Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
    for (uint32_t i = 0; i < names_.size(); ++i) {
      for (uint32_t j = i + 1; j < names_.size(); ++j) {
        CW_CHECK(names_[i] != names_[j], "duplicate state name: " + names_[i]);
      }
    }
  }

  uint32_t size() const { return static_cast<uint32_t>(names_.size()); }

  const std::string& name(StateId q) const {
    CW_CHECK(q.index < names_.size(), "state index out of range");
    return names_[q.index];
  }

  std::optional<StateId> find(std::string_view name) const {
    for (uint32_t i = 0; i < names_.size(); ++i) {
      if (names_[i] == name) {
        return StateId{i};
      }
    }
    return std::nullopt;
  }

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

private:
  std::vector<std::string> names_;
};

// A configuration of the system: the local states of finitely many processes
// arranged on a line, leftmost process first.
using Configuration = std::vector<StateId>;

// A multiset over the alphabet, stored as one count per state.
class Multiset {
public:
  Multiset() = default;

  explicit Multiset(uint32_t alphabet_size) : counts_(alphabet_size, 0) {}

  explicit Multiset(std::vector<uint32_t> counts) : counts_(std::move(counts)) {}

  static Multiset parikh(const Configuration& w, uint32_t alphabet_size) {
    Multiset m(alphabet_size);
    for (StateId q : w) {
      CW_CHECK(q.index < alphabet_size, "configuration letter outside alphabet");
      ++m.counts_[q.index];
    }
    return m;
  }

  uint32_t size() const { return static_cast<uint32_t>(counts_.size()); }

  uint32_t at(StateId q) const {
    CW_CHECK(q.index < counts_.size(), "state index out of range");
    return counts_[q.index];
  }

  void set(StateId q, uint32_t value) {
    CW_CHECK(q.index < counts_.size(), "state index out of range");
    counts_[q.index] = value;
  }

  void add(StateId q, uint32_t delta = 1) {
    CW_CHECK(q.index < counts_.size(), "state index out of range");
    counts_[q.index] += delta;
  }

  uint32_t total() const {
    uint32_t sum = 0;
    for (uint32_t c : counts_) {
      sum += c;
    }
    return sum;
  }

  // Pointwise <= on counts.
  bool included_in(const Multiset& other) const {
    CW_CHECK(counts_.size() == other.counts_.size(), "alphabet size mismatch");
    for (size_t i = 0; i < counts_.size(); ++i) {
      if (counts_[i] > other.counts_[i]) {
        return false;
      }
    }
    return true;
  }

  Multiset plus(const Multiset& other) const {
    CW_CHECK(counts_.size() == other.counts_.size(), "alphabet size mismatch");
    Multiset out = *this;
    for (size_t i = 0; i < counts_.size(); ++i) {
      out.counts_[i] += other.counts_[i];
    }
    return out;
  }

  // Pointwise difference; defined only when other is included in this.
  std::optional<Multiset> minus(const Multiset& other) const {
    CW_CHECK(counts_.size() == other.counts_.size(), "alphabet size mismatch");
    if (!other.included_in(*this)) {
      return std::nullopt;
    }
    Multiset out = *this;
    for (size_t i = 0; i < counts_.size(); ++i) {
      out.counts_[i] -= other.counts_[i];
    }
    return out;
  }

  Multiset max_with(const Multiset& other) const {
    CW_CHECK(counts_.size() == other.counts_.size(), "alphabet size mismatch");
    Multiset out = *this;
    for (size_t i = 0; i < counts_.size(); ++i) {
      if (other.counts_[i] > out.counts_[i]) {
        out.counts_[i] = other.counts_[i];
      }
    }
    return out;
  }

  friend bool operator==(const Multiset&, const Multiset&) = default;

private:
  std::vector<uint32_t> counts_;
};

// A refinement resolution: one threshold per state.  Equality constraints
// with constant below the threshold survive relaxation, everything else is
// widened to a lower bound.
struct Resolution {
  Multiset thresholds;

  static Resolution zero(uint32_t alphabet_size) {
    return Resolution{Multiset(alphabet_size)};
  }

  uint32_t at(StateId q) const { return thresholds.at(q); }

  Resolution max_with(const Resolution& other) const {
    return Resolution{thresholds.max_with(other.thresholds)};
  }

  friend bool operator==(const Resolution&, const Resolution&) = default;
};

}  // namespace cw
