#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <unordered_set>
#include <vector>

#include "cw/system.hpp"

// Brute-force ground truth used by the test suite: bounded denotation
// enumeration, explicit-state reachability at a fixed process count, and the
// positional conditions characterizing valid shuffle completions.  Nothing
// here is shared with the symbolic algorithms beyond the basic word types,
// so agreement between the two is meaningful evidence.

namespace cw {
namespace oracle {

constexpr uint64_t kEnumerationGuard = 10'000'000;

inline uint64_t words_up_to(uint32_t alphabet_size, uint32_t length) {
  uint64_t total = 0;
  uint64_t layer = 1;
  for (uint32_t i = 0; i <= length; ++i) {
    total += layer;
    if (total > kEnumerationGuard) {
      return total;
    }
    layer *= alphabet_size;
  }
  return total;
}

// Every configuration of length <= max_length, in length-then-lexicographic
// order.
inline std::vector<Configuration> enumerate_universe(uint32_t alphabet_size,
                                                     uint32_t max_length) {
  CW_CHECK(alphabet_size > 0, "empty alphabet");
  CW_CHECK(words_up_to(alphabet_size, max_length) <= kEnumerationGuard,
           "enumeration out of reach");
  std::vector<Configuration> out;
  out.push_back(Configuration{});
  size_t layer_begin = 0;
  for (uint32_t len = 1; len <= max_length; ++len) {
    const size_t layer_end = out.size();
    for (size_t i = layer_begin; i < layer_end; ++i) {
      for (uint32_t q = 0; q < alphabet_size; ++q) {
        Configuration next = out[i];
        next.push_back(StateId{q});
        out.push_back(std::move(next));
      }
    }
    layer_begin = layer_end;
  }
  return out;
}

// The length-bounded denotation of a counted word.
inline std::vector<Configuration> enumerate_denotation(const CountedWord& phi,
                                                       uint32_t max_length) {
  std::vector<Configuration> out;
  for (Configuration& w :
       enumerate_universe(phi.alphabet_size(), max_length)) {
    if (models(w, phi)) {
      out.push_back(std::move(w));
    }
  }
  return out;
}

struct ReachResult {
  std::vector<Configuration> reached;
  bool bad_hit = false;
};

namespace detail {

inline uint64_t encode(const Configuration& c, uint32_t alphabet_size) {
  uint64_t code = 0;
  for (StateId q : c) {
    code = code * alphabet_size + q.index + 1;
  }
  return code;
}

}  // namespace detail

// Explicit-state fixpoint from the length-n uniform initial configuration.
inline ReachResult explicit_reach(const ParameterizedSystem& sys, uint32_t n) {
  const uint32_t a = sys.alphabet.size();
  CW_CHECK(a > 0, "empty alphabet");
  CW_CHECK(words_up_to(a, n) <= kEnumerationGuard,
           "enumeration out of reach");
  ReachResult result;
  std::unordered_set<uint64_t> seen;
  std::vector<Configuration> frontier;
  Configuration init(n, sys.init_state);
  seen.insert(detail::encode(init, a));
  frontier.push_back(init);
  result.reached.push_back(std::move(init));
  while (!frontier.empty()) {
    std::vector<Configuration> next_frontier;
    for (const Configuration& c : frontier) {
      for (const Transition& t : sys.transitions) {
        for (Configuration& succ : step_concrete(c, t)) {
          if (seen.insert(detail::encode(succ, a)).second) {
            result.reached.push_back(succ);
            next_frontier.push_back(std::move(succ));
          }
        }
      }
    }
    frontier = std::move(next_frontier);
  }
  for (const Configuration& c : result.reached) {
    for (const CountedWord& bad : sys.bad_set) {
      if (models(c, bad)) {
        result.bad_hit = true;
        return result;
      }
    }
  }
  return result;
}

// Strictly increasing map from the base positions of one word into the
// positions of another (all zero-based).
struct InjectionWitness {
  std::vector<size_t> map;

  bool valid(size_t domain, size_t codomain) const {
    if (map.size() != domain) {
      return false;
    }
    for (size_t i = 0; i < map.size(); ++i) {
      if (map[i] >= codomain || (i > 0 && map[i] <= map[i - 1])) {
        return false;
      }
    }
    return true;
  }

  bool hits(size_t j) const {
    return std::find(map.begin(), map.end(), j) != map.end();
  }
};

namespace detail {

// Left boundary counter of the concatenation u[from..] * v.
inline Counter lc_from(const CountedWord& u, size_t from,
                       const CountedWord& v) {
  if (from < u.size()) {
    return u.at(from).left;
  }
  return v.lc();
}

// Right boundary counter of u[..upto).
inline Counter rc_upto(const CountedWord& u, size_t upto) {
  if (upto > 0) {
    return u.at(upto - 1).right;
  }
  return Counter::top(u.alphabet_size());
}

}  // namespace detail

// Positional characterization of valid shuffle completions: a candidate z is
// "good" for (u*v, u'*v') under injections h1, h2 when the images cover every
// position of z and each position is either a verbatim copy of a solo-mapped
// tuple tolerated by the other word's surrounding boundary counters, or the
// counter-meet of two tuples mapped onto it together.
inline bool check_goodness(const CountedWord& z, const CountedWord& u,
                           const CountedWord& v, const CountedWord& u2,
                           const CountedWord& v2, const InjectionWitness& h1,
                           const InjectionWitness& h2) {
  CW_CHECK(h1.valid(u.size(), z.size()) && h2.valid(u2.size(), z.size()),
           "malformed injection");
  for (size_t j = 0; j < z.size(); ++j) {
    if (!h1.hits(j) && !h2.hits(j)) {
      return false;
    }
  }
  for (size_t j = 0; j < z.size(); ++j) {
    const auto find1 = std::find(h1.map.begin(), h1.map.end(), j);
    const auto find2 = std::find(h2.map.begin(), h2.map.end(), j);
    const bool in1 = find1 != h1.map.end();
    const bool in2 = find2 != h2.map.end();
    if (in1 && in2) {
      const Tuple& a = u.at(static_cast<size_t>(find1 - h1.map.begin()));
      const Tuple& b = u2.at(static_cast<size_t>(find2 - h2.map.begin()));
      if (a.state != b.state) {
        return false;
      }
      Counter l = a.left.meet(b.left);
      Counter r = a.right.meet(b.right);
      if (l.is_bottom() || r.is_bottom()) {
        return false;
      }
      if (!(z.at(j) == Tuple{std::move(l), a.state, std::move(r)})) {
        return false;
      }
    } else if (in1) {
      const Tuple& a = u.at(static_cast<size_t>(find1 - h1.map.begin()));
      // Number of positions of the other word mapped at or before j.
      size_t i2 = 0;
      while (i2 < h2.map.size() && h2.map[i2] <= j) {
        ++i2;
      }
      Counter before = detail::rc_upto(u2, i2);
      Counter after = detail::lc_from(u2, i2, v2);
      if (!before.in_context(a.state) || !after.in_context(a.state)) {
        return false;
      }
      if (!(z.at(j) == a)) {
        return false;
      }
    } else {
      const Tuple& b = u2.at(static_cast<size_t>(find2 - h2.map.begin()));
      size_t i1 = 0;
      while (i1 < h1.map.size() && h1.map[i1] <= j) {
        ++i1;
      }
      Counter before = detail::rc_upto(u, i1);
      Counter after = detail::lc_from(u, i1, v);
      if (!before.in_context(b.state) || !after.in_context(b.state)) {
        return false;
      }
      if (!(z.at(j) == b)) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace oracle
}  // namespace cw
