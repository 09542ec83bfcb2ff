#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cw/counted_word.hpp"
#include "cw/counter.hpp"
#include "cw/system.hpp"

// Brute-force generators and reference computations shared by the unit tests
// and the acceptance suite.  Everything here is deliberately naive; it is the
// yardstick the library is measured against.
namespace cwtest {

using namespace cw;

inline uint32_t rnd(std::mt19937& rng, uint32_t bound_exclusive) {
  return static_cast<uint32_t>(rng() % bound_exclusive);
}

inline Alphabet letters(uint32_t n) {
  static const char* names[] = {"a", "b", "c", "d", "e", "f", "g", "h"};
  std::vector<std::string> v;
  for (uint32_t i = 0; i < n; ++i) {
    v.push_back(names[i]);
  }
  return Alphabet(v);
}

// All multisets over n states with every count <= max.
inline std::vector<Multiset> all_multisets(uint32_t n, uint32_t max) {
  std::vector<Multiset> out;
  std::vector<uint32_t> cur(n, 0);
  while (true) {
    out.push_back(Multiset(cur));
    uint32_t i = 0;
    for (; i < n; ++i) {
      if (++cur[i] <= max) {
        break;
      }
      cur[i] = 0;
    }
    if (i == n) {
      return out;
    }
  }
}

inline std::vector<Atom> all_atoms(uint32_t max_bound) {
  std::vector<Atom> out;
  for (uint32_t k = 0; k <= max_bound; ++k) {
    out.push_back(Atom::eq(k));
    out.push_back(Atom::geq(k));
  }
  return out;
}

// All non-bottom counters over n states with atom bounds <= max_bound.
inline std::vector<Counter> all_counters(uint32_t n, uint32_t max_bound) {
  const std::vector<Atom> atoms = all_atoms(max_bound);
  std::vector<Counter> out;
  std::vector<size_t> pick(n, 0);
  while (true) {
    std::vector<Atom> chosen;
    for (uint32_t i = 0; i < n; ++i) {
      chosen.push_back(atoms[pick[i]]);
    }
    out.push_back(Counter::of_atoms(std::move(chosen)));
    uint32_t i = 0;
    for (; i < n; ++i) {
      if (++pick[i] < atoms.size()) {
        break;
      }
      pick[i] = 0;
    }
    if (i == n) {
      return out;
    }
  }
}

inline std::vector<Multiset> sat_set(const Counter& cr,
                                     const std::vector<Multiset>& universe) {
  std::vector<Multiset> out;
  for (const Multiset& m : universe) {
    if (cr.accepts(m)) {
      out.push_back(m);
    }
  }
  return out;
}

// All configurations over n states with length <= max_len, shortest first.
inline std::vector<Configuration> all_configs(uint32_t n, size_t max_len) {
  std::vector<Configuration> out;
  out.push_back({});
  size_t level_begin = 0;
  for (size_t len = 1; len <= max_len; ++len) {
    size_t level_end = out.size();
    for (size_t i = level_begin; i < level_end; ++i) {
      for (uint32_t q = 0; q < n; ++q) {
        Configuration c = out[i];
        c.push_back(StateId{q});
        out.push_back(std::move(c));
      }
    }
    level_begin = level_end;
  }
  return out;
}

// The atoms a well-formed position may carry for one state whose exact
// prefix/suffix count is `exact`: the equality pinning the count, or any
// lower bound not exceeding it.  max_bound additionally caps the constants.
inline std::vector<Atom> wf_atom_choices(uint32_t exact, uint32_t max_bound) {
  std::vector<Atom> out;
  if (exact <= max_bound) {
    out.push_back(Atom::eq(exact));
  }
  for (uint32_t k = 0; k <= std::min(exact, max_bound); ++k) {
    out.push_back(Atom::geq(k));
  }
  return out;
}

// All well-formed counters for a position side with exact Parikh image m.
inline std::vector<Counter> wf_counter_choices(const Multiset& m,
                                               uint32_t max_bound) {
  const uint32_t n = m.size();
  std::vector<std::vector<Atom>> per_state;
  for (uint32_t q = 0; q < n; ++q) {
    per_state.push_back(wf_atom_choices(m.at(StateId{q}), max_bound));
  }
  std::vector<Counter> out;
  std::vector<size_t> pick(n, 0);
  while (true) {
    std::vector<Atom> chosen;
    for (uint32_t q = 0; q < n; ++q) {
      chosen.push_back(per_state[q][pick[q]]);
    }
    out.push_back(Counter::of_atoms(std::move(chosen)));
    uint32_t q = 0;
    for (; q < n; ++q) {
      if (++pick[q] < per_state[q].size()) {
        break;
      }
      pick[q] = 0;
    }
    if (q == n) {
      return out;
    }
  }
}

// Every well-formed counted word with the given base and bounds <= max_bound.
inline void wf_words_for_base(const Configuration& base, uint32_t n,
                              uint32_t max_bound,
                              std::vector<CountedWord>& out) {
  const std::vector<Multiset> pref = prefix_parikhs(base, n);
  const Multiset& total = pref.back();
  std::vector<std::vector<Counter>> lefts;
  std::vector<std::vector<Counter>> rights;
  for (size_t i = 0; i < base.size(); ++i) {
    lefts.push_back(wf_counter_choices(pref[i], max_bound));
    rights.push_back(wf_counter_choices(*total.minus(pref[i + 1]), max_bound));
  }
  std::vector<size_t> pick(2 * base.size(), 0);
  while (true) {
    CountedWord w(n);
    for (size_t i = 0; i < base.size(); ++i) {
      w.push_back(Tuple{lefts[i][pick[2 * i]], base[i], rights[i][pick[2 * i + 1]]});
    }
    out.push_back(std::move(w));
    size_t d = 0;
    for (; d < pick.size(); ++d) {
      const size_t limit =
          (d % 2 == 0) ? lefts[d / 2].size() : rights[d / 2].size();
      if (++pick[d] < limit) {
        break;
      }
      pick[d] = 0;
    }
    if (d == pick.size()) {
      return;
    }
  }
}

// The exhaustive well-formed family over n letters with base length in
// [1, max_base] and bounds <= max_bound.
inline std::vector<CountedWord> exhaustive_wf_family(uint32_t n,
                                                     size_t max_base,
                                                     uint32_t max_bound) {
  std::vector<CountedWord> out;
  for (const Configuration& base : all_configs(n, max_base)) {
    if (base.empty()) {
      continue;
    }
    wf_words_for_base(base, n, max_bound, out);
  }
  return out;
}

// One random well-formed word: random base, then per side either the exact
// equality or a random lower bound below the exact count.
inline CountedWord random_wf_word(uint32_t n, size_t max_base,
                                  std::mt19937& rng, size_t min_base = 1) {
  std::uniform_int_distribution<size_t> len_dist(min_base, max_base);
  std::uniform_int_distribution<uint32_t> letter(0, n - 1);
  Configuration base(len_dist(rng));
  for (StateId& q : base) {
    q = StateId{letter(rng)};
  }
  const std::vector<Multiset> pref = prefix_parikhs(base, n);
  const Multiset& total = pref.back();
  auto pick_counter = [&](const Multiset& exact) {
    Counter cr = Counter::top(n);
    for (uint32_t q = 0; q < n; ++q) {
      const uint32_t e = exact.at(StateId{q});
      if (rng() % 2 == 0) {
        cr.set(StateId{q}, Atom::eq(e));
      } else {
        cr.set(StateId{q},
               Atom::geq(std::uniform_int_distribution<uint32_t>(0, e)(rng)));
      }
    }
    return cr;
  };
  CountedWord w(n);
  for (size_t i = 0; i < base.size(); ++i) {
    w.push_back(Tuple{pick_counter(pref[i]), base[i],
                      pick_counter(*total.minus(pref[i + 1]))});
  }
  return w;
}

inline Counter random_counter(uint32_t n, uint32_t max_bound,
                              std::mt19937& rng) {
  std::uniform_int_distribution<uint32_t> bound(0, max_bound);
  Counter cr = Counter::top(n);
  for (uint32_t q = 0; q < n; ++q) {
    if (rng() % 2 == 0) {
      cr.set(StateId{q}, Atom::eq(bound(rng)));
    } else {
      cr.set(StateId{q}, Atom::geq(bound(rng)));
    }
  }
  return cr;
}

// Reference denotation: every configuration of length <= max_len modeled by
// the word, computed with the membership test only.
inline std::vector<Configuration> bounded_denotation(
    const CountedWord& phi, const std::vector<Configuration>& universe) {
  std::vector<Configuration> out;
  for (const Configuration& w : universe) {
    if (models(w, phi)) {
      out.push_back(w);
    }
  }
  return out;
}

// The word denoting every configuration in which all processes sit in the
// initial state.
inline cw::CountedWord uniform_init_word(uint32_t alphabet_size,
                                         cw::StateId init) {
  cw::Counter cr = cw::Counter::all_eq_zero(alphabet_size);
  cr.set(init, cw::Atom::geq(0));
  cw::CountedWord w(alphabet_size);
  w.push_back(cw::Tuple{cr, init, cr});
  return cw::strengthen(w);
}

// The word denoting every configuration containing the pattern as a
// (scattered) subword.
inline cw::CountedWord upward_pattern(uint32_t alphabet_size,
                                      const cw::Configuration& pattern) {
  cw::CountedWord w(alphabet_size);
  for (cw::StateId q : pattern) {
    w.push_back(cw::Tuple{cw::Counter::top(alphabet_size), q,
                          cw::Counter::top(alphabet_size)});
  }
  return cw::strengthen(w);
}

namespace burns_state {
constexpr cw::StateId Q10{0};  // q(1:0)
constexpr cw::StateId Q20{1};  // q(2:0)
constexpr cw::StateId Q30{2};  // q(3:0)
constexpr cw::StateId Q11{3};  // q(1:1)
constexpr cw::StateId Q31{4};  // q(3:1)
constexpr cw::StateId Q41{5};  // q(4:1)
constexpr cw::StateId Q51{6};  // q(5:1)
constexpr cw::StateId Q61{7};  // q(6:1)
constexpr cw::StateId Q71{8};  // q(7:1)
}  // namespace burns_state

// Nine-state token-free mutual exclusion protocol with a two-valued flag per
// process: states q(i:v) mean program location i with flag v.  Doubles as a
// realistic guard mix: plain moves, existential and universal tests on both
// sides.  Safety means no two processes sit in q(6:1) together.
inline cw::ParameterizedSystem burns_system() {
  using namespace burns_state;
  using cw::Guard;
  using cw::Quant;
  using cw::StateId;
  using cw::Transition;

  cw::ParameterizedSystem sys;
  sys.alphabet = cw::Alphabet({"q(1:0)", "q(2:0)", "q(3:0)", "q(1:1)", "q(3:1)",
                               "q(4:1)", "q(5:1)", "q(6:1)", "q(7:1)"});
  sys.init_state = Q10;
  const std::vector<StateId> flag_up{Q11, Q31, Q41, Q51, Q61, Q71};
  const std::vector<StateId> flag_down{Q10, Q20, Q30};
  sys.transitions = {
      Transition{"t1", Q10, Q20, std::nullopt},
      Transition{"t2", Q11, Q20, std::nullopt},
      Transition{"t3", Q20, Q10, Guard{Quant::ExistsL, flag_up}},
      Transition{"t4", Q20, Q30, Guard{Quant::ForallL, flag_down}},
      Transition{"t5", Q30, Q41, std::nullopt},
      Transition{"t6", Q41, Q11, Guard{Quant::ExistsL, flag_up}},
      Transition{"t7", Q61, Q71, std::nullopt},
      Transition{"t8", Q51, Q61, Guard{Quant::ForallR, flag_down}},
      Transition{"t9", Q41, Q51, Guard{Quant::ForallL, flag_down}},
      Transition{"t10", Q71, Q10, std::nullopt},
  };

  const uint32_t n = sys.alphabet.size();
  sys.init_set.push_back(uniform_init_word(n, Q10));
  sys.bad_set.push_back(upward_pattern(n, {Q61, Q61}));
  return sys;
}

// In-code mirrors of the bundled model files; the structural tests in
// frontend_tests keep each file and its mirror in lock step.

namespace compact_szymanski_state {
constexpr cw::StateId S0{0};
constexpr cw::StateId S1{1};
constexpr cw::StateId S2{2};
constexpr cw::StateId S3{3};
constexpr cw::StateId S4{4};
constexpr cw::StateId S5{5};
constexpr cw::StateId S6{6};
constexpr cw::StateId S7{7};
}  // namespace compact_szymanski_state

inline cw::ParameterizedSystem compact_szymanski_system() {
  using namespace compact_szymanski_state;
  using cw::Guard;
  using cw::Quant;
  using cw::Transition;

  cw::ParameterizedSystem sys;
  sys.alphabet =
      cw::Alphabet({"q0", "q1", "q2", "q3", "q4", "q5", "q6", "q7"});
  sys.init_state = S0;
  sys.transitions = {
      Transition{"t1", S0, S1, std::nullopt},
      Transition{"t2", S1, S2, Guard{Quant::ForallLR, {S0, S1, S2, S4}}},
      Transition{"t3", S2, S3, std::nullopt},
      Transition{"t4", S3, S4, Guard{Quant::ExistsLR, {S1, S2, S5, S6, S7}}},
      Transition{"t5", S4, S5, Guard{Quant::ExistsLR, {S5, S6, S7}}},
      Transition{"t6", S3, S5, Guard{Quant::ForallLR, {S0, S1, S3, S4}}},
      Transition{"t7", S5, S6,
                 Guard{Quant::ForallLR, {S0, S1, S2, S5, S6, S7}}},
      Transition{"t8", S6, S7, Guard{Quant::ForallL, {S0, S1, S2, S4}}},
      Transition{"t9", S7, S0, std::nullopt},
  };
  const uint32_t n = sys.alphabet.size();
  sys.init_set.push_back(uniform_init_word(n, S0));
  sys.bad_set.push_back(upward_pattern(n, {S7, S7}));
  return sys;
}

namespace refined_szymanski_state {
constexpr cw::StateId R0{0};
constexpr cw::StateId R1{1};
constexpr cw::StateId R2{2};
constexpr cw::StateId R3{3};
constexpr cw::StateId R4{4};
constexpr cw::StateId R5{5};
constexpr cw::StateId R6{6};
constexpr cw::StateId R7{7};
constexpr cw::StateId R8{8};
constexpr cw::StateId R9{9};
constexpr cw::StateId R10{10};
constexpr cw::StateId R11{11};
constexpr cw::StateId R12{12};
constexpr cw::StateId R13{13};
}  // namespace refined_szymanski_state

inline cw::ParameterizedSystem refined_szymanski_system() {
  using namespace refined_szymanski_state;
  using cw::Guard;
  using cw::Quant;
  using cw::Transition;

  cw::ParameterizedSystem sys;
  sys.alphabet = cw::Alphabet({"q0", "q1", "q2", "q3", "q4", "q5", "q6", "q7",
                               "q8", "q9", "q10", "q11", "q12", "q13"});
  sys.init_state = R0;
  sys.transitions = {
      Transition{"t1", R0, R1, std::nullopt},
      Transition{"t2", R1, R2, std::nullopt},
      Transition{"t3", R2, R3,
                 Guard{Quant::ForallLR, {R0, R1, R2, R3, R7, R8}}},
      Transition{"t4", R3, R4, std::nullopt},
      Transition{"t5", R4, R6, Guard{Quant::ExistsLR, {R2, R3}}},
      Transition{"t6", R6, R7, std::nullopt},
      Transition{"t7", R7, R8, Guard{Quant::ExistsLR, {R9, R10, R11}}},
      Transition{"t8", R5, R9, std::nullopt},
      Transition{"t9", R4, R5,
                 Guard{Quant::ForallLR,
                       {R0, R1, R4, R5, R6, R7, R8, R9, R10, R11}}},
      Transition{"t10", R8, R9, std::nullopt},
      Transition{"t11", R9, R10, Guard{Quant::ForallL, {R0, R1, R2, R3}}},
      Transition{"t12", R10, R11,
                 Guard{Quant::ForallR, {R0, R1, R2, R3, R9, R10, R11}}},
      Transition{"t13", R11, R0, std::nullopt},
  };
  const uint32_t n = sys.alphabet.size();
  sys.init_set.push_back(uniform_init_word(n, R0));
  sys.bad_set.push_back(upward_pattern(n, {R10, R10}));
  return sys;
}

namespace gribomont_zenner_state {
constexpr cw::StateId G1{0};
constexpr cw::StateId G2{1};
constexpr cw::StateId G3{2};
constexpr cw::StateId G4{3};
constexpr cw::StateId G5{4};
constexpr cw::StateId G6{5};
constexpr cw::StateId G7{6};
constexpr cw::StateId G8{7};
constexpr cw::StateId G9{8};
constexpr cw::StateId G10{9};
constexpr cw::StateId G11{10};
constexpr cw::StateId G12{11};
constexpr cw::StateId G13{12};
}  // namespace gribomont_zenner_state

inline cw::ParameterizedSystem gribomont_zenner_system() {
  using namespace gribomont_zenner_state;
  using cw::Guard;
  using cw::Quant;
  using cw::Transition;

  cw::ParameterizedSystem sys;
  sys.alphabet = cw::Alphabet({"q1", "q2", "q3", "q4", "q5", "q6", "q7", "q8",
                               "q9", "q10", "q11", "q12", "q13"});
  sys.init_state = G1;
  sys.transitions = {
      Transition{"t1", G1, G2, std::nullopt},
      Transition{"t2", G2, G3, std::nullopt},
      Transition{"t3", G3, G4,
                 Guard{Quant::ForallLR, {G1, G2, G3, G7, G8}}},
      Transition{"t4", G4, G5, std::nullopt},
      Transition{"t5", G5, G6, Guard{Quant::ExistsLR, {G2, G3}}},
      Transition{"t6", G6, G7, std::nullopt},
      Transition{"t7", G7, G8, Guard{Quant::ExistsLR, {G9, G10, G11}}},
      Transition{"t8", G8, G9, std::nullopt},
      Transition{"t9", G5, G9,
                 Guard{Quant::ForallLR,
                       {G1, G4, G5, G6, G7, G8, G9, G10, G11}}},
      Transition{"t10", G9, G10, std::nullopt},
      Transition{"t11", G10, G11, Guard{Quant::ForallL, {G1, G2, G3}}},
      Transition{"t12", G11, G12,
                 Guard{Quant::ForallR, {G1, G2, G3, G9, G10, G11}}},
      Transition{"t13", G12, G12, std::nullopt},
      Transition{"t14", G13, G1, std::nullopt},
  };
  const uint32_t n = sys.alphabet.size();
  sys.init_set.push_back(uniform_init_word(n, G1));
  sys.bad_set.push_back(upward_pattern(n, {G12, G12}));
  return sys;
}

}  // namespace cwtest
