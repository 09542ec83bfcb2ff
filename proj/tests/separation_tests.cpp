#include <catch2/catch_amalgamated.hpp>

#include <optional>
#include <random>
#include <vector>

#include "cw/separation.hpp"
#include "support.hpp"

using namespace cw;

namespace {

constexpr StateId A{0};
constexpr StateId B{1};

Counter c1(Atom a) { return Counter::of_atoms({a}); }
Counter c2(Atom a, Atom b) { return Counter::of_atoms({a, b}); }

Resolution res2(uint32_t a, uint32_t b) {
  return Resolution{Multiset(std::vector<uint32_t>{a, b})};
}

// Random positive and/or tree of the given depth.
Avoid random_avoid(uint32_t n, int depth, std::mt19937& rng) {
  const uint32_t pick = cwtest::rnd(rng, depth > 0 ? 5 : 3);
  switch (pick) {
    case 0:
      return Avoid::yes();
    case 1:
      return Avoid::no();
    case 2:
      return Avoid::atom(StateId{cwtest::rnd(rng, n)}, cwtest::rnd(rng, 4));
    case 3:
      return Avoid::conj(random_avoid(n, depth - 1, rng),
                         random_avoid(n, depth - 1, rng));
    default:
      return Avoid::disj(random_avoid(n, depth - 1, rng),
                         random_avoid(n, depth - 1, rng));
  }
}

Resolution random_resolution(uint32_t n, uint32_t max, std::mt19937& rng) {
  Resolution r = Resolution::zero(n);
  for (uint32_t q = 0; q < n; ++q) {
    r.thresholds.set(StateId{q}, cwtest::rnd(rng, max + 1));
  }
  return r;
}

}  // namespace

TEST_CASE("avoid formulas evaluate and simplify") {
  CHECK(Avoid::yes().eval(res2(0, 0)));
  CHECK_FALSE(Avoid::no().eval(res2(9, 9)));

  const Avoid at = Avoid::atom(A, 1);
  CHECK_FALSE(at.eval(res2(1, 0)));
  CHECK(at.eval(res2(2, 0)));

  // Absorbing and identity elements collapse structurally.
  CHECK(Avoid::conj(Avoid::no(), at).kind() == Avoid::Kind::False);
  CHECK(Avoid::conj(at, Avoid::yes()).kind() == Avoid::Kind::Atom);
  CHECK(Avoid::disj(Avoid::yes(), at).kind() == Avoid::Kind::True);
  CHECK(Avoid::disj(at, Avoid::no()).kind() == Avoid::Kind::Atom);

  const Avoid both = Avoid::conj(at, Avoid::atom(B, 0));
  CHECK(both.eval(res2(2, 1)));
  CHECK_FALSE(both.eval(res2(2, 0)));
  const Avoid either = Avoid::disj(at, Avoid::atom(B, 0));
  CHECK(either.eval(res2(0, 1)));
  CHECK_FALSE(either.eval(res2(1, 0)));
}

TEST_CASE("avoid formulas are monotone in the resolution") {
  std::mt19937 rng(47);
  for (int round = 0; round < 2000; ++round) {
    const Avoid f = random_avoid(2, 3, rng);
    const Resolution lo = random_resolution(2, 3, rng);
    Resolution hi = lo;
    hi.thresholds.add(StateId{cwtest::rnd(rng, 2)}, cwtest::rnd(rng, 3));
    if (f.eval(lo)) {
      CHECK(f.eval(hi));
    }
  }
}

TEST_CASE("context reasons") {
  // Unconstrained state: already tolerated, nothing to demand.
  CHECK(reasons_context(A, c2(Atom::geq(2), Atom::eq(1))).kind() ==
        Avoid::Kind::False);

  // Pinned state: demand a threshold above the counter's precision there.
  Avoid r = reasons_context(B, c2(Atom::geq(2), Atom::eq(0)));
  REQUIRE(r.kind() == Avoid::Kind::Atom);
  CHECK(r.state() == B);
  CHECK(r.bound() == 1);

  r = reasons_context(A, c2(Atom::eq(2), Atom::geq(0)));
  REQUIRE(r.kind() == Avoid::Kind::Atom);
  CHECK(r.state() == A);
  CHECK(r.bound() == 3);
}

TEST_CASE("meet reasons") {
  // [a=1] against [a>=3]: only a fails, with precision 2 on the left.
  Avoid r = reasons_meet(c2(Atom::eq(1), Atom::geq(0)),
                         c2(Atom::geq(3), Atom::geq(0)));
  REQUIRE(r.kind() == Avoid::Kind::Atom);
  CHECK(r.state() == A);
  CHECK(r.bound() == 2);

  // Compatible counters: empty disjunction.
  CHECK(reasons_meet(c2(Atom::eq(1), Atom::geq(0)),
                     c2(Atom::geq(1), Atom::eq(5)))
            .kind() == Avoid::Kind::False);

  // Two failing states: one alternative each.
  r = reasons_meet(c2(Atom::eq(1), Atom::eq(0)),
                   c2(Atom::eq(2), Atom::geq(1)));
  REQUIRE(r.kind() == Avoid::Kind::Or);
  REQUIRE(r.children().size() == 2);
  CHECK(r.children()[0].state() == A);
  CHECK(r.children()[0].bound() == 2);
  CHECK(r.children()[1].state() == B);
  CHECK(r.children()[1].bound() == 1);
}

TEST_CASE("solving avoid formulas") {
  std::optional<Resolution> s = solve_avoid(Avoid::yes(), 2);
  REQUIRE(s.has_value());
  CHECK(*s == res2(0, 0));

  CHECK_FALSE(solve_avoid(Avoid::no(), 2).has_value());
  CHECK_FALSE(
      solve_avoid(Avoid::conj(Avoid::atom(A, 1), Avoid::no()), 2).has_value());

  // (v_a > 2) and ((v_b > 0) or (v_a > 5)): the cheaper disjunct wins, the
  // conjunction joins pointwise.
  const Avoid f = Avoid::conj(
      Avoid::atom(A, 2), Avoid::disj(Avoid::atom(B, 0), Avoid::atom(A, 5)));
  s = solve_avoid(f, 2);
  REQUIRE(s.has_value());
  CHECK(*s == res2(3, 1));
  CHECK(f.eval(*s));

  // Disjunction with one unsatisfiable arm takes the other.
  s = solve_avoid(Avoid::disj(Avoid::no(), Avoid::atom(B, 2)), 2);
  REQUIRE(s.has_value());
  CHECK(*s == res2(0, 3));

  // Solutions always satisfy the formula they solve.
  std::mt19937 rng(53);
  for (int round = 0; round < 2000; ++round) {
    const Avoid g = random_avoid(2, 3, rng);
    if (std::optional<Resolution> got = solve_avoid(g, 2)) {
      CHECK(g.eval(*got));
    }
  }
}

TEST_CASE("instrumented shuffle on a one-letter refinement instance") {
  // phi pins exactly one a; relaxing at threshold zero forgets both bounds,
  // so the relaxation shuffles against the two-a word even though the exact
  // meet is empty.
  const uint32_t n = 1;
  CountedWord phi(n);
  phi.push_back(Tuple{c1(Atom::eq(0)), A, c1(Atom::eq(0))});
  CountedWord two(n);
  two.push_back(Tuple{Counter::top(n), A, Counter::top(n)});
  two.push_back(Tuple{Counter::top(n), A, Counter::top(n)});

  REQUIRE(meet_words(phi, two).empty());
  const CountedWord relaxed = relax(phi, Resolution::zero(n));
  REQUIRE_FALSE(meet_words(relaxed, two).empty());

  const SeparationRun run = augzip(relaxed, phi, two);
  // The instrumentation explores the same shuffles as the plain procedure.
  CHECK(run.words == zip(relaxed, two));
  // Every explored branch is closable by raising the a-threshold above the
  // precision of the exact bounds, so the formula reduces to that one atom.
  REQUIRE(run.avoid.kind() == Avoid::Kind::Atom);
  CHECK(run.avoid.state() == A);
  CHECK(run.avoid.bound() == 1);

  const Resolution refined = xi({phi}, {two}, Resolution::zero(n));
  CHECK(refined.at(A) == 2);
  CHECK(meet_words(relax(phi, refined), two).empty());
}

TEST_CASE("separation requires its precondition") {
  const uint32_t n = 1;
  CountedWord one(n);
  one.push_back(Tuple{Counter::top(n), A, Counter::top(n)});
  // Nonempty exact meet: not a separation instance.
  CHECK_THROWS_AS(xi({one}, {one}, Resolution::zero(n)), UsageError);

  // Exact meet empty but the relaxation never meets either: nothing to do.
  CountedWord none(n);
  none.push_back(Tuple{c1(Atom::eq(0)), A, c1(Atom::eq(0))});
  CountedWord two(n);
  two.push_back(Tuple{Counter::top(n), A, Counter::top(n)});
  two.push_back(Tuple{Counter::top(n), A, Counter::top(n)});
  CHECK_THROWS_AS(xi({none}, {two}, Resolution{Multiset({5u})}), UsageError);
}

TEST_CASE("separation empties the relaxed meet on random instances") {
  std::mt19937 rng(59);
  int exercised = 0;
  for (int round = 0; round < 4000 && exercised < 120; ++round) {
    const CountedWord a = strengthen(cwtest::random_wf_word(2, 3, rng));
    const CountedWord b = strengthen(cwtest::random_wf_word(2, 3, rng));
    if (!meet_words(a, b).empty()) {
      continue;
    }
    const Resolution rho = random_resolution(2, 1, rng);
    if (meet_words(relax(a, rho), b).empty()) {
      continue;
    }
    ++exercised;

    const Resolution refined = xi({a}, {b}, rho);

    // Pointwise at least the input, strictly above it somewhere.
    bool strict = false;
    for (uint32_t q = 0; q < 2; ++q) {
      CHECK(refined.at(StateId{q}) >= rho.at(StateId{q}));
      strict = strict || refined.at(StateId{q}) > rho.at(StateId{q});
    }
    CHECK(strict);
    CHECK(meet_words(relax(a, refined), b).empty());
  }
  // The generator must actually produce refinement instances.
  CHECK(exercised == 120);
}

TEST_CASE("separation of symbolic sets covers every pair") {
  std::mt19937 rng(61);
  int exercised = 0;
  for (int round = 0; round < 4000 && exercised < 40; ++round) {
    std::vector<CountedWord> as{strengthen(cwtest::random_wf_word(2, 2, rng)),
                                strengthen(cwtest::random_wf_word(2, 2, rng))};
    std::vector<CountedWord> bs{strengthen(cwtest::random_wf_word(2, 2, rng)),
                                strengthen(cwtest::random_wf_word(2, 2, rng))};
    if (!meet_sets(as, bs).empty()) {
      continue;
    }
    const Resolution rho = Resolution::zero(2);
    if (meet_sets(relax(as, rho), bs).empty()) {
      continue;
    }
    ++exercised;

    const Resolution refined = xi(as, bs, rho);
    CHECK(meet_sets(relax(as, refined), bs).empty());
  }
  CHECK(exercised == 40);
}
