#include <doctest.h>

#include <algorithm>
#include <random>

#include "mereo/engine.hpp"
#include "mereo/finmodel.hpp"
#include "mereo/generate.hpp"

using namespace mereo;
using namespace mereo::engine;

namespace {

Term v(const char* n) { return Term::var(n); }

bool equivalent(const Formula& f, const Formula& g, std::size_t universe = 6, std::size_t samples = 300) {
  return !finmodel::check_equivalence(f, g, samples, universe, 99).has_value();
}

}  // namespace

TEST_CASE("normalize_atoms") {
  CHECK(render(normalize_atoms(parse("sub(a, b)"))) == "card(a - b) = 0");
  CHECK(render(normalize_atoms(parse("eq(a, b)"))) == "card(a - b) = 0 & card(b - a) = 0");
  CHECK(render(normalize_atoms(parse("card(x) >= 2"))) == "card(x) >= 2");
  CHECK(equivalent(parse("sub(a, b)"), normalize_atoms(parse("sub(a, b)"))));
  CHECK(equivalent(parse("!eq(a, b) -> sub(a, b)"), normalize_atoms(parse("!eq(a, b) -> sub(a, b)"))));
}

TEST_CASE("positivize") {
  CHECK(render(positivize(parse("!(card(t) >= 2)"))) == "card(t) = 0 | card(t) = 1");
  CHECK(render(positivize(parse("!(card(t) = 1)"))) == "card(t) >= 2 | card(t) = 0");
  CHECK(positivize(parse("!(card(t) >= 0)")).is_false_literal());
  CHECK(render(positivize(parse("!(card(a) = 0 -> card(b) >= 1)"))) == "card(a) = 0 & card(b) = 0");
  for (const char* text : {"!(card(a) >= 2 <-> !card(b) = 1)", "!(card(a * b) = 2 | card(b) >= 3) -> card(a) = 1",
                           "!!card(a - b) >= 1"}) {
    Formula f = parse(text);
    CHECK_MESSAGE(equivalent(f, positivize(f)), text);
  }
}

TEST_CASE("reduction laws") {
  using SC = SizeConstraint;
  CHECK_FALSE(reduce(SC::exact(2), SC::exact(3)).has_value());
  CHECK(reduce(SC::exact(2), SC::exact(2)) == SC::exact(2));
  CHECK_FALSE(reduce(SC::exact(2), SC::at_least(3)).has_value());
  CHECK(reduce(SC::at_least(2), SC::exact(3)) == SC::exact(3));
  CHECK(reduce(SC::at_least(2), SC::at_least(5)) == SC::at_least(5));
  CHECK_FALSE(reduce(std::nullopt, SC::at_least(0)).has_value());
}

TEST_CASE("cellify") {
  const std::vector<std::string> xy{"x", "y"};
  auto cells = cellify(v("x"), xy);
  REQUIRE(cells.size() == 2);
  CHECK(render(cells[0].term()) == "x - y");
  CHECK(render(cells[1].term()) == "x * y");

  std::vector<std::string> six{"x0", "x1", "x2", "x3", "x4", "x5"};
  auto one = cellify(parse_term("(x0 * x3) - (x1 + x2 + x5)"), six);
  // x4 is unconstrained by the term, so the Venn split yields two cells...
  REQUIRE(one.size() == 2);
  // ...but over the variables the term mentions it is exactly one cell.
  std::vector<std::string> five{"x0", "x1", "x2", "x3", "x5"};
  auto exact = cellify(parse_term("(x0 * x3) - (x1 + x2 + x5)"), five);
  REQUIRE(exact.size() == 1);
  CHECK(exact[0].positives == 0b01001U);
  CHECK(render(exact[0].term()) == "x0 * x3 - (x1 + x2 + x5)");

  CHECK(cellify(Term::zero(), {"x"}).empty());
  CHECK_THROWS_AS(cellify(v("q"), {"x"}), std::invalid_argument);
}

TEST_CASE("property: cells are disjoint and cover the term") {
  const std::vector<std::string> vars{"a", "b", "c"};
  std::mt19937_64 rng(5);
  gen::Generator g(5);
  for (int i = 0; i < 200; ++i) {
    Term t = g.term(vars, 3);
    auto cells = cellify(t, vars);
    finmodel::Assignment a = finmodel::random_assignment(vars, 10, rng);
    finmodel::FinSet covered;
    for (std::size_t p = 0; p < cells.size(); ++p) {
      finmodel::FinSet cp = finmodel::eval_term(cells[p].term(), a);
      for (std::size_t q = p + 1; q < cells.size(); ++q) {
        CHECK(cp.intersection(finmodel::eval_term(cells[q].term(), a)).empty());
      }
      covered = covered.union_with(cp);
    }
    CHECK(covered == finmodel::eval_term(t, a));
  }
  // Every pair of distinct cells over three variables.
  for (std::uint32_t p = 1; p < 8; ++p) {
    for (std::uint32_t q = p + 1; q < 8; ++q) {
      for (int k = 0; k < 20; ++k) {
        auto a = finmodel::random_assignment(vars, 8, rng);
        CHECK(finmodel::eval_term(cell_term(p, vars), a)
                  .intersection(finmodel::eval_term(cell_term(q, vars), a))
                  .empty());
      }
    }
  }
}

TEST_CASE("rewrite_union_sizes") {
  // Two disjoint cells over [a, b]: a - b and a * b.
  const std::vector<std::string> ab{"a", "b"};
  std::vector<CellTerm> cells{{ab, 0b01}, {ab, 0b11}};
  Formula eq1 = rewrite_union_sizes(cells, FormulaKind::CardEq, 1);
  CHECK(render(eq1) == "card(a - b) = 0 & card(a * b) = 1 | card(a - b) = 1 & card(a * b) = 0");
  Formula geq1 = rewrite_union_sizes(cells, FormulaKind::CardGeq, 1);
  CHECK(render(geq1) == "card(a - b) >= 0 & card(a * b) >= 1 | card(a - b) >= 1 & card(a * b) >= 0");
  Term u = Term::join(cells[0].term(), cells[1].term());
  CHECK(equivalent(eq1, Formula::card_eq(u, 1), 3));
  CHECK(equivalent(geq1, Formula::card_geq(u, 1), 3));
  for (std::uint64_t n = 0; n <= 4; ++n) {
    CHECK(equivalent(rewrite_union_sizes(cells, FormulaKind::CardEq, n), Formula::card_eq(u, n), 5));
    CHECK(equivalent(rewrite_union_sizes(cells, FormulaKind::CardGeq, n), Formula::card_geq(u, n), 5));
  }
  CHECK(rewrite_union_sizes({{ab, 0b11}}, FormulaKind::CardEq, 4) == Formula::card_eq(parse_term("a * b"), 4));
  CHECK(rewrite_union_sizes({}, FormulaKind::CardEq, 0).is_true_literal());
  CHECK(rewrite_union_sizes({}, FormulaKind::CardGeq, 2).is_false_literal());
}

TEST_CASE("binary union identity on overlapping terms") {
  const Term s = v("s");
  const Term t = v("t");
  for (std::uint64_t n = 0; n <= 4; ++n) {
    CHECK(equivalent(union_size_identity(s, t, FormulaKind::CardEq, n), Formula::card_eq(Term::join(s, t), n), 5));
    CHECK(equivalent(union_size_identity(s, t, FormulaKind::CardGeq, n), Formula::card_geq(Term::join(s, t), n), 5));
  }
}

TEST_CASE("the >= analogue with |s| >= i+j and |t| >= j+k is not sound") {
  // OR_{i+j+k=n} |s| >= i+j & |s*t| >= j & |t| >= j+k, read off the = identity.
  const Term s = v("s");
  const Term t = v("t");
  const std::uint64_t n = 2;
  std::vector<Formula> disjuncts;
  for (std::uint64_t i = 0; i <= n; ++i) {
    for (std::uint64_t j = 0; i + j <= n; ++j) {
      const std::uint64_t k = n - i - j;
      disjuncts.push_back(conj_all({Formula::card_geq(s, i + j), Formula::card_geq(Term::meet(s, t), j),
                                    Formula::card_geq(t, j + k)}));
    }
  }
  Formula literal = disj_all(disjuncts);
  finmodel::Assignment same{{"s", {0}}, {"t", {0}}};
  CHECK(finmodel::eval_formula(literal, same, 0));
  CHECK_FALSE(finmodel::eval_formula(Formula::card_geq(Term::join(s, t), n), same, 0));
  CHECK_FALSE(equivalent(literal, Formula::card_geq(Term::join(s, t), n), 4));
}

TEST_CASE("eliminate_exists: worked examples") {
  CHECK(render(eliminate_exists("x", parse("card(x * c) >= 3 & card(x * c) >= 7 & card(c - x) = 2"))) ==
        "card(c) >= 9");
  CHECK(render(eliminate_exists("x", parse("card(c * x) >= 5 & card(c - x) = 6 & card(d * x) >= 7"))) ==
        "card(c) >= 11 & card(d) >= 7");
  CHECK(eliminate_exists("x", parse("card(x * c) >= 5 & card(x * c) = 3")).is_false_literal());
}

TEST_CASE("eliminate_exists: slots and pass-through") {
  CHECK(render(eliminate_exists("x", parse("card(x * c) = 2 & card(c - x) = 3"))) == "card(c) = 5");
  CHECK(render(eliminate_exists("x", parse("card(x * c) = 2 & card(c - x) >= 3"))) == "card(c) >= 5");
  CHECK(eliminate_exists("x", parse("card(x - c) = 4")).is_true_literal());
  CHECK(eliminate_exists("x", parse("card(x - c) = 4 & card(x - c) >= 5")).is_false_literal());
  CHECK(eliminate_exists("x", parse("card(x * c) = 0")).is_true_literal());
  CHECK(render(eliminate_exists("x", parse("card(x * c) = 1 & card(d) >= 2"))) == "card(c) >= 1 & card(d) >= 2");
  CHECK_THROWS_AS(eliminate_exists("x", parse("card(x + c) = 1")), std::invalid_argument);
}

TEST_CASE("eliminate: examples") {
  CHECK(eliminate(parse("E x. card(x) = 5")).is_true_literal());
  CHECK(eliminate(parse("A x. sub(0, x)")).is_true_literal());
  const Formula f = parse("E x. (sub(x, c) & card(x) = 1 & card(c - x) = 1)");
  const Formula g = eliminate(f);
  CHECK(render(g) == "card(c) = 2");
  // Brute force over every c inside a 4-element universe.
  for (std::uint64_t mask = 0; mask < 16; ++mask) {
    std::vector<std::uint64_t> elems;
    for (std::uint64_t e = 0; e < 4; ++e) {
      if ((mask >> e) & 1U) elems.push_back(e);
    }
    finmodel::Assignment a{{"c", finmodel::FinSet(elems)}};
    CHECK(finmodel::eval_formula(f, a, witness_bound(f), finmodel::Search::Exhaustive) == (elems.size() == 2));
    CHECK(finmodel::eval_formula(g, a, 0) == (elems.size() == 2));
  }
  CHECK(render(eliminate(parse("E x. (card(x * c) >= 3 & card(x * c) >= 7 & card(c - x) = 2)"))) == "card(c) >= 9");
}

TEST_CASE("eliminate keeps x-free atoms out of the cell split") {
  Formula g = eliminate(parse("E x. (card(x * c) = 1 & card(d - c) >= 3)"));
  CHECK(render(g) == "card(c) >= 1 & card(d - c) >= 3");
}

TEST_CASE("eval_ground") {
  CHECK(eval_ground(parse("card(0) >= 2 | !card(0) = 5")));
  CHECK(eval_ground(parse("card(0) = 0")));
  CHECK_FALSE(eval_ground(parse("card(0) >= 1")));
  CHECK(eval_ground(parse("sub(0, 0 - 0) & eq(0 * 0, 0 + 0)")));
  CHECK_THROWS_AS(eval_ground(parse("card(x) = 0")), std::invalid_argument);
  CHECK_THROWS_AS(eval_ground(parse("card(0) = 1 & card(x) = 0")), std::invalid_argument);
  CHECK_THROWS_AS(eval_ground(parse("E x. card(0) = 0")), std::invalid_argument);
}

TEST_CASE("decide: examples") {
  CHECK(decide(parse("A x. A y. ((sub(x,y) & sub(y,x)) -> eq(x,y))")).verdict);
  CHECK(decide(parse("E x. card(x) >= 3")).verdict);
  CHECK_FALSE(decide(parse("A x. card(x) >= 1")).verdict);
  CHECK_FALSE(decide(parse("E x. A y. sub(y, x)")).verdict);
  CHECK(decide(parse("A x. (card(x) = 2 -> E y. (sub(y, x) & atom(y)))")).verdict);
  CHECK_FALSE(decide(parse("A x. (card(x) >= 2 -> E y. (sub(y, x) & card(y) = 3))")).verdict);
  CHECK_THROWS_AS(decide(parse("sub(x, 0)")), NotASentence);
}

TEST_CASE("decide: trace stages") {
  Decision d = decide(parse("A x. sub(0, x)"));
  REQUIRE(!d.trace.empty());
  CHECK(d.trace.back().stage == kStageGround);
  std::vector<std::string> seen;
  for (const auto& s : d.trace) seen.push_back(s.stage);
  for (const char* stage : {kStageAtoms, kStagePositive, kStageCells, kStageSizes, kStageDnf, kStageEliminate}) {
    CHECK(std::find(seen.begin(), seen.end(), stage) != seen.end());
  }
  Options quiet;
  quiet.record_trace = false;
  CHECK(decide(parse("A x. sub(0, x)"), quiet).trace.size() <= 1);
}

TEST_CASE("budget exhaustion is an error, not a verdict") {
  Options tiny;
  tiny.node_budget = 5;
  CHECK_THROWS_AS(decide(parse("A x. E y. (card(x + y) = 3 & card(y - x) >= 2)"), tiny), BudgetExceeded);
  CHECK_THROWS_AS(eliminate(parse("E x. card(x * c + x * d + x * e) = 4"), tiny), BudgetExceeded);
}

TEST_CASE("simplify") {
  CHECK(simplify(parse("card(x) >= 0")).is_true_literal());
  CHECK(simplify(parse("card(0) = 0 & card(x) = 1")) == parse("card(x) = 1"));
  CHECK(simplify(parse("card(0) >= 1 | card(x) = 1 | card(x) = 1")) == parse("card(x) = 1"));
  CHECK(simplify(parse("E y. card(x) = 1")) == parse("card(x) = 1"));
  CHECK(simplify(parse("!!card(x) = 1")) == parse("card(x) = 1"));
}

TEST_CASE("property: elimination is sound against the finite-set oracle") {
  gen::Generator g(2024);
  for (int i = 0; i < 150; ++i) {
    Formula f = g.open_formula();
    Formula e = eliminate(f);
    CHECK(quantifier_depth(e) == 0);
    for (const auto& name : free_variables(e)) {
      const auto fv = free_variables(f);
      CHECK(std::find(fv.begin(), fv.end(), name) != fv.end());
    }
    auto ce = finmodel::check_equivalence(f, e, 20, 8, static_cast<std::uint64_t>(i));
    CHECK_MESSAGE(!ce, render(f) << "  =>  " << render(e));
  }
}

TEST_CASE("property: completeness on generated sentences") {
  gen::Generator g(77);
  for (int i = 0; i < 150; ++i) {
    Formula s = g.sentence();
    CHECK_MESSAGE(decide(s).verdict != decide(Formula::negation(s)).verdict, render(s));
  }
}

TEST_CASE("property: every trace step is oracle-equivalent") {
  gen::Generator g(31);
  for (int i = 0; i < 60; ++i) {
    Formula f = g.open_formula();
    EliminationTrace trace;
    eliminate(f, {}, &trace);
    // Stages keep the constants and quantifiers of f but multiply atoms, so
    // their own witness bounds overshoot; the bound of f is adequate for all.
    for (const auto& step : trace) {
      auto ce = finmodel::check_equivalence(step.before, step.after, 10, 6, static_cast<std::uint64_t>(i),
                                            witness_bound(f));
      CHECK_MESSAGE(!ce, step.stage << ": " << render(step.before) << "  =>  " << render(step.after));
    }
  }
}
