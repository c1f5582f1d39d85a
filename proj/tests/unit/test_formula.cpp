#include <doctest.h>

#include <random>

#include "mereo/formula.hpp"
#include "mereo/generate.hpp"

using namespace mereo;

namespace {
Term v(const char* n) { return Term::var(n); }
}  // namespace

TEST_CASE("parse: minimal atom") {
  CHECK(parse("card(0) = 0") == Formula::card_eq(Term::zero(), 0));
  CHECK(parse("  card( 0 )=0 ") == Formula::card_eq(Term::zero(), 0));
}

TEST_CASE("parse: worked-example shape") {
  Formula expected = Formula::exists(
      "x", Formula::conj(Formula::card_geq(Term::meet(v("x"), v("c")), 3),
                         Formula::card_eq(Term::diff(v("c"), v("x")), 2)));
  CHECK(parse("E x. (card(x * c) >= 3 & card(c - x) = 2)") == expected);
}

TEST_CASE("parse: missing comma is a syntax error with position and expected set") {
  try {
    parse("sub(x y)");
    FAIL("accepted malformed input");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
    CHECK(e.column() == 7);
    REQUIRE(!e.expected().empty());
    CHECK(e.expected().front() == "','");
  }
}

TEST_CASE("parse: errors") {
  CHECK_THROWS_AS(parse(""), ParseError);
  CHECK_THROWS_AS(parse("card(x) = "), ParseError);
  CHECK_THROWS_AS(parse("card(x) > 1"), ParseError);
  CHECK_THROWS_AS(parse("sub(x, y) sub(y, x)"), ParseError);
  CHECK_THROWS_AS(parse("card(sub(x, y)) = 1"), ParseError);
  CHECK_THROWS_AS(parse("card(x, y) = 1"), ParseError);
  CHECK_THROWS_AS(parse("card(1) = 1"), ParseError);
  CHECK_THROWS_AS(parse("card(x) = 18446744073709551616"), ParseError);
  CHECK(parse("card(x) = 18446744073709551615").bound() == 18446744073709551615ULL);
  CHECK_THROWS_AS(parse("E . sub(x, x)"), ParseError);
  CHECK_THROWS_AS(parse("sub(x, y) $"), ParseError);
  try {
    parse("sub(x, y) &\n  card(z) >= ");
    FAIL("accepted");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("parse: connective precedence") {
  Formula a = Formula::sub(v("a"), v("b"));
  Formula b = Formula::sub(v("b"), v("c"));
  Formula c = Formula::sub(v("c"), v("a"));
  CHECK(parse("sub(a,b) | sub(b,c) & sub(c,a)") == Formula::disj(a, Formula::conj(b, c)));
  CHECK(parse("!sub(a,b) & sub(b,c)") == Formula::conj(Formula::negation(a), b));
  CHECK(parse("sub(a,b) -> sub(b,c) -> sub(c,a)") == Formula::implies(a, Formula::implies(b, c)));
  CHECK(parse("sub(a,b) <-> sub(b,c) <-> sub(c,a)") == Formula::iff(Formula::iff(a, b), c));
  CHECK(parse("sub(a,b) | sub(b,c) -> sub(c,a)") == Formula::implies(Formula::disj(a, b), c));
  CHECK(parse("sub(a,b) -> sub(b,c) <-> sub(c,a)") == Formula::iff(Formula::implies(a, b), c));
  CHECK(parse("!!sub(a,b)") == Formula::negation(Formula::negation(a)));
}

TEST_CASE("parse: quantifier bodies extend right") {
  Formula body = Formula::conj(Formula::sub(v("x"), v("y")), Formula::sub(v("y"), v("x")));
  CHECK(parse("E x. sub(x, y) & sub(y, x)") == Formula::exists("x", body));
  CHECK(parse("A y. E x. sub(x, y) & sub(y, x)") == Formula::forall("y", Formula::exists("x", body)));
  CHECK(parse("sub(x, x) & E x. sub(x, y) | sub(y, x)") ==
        Formula::conj(Formula::sub(v("x"), v("x")),
                      Formula::exists("x", Formula::disj(Formula::sub(v("x"), v("y")), Formula::sub(v("y"), v("x"))))));
}

TEST_CASE("parse: term precedence and associativity") {
  CHECK(parse_term("a + b * c") == Term::join(v("a"), Term::meet(v("b"), v("c"))));
  CHECK(parse_term("a - b - c") == Term::diff(Term::diff(v("a"), v("b")), v("c")));
  CHECK(parse_term("a * b - c") == Term::diff(Term::meet(v("a"), v("b")), v("c")));
  CHECK(parse_term("a - b * c") == Term::meet(Term::diff(v("a"), v("b")), v("c")));
  CHECK(parse_term("a + b + c") == Term::join(Term::join(v("a"), v("b")), v("c")));
  CHECK(parse_term("a - (b + c)") == Term::diff(v("a"), Term::join(v("b"), v("c"))));
}

TEST_CASE("parse: atom sugar") {
  CHECK(parse("atom(x - y)") == Formula::card_eq(Term::diff(v("x"), v("y")), 1));
}

TEST_CASE("render examples") {
  CHECK(render(Formula::card_eq(Term::zero(), 0)) == "card(0) = 0");
  CHECK(render(Formula::exists("x", Formula::sub(v("x"), v("y")))) == "E x. sub(x, y)");
  CHECK(render(Formula::truth()) == "card(0) = 0");
  CHECK(render(Formula::falsity()) == "card(0) >= 1");
  CHECK(render(Term::diff(v("a"), Term::join(v("b"), v("c")))) == "a - (b + c)");
  CHECK(render(Term::meet(v("a"), Term::diff(v("b"), v("c")))) == "a * (b - c)");
}

TEST_CASE("render brackets what would otherwise re-associate") {
  Formula a = Formula::sub(v("a"), v("b"));
  Formula b = Formula::sub(v("b"), v("c"));
  Formula c = Formula::sub(v("c"), v("a"));
  for (const Formula& f : {Formula::implies(Formula::implies(a, b), c), Formula::iff(a, Formula::iff(b, c)),
                           Formula::conj(Formula::exists("x", a), b), Formula::negation(Formula::conj(a, b)),
                           Formula::conj(a, Formula::conj(b, c)), Formula::disj(Formula::conj(a, b), c)}) {
    CHECK(parse(render(f)) == f);
  }
}

TEST_CASE("free_variables") {
  CHECK(free_variables(parse("sub(x, y)")) == std::vector<std::string>{"x", "y"});
  CHECK(free_variables(parse("E x. sub(x, y)")) == std::vector<std::string>{"y"});
  CHECK(free_variables(parse("A x. E y. card(x + y) >= 2")).empty());
  CHECK(free_variables(parse("sub(y, x) & E x. sub(x, z)")) == std::vector<std::string>{"y", "x", "z"});
}

TEST_CASE("witness_bound counts constants, size atoms and quantifiers") {
  // 3 + 2 (constants) + 2 (card atoms) + 1 (sub) + 2 (eq) + 2 (quantifiers)
  CHECK(witness_bound(parse("E x. A y. (card(x) >= 3 & card(y) = 2 | sub(x, y) | eq(x, y))")) == 12);
  CHECK(witness_bound(parse("card(0) = 0")) == 1);
}

TEST_CASE("identifiers") {
  CHECK(is_identifier("x0_a"));
  CHECK_FALSE(is_identifier("0x"));
  CHECK_FALSE(is_identifier(""));
  CHECK_FALSE(is_identifier("_x"));
  CHECK_THROWS(Term::var("1a"));
}

TEST_CASE("property: round trip on generated formulas") {
  gen::Generator g(7);
  for (int i = 0; i < 1000; ++i) {
    Formula f = g.any_formula();
    REQUIRE_MESSAGE(parse(render(f)) == f, render(f));
  }
}

TEST_CASE("property: free variables of a quantifier drop the bound name") {
  gen::Generator g(11);
  for (int i = 0; i < 300; ++i) {
    Formula b = g.any_formula();
    for (const char* name : {"x", "c"}) {
      std::vector<std::string> expected;
      for (const auto& n : free_variables(b)) {
        if (n != name) expected.push_back(n);
      }
      CHECK(free_variables(Formula::exists(name, b)) == expected);
    }
  }
}

TEST_CASE("property: parser is total on token soup") {
  const std::vector<std::string> tokens{"E", "A", "x", "y", ".", "(", ")", ",", "sub", "eq", "card", "atom",
                                        "0", "1", "7", "+", "*", "-", "!", "&", "|", "->", "<->", "=", ">=", " "};
  std::mt19937_64 rng(3);
  int accepted = 0;
  for (int i = 0; i < 3000; ++i) {
    std::string text;
    const std::size_t len = rng() % 14;
    for (std::size_t k = 0; k < len; ++k) text += tokens[rng() % tokens.size()] + " ";
    try {
      Formula f = parse(text);
      ++accepted;
      CHECK(parse(render(f)) == f);
    } catch (const ParseError&) {
    }
  }
  CHECK(accepted < 3000);
}

TEST_CASE("property: parser is total on mutated formulas") {
  gen::Generator g(19);
  std::mt19937_64 rng(19);
  const std::string alphabet = "EAxyc.(),+*-!&|<>=01 sub";
  int accepted = 0;
  for (int i = 0; i < 3000; ++i) {
    std::string text = render(g.any_formula());
    const std::size_t edits = 1 + rng() % 3;
    for (std::size_t k = 0; k < edits && !text.empty(); ++k) {
      const std::size_t at = rng() % text.size();
      switch (rng() % 3) {
        case 0: text.erase(at, 1); break;
        case 1: text.insert(at, 1, alphabet[rng() % alphabet.size()]); break;
        default: text[at] = alphabet[rng() % alphabet.size()];
      }
    }
    try {
      Formula f = parse(text);
      ++accepted;
      CHECK(parse(render(f)) == f);
    } catch (const ParseError&) {
    }
  }
  CHECK(accepted > 100);
  CHECK(accepted < 3000);
}
