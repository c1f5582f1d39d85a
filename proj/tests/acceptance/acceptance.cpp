// One line per acceptance criterion: PASS/FAIL, wall time, and a note.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "mereo/engine.hpp"
#include "mereo/finmodel.hpp"
#include "mereo/formula.hpp"
#include "mereo/generate.hpp"
#include "mereo/hfsets.hpp"

using namespace mereo;

namespace {

struct Outcome {
  bool ok = false;
  std::string note;
};

struct Criterion {
  int id;
  const char* name;
  double limit_s;
  std::function<Outcome()> run;
};

Outcome golden() {
  struct Case {
    Formula result;
    const char* expected;
  };
  std::vector<std::pair<std::string, std::function<Formula()>>> cases{
      {"card(c) >= 9",
       [] { return engine::eliminate(parse("E x. (card(x*c)>=3 & card(x*c)>=7 & card(c-x)=2)")); }},
      {"card(c) >= 11 & card(d) >= 7",
       [] { return engine::eliminate_exists("x", parse("card(c*x) >= 5 & card(c-x) = 6 & card(d*x) >= 7")); }},
      {"card(0) >= 1", [] { return engine::eliminate(parse("E x. (card(x*c)>=5 & card(x*c)=3)")); }},
  };
  std::string note;
  bool ok = true;
  for (auto& [expected, make] : cases) {
    const auto start = std::chrono::steady_clock::now();
    const Formula got = make();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool match = render(got) == expected && secs < 1.0;
    if (!match) note += "got '" + render(got) + "' for '" + expected + "'; ";
    ok = ok && match;
  }
  ok = ok && Formula(parse("card(0) >= 1")).is_false_literal();
  return {ok, ok ? "3 of 3 exact" : note};
}

Outcome axioms() {
  const char* suite[] = {
      "A x. sub(x, x)",
      "A x. A y. (sub(x, y) & sub(y, x) -> eq(x, y))",
      "A x. A y. A z. (sub(x, y) & sub(y, z) -> sub(x, z))",
      "A x. A y. A z. (sub(x * y, x) & sub(x * y, y) & (sub(z, x) & sub(z, y) -> sub(z, x * y)))",
      "A x. A y. A z. (sub(x, x + y) & sub(y, x + y) & (sub(x, z) & sub(y, z) -> sub(x + y, z)))",
      "A x. A y. A z. eq(x * (y + z), x * y + x * z)",
      "A x. A y. A z. eq(x + y * z, (x + y) * (x + z))",
      "E e. A x. sub(e, x)",
      "A x. sub(0, x)",
      "A x. E y. (sub(x, y) & !eq(x, y))",
      "A a. A b. (eq(b * (a - b), 0) & eq(a, a * b + (a - b)))",
      "A x. (card(x) >= 1 -> E a. (atom(a) & sub(a, x)))",
  };
  int holds = 0;
  std::string note;
  for (const char* s : suite) {
    if (engine::decide(parse(s)).verdict) {
      ++holds;
    } else {
      note += std::string("false: ") + s + "; ";
    }
  }
  const int total = static_cast<int>(std::size(suite));
  return {holds == total, std::to_string(holds) + " of " + std::to_string(total) + " axioms true" +
                              (note.empty() ? "" : "; " + note)};
}

Outcome completeness() {
  gen::Generator g(1001);
  int bad = 0;
  std::string first;
  for (int i = 0; i < 500; ++i) {
    const Formula s = g.sentence();
    const bool a = engine::decide(s).verdict;
    const bool b = engine::decide(Formula::negation(s)).verdict;
    if (a == b) {
      if (first.empty()) first = render(s);
      ++bad;
    }
  }
  return {bad == 0, bad == 0 ? "500 sentences, exactly one of s, !s true each" : "first failure: " + first};
}

Outcome oracle_equivalence() {
  gen::Generator g(2002);
  int bad = 0;
  std::string first;
  for (int i = 0; i < 500; ++i) {
    const Formula f = g.open_formula();
    const Formula e = engine::eliminate(f);
    if (auto ce = finmodel::check_equivalence(f, e, 20, 8, 2002 + static_cast<std::uint64_t>(i))) {
      if (first.empty()) first = render(f) + " under " + finmodel::to_string(ce->assignment);
      ++bad;
    }
  }
  return {bad == 0, bad == 0 ? "500 formulas x 20 assignments agree" : std::to_string(bad) + " disagree; " + first};
}

Outcome decide_vs_oracle() {
  gen::Generator g(3003);
  int bad = 0;
  std::string first;
  for (int i = 0; i < 200; ++i) {
    const Formula s = g.sentence();
    if (engine::decide(s).verdict != finmodel::eval_formula(s, {}, witness_bound(s))) {
      if (first.empty()) first = render(s);
      ++bad;
    }
  }
  return {bad == 0, bad == 0 ? "200 sentences agree" : std::to_string(bad) + " disagree; " + first};
}

Outcome hf_inclusion() {
  const hf::HfSet empty;
  const hf::Sampling sampled{200'000, 6};
  std::vector<hf::Report> reports{hf::verify_same_inclusion(3, empty), hf::verify_automorphism(3, empty),
                                  hf::verify_same_inclusion(4, empty, sampled),
                                  hf::verify_automorphism(4, empty, sampled)};
  bool ok = reports[0].exhaustive && reports[1].exhaustive && reports[2].pairs_checked >= 100'000 &&
            reports[3].pairs_checked >= 100'000;
  for (const auto& r : reports) ok = ok && r.pass;
  for (std::size_t i : {0U, 2U}) {
    const auto& w = reports[i].witnesses["membership_discrepancy"];
    ok = ok && w["a"] == "{}" && w["b"] == "{{}}";
  }
  return {ok, "rank 3 exhaustive (256 pairs), rank 4 sampled (" + std::to_string(reports[2].pairs_checked) +
                  " pairs); in/in* differ at ({}, {{}})"};
}

Outcome hf_eta() {
  const hf::Report r = hf::verify_eta(3, hf::HfSet{}, 2);
  return {r.pass, r.pass ? "unique eta for all 4 sets of rank <= 2; " + std::to_string(r.pairs_checked) +
                               " transport pairs; injective"
                         : r.to_json().dump()};
}

Outcome hf_singleton() {
  const hf::Report r = hf::verify_singleton_interdef(3);
  return {r.pass && r.exhaustive && r.pairs_checked == 256, std::to_string(r.pairs_checked) + " pairs exhaustive"};
}

Outcome round_trip() {
  gen::Generator g(4004);
  for (int i = 0; i < 1000; ++i) {
    const Formula f = g.any_formula();
    if (!(parse(render(f)) == f)) return {false, "fails on " + render(f)};
  }
  return {true, "1000 formulas"};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "golden eliminations", 3.0, golden},
      {2, "axiom suite decides true", 5.0, axioms},
      {3, "completeness on 500 sentences", 300.0, completeness},
      {4, "oracle equivalence, 500 formulas x 20 assignments", 600.0, oracle_equivalence},
      {5, "decide agrees with bounded evaluation, 200 sentences", 300.0, decide_vs_oracle},
      {6, "same inclusion and automorphism, rank 3 and 4", 60.0, hf_inclusion},
      {7, "eta extraction and star map, rank <= 2", 60.0, hf_eta},
      {8, "singleton interdefinability, rank 3", 1.0, hf_singleton},
      {9, "parser round trip, 1000 formulas", 10.0, round_trip},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.limit_s;
    const bool pass = o.ok && in_time;
    if (!pass) ++failed;
    std::printf("%s  [%d] %s  (%.3f s, limit %.0f s)  %s%s\n", pass ? "PASS" : "FAIL", c.id, c.name, secs, c.limit_s,
                o.note.c_str(), in_time ? "" : "  OVER TIME");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
