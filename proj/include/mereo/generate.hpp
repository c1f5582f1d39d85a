// Seeded random formulas for property tests and oracle comparison.

#ifndef MEREO_GENERATE_HPP
#define MEREO_GENERATE_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mereo/formula.hpp"

namespace mereo::gen {

struct Shape {
  std::uint64_t max_constant = 4;
  std::size_t max_quantifier_depth = 3;
  // Connective nesting below each quantifier.
  std::size_t max_connective_depth = 2;
  std::size_t max_term_depth = 2;
  // Names available for bound variables; free variables come from `free_pool`.
  std::vector<std::string> bound_pool{"x", "y", "z"};
  std::vector<std::string> free_pool{"c", "d"};
  // Total distinct variable names per formula, free and bound together.
  std::size_t max_variables = 3;
};

class Generator {
 public:
  explicit Generator(std::uint64_t seed, Shape shape = {});

  // Closed formula; at least one quantifier.
  Formula sentence();
  // Formula with one or two free variables and at most max_variables names overall.
  Formula open_formula();
  // Any formula over the full syntax, for round-trip tests: every connective,
  // atom kind and term constructor appears with nonzero probability.
  Formula any_formula();

  Term term(const std::vector<std::string>& scope, std::size_t depth);

 private:
  Formula body(std::vector<std::string>& scope, std::vector<std::string>& unused, std::size_t qdepth,
               std::size_t cdepth);
  Formula atom(const std::vector<std::string>& scope);
  Formula quantified(std::vector<std::string>& scope, std::vector<std::string>& unused, std::size_t qdepth);
  std::size_t below(std::size_t n);
  bool chance(double p);

  std::mt19937_64 rng_;
  Shape shape_;
  bool wide_ = false;
};

}  // namespace mereo::gen

#endif  // MEREO_GENERATE_HPP
