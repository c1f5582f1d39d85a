#include "mereo/generate.hpp"

#include <algorithm>

namespace mereo::gen {

Generator::Generator(std::uint64_t seed, Shape shape) : rng_(seed), shape_(std::move(shape)) {}

std::size_t Generator::below(std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
}

bool Generator::chance(double p) { return std::bernoulli_distribution(p)(rng_); }

Term Generator::term(const std::vector<std::string>& scope, std::size_t depth) {
  if (depth == 0 || chance(0.45)) {
    if (scope.empty() || chance(wide_ ? 0.15 : 0.08)) return Term::zero();
    return Term::var(scope[below(scope.size())]);
  }
  Term l = term(scope, depth - 1);
  Term r = term(scope, depth - 1);
  switch (below(3)) {
    case 0: return Term::meet(l, r);
    case 1: return Term::join(l, r);
    default: return Term::diff(l, r);
  }
}

Formula Generator::atom(const std::vector<std::string>& scope) {
  const std::size_t depth = shape_.max_term_depth;
  std::uint64_t n = below(shape_.max_constant + 1);
  if (wide_ && chance(0.1)) {
    const std::size_t shift = below(64);
    n = rng_() >> shift;
  }
  const std::size_t kind = below(wide_ ? 5 : 4);
  Term l = term(scope, depth);
  switch (kind) {
    case 0: return Formula::sub(l, term(scope, depth));
    case 1: return Formula::eq(l, term(scope, depth));
    case 2: return Formula::card_eq(l, n);
    case 3: return Formula::card_geq(l, n);
    default: return Formula::card_eq(l, 1);  // atom(t)
  }
}

Formula Generator::quantified(std::vector<std::string>& scope, std::vector<std::string>& unused,
                              std::size_t qdepth) {
  std::string v;
  if (!unused.empty()) {
    const std::size_t i = below(unused.size());
    v = unused[i];
    unused.erase(unused.begin() + static_cast<std::ptrdiff_t>(i));
  } else {
    // Re-quantify a name already in scope; shadowing is legal syntax.
    v = scope[below(scope.size())];
  }
  scope.push_back(v);
  std::vector<std::string> inner_unused = unused;
  Formula b = body(scope, inner_unused, qdepth - 1, shape_.max_connective_depth);
  scope.pop_back();
  return chance(0.5) ? Formula::exists(v, b) : Formula::forall(v, b);
}

Formula Generator::body(std::vector<std::string>& scope, std::vector<std::string>& unused, std::size_t qdepth,
                        std::size_t cdepth) {
  const bool can_quantify = qdepth > 0 && (!unused.empty() || !scope.empty());
  if (can_quantify && (scope.empty() || chance(0.3))) return quantified(scope, unused, qdepth);
  if (cdepth == 0 || chance(0.3)) return atom(scope);
  if (chance(0.15)) return Formula::negation(body(scope, unused, qdepth, cdepth - 1));
  // Both branches draw from the same pool of names: sibling quantifiers may reuse them.
  std::vector<std::string> other_unused = unused;
  Formula l = body(scope, unused, qdepth, cdepth - 1);
  Formula r = body(scope, other_unused, qdepth, cdepth - 1);
  switch (below(wide_ ? 4 : 3)) {
    case 0: return Formula::conj(l, r);
    case 1: return Formula::disj(l, r);
    case 2: return Formula::implies(l, r);
    default: return Formula::iff(l, r);
  }
}

Formula Generator::sentence() {
  wide_ = false;
  std::vector<std::string> scope;
  std::vector<std::string> unused(shape_.bound_pool.begin(),
                                  shape_.bound_pool.begin() +
                                      static_cast<std::ptrdiff_t>(std::min(shape_.bound_pool.size(), shape_.max_variables)));
  const std::size_t qdepth = 1 + below(shape_.max_quantifier_depth);
  return quantified(scope, unused, qdepth);
}

Formula Generator::open_formula() {
  wide_ = false;
  for (;;) {
    const std::size_t free_count = 1 + below(std::min<std::size_t>(2, shape_.free_pool.size()));
    std::vector<std::string> scope(shape_.free_pool.begin(),
                                   shape_.free_pool.begin() + static_cast<std::ptrdiff_t>(free_count));
    const std::size_t bound_names = shape_.max_variables > free_count ? shape_.max_variables - free_count : 0;
    std::vector<std::string> unused(
        shape_.bound_pool.begin(),
        shape_.bound_pool.begin() + static_cast<std::ptrdiff_t>(std::min(bound_names, shape_.bound_pool.size())));
    const std::size_t qdepth = std::min(below(shape_.max_quantifier_depth + 1), unused.size());
    Formula f = qdepth > 0 ? quantified(scope, unused, qdepth) : body(scope, unused, 0, shape_.max_connective_depth);
    if (!free_variables(f).empty()) return f;
  }
}

Formula Generator::any_formula() {
  wide_ = true;
  std::vector<std::string> scope = shape_.free_pool;
  std::vector<std::string> unused = shape_.bound_pool;
  Formula f = body(scope, unused, shape_.max_quantifier_depth, shape_.max_connective_depth + 2);
  wide_ = false;
  return f;
}

}  // namespace mereo::gen
