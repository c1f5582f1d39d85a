// The canonical model: finite sets of naturals under inclusion, with a
// brute-force evaluator that serves as an oracle for the engine.

#ifndef MEREO_FINMODEL_HPP
#define MEREO_FINMODEL_HPP

#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "mereo/formula.hpp"

namespace mereo::finmodel {

class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Finite set of naturals; elements are kept sorted and duplicate-free.
class FinSet {
 public:
  FinSet() = default;
  FinSet(std::initializer_list<std::uint64_t> elements);
  explicit FinSet(std::vector<std::uint64_t> elements);

  const std::vector<std::uint64_t>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  bool empty() const { return elements_.empty(); }
  bool contains(std::uint64_t e) const;

  FinSet intersection(const FinSet& other) const;
  FinSet union_with(const FinSet& other) const;
  FinSet difference(const FinSet& other) const;
  bool subset_of(const FinSet& other) const;

  // "{1, 2, 5}"
  std::string to_string() const;

  friend bool operator==(const FinSet&, const FinSet&) = default;

 private:
  std::vector<std::uint64_t> elements_;
};

using Assignment = std::map<std::string, FinSet>;

// Throws EvaluationError on an unbound variable.
FinSet eval_term(const Term& t, const Assignment& a);

enum class Search {
  // Every subset of the candidate support; refuses supports above 24 elements.
  Exhaustive,
  // One representative per orbit of the automorphisms fixing the current
  // assignment: only how many elements of each Venn region are taken matters.
  Orbit,
};

inline constexpr std::size_t kMaxExhaustiveSupport = 24;

// Quantifiers range over subsets of S + F, where S is the union of every set
// in scope (the assignment plus enclosing bound variables) and F is the
// `fresh_budget` smallest naturals outside S.
bool eval_formula(const Formula& f, const Assignment& a, std::uint64_t fresh_budget,
                  Search search = Search::Orbit);

// Each variable gets a subset of {0, ..., universe_size - 1}, every element
// included independently with probability 1/2.
Assignment random_assignment(const std::vector<std::string>& vars, std::size_t universe_size,
                             std::mt19937_64& rng);

struct Counterexample {
  Assignment assignment;
  bool lhs_value = false;
  bool rhs_value = false;
  std::size_t sample = 0;
};

// Samples assignments for the union of the free variables of f and g and
// compares eval_formula with fresh_budget = the largest witness_bound among
// the sides that have quantifiers (fresh atoms are irrelevant to the others).
// std::nullopt means every sample agreed. Deterministic for a given seed.
// `fresh_budget` overrides the derived budget.
std::optional<Counterexample> check_equivalence(const Formula& f, const Formula& g, std::size_t sample_count,
                                                std::size_t universe_size, std::uint64_t seed,
                                                std::optional<std::uint64_t> fresh_budget = std::nullopt);

std::string to_string(const Assignment& a);

}  // namespace mereo::finmodel

#endif  // MEREO_FINMODEL_HPP
