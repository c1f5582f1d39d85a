// Quantifier elimination for the theory of atomic unbounded relatively
// complemented distributive lattices, and the decision procedure it yields.
//
// Every formula is reduced to a quantifier-free combination of size atoms
// card(t) = n and card(t) >= n. For a sentence the result mentions only 0
// and is settled by eval_ground.

#ifndef MEREO_ENGINE_HPP
#define MEREO_ENGINE_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mereo/formula.hpp"

namespace mereo::engine {

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotASentence : public std::invalid_argument {
 public:
  explicit NotASentence(const std::vector<std::string>& free_vars);
};

struct Options {
  // Largest intermediate formula (in nodes) any stage may build.
  std::size_t node_budget = 1'000'000;
  bool record_trace = true;
};

// ---------------------------------------------------------------------------
// Size constraints

struct SizeConstraint {
  enum class Kind : std::uint8_t { Exact, AtLeast };
  Kind kind = Kind::AtLeast;
  std::uint64_t k = 0;

  static SizeConstraint exact(std::uint64_t k) { return {Kind::Exact, k}; }
  static SizeConstraint at_least(std::uint64_t k) { return {Kind::AtLeast, k}; }
  bool trivial() const { return kind == Kind::AtLeast && k == 0; }

  friend bool operator==(const SizeConstraint&, const SizeConstraint&) = default;
};

// A reduced constraint slot; std::nullopt is the contradictory slot.
using Slot = std::optional<SizeConstraint>;

// Conjoins `c` onto `slot`:
//   Exact(k) & Exact(k')  -> bottom unless k = k'
//   Exact(k) & AtLeast(l) -> bottom if k < l, else Exact(k)
//   AtLeast(l) & AtLeast(l') -> AtLeast(max(l, l'))
Slot reduce(const Slot& slot, SizeConstraint c);

// ---------------------------------------------------------------------------
// Cells

// One region of the Venn diagram of `variables`: the meet of the positive
// variables minus the join of the rest. At least one variable is positive.
struct CellTerm {
  std::vector<std::string> variables;
  std::uint32_t positives = 0;

  Term term() const;
  friend bool operator==(const CellTerm&, const CellTerm&) = default;
};

// Canonical term for a cell: (v_i * v_j * ...) - (v_k + ...).
Term cell_term(std::uint32_t positives, const std::vector<std::string>& variables);

// Cells whose union denotes the same element as `t`, in ascending order of
// positive-set bitmask (bit i = variables[i]). Zero yields no cells.
// Throws std::invalid_argument if `t` mentions a variable outside `variables`.
std::vector<CellTerm> cellify(const Term& t, const std::vector<std::string>& variables);
std::vector<std::uint32_t> cell_masks(const Term& t, const std::vector<std::string>& variables);

// Base cells are x-free terms that denote pairwise disjoint elements.
// Constraints accumulate on x * c (inner), c - x (outer) and on the fresh
// cell x - (x1 + ... + xN); resolve() produces the x-free equivalent of the
// existential closure.
class CellConstraintSystem {
 public:
  struct Base {
    Term cell;
    Slot inner = SizeConstraint::at_least(0);
    Slot outer = SizeConstraint::at_least(0);
  };

  std::size_t base_index(const Term& cell);
  void add_inner(std::size_t base, SizeConstraint c);
  void add_outer(std::size_t base, SizeConstraint c);
  void add_fresh(SizeConstraint c);

  const std::vector<Base>& bases() const { return bases_; }
  const Slot& fresh() const { return fresh_; }

  // False literal if any slot is contradictory; otherwise the conjunction of
  // the per-base size requirements (true literal when none remain).
  Formula resolve() const;

 private:
  std::vector<Base> bases_;
  Slot fresh_ = SizeConstraint::at_least(0);
};

// ---------------------------------------------------------------------------
// Rewriting stages

// sub(a, b) -> card(a - b) = 0; eq(a, b) -> card(a - b) = 0 & card(b - a) = 0.
Formula normalize_atoms(const Formula& f);

// Pushes negations inward and removes them from size atoms:
//   !(card(t) >= n) -> card(t) = 0 | ... | card(t) = n-1
//   !(card(t) = n)  -> card(t) >= n+1 | card(t) = 0 | ... | card(t) = n-1
// Implications and biconditionals are expanded. Inclusion and equality atoms
// under a negation are normalized first.
Formula positivize(const Formula& f);

// Size of a union of pairwise distinct (hence disjoint) cells, expressed by
// compositions n = n_1 + ... + n_m, in lexicographic order of (n_1, ..., n_m).
// `kind` is CardEq or CardGeq. A single cell is returned unchanged.
Formula rewrite_union_sizes(const std::vector<CellTerm>& cells, FormulaKind kind, std::uint64_t n);

// Binary identity for arbitrary terms s, t:
//   |s + t| = n  <->  OR_{i+j+k=n} |s| = i+j & |s * t| = j & |t| = j+k
//   |s + t| >= n <->  OR_{i+j+k=n} |s - t| >= i & |s * t| >= j & |t - s| >= k
Formula union_size_identity(const Term& s, const Term& t, FormulaKind kind, std::uint64_t n);

// Existential elimination for a conjunction of single-cell size atoms: each
// conjunct is x-free (passed through) or has the term x * c, c * x, c - x,
// x - u, or x, with c and u x-free. Distinct c are taken to be disjoint cells.
Formula eliminate_exists(const std::string& x, const Formula& conj);

// Constant folding: ground atoms become literals, and/or are flattened and
// deduplicated, vacuous quantifiers are dropped.
Formula simplify(const Formula& f);

// ---------------------------------------------------------------------------
// Elimination and decision

struct TraceStep {
  std::string stage;
  Formula before;
  Formula after;
};
using EliminationTrace = std::vector<TraceStep>;

// Stage labels, in pipeline order.
inline constexpr const char* kStageAtoms = "atom-normalization";
inline constexpr const char* kStagePositive = "positivization";
inline constexpr const char* kStageCells = "cellification";
inline constexpr const char* kStageSizes = "size-rewriting";
inline constexpr const char* kStageDnf = "dnf";
inline constexpr const char* kStageEliminate = "elimination";
inline constexpr const char* kStageGround = "ground-evaluation";

// Quantifier-free equivalent of `f`. Innermost quantifiers go first;
// A x. phi is handled as !E x. !phi.
Formula eliminate(const Formula& f, const Options& options = {}, EliminationTrace* trace = nullptr);

// Truth value of a quantifier-free formula without variables, where every
// term denotes 0. Throws std::invalid_argument otherwise.
bool eval_ground(const Formula& f);

struct Decision {
  bool verdict = false;
  EliminationTrace trace;
};

// Throws NotASentence for formulas with free variables, BudgetExceeded when
// an intermediate formula outgrows options.node_budget.
Decision decide(const Formula& sentence, const Options& options = {});

}  // namespace mereo::engine

#endif  // MEREO_ENGINE_HPP
