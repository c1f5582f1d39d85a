#include <algorithm>
#include <bit>

#include "mereo/engine.hpp"

namespace mereo::engine {

Slot reduce(const Slot& slot, SizeConstraint c) {
  if (!slot) return std::nullopt;
  const SizeConstraint& s = *slot;
  using K = SizeConstraint::Kind;
  if (s.kind == K::Exact && c.kind == K::Exact) {
    if (s.k != c.k) return std::nullopt;
    return s;
  }
  if (s.kind == K::Exact || c.kind == K::Exact) {
    const SizeConstraint& exact = s.kind == K::Exact ? s : c;
    const SizeConstraint& lower = s.kind == K::Exact ? c : s;
    if (exact.k < lower.k) return std::nullopt;
    return exact;
  }
  return SizeConstraint::at_least(std::max(s.k, c.k));
}

// ---------------------------------------------------------------------------

Term cell_term(std::uint32_t positives, const std::vector<std::string>& variables) {
  if (positives == 0) throw std::invalid_argument("cell_term: a cell needs a positive variable");
  std::vector<Term> pos;
  std::vector<Term> neg;
  for (std::size_t i = 0; i < variables.size(); ++i) {
    ((positives >> i) & 1U ? pos : neg).push_back(Term::var(variables[i]));
  }
  if (pos.empty()) throw std::invalid_argument("cell_term: positive index out of range");
  Term meet = pos.front();
  for (std::size_t i = 1; i < pos.size(); ++i) meet = Term::meet(meet, pos[i]);
  if (neg.empty()) return meet;
  return Term::diff(meet, join_all(neg));
}

Term CellTerm::term() const { return cell_term(positives, variables); }

namespace {

constexpr std::size_t kMaxCellVariables = 16;

// Set of cells as a bitset indexed by positive-set mask (mask 0 unused).
using CellSet = std::vector<std::uint64_t>;

CellSet cells_of(const Term& t, const std::vector<std::string>& vars, std::size_t words) {
  switch (t.kind()) {
    case TermKind::Zero:
      return CellSet(words, 0);
    case TermKind::Var: {
      auto it = std::find(vars.begin(), vars.end(), t.name());
      if (it == vars.end())
        throw std::invalid_argument("cellify: variable '" + t.name() + "' is not in the variable list");
      const std::size_t i = static_cast<std::size_t>(it - vars.begin());
      const std::uint32_t count = 1U << vars.size();
      CellSet out(words, 0);
      for (std::uint32_t m = 1; m < count; ++m) {
        if ((m >> i) & 1U) out[m / 64] |= std::uint64_t{1} << (m % 64);
      }
      return out;
    }
    default: {
      CellSet a = cells_of(t.left(), vars, words);
      CellSet b = cells_of(t.right(), vars, words);
      for (std::size_t w = 0; w < words; ++w) {
        switch (t.kind()) {
          case TermKind::Meet: a[w] &= b[w]; break;
          case TermKind::Join: a[w] |= b[w]; break;
          default: a[w] &= ~b[w]; break;
        }
      }
      return a;
    }
  }
}

}  // namespace

std::vector<std::uint32_t> cell_masks(const Term& t, const std::vector<std::string>& variables) {
  if (variables.size() > kMaxCellVariables)
    throw BudgetExceeded("cell decomposition over more than 16 variables");
  const std::size_t count = std::size_t{1} << variables.size();
  const std::size_t words = (count + 63) / 64;
  CellSet set = cells_of(t, variables, words);
  std::vector<std::uint32_t> out;
  for (std::size_t w = 0; w < words; ++w) {
    std::uint64_t bits = set[w];
    while (bits) {
      int b = std::countr_zero(bits);
      bits &= bits - 1;
      out.push_back(static_cast<std::uint32_t>(w * 64 + static_cast<std::size_t>(b)));
    }
  }
  return out;
}

std::vector<CellTerm> cellify(const Term& t, const std::vector<std::string>& variables) {
  std::vector<CellTerm> out;
  for (std::uint32_t m : cell_masks(t, variables)) out.push_back(CellTerm{variables, m});
  return out;
}

// ---------------------------------------------------------------------------

std::size_t CellConstraintSystem::base_index(const Term& cell) {
  for (std::size_t i = 0; i < bases_.size(); ++i) {
    if (bases_[i].cell == cell) return i;
  }
  bases_.push_back(Base{cell});
  return bases_.size() - 1;
}

void CellConstraintSystem::add_inner(std::size_t base, SizeConstraint c) {
  bases_.at(base).inner = reduce(bases_[base].inner, c);
}

void CellConstraintSystem::add_outer(std::size_t base, SizeConstraint c) {
  bases_.at(base).outer = reduce(bases_[base].outer, c);
}

void CellConstraintSystem::add_fresh(SizeConstraint c) { fresh_ = reduce(fresh_, c); }

Formula CellConstraintSystem::resolve() const {
  // The fresh cell is realizable whenever its slot is consistent: the lattice
  // has atoms disjoint from any finite list of elements.
  if (!fresh_) return Formula::falsity();
  std::vector<Formula> parts;
  for (const Base& b : bases_) {
    if (!b.inner || !b.outer) return Formula::falsity();
    const std::uint64_t total = b.inner->k + b.outer->k;
    const bool both_exact = b.inner->kind == SizeConstraint::Kind::Exact &&
                            b.outer->kind == SizeConstraint::Kind::Exact;
    if (both_exact) {
      parts.push_back(Formula::card_eq(b.cell, total));
    } else if (total > 0) {
      parts.push_back(Formula::card_geq(b.cell, total));
    }
  }
  return conj_all(parts);
}

// ---------------------------------------------------------------------------

namespace {

Formula size_atom(FormulaKind kind, const Term& t, std::uint64_t n) {
  return kind == FormulaKind::CardEq ? Formula::card_eq(t, n) : Formula::card_geq(t, n);
}

void check_size_kind(FormulaKind kind) {
  if (kind != FormulaKind::CardEq && kind != FormulaKind::CardGeq)
    throw std::invalid_argument("size rewriting needs CardEq or CardGeq");
}

}  // namespace

Formula rewrite_union_sizes(const std::vector<CellTerm>& cells, FormulaKind kind, std::uint64_t n) {
  check_size_kind(kind);
  if (cells.empty()) return n == 0 ? Formula::truth() : Formula::falsity();
  std::vector<Term> terms;
  for (const CellTerm& c : cells) terms.push_back(c.term());
  if (terms.size() == 1) return size_atom(kind, terms.front(), n);

  std::vector<Formula> disjuncts;
  std::vector<std::uint64_t> parts(terms.size(), 0);
  // Lexicographic enumeration of compositions: the last part absorbs the remainder.
  auto emit = [&] {
    std::vector<Formula> conj;
    for (std::size_t i = 0; i < terms.size(); ++i) conj.push_back(size_atom(kind, terms[i], parts[i]));
    disjuncts.push_back(conj_all(conj));
  };
  auto recurse = [&](auto& self, std::size_t i, std::uint64_t remaining) -> void {
    if (i + 1 == terms.size()) {
      parts[i] = remaining;
      emit();
      return;
    }
    for (std::uint64_t v = 0; v <= remaining; ++v) {
      parts[i] = v;
      self(self, i + 1, remaining - v);
    }
  };
  recurse(recurse, 0, n);
  return disj_all(disjuncts);
}

Formula union_size_identity(const Term& s, const Term& t, FormulaKind kind, std::uint64_t n) {
  check_size_kind(kind);
  std::vector<Formula> disjuncts;
  for (std::uint64_t i = 0; i <= n; ++i) {
    for (std::uint64_t j = 0; i + j <= n; ++j) {
      const std::uint64_t k = n - i - j;
      if (kind == FormulaKind::CardEq) {
        disjuncts.push_back(conj_all({Formula::card_eq(s, i + j), Formula::card_eq(Term::meet(s, t), j),
                                      Formula::card_eq(t, j + k)}));
      } else {
        disjuncts.push_back(conj_all({Formula::card_geq(Term::diff(s, t), i),
                                      Formula::card_geq(Term::meet(s, t), j),
                                      Formula::card_geq(Term::diff(t, s), k)}));
      }
    }
  }
  return disj_all(disjuncts);
}

// ---------------------------------------------------------------------------

namespace {

bool is_var(const Term& t, const std::string& x) { return t.kind() == TermKind::Var && t.name() == x; }

void flatten_and(const Formula& f, std::vector<Formula>& out) {
  if (f.kind() == FormulaKind::And) {
    flatten_and(f.left(), out);
    flatten_and(f.right(), out);
  } else {
    out.push_back(f);
  }
}

}  // namespace

Formula eliminate_exists(const std::string& x, const Formula& conj) {
  std::vector<Formula> conjuncts;
  flatten_and(conj, conjuncts);
  CellConstraintSystem system;
  std::vector<Formula> passthrough;
  for (const Formula& atom : conjuncts) {
    if (!occurs_free(atom, x)) {
      passthrough.push_back(atom);
      continue;
    }
    if (!atom.is_card_atom())
      throw std::invalid_argument("eliminate_exists: expected a size atom, got " + render(atom));
    const SizeConstraint c = atom.kind() == FormulaKind::CardEq ? SizeConstraint::exact(atom.bound())
                                                                : SizeConstraint::at_least(atom.bound());
    const Term& t = atom.term();
    if (is_var(t, x)) {
      system.add_fresh(c);
    } else if (t.kind() == TermKind::Meet && is_var(t.left(), x) && !t.right().mentions(x)) {
      system.add_inner(system.base_index(t.right()), c);
    } else if (t.kind() == TermKind::Meet && is_var(t.right(), x) && !t.left().mentions(x)) {
      system.add_inner(system.base_index(t.left()), c);
    } else if (t.kind() == TermKind::Diff && is_var(t.right(), x) && !t.left().mentions(x)) {
      system.add_outer(system.base_index(t.left()), c);
    } else if (t.kind() == TermKind::Diff && is_var(t.left(), x) && !t.right().mentions(x)) {
      system.add_fresh(c);
    } else {
      throw std::invalid_argument("eliminate_exists: '" + render(t) + "' is not a cell of " + x);
    }
  }
  Formula resolved = system.resolve();
  if (resolved.is_false_literal()) return resolved;
  std::vector<Formula> parts;
  if (!resolved.is_true_literal()) parts.push_back(resolved);
  parts.insert(parts.end(), passthrough.begin(), passthrough.end());
  return simplify(conj_all(parts));
}

}  // namespace mereo::engine
