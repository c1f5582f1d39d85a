#include <unordered_set>

#include "mereo/engine.hpp"

namespace mereo::engine {

Formula normalize_atoms(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Sub:
      return Formula::card_eq(Term::diff(f.lhs(), f.rhs()), 0);
    case FormulaKind::Eq:
      return Formula::conj(Formula::card_eq(Term::diff(f.lhs(), f.rhs()), 0),
                           Formula::card_eq(Term::diff(f.rhs(), f.lhs()), 0));
    case FormulaKind::CardEq:
    case FormulaKind::CardGeq:
      return f;
    case FormulaKind::Not:
      return Formula::negation(normalize_atoms(f.left()));
    case FormulaKind::And:
      return Formula::conj(normalize_atoms(f.left()), normalize_atoms(f.right()));
    case FormulaKind::Or:
      return Formula::disj(normalize_atoms(f.left()), normalize_atoms(f.right()));
    case FormulaKind::Implies:
      return Formula::implies(normalize_atoms(f.left()), normalize_atoms(f.right()));
    case FormulaKind::Iff:
      return Formula::iff(normalize_atoms(f.left()), normalize_atoms(f.right()));
    case FormulaKind::Exists:
      return Formula::exists(f.var(), normalize_atoms(f.body()));
    case FormulaKind::Forall:
      return Formula::forall(f.var(), normalize_atoms(f.body()));
  }
  return f;
}

namespace {

Formula negate_size_atom(const Formula& atom) {
  const Term& t = atom.term();
  const std::uint64_t n = atom.bound();
  std::vector<Formula> parts;
  if (atom.kind() == FormulaKind::CardEq) parts.push_back(Formula::card_geq(t, n + 1));
  for (std::uint64_t k = 0; k < n; ++k) parts.push_back(Formula::card_eq(t, k));
  return disj_all(parts);
}

Formula push(const Formula& f, bool negated) {
  switch (f.kind()) {
    case FormulaKind::Sub:
    case FormulaKind::Eq:
      return negated ? push(normalize_atoms(f), true) : f;
    case FormulaKind::CardEq:
    case FormulaKind::CardGeq:
      return negated ? negate_size_atom(f) : f;
    case FormulaKind::Not:
      return push(f.left(), !negated);
    case FormulaKind::And:
    case FormulaKind::Or: {
      Formula l = push(f.left(), negated);
      Formula r = push(f.right(), negated);
      bool as_and = (f.kind() == FormulaKind::And) != negated;
      return as_and ? Formula::conj(l, r) : Formula::disj(l, r);
    }
    case FormulaKind::Implies:
      if (negated) return Formula::conj(push(f.left(), false), push(f.right(), true));
      return Formula::disj(push(f.left(), true), push(f.right(), false));
    case FormulaKind::Iff: {
      Formula a = push(f.left(), false);
      Formula na = push(f.left(), true);
      Formula b = push(f.right(), false);
      Formula nb = push(f.right(), true);
      if (negated) return Formula::disj(Formula::conj(a, nb), Formula::conj(na, b));
      return Formula::disj(Formula::conj(a, b), Formula::conj(na, nb));
    }
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
      Formula body = push(f.body(), negated);
      bool as_exists = (f.kind() == FormulaKind::Exists) != negated;
      return as_exists ? Formula::exists(f.var(), body) : Formula::forall(f.var(), body);
    }
  }
  return f;
}

}  // namespace

Formula positivize(const Formula& f) { return push(f, false); }

// ---------------------------------------------------------------------------

namespace {

bool ground_atom_value(const Formula& f) {
  // Every ground term denotes 0.
  switch (f.kind()) {
    case FormulaKind::Sub:
    case FormulaKind::Eq:
      return true;
    case FormulaKind::CardEq:
    case FormulaKind::CardGeq:
      return f.bound() == 0;
    default:
      throw std::logic_error("ground_atom_value on a non-atom");
  }
}

bool atom_is_ground(const Formula& f) {
  if (f.kind() == FormulaKind::Sub || f.kind() == FormulaKind::Eq)
    return f.lhs().is_ground() && f.rhs().is_ground();
  return f.term().is_ground();
}

Formula literal(bool value) { return value ? Formula::truth() : Formula::falsity(); }

void flatten(const Formula& f, FormulaKind kind, std::vector<Formula>& out) {
  if (f.kind() == kind) {
    flatten(f.left(), kind, out);
    flatten(f.right(), kind, out);
  } else {
    out.push_back(f);
  }
}

}  // namespace

Formula simplify(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Sub:
    case FormulaKind::Eq:
    case FormulaKind::CardEq:
    case FormulaKind::CardGeq:
      if (atom_is_ground(f)) return literal(ground_atom_value(f));
      if (f.kind() == FormulaKind::CardGeq && f.bound() == 0) return Formula::truth();
      return f;
    case FormulaKind::Not: {
      Formula inner = simplify(f.left());
      if (inner.is_true_literal()) return Formula::falsity();
      if (inner.is_false_literal()) return Formula::truth();
      if (inner.kind() == FormulaKind::Not) return inner.left();
      return Formula::negation(inner);
    }
    case FormulaKind::And:
    case FormulaKind::Or: {
      const bool is_and = f.kind() == FormulaKind::And;
      std::vector<Formula> raw;
      flatten(f, f.kind(), raw);
      std::vector<Formula> parts;
      std::unordered_set<Formula, FormulaHash> seen;
      for (const Formula& child : raw) {
        Formula s = simplify(child);
        if (is_and ? s.is_true_literal() : s.is_false_literal()) continue;
        if (is_and ? s.is_false_literal() : s.is_true_literal()) return s;
        // Re-flatten: simplification can expose nested connectives of the same kind.
        std::vector<Formula> pieces;
        flatten(s, f.kind(), pieces);
        for (Formula& p : pieces) {
          if (seen.insert(p).second) parts.push_back(std::move(p));
        }
      }
      return is_and ? conj_all(parts) : disj_all(parts);
    }
    case FormulaKind::Implies: {
      Formula a = simplify(f.left());
      Formula b = simplify(f.right());
      if (a.is_false_literal() || b.is_true_literal()) return Formula::truth();
      if (a.is_true_literal()) return b;
      if (b.is_false_literal()) return simplify(Formula::negation(a));
      return Formula::implies(a, b);
    }
    case FormulaKind::Iff: {
      Formula a = simplify(f.left());
      Formula b = simplify(f.right());
      if (a.is_true_literal()) return b;
      if (b.is_true_literal()) return a;
      if (a.is_false_literal()) return simplify(Formula::negation(b));
      if (b.is_false_literal()) return simplify(Formula::negation(a));
      if (a == b) return Formula::truth();
      return Formula::iff(a, b);
    }
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
      Formula body = simplify(f.body());
      if (!occurs_free(body, f.var())) return body;
      return f.kind() == FormulaKind::Exists ? Formula::exists(f.var(), body)
                                             : Formula::forall(f.var(), body);
    }
  }
  return f;
}

namespace {

bool eval_closed(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Sub:
    case FormulaKind::Eq:
    case FormulaKind::CardEq:
    case FormulaKind::CardGeq:
      if (!atom_is_ground(f))
        throw std::invalid_argument("eval_ground: atom mentions a variable: " + render(f));
      return ground_atom_value(f);
    case FormulaKind::Not:
      return !eval_closed(f.left());
    case FormulaKind::And:
      return eval_closed(f.left()) && eval_closed(f.right());
    case FormulaKind::Or:
      return eval_closed(f.left()) || eval_closed(f.right());
    case FormulaKind::Implies:
      return !eval_closed(f.left()) || eval_closed(f.right());
    case FormulaKind::Iff:
      return eval_closed(f.left()) == eval_closed(f.right());
    case FormulaKind::Exists:
    case FormulaKind::Forall:
      throw std::invalid_argument("eval_ground: formula has a quantifier: " + render(f));
  }
  return false;
}

}  // namespace

bool eval_ground(const Formula& f) {
  if (quantifier_depth(f) > 0)
    throw std::invalid_argument("eval_ground: formula has a quantifier: " + render(f));
  if (!free_variables(f).empty())
    throw std::invalid_argument("eval_ground: formula mentions a variable: " + render(f));
  return eval_closed(f);
}

}  // namespace mereo::engine
