#include "mereo/formula.hpp"

#include <algorithm>
#include <functional>
#include <unordered_set>
#include <utility>

namespace mereo {

namespace {

std::size_t mix(std::size_t seed, std::size_t value) {
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

const std::shared_ptr<const Term::Node>& zero_node() {
  static const auto node = [] {
    auto n = std::make_shared<Term::Node>();
    n->kind = TermKind::Zero;
    n->hash = mix(0x51ed27, static_cast<std::size_t>(TermKind::Zero));
    return std::shared_ptr<const Term::Node>(std::move(n));
  }();
  return node;
}

}  // namespace

Term::Term() : node_(zero_node()) {}

Term Term::zero() { return Term(zero_node()); }

Term Term::var(std::string name) {
  check_identifier(name);
  auto n = std::make_shared<Node>();
  n->kind = TermKind::Var;
  n->hash = mix(static_cast<std::size_t>(TermKind::Var), std::hash<std::string>{}(name));
  n->name = std::move(name);
  n->ground = false;
  return Term(std::move(n));
}

namespace {

std::shared_ptr<Term::Node> binary_term(TermKind kind, Term left, Term right) {
  auto n = std::make_shared<Term::Node>();
  n->kind = kind;
  n->hash = mix(mix(static_cast<std::size_t>(kind) * 0x2545f491, left.hash()), right.hash());
  n->size = 1 + left.size() + right.size();
  n->ground = left.is_ground() && right.is_ground();
  n->left = std::move(left);
  n->right = std::move(right);
  return n;
}

}  // namespace

Term Term::meet(Term left, Term right) {
  return Term(binary_term(TermKind::Meet, std::move(left), std::move(right)));
}
Term Term::join(Term left, Term right) {
  return Term(binary_term(TermKind::Join, std::move(left), std::move(right)));
}
Term Term::diff(Term left, Term right) {
  return Term(binary_term(TermKind::Diff, std::move(left), std::move(right)));
}

bool Term::mentions(std::string_view var) const {
  switch (kind()) {
    case TermKind::Zero:
      return false;
    case TermKind::Var:
      return name() == var;
    default:
      return left().mentions(var) || right().mentions(var);
  }
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.size() != b.size() || a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case TermKind::Zero:
      return true;
    case TermKind::Var:
      return a.name() == b.name();
    default:
      return a.left() == b.left() && a.right() == b.right();
  }
}

bool is_identifier(std::string_view name) {
  if (name.empty()) return false;
  auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); };
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  if (!alpha(name.front())) return false;
  return std::all_of(name.begin() + 1, name.end(),
                     [&](char c) { return alpha(c) || digit(c) || c == '_'; });
}

void check_identifier(std::string_view name) {
  if (!is_identifier(name)) {
    throw std::invalid_argument("invalid identifier '" + std::string(name) + "'");
  }
}

// ---------------------------------------------------------------------------

namespace {

std::shared_ptr<Formula::Node> new_formula(FormulaKind kind) {
  auto n = std::make_shared<Formula::Node>();
  n->kind = kind;
  return n;
}

std::shared_ptr<Formula::Node> term_atom(FormulaKind kind, Term lhs, Term rhs, std::uint64_t bound) {
  auto n = new_formula(kind);
  n->hash = mix(mix(mix(static_cast<std::size_t>(kind) * 0x9ddfea08, lhs.hash()), rhs.hash()),
                static_cast<std::size_t>(bound));
  n->size = 1 + lhs.size() + (kind == FormulaKind::Sub || kind == FormulaKind::Eq ? rhs.size() : 0);
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  n->n = bound;
  return n;
}

const std::shared_ptr<const Formula::Node>& truth_node() {
  static const std::shared_ptr<const Formula::Node> node =
      term_atom(FormulaKind::CardEq, Term::zero(), Term::zero(), 0);
  return node;
}

}  // namespace

Formula::Formula() : node_(truth_node()) {}

Formula Formula::truth() { return Formula(truth_node()); }

Formula Formula::falsity() {
  static const Formula f = card_geq(Term::zero(), 1);
  return f;
}

Formula Formula::sub(Term left, Term right) {
  return Formula(term_atom(FormulaKind::Sub, std::move(left), std::move(right), 0));
}
Formula Formula::eq(Term left, Term right) {
  return Formula(term_atom(FormulaKind::Eq, std::move(left), std::move(right), 0));
}
Formula Formula::card_eq(Term term, std::uint64_t n) {
  return Formula(term_atom(FormulaKind::CardEq, std::move(term), Term::zero(), n));
}
Formula Formula::card_geq(Term term, std::uint64_t n) {
  return Formula(term_atom(FormulaKind::CardGeq, std::move(term), Term::zero(), n));
}

namespace {

std::shared_ptr<Formula::Node> connective(FormulaKind kind, Formula a, Formula b) {
  auto n = new_formula(kind);
  n->hash = mix(mix(static_cast<std::size_t>(kind) * 0x7feb352d, a.hash()), b.hash());
  n->size = 1 + a.size() + b.size();
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

std::shared_ptr<Formula::Node> binder(FormulaKind kind, std::string var, Formula body) {
  check_identifier(var);
  auto n = new_formula(kind);
  n->hash = mix(mix(static_cast<std::size_t>(kind) * 0x846ca68b, std::hash<std::string>{}(var)),
                body.hash());
  n->size = 1 + body.size();
  n->var = std::move(var);
  n->a = std::move(body);
  return n;
}

}  // namespace

Formula Formula::negation(Formula body) {
  auto n = new_formula(FormulaKind::Not);
  n->hash = mix(0x3c6ef372, body.hash());
  n->size = 1 + body.size();
  n->a = std::move(body);
  return Formula(std::move(n));
}
Formula Formula::conj(Formula left, Formula right) {
  return Formula(connective(FormulaKind::And, std::move(left), std::move(right)));
}
Formula Formula::disj(Formula left, Formula right) {
  return Formula(connective(FormulaKind::Or, std::move(left), std::move(right)));
}
Formula Formula::implies(Formula left, Formula right) {
  return Formula(connective(FormulaKind::Implies, std::move(left), std::move(right)));
}
Formula Formula::iff(Formula left, Formula right) {
  return Formula(connective(FormulaKind::Iff, std::move(left), std::move(right)));
}
Formula Formula::exists(std::string var, Formula body) {
  return Formula(binder(FormulaKind::Exists, std::move(var), std::move(body)));
}
Formula Formula::forall(std::string var, Formula body) {
  return Formula(binder(FormulaKind::Forall, std::move(var), std::move(body)));
}

bool Formula::is_true_literal() const { return *this == truth(); }
bool Formula::is_false_literal() const { return *this == falsity(); }

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.size() != b.size() || a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case FormulaKind::Sub:
    case FormulaKind::Eq:
      return a.lhs() == b.lhs() && a.rhs() == b.rhs();
    case FormulaKind::CardEq:
    case FormulaKind::CardGeq:
      return a.bound() == b.bound() && a.term() == b.term();
    case FormulaKind::Not:
      return a.left() == b.left();
    case FormulaKind::Exists:
    case FormulaKind::Forall:
      return a.var() == b.var() && a.body() == b.body();
    default:
      return a.left() == b.left() && a.right() == b.right();
  }
}

// ---------------------------------------------------------------------------

Formula conj_all(const std::vector<Formula>& parts) {
  if (parts.empty()) return Formula::truth();
  Formula out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out = Formula::conj(out, parts[i]);
  return out;
}

Formula disj_all(const std::vector<Formula>& parts) {
  if (parts.empty()) return Formula::falsity();
  Formula out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out = Formula::disj(out, parts[i]);
  return out;
}

Term join_all(const std::vector<Term>& parts) {
  if (parts.empty()) return Term::zero();
  Term out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out = Term::join(out, parts[i]);
  return out;
}

namespace {

void push_unique(std::vector<std::string>& out, const std::string& name) {
  if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
}

void collect_term_vars(const Term& t, std::vector<std::string>& out,
                       const std::vector<std::string>& bound) {
  switch (t.kind()) {
    case TermKind::Zero:
      return;
    case TermKind::Var:
      if (std::find(bound.begin(), bound.end(), t.name()) == bound.end()) push_unique(out, t.name());
      return;
    default:
      collect_term_vars(t.left(), out, bound);
      collect_term_vars(t.right(), out, bound);
  }
}

void collect_free(const Formula& f, std::vector<std::string>& out, std::vector<std::string>& bound) {
  switch (f.kind()) {
    case FormulaKind::Sub:
    case FormulaKind::Eq:
      collect_term_vars(f.lhs(), out, bound);
      collect_term_vars(f.rhs(), out, bound);
      return;
    case FormulaKind::CardEq:
    case FormulaKind::CardGeq:
      collect_term_vars(f.term(), out, bound);
      return;
    case FormulaKind::Not:
      collect_free(f.left(), out, bound);
      return;
    case FormulaKind::Exists:
    case FormulaKind::Forall:
      bound.push_back(f.var());
      collect_free(f.body(), out, bound);
      bound.pop_back();
      return;
    default:
      collect_free(f.left(), out, bound);
      collect_free(f.right(), out, bound);
  }
}

}  // namespace

std::vector<std::string> free_variables(const Formula& f) {
  std::vector<std::string> out;
  std::vector<std::string> bound;
  collect_free(f, out, bound);
  return out;
}

std::vector<std::string> term_variables(const Term& t) {
  std::vector<std::string> out;
  collect_term_vars(t, out, {});
  return out;
}

bool occurs_free(const Formula& f, std::string_view var) {
  switch (f.kind()) {
    case FormulaKind::Sub:
    case FormulaKind::Eq:
      return f.lhs().mentions(var) || f.rhs().mentions(var);
    case FormulaKind::CardEq:
    case FormulaKind::CardGeq:
      return f.term().mentions(var);
    case FormulaKind::Not:
      return occurs_free(f.left(), var);
    case FormulaKind::Exists:
    case FormulaKind::Forall:
      return f.var() != var && occurs_free(f.body(), var);
    default:
      return occurs_free(f.left(), var) || occurs_free(f.right(), var);
  }
}

std::size_t quantifier_depth(const Formula& f) {
  if (f.is_atom()) return 0;
  if (f.is_quantifier()) return 1 + quantifier_depth(f.body());
  if (f.kind() == FormulaKind::Not) return quantifier_depth(f.left());
  return std::max(quantifier_depth(f.left()), quantifier_depth(f.right()));
}

std::uint64_t witness_bound(const Formula& f) {
  if (f.is_card_atom()) return f.bound() + 1;
  // Counted after atom normalization: sub is one size atom, eq is two.
  if (f.kind() == FormulaKind::Sub) return 1;
  if (f.kind() == FormulaKind::Eq) return 2;
  if (f.is_quantifier()) return 1 + witness_bound(f.body());
  if (f.kind() == FormulaKind::Not) return witness_bound(f.left());
  return witness_bound(f.left()) + witness_bound(f.right());
}

ParseError::ParseError(std::size_t line, std::size_t column, std::vector<std::string> expected,
                       const std::string& message)
    : std::runtime_error(message), line_(line), column_(column), expected_(std::move(expected)) {}

}  // namespace mereo
