// Term and formula languages of inclusion-based set-theoretic mereology.
//
// Both trees are immutable and share structure: copying a Term or Formula
// copies a pointer. Equality is structural. Every node caches its hash and
// node count, so equality tests and budget checks are cheap.

#ifndef MEREO_FORMULA_HPP
#define MEREO_FORMULA_HPP

#include <cstddef>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mereo {

enum class TermKind : std::uint8_t { Var, Zero, Meet, Join, Diff };

class Term {
 public:
  struct Node;

  // The default-constructed Term is the constant 0.
  Term();

  static Term var(std::string name);
  static Term zero();
  static Term meet(Term left, Term right);
  static Term join(Term left, Term right);
  static Term diff(Term left, Term right);

  TermKind kind() const;
  // Only meaningful for Var.
  const std::string& name() const;
  // Only meaningful for Meet, Join and Diff.
  const Term& left() const;
  const Term& right() const;

  std::size_t hash() const;
  std::size_t size() const;
  bool is_ground() const;  // no variables
  bool mentions(std::string_view var) const;

  friend bool operator==(const Term& a, const Term& b);

 private:
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// Throws std::invalid_argument unless `name` matches [a-zA-Z][a-zA-Z0-9_]*.
void check_identifier(std::string_view name);
bool is_identifier(std::string_view name);

enum class FormulaKind : std::uint8_t {
  Sub,
  Eq,
  CardEq,
  CardGeq,
  Not,
  And,
  Or,
  Implies,
  Iff,
  Exists,
  Forall,
};

class Formula {
 public:
  struct Node;

  // The default-constructed Formula is the canonical true literal card(0) = 0.
  Formula();

  static Formula sub(Term left, Term right);
  static Formula eq(Term left, Term right);
  static Formula card_eq(Term term, std::uint64_t n);
  static Formula card_geq(Term term, std::uint64_t n);
  static Formula negation(Formula body);
  static Formula conj(Formula left, Formula right);
  static Formula disj(Formula left, Formula right);
  static Formula implies(Formula left, Formula right);
  static Formula iff(Formula left, Formula right);
  static Formula exists(std::string var, Formula body);
  static Formula forall(std::string var, Formula body);

  // card(0) = 0 and card(0) >= 1.
  static Formula truth();
  static Formula falsity();

  FormulaKind kind() const;
  bool is_atom() const;
  bool is_card_atom() const;
  bool is_quantifier() const;
  bool is_true_literal() const;
  bool is_false_literal() const;

  // Sub / Eq operands.
  const Term& lhs() const;
  const Term& rhs() const;
  // CardEq / CardGeq.
  const Term& term() const;
  std::uint64_t bound() const;
  // Not: left(); binary connectives: left(), right(); quantifiers: body().
  const Formula& left() const;
  const Formula& right() const;
  const Formula& body() const;
  // Quantifier variable.
  const std::string& var() const;

  std::size_t hash() const;
  std::size_t size() const;

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};
struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

// Left-nested conjunction/disjunction; empty input gives the true/false literal.
Formula conj_all(const std::vector<Formula>& parts);
Formula disj_all(const std::vector<Formula>& parts);
Term join_all(const std::vector<Term>& parts);

// Free variables in first-occurrence order.
std::vector<std::string> free_variables(const Formula& f);
// Variables of a term in first-occurrence order.
std::vector<std::string> term_variables(const Term& t);
bool occurs_free(const Formula& f, std::string_view var);

std::size_t quantifier_depth(const Formula& f);

// Sum of numeric constants + number of size atoms after normalization
// (eq counts twice) + number of quantifiers.
// Fresh-atom allowance for bounded search in the finite-set model.
std::uint64_t witness_bound(const Formula& f);

// ---------------------------------------------------------------------------
// Surface syntax

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, std::vector<std::string> expected,
             const std::string& message);

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::vector<std::string> expected_;
};

// Grammar (ASCII):
//   formula := "E" ident "." formula | "A" ident "." formula | iff
//   iff     := imp ("<->" imp)*          left-associative
//   imp     := disj ("->" imp)?          right-associative
//   disj    := conj ("|" conj)*
//   conj    := neg ("&" neg)*
//   neg     := "!" neg | quantified | atomf
//   atomf   := "sub(" term "," term ")" | "eq(" term "," term ")"
//            | "card(" term ")" ("=" | ">=") nat | "atom(" term ")" | "(" formula ")"
//   term    := factor ("+" factor)*
//   factor  := base (("*" | "-") base)*
//   base    := ident | "0" | "(" term ")"
// Quantifier bodies extend as far right as possible.
Formula parse(std::string_view text);
Term parse_term(std::string_view text);

std::string render(const Formula& f);
std::string render(const Term& t);

// ---------------------------------------------------------------------------
// Node layouts and inline accessors.

struct Term::Node {
  TermKind kind = TermKind::Zero;
  std::string name;
  Term left{std::shared_ptr<const Node>{}};
  Term right{std::shared_ptr<const Node>{}};
  std::size_t hash = 0;
  std::size_t size = 1;
  bool ground = true;
};

struct Formula::Node {
  FormulaKind kind = FormulaKind::CardEq;
  Term lhs;
  Term rhs;
  std::uint64_t n = 0;
  Formula a{std::shared_ptr<const Node>{}};
  Formula b{std::shared_ptr<const Node>{}};
  std::string var;
  std::size_t hash = 0;
  std::size_t size = 1;
};

inline TermKind Term::kind() const { return node_->kind; }
inline const std::string& Term::name() const { return node_->name; }
inline const Term& Term::left() const { return node_->left; }
inline const Term& Term::right() const { return node_->right; }
inline std::size_t Term::hash() const { return node_->hash; }
inline std::size_t Term::size() const { return node_->size; }
inline bool Term::is_ground() const { return node_->ground; }

inline FormulaKind Formula::kind() const { return node_->kind; }
inline const Term& Formula::lhs() const { return node_->lhs; }
inline const Term& Formula::rhs() const { return node_->rhs; }
inline const Term& Formula::term() const { return node_->lhs; }
inline std::uint64_t Formula::bound() const { return node_->n; }
inline const Formula& Formula::left() const { return node_->a; }
inline const Formula& Formula::right() const { return node_->b; }
inline const Formula& Formula::body() const { return node_->a; }
inline const std::string& Formula::var() const { return node_->var; }
inline std::size_t Formula::hash() const { return node_->hash; }
inline std::size_t Formula::size() const { return node_->size; }

inline bool Formula::is_atom() const { return node_->kind <= FormulaKind::CardGeq; }
inline bool Formula::is_card_atom() const {
  return node_->kind == FormulaKind::CardEq || node_->kind == FormulaKind::CardGeq;
}
inline bool Formula::is_quantifier() const {
  return node_->kind == FormulaKind::Exists || node_->kind == FormulaKind::Forall;
}

}  // namespace mereo

#endif  // MEREO_FORMULA_HPP
