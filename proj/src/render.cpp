#include <string>

#include "mereo/formula.hpp"

namespace mereo {

namespace {

// Term precedence: '+' binds loosest; '*' and '-' share a level. All left-associative.
int term_prec(TermKind k) {
  switch (k) {
    case TermKind::Join: return 1;
    case TermKind::Meet:
    case TermKind::Diff: return 2;
    default: return 3;
  }
}

void render_term(const Term& t, int ctx, std::string& out) {
  int prec = term_prec(t.kind());
  bool parens = prec < ctx;
  if (parens) out += '(';
  switch (t.kind()) {
    case TermKind::Zero:
      out += '0';
      break;
    case TermKind::Var:
      out += t.name();
      break;
    case TermKind::Join:
    case TermKind::Meet:
    case TermKind::Diff: {
      const char* op = t.kind() == TermKind::Join ? " + " : t.kind() == TermKind::Meet ? " * " : " - ";
      render_term(t.left(), prec, out);
      out += op;
      render_term(t.right(), prec + 1, out);
      break;
    }
  }
  if (parens) out += ')';
}

// Formula precedence, loosest first. Quantifiers sit below everything because
// their bodies extend as far right as possible.
int formula_prec(FormulaKind k) {
  switch (k) {
    case FormulaKind::Exists:
    case FormulaKind::Forall: return 0;
    case FormulaKind::Iff: return 1;
    case FormulaKind::Implies: return 2;
    case FormulaKind::Or: return 3;
    case FormulaKind::And: return 4;
    case FormulaKind::Not: return 5;
    default: return 6;
  }
}

void render_formula(const Formula& f, int ctx, std::string& out) {
  int prec = formula_prec(f.kind());
  bool parens = prec < ctx;
  if (parens) out += '(';
  switch (f.kind()) {
    case FormulaKind::Sub:
    case FormulaKind::Eq:
      out += f.kind() == FormulaKind::Sub ? "sub(" : "eq(";
      render_term(f.lhs(), 0, out);
      out += ", ";
      render_term(f.rhs(), 0, out);
      out += ')';
      break;
    case FormulaKind::CardEq:
    case FormulaKind::CardGeq:
      out += "card(";
      render_term(f.term(), 0, out);
      out += f.kind() == FormulaKind::CardEq ? ") = " : ") >= ";
      out += std::to_string(f.bound());
      break;
    case FormulaKind::Not:
      out += '!';
      render_formula(f.left(), prec, out);
      break;
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Iff:
      render_formula(f.left(), prec, out);
      out += f.kind() == FormulaKind::And ? " & " : f.kind() == FormulaKind::Or ? " | " : " <-> ";
      render_formula(f.right(), prec + 1, out);
      break;
    case FormulaKind::Implies:
      render_formula(f.left(), prec + 1, out);
      out += " -> ";
      render_formula(f.right(), prec, out);
      break;
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
      out += f.kind() == FormulaKind::Exists ? "E " : "A ";
      out += f.var();
      out += ". ";
      const Formula& body = f.body();
      int body_prec = formula_prec(body.kind());
      // Binary bodies are bracketed for readability; the parse is the same either way.
      bool bracket = body_prec >= 1 && body_prec <= 4;
      render_formula(body, bracket ? 7 : 0, out);
      break;
    }
  }
  if (parens) out += ')';
}

}  // namespace

std::string render(const Term& t) {
  std::string out;
  render_term(t, 0, out);
  return out;
}

std::string render(const Formula& f) {
  std::string out;
  render_formula(f, 0, out);
  return out;
}

}  // namespace mereo
