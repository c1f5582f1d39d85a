#include <charconv>
#include <optional>
#include <sstream>

#include "mereo/formula.hpp"

namespace mereo {

namespace {

enum class Tok {
  Ident,
  Number,
  LParen,
  RParen,
  Comma,
  Dot,
  Plus,
  Star,
  Minus,
  Bang,
  Amp,
  Pipe,
  Arrow,
  DoubleArrow,
  Equals,
  GreaterEq,
  End,
};

std::string describe(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Number: return "number";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Comma: return "','";
    case Tok::Dot: return "'.'";
    case Tok::Plus: return "'+'";
    case Tok::Star: return "'*'";
    case Tok::Minus: return "'-'";
    case Tok::Bang: return "'!'";
    case Tok::Amp: return "'&'";
    case Tok::Pipe: return "'|'";
    case Tok::Arrow: return "'->'";
    case Tok::DoubleArrow: return "'<->'";
    case Tok::Equals: return "'='";
    case Tok::GreaterEq: return "'>='";
    case Tok::End: return "end of input";
  }
  return "?";
}

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token tok;
      tok.line = line_;
      tok.column = column_;
      if (pos_ >= text_.size()) {
        tok.kind = Tok::End;
        out.push_back(tok);
        return out;
      }
      char c = text_[pos_];
      if (is_alpha(c)) {
        std::size_t start = pos_;
        while (pos_ < text_.size() && (is_alpha(text_[pos_]) || is_digit(text_[pos_]) || text_[pos_] == '_'))
          advance();
        tok.kind = Tok::Ident;
        tok.text = std::string(text_.substr(start, pos_ - start));
      } else if (is_digit(c)) {
        std::size_t start = pos_;
        while (pos_ < text_.size() && is_digit(text_[pos_])) advance();
        tok.kind = Tok::Number;
        tok.text = std::string(text_.substr(start, pos_ - start));
      } else if (match("<->")) {
        tok.kind = Tok::DoubleArrow;
      } else if (match("->")) {
        tok.kind = Tok::Arrow;
      } else if (match(">=")) {
        tok.kind = Tok::GreaterEq;
      } else {
        switch (c) {
          case '(': tok.kind = Tok::LParen; break;
          case ')': tok.kind = Tok::RParen; break;
          case ',': tok.kind = Tok::Comma; break;
          case '.': tok.kind = Tok::Dot; break;
          case '+': tok.kind = Tok::Plus; break;
          case '*': tok.kind = Tok::Star; break;
          case '-': tok.kind = Tok::Minus; break;
          case '!': tok.kind = Tok::Bang; break;
          case '&': tok.kind = Tok::Amp; break;
          case '|': tok.kind = Tok::Pipe; break;
          case '=': tok.kind = Tok::Equals; break;
          default: {
            std::ostringstream msg;
            msg << "line " << line_ << ", column " << column_ << ": unexpected character '" << c << "'";
            throw ParseError(line_, column_, {}, msg.str());
          }
        }
        advance();
      }
      out.push_back(std::move(tok));
    }
  }

 private:
  static bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
  static bool is_digit(char c) { return c >= '0' && c <= '9'; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
                                   text_[pos_] == '\r'))
      advance();
  }

  bool match(std::string_view lit) {
    if (text_.substr(pos_, lit.size()) != lit) return false;
    for (std::size_t i = 0; i < lit.size(); ++i) advance();
    return true;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  Formula formula_eof() {
    Formula f = formula();
    expect_end();
    return f;
  }

  Term term_eof() {
    Term t = term();
    expect_end();
    return t;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[i];
  }

  bool at(Tok kind) const { return peek().kind == kind; }

  bool at_quantifier() const {
    return at(Tok::Ident) && (peek().text == "E" || peek().text == "A") && peek(1).kind == Tok::Ident &&
           peek(2).kind == Tok::Dot;
  }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const Token& tok = peek();
    std::ostringstream msg;
    msg << "line " << tok.line << ", column " << tok.column << ": expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) msg << (i + 1 == expected.size() ? " or " : ", ");
      msg << expected[i];
    }
    msg << ", found " << (tok.kind == Tok::End ? "end of input" : "'" + found_text(tok) + "'");
    throw ParseError(tok.line, tok.column, std::move(expected), msg.str());
  }

  [[noreturn]] void fail_message(const Token& tok, const std::string& what) const {
    std::ostringstream msg;
    msg << "line " << tok.line << ", column " << tok.column << ": " << what;
    throw ParseError(tok.line, tok.column, {}, msg.str());
  }

  static std::string found_text(const Token& tok) {
    if (!tok.text.empty()) return tok.text;
    std::string d = describe(tok.kind);
    return d.size() > 2 ? d.substr(1, d.size() - 2) : d;
  }

  Token take(Tok kind) {
    if (!at(kind)) fail({describe(kind)});
    return toks_[pos_++];
  }

  bool accept(Tok kind) {
    if (!at(kind)) return false;
    ++pos_;
    return true;
  }

  void expect_end() {
    if (!at(Tok::End)) fail({"end of input"});
  }

  Formula formula() {
    if (at_quantifier()) return quantified();
    return iff();
  }

  Formula quantified() {
    bool exists = peek().text == "E";
    ++pos_;
    std::string var = take(Tok::Ident).text;
    take(Tok::Dot);
    Formula body = formula();
    return exists ? Formula::exists(std::move(var), std::move(body))
                  : Formula::forall(std::move(var), std::move(body));
  }

  Formula iff() {
    Formula f = imp();
    while (accept(Tok::DoubleArrow)) f = Formula::iff(f, imp());
    return f;
  }

  Formula imp() {
    Formula f = disj();
    if (accept(Tok::Arrow)) return Formula::implies(f, imp());
    return f;
  }

  Formula disj() {
    Formula f = conj();
    while (accept(Tok::Pipe)) f = Formula::disj(f, conj());
    return f;
  }

  Formula conj() {
    Formula f = neg();
    while (accept(Tok::Amp)) f = Formula::conj(f, neg());
    return f;
  }

  Formula neg() {
    if (accept(Tok::Bang)) return Formula::negation(neg());
    if (at_quantifier()) return quantified();
    return atomic();
  }

  Formula atomic() {
    if (accept(Tok::LParen)) {
      Formula f = formula();
      take(Tok::RParen);
      return f;
    }
    static const std::vector<std::string> kStarts = {"'!'",       "'('",       "'sub('", "'eq('",
                                                     "'card('",   "'atom('",   "'E'",    "'A'"};
    if (!at(Tok::Ident)) fail(kStarts);
    const Token head = peek();
    if (head.text != "sub" && head.text != "eq" && head.text != "card" && head.text != "atom") {
      if ((head.text == "E" || head.text == "A") && peek(1).kind == Tok::Ident) {
        pos_ += 2;
        fail({"'.'"});
      }
      fail(kStarts);
    }
    ++pos_;
    take(Tok::LParen);
    if (head.text == "sub" || head.text == "eq") {
      Term l = term();
      take(Tok::Comma);
      Term r = term();
      take(Tok::RParen);
      return head.text == "sub" ? Formula::sub(std::move(l), std::move(r))
                                : Formula::eq(std::move(l), std::move(r));
    }
    Term t = term();
    if (at(Tok::Comma)) fail_message(peek(), head.text + " takes exactly one term argument");
    take(Tok::RParen);
    if (head.text == "atom") return Formula::card_eq(std::move(t), 1);
    bool exact;
    if (accept(Tok::Equals)) {
      exact = true;
    } else if (accept(Tok::GreaterEq)) {
      exact = false;
    } else {
      fail({"'='", "'>='"});
    }
    std::uint64_t n = natural();
    return exact ? Formula::card_eq(std::move(t), n) : Formula::card_geq(std::move(t), n);
  }

  std::uint64_t natural() {
    const Token tok = take(Tok::Number);
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), value);
    if (ec != std::errc() || ptr != tok.text.data() + tok.text.size())
      fail_message(tok, "numeric constant '" + tok.text + "' is out of range");
    return value;
  }

  Term term() {
    Term t = factor();
    while (accept(Tok::Plus)) t = Term::join(t, factor());
    return t;
  }

  Term factor() {
    Term t = base();
    for (;;) {
      if (accept(Tok::Star)) {
        t = Term::meet(t, base());
      } else if (accept(Tok::Minus)) {
        t = Term::diff(t, base());
      } else {
        return t;
      }
    }
  }

  Term base() {
    if (accept(Tok::LParen)) {
      Term t = term();
      take(Tok::RParen);
      return t;
    }
    if (at(Tok::Number)) {
      const Token& tok = peek();
      if (tok.text != "0") fail_message(tok, "the only numeric term is 0, found '" + tok.text + "'");
      ++pos_;
      return Term::zero();
    }
    if (at(Tok::Ident)) {
      const Token tok = toks_[pos_++];
      if (at(Tok::LParen)) {
        fail_message(tok, "'" + tok.text + "(...)' is not a term; terms are built from variables, 0, "
                          "'*', '+' and '-'");
      }
      return Term::var(tok.text);
    }
    fail({"identifier", "'0'", "'('"});
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

Formula parse(std::string_view text) { return Parser(Lexer(text).run()).formula_eof(); }

Term parse_term(std::string_view text) { return Parser(Lexer(text).run()).term_eof(); }

}  // namespace mereo
