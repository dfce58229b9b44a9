#include <cctype>
#include <charconv>
#include <optional>
#include <vector>

#include "dsqif/errors.hpp"
#include "dsqif/lang.hpp"

namespace dsqif {

namespace {

enum class Tok {
  kVar,
  kAtom,
  kNumber,
  kKeyword,
  kSymbol,
  kEnd,
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

const char* const kKeywords[] = {"skip", "if",    "then", "else", "end", "while",
                                 "do",   "true",  "false", "not", "and", "or"};

bool is_keyword(std::string_view word) {
  for (const char* k : kKeywords) {
    if (word == k) return true;
  }
  return false;
}

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t line = 1;
  std::size_t col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    const std::size_t start_line = line;
    const std::size_t start_col = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      std::string word(src.substr(i, j - i));
      Tok kind = Tok::kAtom;
      if (is_keyword(word)) {
        kind = Tok::kKeyword;
      } else if (std::islower(static_cast<unsigned char>(c))) {
        kind = Tok::kVar;
      } else if (!std::isupper(static_cast<unsigned char>(c))) {
        throw ParseError("identifier must start with a letter", start_line, start_col);
      }
      out.push_back({kind, std::move(word), start_line, start_col});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      std::size_t j = i;
      while (j < src.size() && (std::isdigit(static_cast<unsigned char>(src[j])) || src[j] == '.')) ++j;
      out.push_back({Tok::kNumber, std::string(src.substr(i, j - i)), start_line, start_col});
      advance(j - i);
      continue;
    }
    static const char* const kTwoChar[] = {":=", "!=", "<="};
    bool matched = false;
    for (const char* sym : kTwoChar) {
      if (src.substr(i, 2) == sym) {
        out.push_back({Tok::kSymbol, sym, start_line, start_col});
        advance(2);
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (std::string_view(";(){}[]+-*=<").find(c) != std::string_view::npos) {
      out.push_back({Tok::kSymbol, std::string(1, c), start_line, start_col});
      advance(1);
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", start_line, start_col);
  }
  out.push_back({Tok::kEnd, "", line, col});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  CommandPtr program() {
    CommandPtr c = seq();
    if (peek().kind != Tok::kEnd) fail("expected ';' or end of input");
    return c;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }

  bool at(Tok kind, std::string_view text) const { return peek().kind == kind && peek().text == text; }
  bool at_symbol(std::string_view s) const { return at(Tok::kSymbol, s); }
  bool at_keyword(std::string_view k) const { return at(Tok::kKeyword, k); }

  [[noreturn]] void fail(const std::string& message) const {
    const Token& t = peek();
    const std::string found = t.kind == Tok::kEnd ? "end of input" : "'" + t.text + "'";
    throw ParseError(message + ", found " + found, t.line, t.column);
  }

  void expect_symbol(std::string_view s) {
    if (!at_symbol(s)) fail("expected '" + std::string(s) + "'");
    ++pos_;
  }
  void expect_keyword(std::string_view k) {
    if (!at_keyword(k)) fail("expected '" + std::string(k) + "'");
    ++pos_;
  }

  CommandPtr seq() {
    CommandPtr first = statement();
    if (at_symbol(";")) {
      ++pos_;
      return make_seq(std::move(first), seq());
    }
    return first;
  }

  CommandPtr statement() {
    if (at_keyword("skip")) {
      ++pos_;
      return make_skip();
    }
    if (peek().kind == Tok::kVar) {
      VariableId name = peek().text;
      ++pos_;
      expect_symbol(":=");
      return make_assign(std::move(name), aexp());
    }
    if (at_keyword("if")) {
      ++pos_;
      BexpPtr cond = bexp();
      expect_keyword("then");
      CommandPtr then_branch = seq();
      expect_keyword("else");
      CommandPtr else_branch = seq();
      expect_keyword("end");
      return make_if(std::move(cond), std::move(then_branch), std::move(else_branch));
    }
    if (at_keyword("while")) {
      ++pos_;
      BexpPtr cond = bexp();
      expect_keyword("do");
      CommandPtr body = seq();
      expect_keyword("end");
      return make_while(std::move(cond), std::move(body));
    }
    if (at_symbol("{")) {
      ++pos_;
      CommandPtr left = seq();
      expect_symbol("}");
      expect_symbol("[");
      const double p = probability();
      expect_symbol("]");
      expect_symbol("{");
      CommandPtr right = seq();
      expect_symbol("}");
      return make_choice(p, std::move(left), std::move(right));
    }
    fail("expected a command");
  }

  double probability() {
    if (peek().kind != Tok::kNumber) fail("expected a probability");
    const Token& t = peek();
    double p = 0.0;
    auto [end, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), p);
    if (ec != std::errc() || end != t.text.data() + t.text.size()) fail("malformed probability");
    if (!(p >= 0.0 && p <= 1.0)) throw ParseError("probability " + t.text + " is outside [0, 1]", t.line, t.column);
    ++pos_;
    return p;
  }

  // aexp := term (('+' | '-') term)*
  AexpPtr aexp() {
    AexpPtr lhs = term();
    while (at_symbol("+") || at_symbol("-")) {
      const ArithOp op = at_symbol("+") ? ArithOp::kAdd : ArithOp::kSub;
      ++pos_;
      lhs = make_arith(op, std::move(lhs), term());
    }
    return lhs;
  }

  AexpPtr term() {
    AexpPtr lhs = factor();
    while (at_symbol("*")) {
      ++pos_;
      lhs = make_arith(ArithOp::kMul, std::move(lhs), factor());
    }
    return lhs;
  }

  AexpPtr factor() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::kNumber:
        ++pos_;
        return make_int(integer(t, false));
      case Tok::kVar:
        ++pos_;
        return make_var(t.text);
      case Tok::kAtom:
        ++pos_;
        return make_atom(t.text);
      default:
        break;
    }
    if (at_symbol("-")) {
      ++pos_;
      if (peek().kind == Tok::kNumber) {
        const Token& n = peek();
        ++pos_;
        return make_int(integer(n, true));
      }
      return make_arith(ArithOp::kSub, make_int(0), factor());
    }
    if (at_symbol("(")) {
      ++pos_;
      AexpPtr inner = aexp();
      expect_symbol(")");
      return inner;
    }
    fail("expected an arithmetic expression");
  }

  static std::int64_t integer(const Token& t, bool negative) {
    const std::string text = (negative ? "-" : "") + t.text;
    std::int64_t v = 0;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || end != text.data() + text.size()) {
      throw ParseError("malformed integer literal '" + t.text + "'", t.line, t.column);
    }
    return v;
  }

  // bexp := conj ('or' conj)*
  BexpPtr bexp() {
    BexpPtr lhs = conj();
    while (at_keyword("or")) {
      ++pos_;
      lhs = make_logic(LogicOp::kOr, std::move(lhs), conj());
    }
    return lhs;
  }

  BexpPtr conj() {
    BexpPtr lhs = bfactor();
    while (at_keyword("and")) {
      ++pos_;
      lhs = make_logic(LogicOp::kAnd, std::move(lhs), bfactor());
    }
    return lhs;
  }

  BexpPtr bfactor() {
    if (at_keyword("true") || at_keyword("false")) {
      const bool v = at_keyword("true");
      ++pos_;
      return make_bool(v);
    }
    if (at_keyword("not")) {
      ++pos_;
      return make_not(bfactor());
    }
    if (at_symbol("(")) {
      // Either a parenthesized condition or a comparison whose left operand
      // starts with '('. Try the former first.
      const std::size_t save = pos_;
      try {
        ++pos_;
        BexpPtr inner = bexp();
        expect_symbol(")");
        return inner;
      } catch (const ParseError&) {
        pos_ = save;
      }
    }
    AexpPtr lhs = aexp();
    CompareOp op;
    if (at_symbol("=")) {
      op = CompareOp::kEq;
    } else if (at_symbol("!=")) {
      op = CompareOp::kNe;
    } else if (at_symbol("<")) {
      op = CompareOp::kLt;
    } else if (at_symbol("<=")) {
      op = CompareOp::kLe;
    } else {
      fail("expected a comparison operator");
    }
    ++pos_;
    return make_compare(op, std::move(lhs), aexp());
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

CommandPtr parse_program(std::string_view text) { return Parser(tokenize(text)).program(); }

}  // namespace dsqif
