#include "agdbg/grammar_parser.hpp"

#include <cctype>
#include <map>

namespace agdbg {

GrammarSyntaxError::GrammarSyntaxError(int line, int column, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                         ": " + message),
      line_(line),
      column_(column) {}

namespace {

enum class Tok { Name, Number, String, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1;
  int column = 1;
  int end_line = 1;
  int end_column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space_and_comments();
      Token t;
      t.line = line_;
      t.column = col_;
      if (pos_ >= src_.size()) {
        t.kind = Tok::End;
        t.end_line = line_;
        t.end_column = col_;
        out.push_back(t);
        return out;
      }
      char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        t.kind = Tok::Name;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
          t.text += advance();
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        t.kind = Tok::Number;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
          t.text += advance();
        if (pos_ + 1 < src_.size() && src_[pos_] == '.' &&
            std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
          t.text += advance();
          while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
            t.text += advance();
        }
      } else if (c == '"') {
        t.kind = Tok::String;
        advance();
        for (;;) {
          if (pos_ >= src_.size() || src_[pos_] == '\n')
            throw GrammarSyntaxError(t.line, t.column, "unterminated string literal");
          char d = advance();
          if (d == '"') break;
          if (d == '\\') {
            if (pos_ >= src_.size()) throw GrammarSyntaxError(t.line, t.column, "bad escape");
            char e = advance();
            t.text += e == 'n' ? '\n' : e == 't' ? '\t' : e;
          } else {
            t.text += d;
          }
        }
      } else {
        t.kind = Tok::Punct;
        static const char* const multi[] = {"::=", "==", "!=", "<=", ">=", "++"};
        bool matched = false;
        for (const char* m : multi) {
          std::string_view mv(m);
          if (src_.substr(pos_, mv.size()) == mv) {
            for (std::size_t i = 0; i < mv.size(); ++i) t.text += advance();
            matched = true;
            break;
          }
        }
        if (!matched) {
          if (std::string_view(":;,{}().=<>+-*/^").find(c) == std::string_view::npos)
            throw GrammarSyntaxError(line_, col_, std::string("unexpected character '") + c + "'");
          t.text += advance();
        }
      }
      t.end_line = line_;
      t.end_column = col_;
      out.push_back(std::move(t));
    }
  }

 private:
  char advance() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_space_and_comments() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

// Boost reads a leading zero as an octal prefix.
BigInt parse_digits(const std::string& digits) {
  std::size_t nz = digits.find_first_not_of('0');
  return nz == std::string::npos ? BigInt(0) : BigInt(digits.substr(nz));
}

Rational parse_decimal(const std::string& text) {
  auto dot = text.find('.');
  if (dot == std::string::npos) return Rational(parse_digits(text));
  std::string digits = text.substr(0, dot) + text.substr(dot + 1);
  BigInt scale = 1;
  for (std::size_t i = dot + 1; i < text.size(); ++i) scale *= 10;
  return Rational(parse_digits(digits), scale);
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Grammar run() {
    Grammar g;
    std::vector<bool> labelled;
    while (peek_name("attr") || peek_name("option")) {
      if (peek_name("option"))
        parse_option(g);
      else
        g.decls.push_back(parse_decl());
    }
    if (cur().kind == Tok::End) fail(cur(), "expected at least one production");
    while (cur().kind != Tok::End) {
      bool has_label = false;
      g.productions.push_back(parse_production(has_label));
      labelled.push_back(has_label);
    }
    g.start = g.productions.front().lhs;
    for (std::size_t i = 0; i < g.productions.size(); ++i)
      if (!labelled[i]) g.productions[i].id = default_production_id(g, i);
    std::map<std::string, std::size_t> seen;
    for (std::size_t i = 0; i < g.productions.size(); ++i) {
      auto [it, fresh] = seen.emplace(g.productions[i].id, i);
      if (!fresh) {
        const SourceSpan& s = g.productions[i].span;
        throw GrammarSyntaxError(s.line, s.column,
                                 "duplicate production id '" + g.productions[i].id + "'");
      }
    }
    g.collect_terminals();
    return g;
  }

 private:
  const Token& cur() const { return toks_[pos_]; }
  const Token& peek(std::size_t ahead) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  bool peek_name(std::string_view word) const {
    return cur().kind == Tok::Name && cur().text == word;
  }
  bool peek_punct(std::string_view p) const {
    return cur().kind == Tok::Punct && cur().text == p;
  }
  [[noreturn]] void fail(const Token& t, const std::string& msg) const {
    std::string got = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw GrammarSyntaxError(t.line, t.column, msg + " (found " + got + ")");
  }
  Token take() { return toks_[pos_++]; }
  Token expect_punct(std::string_view p) {
    if (!peek_punct(p)) fail(cur(), "expected '" + std::string(p) + "'");
    return take();
  }
  Token expect_name(const char* what) {
    if (cur().kind != Tok::Name) fail(cur(), std::string("expected ") + what);
    return take();
  }
  void expect_keyword(std::string_view word) {
    if (!peek_name(word)) fail(cur(), "expected '" + std::string(word) + "'");
    take();
  }

  void parse_option(Grammar& g) {
    expect_keyword("option");
    Token name = expect_name("option name");
    if (name.text != "skip_whitespace") fail(name, "unknown option");
    g.skip_whitespace = true;
    expect_punct(";");
  }

  AttributeDecl parse_decl() {
    Token start = cur();
    expect_keyword("attr");
    AttributeDecl d;
    if (peek_name("syn")) {
      d.kind = AttrKind::Synthesized;
    } else if (peek_name("inh")) {
      d.kind = AttrKind::Inherited;
    } else {
      fail(cur(), "expected 'syn' or 'inh'");
    }
    take();
    d.name = expect_name("attribute name").text;
    expect_punct(":");
    Token sort = expect_name("sort");
    if (sort.text == "rational") {
      d.sort = Sort::Rational;
    } else if (sort.text == "boolean") {
      d.sort = Sort::Boolean;
    } else if (sort.text == "string") {
      d.sort = Sort::String;
    } else {
      fail(sort, "expected 'rational', 'boolean' or 'string'");
    }
    expect_keyword("on");
    d.carriers.push_back(expect_name("nonterminal").text);
    while (peek_punct(",")) {
      take();
      d.carriers.push_back(expect_name("nonterminal").text);
    }
    Token end = expect_punct(";");
    d.span = SourceSpan{start.line, start.column, end.end_line, end.end_column};
    return d;
  }

  Production parse_production(bool& has_label) {
    Token start = cur();
    Production p;
    if (cur().kind == Tok::Name && peek(1).kind == Tok::Punct && peek(1).text == ":") {
      p.id = take().text;
      take();
      has_label = true;
    }
    p.lhs = expect_name("production left-hand side").text;
    expect_punct("::=");
    while (cur().kind == Tok::Name || cur().kind == Tok::String) {
      Token t = take();
      if (t.kind == Tok::String && t.text.empty()) fail(t, "empty terminal literal");
      p.rhs.push_back(Symbol{t.kind == Tok::String, t.text});
    }
    if (p.rhs.empty()) fail(cur(), "expected right-hand-side symbol");
    expect_punct("{");
    while (!peek_punct("}")) {
      if (cur().kind == Tok::End) fail(cur(), "expected '}'");
      p.rules.push_back(parse_rule(p));
    }
    Token end = take();
    p.span = SourceSpan{start.line, start.column, end.end_line, end.end_column};
    return p;
  }

  AttrRef parse_attr_ref(const Production& p) {
    Token occ = expect_name("symbol occurrence");
    std::optional<int> index;
    try {
      index = p.resolve_occurrence(occ.text);
    } catch (const std::invalid_argument& e) {
      fail(occ, e.what());
    }
    if (!index) fail(occ, "no occurrence '" + occ.text + "' in production of " + p.lhs);
    if (p.symbol_at(*index).terminal) fail(occ, "terminal occurrences carry no attributes");
    expect_punct(".");
    Token attr = expect_name("attribute name");
    return AttrRef{*index, attr.text};
  }

  AttributionRule parse_rule(const Production& p) {
    Token start = cur();
    AttributionRule r;
    r.target = parse_attr_ref(p);
    expect_punct("=");
    r.expr = parse_expr(p);
    Token end = expect_punct(";");
    r.span = SourceSpan{start.line, start.column, end.end_line, end.end_column};
    return r;
  }

  Expr parse_expr(const Production& p) {
    if (peek_name("if")) {
      take();
      Expr c = parse_expr(p);
      expect_keyword("then");
      Expr t = parse_expr(p);
      expect_keyword("else");
      Expr e = parse_expr(p);
      return Expr::make_if(std::move(c), std::move(t), std::move(e));
    }
    return parse_comparison(p);
  }

  Expr parse_comparison(const Production& p) {
    Expr lhs = parse_additive(p);
    static const std::pair<const char*, ExprKind> ops[] = {
        {"==", ExprKind::Eq}, {"!=", ExprKind::Ne}, {"<=", ExprKind::Le},
        {">=", ExprKind::Ge}, {"<", ExprKind::Lt},  {">", ExprKind::Gt}};
    for (const auto& [tok, kind] : ops) {
      if (peek_punct(tok)) {
        take();
        Expr rhs = parse_additive(p);
        return Expr::make_binary(kind, std::move(lhs), std::move(rhs));
      }
    }
    return lhs;
  }

  Expr parse_additive(const Production& p) {
    Expr lhs = parse_multiplicative(p);
    for (;;) {
      ExprKind k;
      if (peek_punct("+")) {
        k = ExprKind::Add;
      } else if (peek_punct("-")) {
        k = ExprKind::Sub;
      } else if (peek_punct("++")) {
        k = ExprKind::Concat;
      } else {
        return lhs;
      }
      take();
      lhs = Expr::make_binary(k, std::move(lhs), parse_multiplicative(p));
    }
  }

  Expr parse_multiplicative(const Production& p) {
    Expr lhs = parse_unary(p);
    for (;;) {
      ExprKind k;
      if (peek_punct("*")) {
        k = ExprKind::Mul;
      } else if (peek_punct("/")) {
        k = ExprKind::Div;
      } else {
        return lhs;
      }
      take();
      lhs = Expr::make_binary(k, std::move(lhs), parse_unary(p));
    }
  }

  Expr parse_unary(const Production& p) {
    if (peek_punct("-")) {
      take();
      // A minus sign directly on a number is part of the literal.
      if (cur().kind == Tok::Number && !(peek(1).kind == Tok::Punct && peek(1).text == "^")) {
        Token n = take();
        return Expr::make_literal(Value(Rational(-parse_decimal(n.text))));
      }
      return Expr::make_unary(ExprKind::Neg, parse_unary(p));
    }
    return parse_power(p);
  }

  Expr parse_power(const Production& p) {
    Expr base = parse_primary(p);
    if (peek_punct("^")) {
      take();
      return Expr::make_binary(ExprKind::Pow, std::move(base), parse_unary(p));
    }
    return base;
  }

  Expr parse_primary(const Production& p) {
    const Token& t = cur();
    switch (t.kind) {
      case Tok::Number: return Expr::make_literal(Value(parse_decimal(take().text)));
      case Tok::String: return Expr::make_literal(Value(take().text));
      case Tok::Punct:
        if (t.text == "(") {
          take();
          Expr e = parse_expr(p);
          expect_punct(")");
          return e;
        }
        break;
      case Tok::Name:
        if (t.text == "true" || t.text == "false") {
          bool b = take().text == "true";
          return Expr::make_literal(Value(b));
        }
        if (t.text == "pow" && peek(1).kind == Tok::Punct && peek(1).text == "(") {
          take();
          take();
          Expr base = parse_expr(p);
          expect_punct(",");
          Expr exponent = parse_expr(p);
          expect_punct(")");
          return Expr::make_binary(ExprKind::Pow, std::move(base), std::move(exponent));
        }
        return Expr::make_ref(parse_attr_ref(p));
      case Tok::End: break;
    }
    fail(t, "expected expression");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

Grammar parse_grammar(std::string_view text) {
  Lexer lexer(text);
  Parser parser(lexer.run());
  return parser.run();
}

}  // namespace agdbg
