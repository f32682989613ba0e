#include "agdbg/format.hpp"

#include <sstream>

namespace agdbg {

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

// Exact decimal expansion when the denominator is of the form 2^a 5^b.
std::string rational_literal(const Rational& r) {
  BigInt num = numerator(r);
  BigInt den = denominator(r);
  bool negative = num < 0;
  if (negative) num = -num;
  BigInt d = den;
  int twos = 0, fives = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++twos;
  }
  while (d % 5 == 0) {
    d /= 5;
    ++fives;
  }
  std::string body;
  if (d != 1) {
    body = "(" + num.str() + "/" + den.str() + ")";
  } else {
    int digits = std::max(twos, fives);
    BigInt scale = 1;
    for (int i = 0; i < digits; ++i) scale *= 10;
    BigInt scaled = num * (scale / den);
    std::string s = scaled.str();
    if (digits > 0) {
      if (static_cast<int>(s.size()) <= digits) s = std::string(digits - s.size() + 1, '0') + s;
      s.insert(s.size() - digits, ".");
    }
    body = s;
  }
  return negative ? "-" + body : body;
}

int precedence(const Expr& e) {
  switch (e.kind) {
    case ExprKind::If: return 0;
    case ExprKind::Eq:
    case ExprKind::Ne:
    case ExprKind::Lt:
    case ExprKind::Le:
    case ExprKind::Gt:
    case ExprKind::Ge: return 1;
    case ExprKind::Add:
    case ExprKind::Sub:
    case ExprKind::Concat: return 2;
    case ExprKind::Mul:
    case ExprKind::Div: return 3;
    case ExprKind::Neg: return 4;
    case ExprKind::Literal:
      return e.literal.is_rational() && e.literal.as_rational() < 0 ? 4 : 5;
    case ExprKind::Ref:
    case ExprKind::Pow: return 5;
  }
  return 5;
}

void emit(std::ostream& out, const Production& p, const Expr& e, int min_prec);

void emit_child(std::ostream& out, const Production& p, const Expr& e, int min_prec) {
  if (precedence(e) < min_prec) {
    out << "(";
    emit(out, p, e, 0);
    out << ")";
  } else {
    emit(out, p, e, min_prec);
  }
}

void emit(std::ostream& out, const Production& p, const Expr& e, int) {
  switch (e.kind) {
    case ExprKind::Literal: out << format_literal(e.literal); return;
    case ExprKind::Ref: out << p.occurrence_name(e.ref.occurrence) << "." << e.ref.attr; return;
    case ExprKind::Neg: {
      out << "-";
      const Expr& a = e.args[0];
      // `-(1)` keeps negation of a literal distinct from a negative literal.
      if (a.kind == ExprKind::Literal && a.literal.is_rational()) {
        out << "(";
        emit(out, p, a, 0);
        out << ")";
      } else {
        emit_child(out, p, a, 4);
      }
      return;
    }
    case ExprKind::Pow:
      out << "pow(";
      emit(out, p, e.args[0], 0);
      out << ", ";
      emit(out, p, e.args[1], 0);
      out << ")";
      return;
    case ExprKind::If:
      out << "if ";
      emit(out, p, e.args[0], 0);
      out << " then ";
      emit(out, p, e.args[1], 0);
      out << " else ";
      emit(out, p, e.args[2], 0);
      return;
    default: {
      int prec = precedence(e);
      bool non_assoc = prec == 1;
      emit_child(out, p, e.args[0], non_assoc ? prec + 1 : prec);
      out << " " << binary_operator_token(e.kind) << " ";
      emit_child(out, p, e.args[1], prec + 1);
      return;
    }
  }
}

}  // namespace

std::string format_literal(const Value& v) {
  if (v.is_rational()) return rational_literal(v.as_rational());
  if (v.is_boolean()) return v.as_boolean() ? "true" : "false";
  return quote(v.as_string());
}

std::string format_expr(const Production& p, const Expr& e) {
  std::ostringstream out;
  emit(out, p, e, 0);
  return out.str();
}

std::string format_rule(const Production& p, const AttributionRule& r) {
  return p.occurrence_name(r.target.occurrence) + "." + r.target.attr + " = " +
         format_expr(p, r.expr);
}

std::string format_production_head(const Production& p) {
  std::string out = p.lhs + " ::=";
  for (const Symbol& s : p.rhs) out += " " + (s.terminal ? quote(s.name) : s.name);
  return out;
}

std::string format_grammar(const Grammar& g) {
  std::ostringstream out;
  if (g.skip_whitespace) out << "option skip_whitespace;\n";
  for (const AttributeDecl& d : g.decls) {
    out << "attr " << (d.kind == AttrKind::Synthesized ? "syn" : "inh") << " " << d.name << " : "
        << sort_name(d.sort) << " on ";
    for (std::size_t i = 0; i < d.carriers.size(); ++i) out << (i ? ", " : "") << d.carriers[i];
    out << ";\n";
  }
  if (!g.decls.empty() || g.skip_whitespace) out << "\n";
  for (std::size_t i = 0; i < g.productions.size(); ++i) {
    const Production& p = g.productions[i];
    if (p.id != default_production_id(g, i)) out << p.id << ": ";
    out << format_production_head(p) << " {";
    if (p.rules.empty()) {
      out << "}\n";
      continue;
    }
    out << "\n";
    for (const AttributionRule& r : p.rules) out << "  " << format_rule(p, r) << ";\n";
    out << "}\n";
  }
  return out.str();
}

}  // namespace agdbg
