#include "agdbg/validate.hpp"

#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace agdbg {

std::string ValidationReport::to_string() const {
  std::ostringstream out;
  for (const ValidationIssue& i : issues) {
    if (!i.production.empty()) out << "production " << i.production << ": ";
    if (i.span.line > 0) out << "line " << i.span.line << ": ";
    out << i.message << "\n";
  }
  return out.str();
}

namespace {

class Checker {
 public:
  explicit Checker(const Grammar& g) : g_(g) {}

  ValidationReport run() {
    check_decls();
    check_structure();
    for (const Production& p : g_.productions) check_production(p);
    return std::move(report_);
  }

 private:
  void add(IssueKind k, const std::string& prod, SourceSpan span, std::string msg) {
    report_.issues.push_back(ValidationIssue{k, prod, span, std::move(msg)});
  }

  void check_decls() {
    std::set<std::pair<std::string, std::string>> seen;
    for (const AttributeDecl& d : g_.decls) {
      for (const std::string& c : d.carriers) {
        if (!seen.emplace(d.name, c).second)
          add(IssueKind::DeclarationError, "", d.span,
              "attribute " + d.name + " declared more than once on " + c);
        if (!g_.is_nonterminal(c))
          add(IssueKind::DeclarationError, "", d.span,
              "carrier " + c + " of attribute " + d.name + " is not a nonterminal");
        if (c == g_.start && d.kind == AttrKind::Inherited)
          add(IssueKind::DeclarationError, "", d.span,
              "start symbol " + c + " cannot carry inherited attribute " + d.name);
      }
    }
  }

  void check_structure() {
    std::set<std::string> reported;
    for (std::size_t i = 0; i < g_.productions.size(); ++i) {
      const Production& p = g_.productions[i];
      for (const Symbol& s : p.rhs) {
        if (!s.terminal && !g_.is_nonterminal(s.name) && reported.insert(s.name).second)
          add(IssueKind::StructureError, p.id, p.span, "nonterminal " + s.name + " has no production");
      }
      for (std::size_t j = 0; j < i; ++j) {
        const Production& q = g_.productions[j];
        if (q.lhs == p.lhs && q.rhs == p.rhs)
          add(IssueKind::StructureError, p.id, p.span,
              "production repeats the syntax of production " + q.id);
      }
    }
  }

  void check_production(const Production& p) {
    std::map<std::pair<int, std::string>, int> defined;
    for (const AttributionRule& r : p.rules) {
      const std::string occ = p.occurrence_name(r.target.occurrence);
      const std::string sym = p.symbol_at(r.target.occurrence).name;
      const AttributeDecl* d = g_.find_decl(sym, r.target.attr);
      std::optional<Sort> target_sort;
      if (!d) {
        add(IssueKind::OutOfScopeReference, p.id, r.span,
            "attribute " + r.target.attr + " is not declared on " + sym);
      } else {
        target_sort = d->sort;
        if (r.target.occurrence == 0 && d->kind == AttrKind::Inherited)
          add(IssueKind::BadTarget, p.id, r.span,
              "rule defines inherited attribute " + occ + "." + r.target.attr +
                  " of the left-hand side");
        if (r.target.occurrence > 0 && d->kind == AttrKind::Synthesized)
          add(IssueKind::BadTarget, p.id, r.span,
              "rule defines synthesized attribute " + occ + "." + r.target.attr +
                  " of a right-hand-side occurrence");
      }
      if (++defined[{r.target.occurrence, r.target.attr}] == 2)
        add(IssueKind::DuplicateDefinition, p.id, r.span,
            "duplicate definition of " + occ + "." + r.target.attr);
      std::optional<Sort> got = infer(p, r, r.expr);
      if (got && target_sort && *got != *target_sort)
        add(IssueKind::SortError, p.id, r.span,
            "sort error: " + occ + "." + r.target.attr + " is " + sort_name(*target_sort) +
                " but the expression is " + sort_name(*got));
    }
    for (int occ = 0; occ < p.occurrence_count(); ++occ) {
      Symbol s = p.symbol_at(occ);
      if (s.terminal) continue;
      for (const AttributeDecl* d : g_.attributes_of(s.name)) {
        bool needed = (occ == 0) == (d->kind == AttrKind::Synthesized);
        if (!needed || defined.count({occ, d->name})) continue;
        if (occ == 0)
          add(IssueKind::MissingDefinition, p.id, p.span,
              "synthesized attribute " + d->name + " of LHS undefined in production");
        else
          add(IssueKind::MissingDefinition, p.id, p.span,
              "inherited attribute " + d->name + " of " + p.occurrence_name(occ) +
                  " undefined in production");
      }
    }
  }

  std::optional<Sort> infer(const Production& p, const AttributionRule& r, const Expr& e) {
    auto sort_err = [&](const std::string& what) {
      add(IssueKind::SortError, p.id, r.span, "sort error: " + what);
    };
    switch (e.kind) {
      case ExprKind::Literal: return e.literal.sort();
      case ExprKind::Ref: {
        const std::string sym = p.symbol_at(e.ref.occurrence).name;
        const AttributeDecl* d = g_.find_decl(sym, e.ref.attr);
        if (!d) {
          add(IssueKind::OutOfScopeReference, p.id, r.span,
              "reference to undeclared attribute " + p.occurrence_name(e.ref.occurrence) + "." +
                  e.ref.attr);
          return std::nullopt;
        }
        return d->sort;
      }
      case ExprKind::Neg: {
        auto s = infer(p, r, e.args[0]);
        if (s && *s != Sort::Rational) sort_err("unary minus needs a rational operand");
        return Sort::Rational;
      }
      case ExprKind::Add:
      case ExprKind::Sub:
      case ExprKind::Mul:
      case ExprKind::Div:
      case ExprKind::Pow: {
        auto a = infer(p, r, e.args[0]);
        auto b = infer(p, r, e.args[1]);
        if ((a && *a != Sort::Rational) || (b && *b != Sort::Rational))
          sort_err(std::string("operator ") +
                   (e.kind == ExprKind::Pow ? "pow" : binary_operator_token(e.kind)) +
                   " needs rational operands");
        return Sort::Rational;
      }
      case ExprKind::Concat: {
        auto a = infer(p, r, e.args[0]);
        auto b = infer(p, r, e.args[1]);
        if ((a && *a != Sort::String) || (b && *b != Sort::String))
          sort_err("operator ++ needs string operands");
        return Sort::String;
      }
      case ExprKind::Eq:
      case ExprKind::Ne: {
        auto a = infer(p, r, e.args[0]);
        auto b = infer(p, r, e.args[1]);
        if (a && b && *a != *b) sort_err("comparison of different sorts");
        return Sort::Boolean;
      }
      case ExprKind::Lt:
      case ExprKind::Le:
      case ExprKind::Gt:
      case ExprKind::Ge: {
        auto a = infer(p, r, e.args[0]);
        auto b = infer(p, r, e.args[1]);
        if ((a && *a == Sort::Boolean) || (b && *b == Sort::Boolean) || (a && b && *a != *b))
          sort_err("ordering comparison needs two rationals or two strings");
        return Sort::Boolean;
      }
      case ExprKind::If: {
        auto c = infer(p, r, e.args[0]);
        auto t = infer(p, r, e.args[1]);
        auto f = infer(p, r, e.args[2]);
        if (c && *c != Sort::Boolean) sort_err("if condition must be boolean");
        if (t && f && *t != *f) sort_err("if branches have different sorts");
        return t ? t : f;
      }
    }
    return std::nullopt;
  }

  const Grammar& g_;
  ValidationReport report_;
};

}  // namespace

ValidationReport validate_grammar(const Grammar& g) { return Checker(g).run(); }

}  // namespace agdbg
