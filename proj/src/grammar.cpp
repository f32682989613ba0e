#include "agdbg/grammar.hpp"

#include <algorithm>
#include <cctype>

namespace agdbg {

const char* binary_operator_token(ExprKind k) {
  switch (k) {
    case ExprKind::Add: return "+";
    case ExprKind::Sub: return "-";
    case ExprKind::Mul: return "*";
    case ExprKind::Div: return "/";
    case ExprKind::Concat: return "++";
    case ExprKind::Eq: return "==";
    case ExprKind::Ne: return "!=";
    case ExprKind::Lt: return "<";
    case ExprKind::Le: return "<=";
    case ExprKind::Gt: return ">";
    case ExprKind::Ge: return ">=";
    default: return "";
  }
}

bool is_comparison(ExprKind k) {
  return k == ExprKind::Eq || k == ExprKind::Ne || k == ExprKind::Lt || k == ExprKind::Le ||
         k == ExprKind::Gt || k == ExprKind::Ge;
}

bool is_arithmetic(ExprKind k) {
  return k == ExprKind::Add || k == ExprKind::Sub || k == ExprKind::Mul || k == ExprKind::Div;
}

Expr Expr::make_literal(Value v) {
  Expr e;
  e.kind = ExprKind::Literal;
  e.literal = std::move(v);
  return e;
}

Expr Expr::make_ref(AttrRef r) {
  Expr e;
  e.kind = ExprKind::Ref;
  e.ref = std::move(r);
  return e;
}

Expr Expr::make_unary(ExprKind k, Expr operand) {
  Expr e;
  e.kind = k;
  e.args.push_back(std::move(operand));
  return e;
}

Expr Expr::make_binary(ExprKind k, Expr lhs, Expr rhs) {
  Expr e;
  e.kind = k;
  e.args.push_back(std::move(lhs));
  e.args.push_back(std::move(rhs));
  return e;
}

Expr Expr::make_if(Expr cond, Expr then_branch, Expr else_branch) {
  Expr e;
  e.kind = ExprKind::If;
  e.args.push_back(std::move(cond));
  e.args.push_back(std::move(then_branch));
  e.args.push_back(std::move(else_branch));
  return e;
}

void Expr::collect_refs(std::vector<AttrRef>& out) const {
  if (kind == ExprKind::Ref) {
    out.push_back(ref);
    return;
  }
  for (const Expr& a : args) a.collect_refs(out);
}

Symbol Production::symbol_at(int occurrence) const {
  if (occurrence == 0) return Symbol{false, lhs};
  return rhs.at(static_cast<std::size_t>(occurrence - 1));
}

namespace {

int count_nonterminal(const Production& p, std::string_view name) {
  int n = p.lhs == name ? 1 : 0;
  for (const Symbol& s : p.rhs)
    if (!s.terminal && s.name == name) ++n;
  return n;
}

}  // namespace

std::string Production::occurrence_name(int occurrence) const {
  std::string name = occurrence == 0 ? lhs : rhs.at(occurrence - 1).name;
  if (count_nonterminal(*this, name) == 1) return name;
  if (occurrence == 0) return name + "0";
  int index = 1;
  for (int k = 1; k < occurrence; ++k)
    if (!rhs[k - 1].terminal && rhs[k - 1].name == name) ++index;
  return name + std::to_string(index);
}

std::optional<int> Production::resolve_occurrence(std::string_view name) const {
  int occurrences = count_nonterminal(*this, name);
  if (occurrences == 1) {
    if (lhs == name) return 0;
    for (std::size_t k = 0; k < rhs.size(); ++k)
      if (!rhs[k].terminal && rhs[k].name == name) return static_cast<int>(k) + 1;
  }
  if (occurrences > 1)
    throw std::invalid_argument("ambiguous occurrence '" + std::string(name) +
                                "'; use an indexed name such as " + std::string(name) + "0");
  if (name.size() < 2 || !std::isdigit(static_cast<unsigned char>(name.back()))) return std::nullopt;
  std::string_view base = name.substr(0, name.size() - 1);
  int index = name.back() - '0';
  if (count_nonterminal(*this, base) == 0) return std::nullopt;
  if (index == 0) {
    if (lhs == base) return 0;
    return std::nullopt;
  }
  int seen = 0;
  for (std::size_t k = 0; k < rhs.size(); ++k) {
    if (!rhs[k].terminal && rhs[k].name == base && ++seen == index) return static_cast<int>(k) + 1;
  }
  return std::nullopt;
}

bool Grammar::is_nonterminal(std::string_view name) const {
  return std::any_of(productions.begin(), productions.end(),
                     [&](const Production& p) { return p.lhs == name; });
}

const AttributeDecl* Grammar::find_decl(std::string_view symbol, std::string_view attr) const {
  for (const AttributeDecl& d : decls) {
    if (d.name != attr) continue;
    if (std::find(d.carriers.begin(), d.carriers.end(), symbol) != d.carriers.end()) return &d;
  }
  return nullptr;
}

std::vector<const AttributeDecl*> Grammar::attributes_of(std::string_view symbol) const {
  std::vector<const AttributeDecl*> out;
  for (const AttributeDecl& d : decls) {
    if (std::find(d.carriers.begin(), d.carriers.end(), symbol) == d.carriers.end()) continue;
    bool dup = std::any_of(out.begin(), out.end(),
                           [&](const AttributeDecl* o) { return o->name == d.name; });
    if (!dup) out.push_back(&d);
  }
  std::sort(out.begin(), out.end(),
            [](const AttributeDecl* a, const AttributeDecl* b) { return a->name < b->name; });
  return out;
}

std::optional<std::size_t> Grammar::production_index(std::string_view id) const {
  for (std::size_t i = 0; i < productions.size(); ++i)
    if (productions[i].id == id) return i;
  return std::nullopt;
}

void Grammar::collect_terminals() {
  terminals.clear();
  for (const Production& p : productions)
    for (const Symbol& s : p.rhs)
      if (s.terminal) terminals.insert(s.name);
}

std::string default_production_id(const Grammar& g, std::size_t production_index) {
  const std::string& lhs = g.productions.at(production_index).lhs;
  int ordinal = 0;
  for (std::size_t i = 0; i <= production_index; ++i)
    if (g.productions[i].lhs == lhs) ++ordinal;
  return lhs + "_" + std::to_string(ordinal);
}

}  // namespace agdbg
