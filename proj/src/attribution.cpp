#include "agdbg/attribution.hpp"

#include "agdbg/format.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <set>

namespace agdbg {

std::optional<InstanceId> DependencyGraph::find(NodeId node, std::string_view attr) const {
  auto it = index_.find(std::make_pair(node, std::string(attr)));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

DependencyGraph build_dependency_graph(const Grammar& g, const ParseTree& t) {
  DependencyGraph dg;
  for (const ParseNode& n : t.nodes()) {
    if (n.symbol.terminal) continue;
    for (const AttributeDecl* d : g.attributes_of(n.symbol.name)) {
      InstanceId id = static_cast<InstanceId>(dg.instances_.size());
      dg.instances_.push_back(AttributeInstance{n.id, d->name, d->kind});
      dg.index_.emplace(std::make_pair(n.id, d->name), id);
    }
  }
  dg.preds_.assign(dg.instances_.size(), {});
  dg.succs_.assign(dg.instances_.size(), {});
  dg.defs_.assign(dg.instances_.size(), std::nullopt);
  for (const ParseNode& n : t.nodes()) {
    if (!n.production) continue;
    const Production& p = g.productions.at(*n.production);
    for (std::size_t k = 0; k < p.rules.size(); ++k) {
      const AttributionRule& r = p.rules[k];
      RuleApplication app{*n.production, k, n.id};
      auto target = dg.find(t.occurrence_node(n.id, r.target.occurrence), r.target.attr);
      if (!target) continue;
      dg.defs_[*target] = app;
      std::vector<AttrRef> refs;
      r.expr.collect_refs(refs);
      for (const AttrRef& ref : refs) {
        auto from = dg.find(t.occurrence_node(n.id, ref.occurrence), ref.attr);
        if (!from) continue;
        auto& preds = dg.preds_[*target];
        if (std::find(preds.begin(), preds.end(), *from) != preds.end()) continue;
        preds.push_back(*from);
        dg.succs_[*from].push_back(*target);
        dg.edges_.push_back(DependencyEdge{*from, *target, app});
      }
    }
  }
  return dg;
}

namespace {

std::string join_cycle(const std::vector<std::string>& names) {
  std::string out;
  for (const std::string& n : names) out += (out.empty() ? "" : " -> ") + n;
  return out;
}

std::size_t bit_size(const BigInt& x) {
  if (x == 0) return 0;
  return boost::multiprecision::msb(boost::multiprecision::abs(x)) + 1;
}

constexpr std::size_t kMaxBits = 1u << 16;

Rational checked(Rational r) {
  if (bit_size(numerator(r)) > kMaxBits || bit_size(denominator(r)) > kMaxBits)
    throw EvalFailure("value too large");
  return r;
}

const Rational& need_rational(const Value& v, const char* op) {
  if (!v.is_rational()) throw EvalFailure(std::string("sort mismatch: ") + op + " needs rationals");
  return v.as_rational();
}

Rational power(const Rational& base, const Rational& exponent) {
  if (denominator(exponent) != 1) throw EvalFailure("non-integer exponent " + Value(exponent).to_string());
  BigInt e = numerator(exponent);
  bool negative = e < 0;
  if (negative) e = -e;
  if (base == 0) {
    if (negative) throw EvalFailure("division by zero");
    return e == 0 ? Rational(1) : Rational(0);
  }
  std::size_t base_bits = std::max(bit_size(numerator(base)), bit_size(denominator(base)));
  if (e > BigInt(kMaxBits) || (base_bits > 1 && e * (base_bits - 1) > BigInt(kMaxBits)))
    throw EvalFailure("value too large");
  unsigned exp = e.convert_to<unsigned>();
  BigInt num = boost::multiprecision::pow(numerator(base), exp);
  BigInt den = boost::multiprecision::pow(denominator(base), exp);
  if (negative) std::swap(num, den);
  return checked(Rational(num, den));
}

}  // namespace

CircularityError::CircularityError(std::vector<std::string> cycle)
    : std::runtime_error("circularity: " + join_cycle(cycle)), cycle_(std::move(cycle)) {}

Value evaluate_expr(const Expr& e, const std::function<Value(const AttrRef&)>& lookup) {
  switch (e.kind) {
    case ExprKind::Literal: return e.literal;
    case ExprKind::Ref: return lookup(e.ref);
    case ExprKind::Neg: return Value(Rational(-need_rational(evaluate_expr(e.args[0], lookup), "-")));
    case ExprKind::If: {
      Value c = evaluate_expr(e.args[0], lookup);
      if (!c.is_boolean()) throw EvalFailure("sort mismatch: if condition must be boolean");
      return evaluate_expr(e.args[c.as_boolean() ? 1 : 2], lookup);
    }
    default: break;
  }
  Value a = evaluate_expr(e.args[0], lookup);
  Value b = evaluate_expr(e.args[1], lookup);
  switch (e.kind) {
    case ExprKind::Add: return Value(checked(need_rational(a, "+") + need_rational(b, "+")));
    case ExprKind::Sub: return Value(checked(need_rational(a, "-") - need_rational(b, "-")));
    case ExprKind::Mul: return Value(checked(need_rational(a, "*") * need_rational(b, "*")));
    case ExprKind::Div: {
      const Rational& d = need_rational(b, "/");
      if (d == 0) throw EvalFailure("division by zero");
      return Value(checked(need_rational(a, "/") / d));
    }
    case ExprKind::Pow: return Value(power(need_rational(a, "pow"), need_rational(b, "pow")));
    case ExprKind::Concat:
      if (!a.is_string() || !b.is_string()) throw EvalFailure("sort mismatch: ++ needs strings");
      return Value(a.as_string() + b.as_string());
    case ExprKind::Eq: return Value(a == b);
    case ExprKind::Ne: return Value(!(a == b));
    case ExprKind::Lt:
    case ExprKind::Le:
    case ExprKind::Gt:
    case ExprKind::Ge: {
      int cmp;
      if (a.is_rational() && b.is_rational()) {
        cmp = a.as_rational() < b.as_rational() ? -1 : (a.as_rational() == b.as_rational() ? 0 : 1);
      } else if (a.is_string() && b.is_string()) {
        cmp = a.as_string().compare(b.as_string());
        cmp = cmp < 0 ? -1 : (cmp == 0 ? 0 : 1);
      } else {
        throw EvalFailure("sort mismatch in comparison");
      }
      switch (e.kind) {
        case ExprKind::Lt: return Value(cmp < 0);
        case ExprKind::Le: return Value(cmp <= 0);
        case ExprKind::Gt: return Value(cmp > 0);
        default: return Value(cmp >= 0);
      }
    }
    default: break;
  }
  throw EvalFailure("unsupported expression");
}

namespace {

// Value of the rule defining `id`; operands are read through `slot_of`.
Slot apply_rule(const Grammar& g, const ParseTree& t, const DependencyGraph& dg, InstanceId id,
                const std::function<const Slot&(InstanceId)>& slot_of) {
  const auto& def = dg.definition(id);
  if (!def) return EvalError{"no defining rule"};
  for (InstanceId p : dg.predecessors(id))
    if (!has_value(slot_of(p))) return Unevaluated{};
  const AttributionRule& rule = g.productions.at(def->production).rules.at(def->rule);
  try {
    return evaluate_expr(rule.expr, [&](const AttrRef& ref) -> Value {
      auto operand = dg.find(t.occurrence_node(def->node, ref.occurrence), ref.attr);
      if (!operand) throw EvalFailure("undeclared attribute " + ref.attr);
      return std::get<Value>(slot_of(*operand));
    });
  } catch (const EvalFailure& e) {
    return EvalError{e.what()};
  }
}

}  // namespace

AttributedTree evaluate(std::shared_ptr<const Grammar> g, ParseTree t, std::string input) {
  AttributedTree at;
  at.grammar = std::move(g);
  at.input = std::move(input);
  at.tree = std::move(t);
  at.graph = build_dependency_graph(*at.grammar, at.tree);
  const DependencyGraph& dg = at.graph;
  std::size_t n = dg.size();
  at.values.assign(n, Unevaluated{});

  std::vector<std::size_t> indegree(n);
  std::priority_queue<InstanceId, std::vector<InstanceId>, std::greater<>> ready;
  for (std::size_t i = 0; i < n; ++i) {
    indegree[i] = dg.predecessors(static_cast<InstanceId>(i)).size();
    if (indegree[i] == 0) ready.push(static_cast<InstanceId>(i));
  }
  auto slot_of = [&](InstanceId i) -> const Slot& { return at.values[i]; };
  while (!ready.empty()) {
    InstanceId id = ready.top();
    ready.pop();
    at.eval_order.push_back(id);
    at.values[id] = apply_rule(*at.grammar, at.tree, dg, id, slot_of);
    if (std::holds_alternative<EvalError>(at.values[id]) && !at.failed) at.failed = id;
    for (InstanceId s : dg.successors(id))
      if (--indegree[s] == 0) ready.push(s);
  }

  if (at.eval_order.size() < n) {
    // Every unscheduled instance has an unscheduled predecessor; walking
    // predecessors must revisit an instance.
    InstanceId cur = 0;
    while (indegree[cur] == 0) ++cur;
    std::vector<InstanceId> path;
    std::vector<int> seen_at(n, -1);
    while (seen_at[cur] < 0) {
      seen_at[cur] = static_cast<int>(path.size());
      path.push_back(cur);
      for (InstanceId p : dg.predecessors(cur)) {
        if (indegree[p] > 0) {
          cur = p;
          break;
        }
      }
    }
    std::vector<std::string> cycle;
    for (std::size_t k = path.size(); k-- > static_cast<std::size_t>(seen_at[cur]);)
      cycle.push_back(at.instance_name(path[k]));
    cycle.push_back(at.instance_name(path.back()));
    throw CircularityError(std::move(cycle));
  }

  for (const Slot& s : at.values) {
    if (!has_value(s)) {
      at.status = EvalStatus::Partial;
      break;
    }
  }
  return at;
}

AttributedTree attribute_input(std::shared_ptr<const Grammar> g, std::string_view input) {
  std::vector<Token> toks = tokenize(*g, input);
  ParseTree t = parse_input(*g, toks, input.size());
  return evaluate(std::move(g), std::move(t), std::string(input));
}

std::vector<std::size_t> AttributedTree::order_index() const {
  std::vector<std::size_t> idx(graph.size(), 0);
  for (std::size_t k = 0; k < eval_order.size(); ++k) idx[eval_order[k]] = k;
  return idx;
}

std::string AttributedTree::instance_name(InstanceId id) const {
  const AttributeInstance& inst = graph.instance(id);
  return tree.node_name(inst.node) + "." + inst.attr;
}

InstanceId AttributedTree::instance(NodeId node, std::string_view attr) const {
  auto id = graph.find(node, attr);
  if (!id)
    throw std::out_of_range("no attribute instance " + std::string(attr) + " at node " +
                            std::to_string(node));
  return *id;
}

const Production& AttributedTree::production_at(NodeId node) const {
  return grammar->productions.at(tree.node(node).production.value());
}

const AttributionRule& AttributedTree::rule(const RuleApplication& app) const {
  return grammar->productions.at(app.production).rules.at(app.rule);
}

Slot evaluate_in_subtree(const AttributedTree& at, NodeId node,
                         const std::map<std::string, Slot>& inherited, InstanceId target) {
  const DependencyGraph& dg = at.graph;
  auto is_boundary = [&](InstanceId i) {
    const AttributeInstance& inst = dg.instance(i);
    return inst.node == node && inst.kind == AttrKind::Inherited;
  };
  std::vector<char> needed(dg.size(), 0);
  std::vector<InstanceId> stack{target};
  needed[target] = 1;
  while (!stack.empty()) {
    InstanceId u = stack.back();
    stack.pop_back();
    if (is_boundary(u)) continue;
    for (InstanceId p : dg.predecessors(u)) {
      if (needed[p] || !at.tree.in_subtree(dg.instance(p).node, node)) continue;
      needed[p] = 1;
      stack.push_back(p);
    }
  }
  std::vector<Slot> local(dg.size(), Unevaluated{});
  auto slot_of = [&](InstanceId i) -> const Slot& { return local[i]; };
  for (InstanceId id : at.eval_order) {
    if (!needed[id]) continue;
    if (is_boundary(id)) {
      auto it = inherited.find(dg.instance(id).attr);
      local[id] = it != inherited.end() ? it->second : at.value(id);
    } else {
      local[id] = apply_rule(*at.grammar, at.tree, dg, id, slot_of);
    }
    if (id == target) break;
  }
  return local[target];
}

}  // namespace agdbg
