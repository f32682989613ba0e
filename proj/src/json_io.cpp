#include "agdbg/json_io.hpp"

#include "agdbg/format.hpp"

#include <cctype>
#include <limits>

namespace agdbg {

namespace {

json integer_to_json(const BigInt& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max())
    return static_cast<std::int64_t>(v);
  return v.str();
}

BigInt integer_from_json(const json& j) {
  if (j.is_number_integer()) return BigInt(j.get<std::int64_t>());
  if (j.is_string()) {
    const std::string& s = j.get_ref<const std::string&>();
    std::size_t start = !s.empty() && s[0] == '-' ? 1 : 0;
    if (start == s.size()) throw std::invalid_argument("malformed integer");
    for (std::size_t i = start; i < s.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(s[i])))
        throw std::invalid_argument("malformed integer '" + s + "'");
    // Leading zeros would otherwise select octal.
    std::size_t nz = s.find_first_not_of('0', start);
    if (nz == std::string::npos) return BigInt(0);
    BigInt v(s.substr(nz));
    return start == 1 ? BigInt(-v) : v;
  }
  throw std::invalid_argument("expected an integer");
}

json rule_coord(const RuleApplication& r) {
  return {{"production", r.production}, {"ruleIndex", r.rule}, {"nodeId", r.node}};
}

json premises_to_json(const AttributedTree& at, const Premises& ps) {
  json out = json::array();
  for (const auto& [id, v] : ps)
    out.push_back({{"instance", instance_to_json(at, id)}, {"value", value_to_json(v)}});
  return out;
}

}  // namespace

json value_to_json(const Value& v) {
  if (v.is_boolean()) return v.as_boolean();
  if (v.is_string()) return v.as_string();
  const Rational& r = v.as_rational();
  return {{"num", integer_to_json(numerator(r))}, {"den", integer_to_json(denominator(r))}};
}

Value value_from_json(const json& j) {
  if (j.is_boolean()) return Value(j.get<bool>());
  if (j.is_string()) return Value(j.get<std::string>());
  if (j.is_number_integer()) return Value(Rational(j.get<std::int64_t>()));
  if (j.is_object() && j.contains("num") && j.contains("den")) {
    BigInt den = integer_from_json(j.at("den"));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Value(Rational(integer_from_json(j.at("num")), den));
  }
  throw std::invalid_argument("malformed value " + j.dump());
}

json slot_to_json(const Slot& s) {
  if (const auto* v = std::get_if<Value>(&s)) return value_to_json(*v);
  if (const auto* e = std::get_if<EvalError>(&s)) return {{"error", e->message}};
  return nullptr;
}

json span_to_json(const InputSpan& s) { return {{"begin", s.begin}, {"end", s.end}}; }

json source_span_to_json(const SourceSpan& s) {
  return {{"line", s.line},
          {"column", s.column},
          {"endLine", s.end_line},
          {"endColumn", s.end_column}};
}

json instance_to_json(const AttributedTree& at, InstanceId id) {
  const AttributeInstance& inst = at.graph.instance(id);
  return {{"id", id}, {"node", inst.node}, {"attr", inst.attr}, {"name", at.instance_name(id)}};
}

json tree_to_json(const AttributedTree& at) {
  json nodes = json::array();
  for (const ParseNode& n : at.tree.nodes()) {
    json attrs = json::object();
    for (InstanceId id = 0; id < static_cast<InstanceId>(at.graph.size()); ++id) {
      const AttributeInstance& inst = at.graph.instance(id);
      if (inst.node != n.id) continue;
      // The dump marks failures only; `failed` below carries the message.
      const Slot& slot = at.value(id);
      attrs[inst.attr] = std::holds_alternative<EvalError>(slot) ? json("<error>") : slot_to_json(slot);
    }
    json jn = {{"id", n.id},
               {"symbol", n.symbol.name},
               {"terminal", n.symbol.terminal},
               {"name", at.tree.node_name(n.id)},
               {"span", span_to_json(n.span)},
               {"children", n.children},
               {"attrs", std::move(attrs)}};
    jn["production"] = n.production ? json(at.grammar->productions[*n.production].id) : json(nullptr);
    nodes.push_back(std::move(jn));
  }
  json order = json::array();
  for (InstanceId id : at.eval_order) {
    const AttributeInstance& inst = at.graph.instance(id);
    order.push_back(json::array({inst.node, inst.attr}));
  }
  json out = {{"input", at.input},
              {"nodes", std::move(nodes)},
              {"evalOrder", std::move(order)},
              {"status", at.status == EvalStatus::Complete ? "complete" : "partial"}};
  if (at.failed) {
    out["failed"] = instance_to_json(at, *at.failed);
    out["failed"]["error"] = std::get<EvalError>(at.value(*at.failed)).message;
  }
  return out;
}

json slice_to_json(const AttributedTree& at, const Slice& s) {
  json members = json::array();
  for (InstanceId id : s.members) members.push_back(instance_to_json(at, id));
  json seq = json::array();
  for (InstanceId id : slice_sequence(s, at)) seq.push_back(at.instance_name(id));
  json edges = json::array();
  for (const DependencyEdge& e : at.graph.edges())
    if (s.contains(e.from) && s.contains(e.to))
      edges.push_back({{"from", at.instance_name(e.from)},
                       {"to", at.instance_name(e.to)},
                       {"rule", rule_coord(e.rule)}});
  return {{"target", instance_to_json(at, s.target)},
          {"members", std::move(members)},
          {"sequence", std::move(seq)},
          {"edges", std::move(edges)}};
}

json synth_application_to_json(const AttributedTree& at, const SynthApplication& app) {
  json region = json::array();
  for (const RuleApplication& r : app.region) region.push_back(rule_coord(r));
  json internal = json::array();
  for (InstanceId id : app.internal) internal.push_back(at.instance_name(id));
  json children = json::array();
  for (const SynthApplication& c : app.children)
    children.push_back(synth_application_to_json(at, c));
  return {{"instance", instance_to_json(at, app.instance)},
          {"node", app.node},
          {"attr", app.attr},
          {"premises", premises_to_json(at, app.premises)},
          {"result", value_to_json(app.result)},
          {"subtree", app.subtree},
          {"span", span_to_json(at.tree.node(app.node).span)},
          {"region", std::move(region)},
          {"internal", std::move(internal)},
          {"children", std::move(children)}};
}

json computation_tree_to_json(const AttributedTree& at, const ComputationTree& ct) {
  return {{"size", ct.size()}, {"root", synth_application_to_json(at, ct.root)}};
}

json rule_application_to_json(const AttributedTree& at, const RuleApplication& r) {
  const Production& p = at.grammar->productions.at(r.production);
  const AttributionRule& rule = p.rules.at(r.rule);
  json j = rule_coord(r);
  j["production"] = p.id;
  j["span"] = span_to_json(at.tree.node(r.node).span);
  j["ruleSpan"] = source_span_to_json(rule.span);
  j["text"] = format_rule(p, rule);
  j["node"] = at.tree.node_name(r.node);
  return j;
}

json diagnosis_to_json(const AttributedTree& at, const Diagnosis& d) {
  json cands = json::array();
  for (const RuleApplication& r : d.candidates) cands.push_back(rule_application_to_json(at, r));
  return {{"candidates", std::move(cands)},
          {"certainty", d.certainty == Certainty::Exact ? "exact" : "candidateSet"},
          {"queriesAsked", d.queries_asked()}};
}

json query_to_json(const AttributedTree& at, const Query& q) {
  if (const auto* sq = std::get_if<SynthQuery>(&q)) {
    return {{"kind", "synth"},
            {"instance", instance_to_json(at, sq->instance)},
            {"shown", value_to_json(sq->shown)},
            {"premises", premises_to_json(at, sq->premises)},
            {"span", span_to_json(sq->span)}};
  }
  const auto& vq = std::get<ValueQuery>(q);
  json j = {{"kind", "value"},
            {"instance", instance_to_json(at, vq.instance)},
            {"shown", slot_to_json(vq.shown)},
            {"span", span_to_json(vq.span)}};
  if (vq.context) {
    j["context"] = *vq.context;
    j["premises"] = premises_to_json(at, vq.premises);
  }
  return j;
}

json answer_to_json(const AttributedTree& at, const Answer& a) {
  if (a.kind == Answer::Kind::PremiseWrong)
    return {{"kind", "premiseWrong"}, {"premise", at.instance_name(a.premise)}};
  return answer_kind_name(a.kind);
}

Answer answer_from_json(const AttributedTree& at, const json& j) {
  std::string kind;
  if (j.is_string()) {
    kind = j.get<std::string>();
  } else if (j.is_object() && j.contains("kind") && j.at("kind").is_string()) {
    kind = j.at("kind").get<std::string>();
  } else {
    throw std::invalid_argument("malformed answer " + j.dump());
  }
  if (kind == "correct") return Answer::correct();
  if (kind == "incorrect") return Answer::incorrect();
  if (kind == "unknown") return Answer::unknown();
  if (kind == "premiseWrong") {
    if (!j.is_object() || !j.contains("premise"))
      throw std::invalid_argument("premiseWrong needs a premise");
    const json& p = j.at("premise");
    if (p.is_number_integer()) {
      auto id = p.get<std::int64_t>();
      if (id < 0 || static_cast<std::size_t>(id) >= at.graph.size())
        throw std::invalid_argument("unknown premise instance");
      return Answer::premise_wrong(static_cast<InstanceId>(id));
    }
    if (p.is_string()) return Answer::premise_wrong(parse_instance_address(at, p.get<std::string>()));
    throw std::invalid_argument("malformed premise");
  }
  throw std::invalid_argument("unknown answer '" + kind + "'");
}

json transcript_to_json(const AttributedTree& at, const std::vector<TranscriptEntry>& t) {
  json out = json::array();
  for (const TranscriptEntry& e : t)
    out.push_back({{"query", query_to_json(at, e.query)},
                   {"answer", answer_to_json(at, e.answer)},
                   {"timestamp", e.timestamp_ms}});
  return out;
}

namespace {

std::optional<InstanceId> find_named(const AttributedTree& at, std::string_view node_name,
                                     std::string_view attr) {
  for (const ParseNode& n : at.tree.nodes())
    if (!n.symbol.terminal && at.tree.node_name(n.id) == node_name) return at.graph.find(n.id, attr);
  return std::nullopt;
}

std::optional<int> parse_int(std::string_view s) {
  if (s.empty() || s.size() > 9) return std::nullopt;
  int v = 0;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    v = v * 10 + (c - '0');
  }
  return v;
}

}  // namespace

InstanceId parse_instance_address(const AttributedTree& at, std::string_view text) {
  auto fail = [&]() -> InstanceId {
    throw std::invalid_argument("no attribute instance '" + std::string(text) + "'");
  };
  std::optional<InstanceId> found;
  if (auto at_sign = text.find('@'); at_sign != std::string_view::npos) {
    // [Symbol.]attr@[node]N
    std::string_view lhs = text.substr(0, at_sign);
    std::string_view rhs = text.substr(at_sign + 1);
    if (rhs.substr(0, 4) == "node") rhs.remove_prefix(4);
    auto node = parse_int(rhs);
    if (!node || *node < 1 || static_cast<std::size_t>(*node) > at.tree.size()) return fail();
    std::string_view attr = lhs;
    if (auto dot = lhs.rfind('.'); dot != std::string_view::npos) {
      if (at.tree.node(*node).symbol.name != lhs.substr(0, dot)) return fail();
      attr = lhs.substr(dot + 1);
    }
    found = at.graph.find(*node, attr);
  } else if (auto dot = text.rfind('.'); dot != std::string_view::npos) {
    std::string_view head = text.substr(0, dot);
    std::string_view attr = text.substr(dot + 1);
    if (auto lb = head.find('['); lb != std::string_view::npos && head.back() == ']') {
      std::string name(head.substr(0, lb));
      auto k = parse_int(head.substr(lb + 1, head.size() - lb - 2));
      if (!k) return fail();
      found = find_named(at, name + std::to_string(*k), attr);
    } else {
      found = find_named(at, head, attr);
    }
  }
  if (!found) return fail();
  return *found;
}

}  // namespace agdbg
