#include "agdbg/oracles.hpp"

namespace agdbg {

void check_same_structure(const Grammar& debugged, const Grammar& reference) {
  if (debugged.start != reference.start)
    throw StructuralMismatch("reference grammar has a different start symbol");
  if (debugged.terminals != reference.terminals)
    throw StructuralMismatch("reference grammar has different terminals");
  if (!(debugged.decls == reference.decls))
    throw StructuralMismatch("reference grammar declares different attributes");
  if (debugged.productions.size() != reference.productions.size())
    throw StructuralMismatch("reference grammar has a different number of productions");
  for (std::size_t i = 0; i < debugged.productions.size(); ++i) {
    const Production& a = debugged.productions[i];
    const Production& b = reference.productions[i];
    if (a.id != b.id || a.lhs != b.lhs || a.rhs != b.rhs)
      throw StructuralMismatch("production " + a.id + " differs in the reference grammar");
  }
}

GoldenOracle::GoldenOracle(std::shared_ptr<const Grammar> reference, const AttributedTree& at)
    : at_(at) {
  check_same_structure(*at.grammar, *reference);
  ref_ = evaluate(std::move(reference), at.tree, at.input);
}

Slot GoldenOracle::expected_for(const Query& q) const {
  NodeId context = 0;
  const Premises* premises = nullptr;
  if (const auto* sq = std::get_if<SynthQuery>(&q)) {
    context = sq->node;
    premises = &sq->premises;
  } else {
    const auto& vq = std::get<ValueQuery>(q);
    if (!vq.context) return ref_.value(vq.instance);
    context = *vq.context;
    premises = &vq.premises;
  }
  // Inherited attributes of the context node take the debugged tree's values
  // unless the query fixes them.
  std::map<std::string, Slot> inherited;
  for (InstanceId id = 0; id < static_cast<InstanceId>(at_.graph.size()); ++id) {
    const AttributeInstance& inst = at_.graph.instance(id);
    if (inst.node == context && inst.kind == AttrKind::Inherited && has_value(at_.value(id)))
      inherited[inst.attr] = at_.value(id);
  }
  for (const auto& [id, v] : *premises) inherited[at_.graph.instance(id).attr] = v;
  return evaluate_in_subtree(ref_, context, inherited, query_instance(q));
}

Answer GoldenOracle::answer(const Query& q) {
  Slot shown = std::visit([](const auto& v) -> Slot { return v.shown; }, q);
  Slot want = expected_for(q);
  bool same = (has_value(shown) && has_value(want) &&
               std::get<Value>(shown) == std::get<Value>(want)) ||
              (std::holds_alternative<EvalError>(shown) && std::holds_alternative<EvalError>(want));
  return same ? Answer::correct() : Answer::incorrect();
}

bool GoldenOracle::confirms_symptom(const ValueQuery& q) {
  return answer(q).kind == Answer::Kind::Incorrect;
}

Answer ScriptedOracle::answer(const Query&) {
  if (answers_.empty()) throw ScriptExhausted("answer script exhausted");
  Answer a = answers_.front();
  answers_.pop_front();
  return a;
}

}  // namespace agdbg
