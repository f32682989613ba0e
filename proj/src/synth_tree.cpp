#include "agdbg/synth_tree.hpp"

#include <algorithm>
#include <map>

namespace agdbg {

std::size_t SynthApplication::size() const {
  std::size_t n = 1;
  for (const SynthApplication& c : children) n += c.size();
  return n;
}

void ComputationTree::for_each(const std::function<void(const SynthApplication&)>& fn) const {
  std::vector<const SynthApplication*> stack{&root};
  while (!stack.empty()) {
    const SynthApplication* a = stack.back();
    stack.pop_back();
    fn(*a);
    for (auto it = a->children.rbegin(); it != a->children.rend(); ++it) stack.push_back(&*it);
  }
}

const SynthApplication* ComputationTree::find(InstanceId instance) const {
  const SynthApplication* found = nullptr;
  for_each([&](const SynthApplication& a) {
    if (!found && a.instance == instance) found = &a;
  });
  return found;
}

std::vector<InstanceId> premise_set(const DependencyGraph& dg, const ParseTree& t, NodeId node,
                                    std::string_view attr) {
  auto start = dg.find(node, attr);
  if (!start) return {};
  std::vector<char> seen(dg.size(), 0);
  std::vector<InstanceId> stack{*start};
  seen[*start] = 1;
  std::vector<InstanceId> out;
  while (!stack.empty()) {
    InstanceId u = stack.back();
    stack.pop_back();
    const AttributeInstance& inst = dg.instance(u);
    if (inst.node == node && inst.kind == AttrKind::Inherited) {
      out.push_back(u);
      continue;
    }
    for (InstanceId p : dg.predecessors(u)) {
      if (seen[p] || !t.in_subtree(dg.instance(p).node, node)) continue;
      seen[p] = 1;
      stack.push_back(p);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

class Builder {
 public:
  explicit Builder(const AttributedTree& at) : at_(at), order_(at.order_index()) {}

  SynthApplication build(InstanceId id) {
    const DependencyGraph& dg = at_.graph;
    const AttributeInstance& inst = dg.instance(id);
    SynthApplication app;
    app.instance = id;
    app.node = inst.node;
    app.attr = inst.attr;
    app.subtree = inst.node;
    app.result = value_of(id);
    for (InstanceId p : premise_set(dg, at_.tree, inst.node, inst.attr))
      app.premises.emplace_back(p, value_of(p));

    std::vector<char> visited(dg.size(), 0);
    std::vector<InstanceId> stack{id};
    visited[id] = 1;
    std::vector<InstanceId> child_results;
    auto push = [&](InstanceId u) {
      if (!visited[u]) {
        visited[u] = 1;
        stack.push_back(u);
      }
    };
    while (!stack.empty()) {
      InstanceId u = stack.back();
      stack.pop_back();
      const auto& def = dg.definition(u);
      if (!def) continue;
      app.region.insert(*def);
      if (u != id) app.internal.push_back(u);
      for (InstanceId p : dg.predecessors(u)) {
        const AttributeInstance& pi = dg.instance(p);
        if (pi.node == app.node) {
          // Inherited attributes of N are premises; other synthesized
          // attributes of N are computed at N.
          if (pi.kind == AttrKind::Synthesized) push(p);
          continue;
        }
        if (pi.kind == AttrKind::Inherited) {
          push(p);
          continue;
        }
        if (visited[p]) continue;
        visited[p] = 1;
        child_results.push_back(p);
        // The child's premises are defined here, at N.
        for (InstanceId q : premise_set(dg, at_.tree, pi.node, pi.attr)) push(q);
      }
    }
    auto by_order = [&](InstanceId a, InstanceId b) { return order_[a] < order_[b]; };
    std::sort(app.internal.begin(), app.internal.end(), by_order);
    std::sort(child_results.begin(), child_results.end(), by_order);
    for (InstanceId c : child_results) app.children.push_back(build(c));
    return app;
  }

 private:
  Value value_of(InstanceId id) const {
    const Slot& s = at_.value(id);
    if (!has_value(s))
      throw ComputationTreeUnavailable("computation tree unavailable: " + at_.instance_name(id) +
                                       " has no value");
    return std::get<Value>(s);
  }

  const AttributedTree& at_;
  std::vector<std::size_t> order_;
};

}  // namespace

ComputationTree build_computation_tree(const AttributedTree& at, InstanceId root) {
  if (root < 0 || static_cast<std::size_t>(root) >= at.graph.size())
    throw std::out_of_range("unknown attribute instance");
  if (at.graph.is_inherited(root))
    throw ComputationTreeUnavailable("computation tree unavailable: " + at.instance_name(root) +
                                     " is not a synthesized attribute");
  if (!has_value(at.value(root)))
    throw ComputationTreeUnavailable("computation tree unavailable: " + at.instance_name(root) +
                                     " was not evaluated");
  return ComputationTree{Builder(at).build(root)};
}

const std::set<RuleApplication>& responsible_rules(const SynthApplication& app) {
  return app.region;
}

}  // namespace agdbg
