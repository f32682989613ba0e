// Attribute instances, their dependency graph, and evaluation of an
// attributed parse tree.
#pragma once

#include "agdbg/grammar.hpp"
#include "agdbg/parse_tree.hpp"

#include <compare>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace agdbg {

/// Dense index of an attribute instance. Instances are numbered by
/// ascending (node id, attribute name).
using InstanceId = int;

struct AttributeInstance {
  NodeId node = 0;
  std::string attr;
  AttrKind kind = AttrKind::Synthesized;
};

/// One application of an attribution rule at a parse-tree node.
struct RuleApplication {
  std::size_t production = 0;
  std::size_t rule = 0;
  NodeId node = 0;
  auto operator<=>(const RuleApplication&) const = default;
};

struct DependencyEdge {
  InstanceId from = 0;
  InstanceId to = 0;
  RuleApplication rule;
};

class DependencyGraph {
 public:
  std::size_t size() const { return instances_.size(); }
  const AttributeInstance& instance(InstanceId id) const { return instances_.at(id); }
  const std::vector<AttributeInstance>& instances() const { return instances_; }
  std::optional<InstanceId> find(NodeId node, std::string_view attr) const;

  /// Distinct operands of the rule defining `id`.
  const std::vector<InstanceId>& predecessors(InstanceId id) const { return preds_.at(id); }
  const std::vector<InstanceId>& successors(InstanceId id) const { return succs_.at(id); }
  const std::optional<RuleApplication>& definition(InstanceId id) const { return defs_.at(id); }
  const std::vector<DependencyEdge>& edges() const { return edges_; }
  bool is_inherited(InstanceId id) const { return instances_.at(id).kind == AttrKind::Inherited; }

 private:
  friend DependencyGraph build_dependency_graph(const Grammar& g, const ParseTree& t);
  std::vector<AttributeInstance> instances_;
  std::map<std::pair<NodeId, std::string>, InstanceId, std::less<>> index_;
  std::vector<std::vector<InstanceId>> preds_;
  std::vector<std::vector<InstanceId>> succs_;
  std::vector<std::optional<RuleApplication>> defs_;
  std::vector<DependencyEdge> edges_;
};

/// One edge per distinct operand of each rule application, from operand
/// instance to target instance.
DependencyGraph build_dependency_graph(const Grammar& g, const ParseTree& t);

class CircularityError : public std::runtime_error {
 public:
  CircularityError(std::vector<std::string> cycle);
  const std::vector<std::string>& cycle() const { return cycle_; }

 private:
  std::vector<std::string> cycle_;
};

enum class EvalStatus { Complete, Partial };

struct AttributedTree {
  std::shared_ptr<const Grammar> grammar;
  std::string input;
  ParseTree tree;
  DependencyGraph graph;
  std::vector<Slot> values;
  std::vector<InstanceId> eval_order;
  EvalStatus status = EvalStatus::Complete;
  std::optional<InstanceId> failed;  // first instance whose rule raised an error

  const Slot& value(InstanceId id) const { return values.at(id); }
  /// Position of each instance in `eval_order`.
  std::vector<std::size_t> order_index() const;
  /// `L2.val` style name.
  std::string instance_name(InstanceId id) const;
  /// Throws std::out_of_range when the instance does not exist.
  InstanceId instance(NodeId node, std::string_view attr) const;
  const Production& production_at(NodeId node) const;
  const AttributionRule& rule(const RuleApplication& app) const;
};

/// Topological evaluation with ties broken by ascending instance id. Rule
/// failures are recorded in `values`; dependents of a failure stay
/// unevaluated. Throws CircularityError when the instance graph has a cycle.
AttributedTree evaluate(std::shared_ptr<const Grammar> g, ParseTree t, std::string input = {});

/// Tokenize, parse and evaluate in one step.
AttributedTree attribute_input(std::shared_ptr<const Grammar> g, std::string_view input);

/// Evaluates one expression. Operand values come from `lookup`; throws
/// EvalFailure on arithmetic errors.
Value evaluate_expr(const Expr& e, const std::function<Value(const AttrRef&)>& lookup);

/// Recomputes `target` (an instance inside the subtree rooted at `node`)
/// from the rules of `at.grammar`, with the inherited attributes of `node`
/// fixed to `inherited`. Inherited attributes absent from the map keep their
/// recorded values in `at`.
Slot evaluate_in_subtree(const AttributedTree& at, NodeId node,
                         const std::map<std::string, Slot>& inherited, InstanceId target);

}  // namespace agdbg
