// Synth-function applications and the computation tree built from them.
//
// For a synthesized instance N.s the value is a function of the inherited
// attributes of N it depends on (its premises) and of the subtree rooted at
// N. The computation tree nests these applications: the children of N.s are
// the synthesized instances of N's immediate children that N.s depends on.
#pragma once

#include "agdbg/attribution.hpp"

#include <functional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace agdbg {

struct SynthApplication {
  InstanceId instance = 0;
  NodeId node = 0;
  std::string attr;
  std::vector<std::pair<InstanceId, Value>> premises;
  Value result;
  NodeId subtree = 0;
  /// Rule applications at `node` evaluated on the way from the result to
  /// the premises and the children's results.
  std::set<RuleApplication> region;
  /// Instances defined inside the region other than the result, in
  /// evaluation order.
  std::vector<InstanceId> internal;
  std::vector<SynthApplication> children;  // evaluation order of their results

  /// Number of applications in this subtree, including this one.
  std::size_t size() const;
};

struct ComputationTree {
  SynthApplication root;

  std::size_t size() const { return root.size(); }
  /// Preorder walk.
  void for_each(const std::function<void(const SynthApplication&)>& fn) const;
  const SynthApplication* find(InstanceId instance) const;
};

class ComputationTreeUnavailable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inherited instances of `node` that `node.attr` depends on inside the
/// subtree rooted at `node`, ascending.
std::vector<InstanceId> premise_set(const DependencyGraph& dg, const ParseTree& t, NodeId node,
                                    std::string_view attr);

/// Throws ComputationTreeUnavailable when `root` is not synthesized or has
/// no value (failed or partial evaluation).
ComputationTree build_computation_tree(const AttributedTree& at, InstanceId root);

const std::set<RuleApplication>& responsible_rules(const SynthApplication& app);

}  // namespace agdbg
