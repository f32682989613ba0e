// Dynamic slices over the attribute dependency graph, ordered slice
// sequences, and their bisection.
#pragma once

#include "agdbg/attribution.hpp"

#include <optional>
#include <vector>

namespace agdbg {

struct Slice {
  InstanceId target = 0;
  std::vector<InstanceId> members;  // ascending ids, includes target

  bool contains(InstanceId id) const;
};

/// A subsequence of the evaluation order.
using EvaluationSequence = std::vector<InstanceId>;

struct Partition {
  EvaluationSequence s1;
  EvaluationSequence s2;
  std::size_t cut = 0;
};

/// `x` together with every instance it depends on, directly or indirectly.
/// Throws std::out_of_range for an unknown instance.
Slice dynamic_slice(const DependencyGraph& dg, InstanceId x);

/// Evaluation order of `at` restricted to the slice members.
EvaluationSequence slice_sequence(const Slice& s, const AttributedTree& at);

/// Splits `seq` after `cut` entries (default: floor(size / 2)). Throws
/// std::invalid_argument when the sequence has fewer than two entries or the
/// cut leaves one side empty.
Partition bisect(const EvaluationSequence& seq, std::optional<std::size_t> cut = std::nullopt);

/// Instances of `p.s1` with at least one dependency edge into `p.s2`, in
/// s1 order.
std::vector<InstanceId> crossing_values(const DependencyGraph& dg, const Partition& p);

}  // namespace agdbg
