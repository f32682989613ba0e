#include "agdbg/slicing.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace agdbg {

bool Slice::contains(InstanceId id) const {
  return std::binary_search(members.begin(), members.end(), id);
}

Slice dynamic_slice(const DependencyGraph& dg, InstanceId x) {
  if (x < 0 || static_cast<std::size_t>(x) >= dg.size())
    throw std::out_of_range("unknown attribute instance " + std::to_string(x));
  std::vector<char> seen(dg.size(), 0);
  std::vector<InstanceId> stack{x};
  seen[x] = 1;
  Slice s;
  s.target = x;
  while (!stack.empty()) {
    InstanceId u = stack.back();
    stack.pop_back();
    s.members.push_back(u);
    for (InstanceId p : dg.predecessors(u)) {
      if (seen[p]) continue;
      seen[p] = 1;
      stack.push_back(p);
    }
  }
  std::sort(s.members.begin(), s.members.end());
  return s;
}

EvaluationSequence slice_sequence(const Slice& s, const AttributedTree& at) {
  EvaluationSequence seq;
  seq.reserve(s.members.size());
  for (InstanceId id : at.eval_order)
    if (s.contains(id)) seq.push_back(id);
  return seq;
}

Partition bisect(const EvaluationSequence& seq, std::optional<std::size_t> cut) {
  if (seq.size() < 2) throw std::invalid_argument("sequence too short to bisect");
  std::size_t c = cut.value_or(seq.size() / 2);
  if (c == 0 || c >= seq.size())
    throw std::invalid_argument("cut " + std::to_string(c) + " leaves an empty side");
  Partition p;
  p.cut = c;
  p.s1.assign(seq.begin(), seq.begin() + static_cast<std::ptrdiff_t>(c));
  p.s2.assign(seq.begin() + static_cast<std::ptrdiff_t>(c), seq.end());
  return p;
}

std::vector<InstanceId> crossing_values(const DependencyGraph& dg, const Partition& p) {
  std::unordered_set<InstanceId> second(p.s2.begin(), p.s2.end());
  std::vector<InstanceId> out;
  for (InstanceId id : p.s1) {
    const auto& succ = dg.successors(id);
    if (std::any_of(succ.begin(), succ.end(), [&](InstanceId s) { return second.count(s) > 0; }))
      out.push_back(id);
  }
  return out;
}

}  // namespace agdbg
