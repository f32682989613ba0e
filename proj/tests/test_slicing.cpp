#include "agdbg/slicing.hpp"

#include "fixtures.hpp"

#include <doctest.h>

using namespace agdbg;
using namespace agdbg::testing;

namespace {

std::vector<std::string> names(const AttributedTree& at, const std::vector<InstanceId>& ids) {
  std::vector<std::string> out;
  for (InstanceId id : ids) out.push_back(at.instance_name(id));
  return out;
}

const std::vector<std::string> kFig3{"L1.pos", "L2.pos", "B2.pos", "B2.val", "L3.pos",
                                     "B3.pos", "B3.val", "L3.val", "L2.val"};

}  // namespace

TEST_SUITE("slicing") {
  TEST_CASE("slice of L3.pos") {
    AttributedTree at = eval_file("binfrac_buggy.ag", ".011");
    Slice s = dynamic_slice(at.graph, inst(at, "L3.pos"));
    CHECK(names(at, slice_sequence(s, at)) ==
          std::vector<std::string>{"L1.pos", "L2.pos", "L3.pos"});
    CHECK(s.contains(inst(at, "L3.pos")));
    CHECK_FALSE(s.contains(inst(at, "B2.pos")));
  }

  TEST_CASE("slice sequence of L2.val and the four-of-nine cut") {
    AttributedTree at = eval_file("binfrac_buggy.ag", ".011");
    Slice s = dynamic_slice(at.graph, inst(at, "L2.val"));
    CHECK(s.target == inst(at, "L2.val"));
    CHECK(s.members.size() == 9);
    EvaluationSequence seq = slice_sequence(s, at);
    CHECK(names(at, seq) == kFig3);

    Partition p = bisect(seq, 4);
    CHECK(p.cut == 4);
    CHECK(names(at, p.s1) == std::vector<std::string>(kFig3.begin(), kFig3.begin() + 4));
    CHECK(names(at, p.s2) == std::vector<std::string>(kFig3.begin() + 4, kFig3.end()));
    CHECK(names(at, crossing_values(at.graph, p)) ==
          std::vector<std::string>{"L2.pos", "B2.val"});
    CHECK(bisect(seq).cut == 4);  // midpoint of nine
  }

  TEST_CASE("bisection preconditions") {
    AttributedTree at = eval_file("binfrac_buggy.ag", ".011");
    EvaluationSequence seq = slice_sequence(dynamic_slice(at.graph, inst(at, "L3.pos")), at);
    CHECK_THROWS_AS(bisect(seq, 0), std::invalid_argument);
    CHECK_THROWS_AS(bisect(seq, 3), std::invalid_argument);
    CHECK_THROWS_AS(bisect(EvaluationSequence{seq[0]}), std::invalid_argument);
    CHECK_THROWS_AS(dynamic_slice(at.graph, 999), std::out_of_range);
    CHECK_THROWS_AS(dynamic_slice(at.graph, -1), std::out_of_range);
  }

  TEST_CASE("source instances have singleton slices") {
    AttributedTree at = eval_file("binfrac_buggy.ag", ".011");
    Slice s = dynamic_slice(at.graph, inst(at, "L1.pos"));
    CHECK(s.members == std::vector<InstanceId>{inst(at, "L1.pos")});
  }

  TEST_CASE("slice of a failed instance on a partial tree") {
    AttributedTree at = eval_file("average_buggy.ag", "#1");
    Slice s = dynamic_slice(at.graph, *at.failed);
    CHECK(names(at, slice_sequence(s, at)) ==
          std::vector<std::string>{"D1.n", "D1.len", "D1.sum", "D1.mean"});
  }
}
