#include "agdbg/debugger.hpp"
#include "agdbg/format.hpp"
#include "agdbg/oracles.hpp"

#include "fixtures.hpp"

#include <doctest.h>

using namespace agdbg;
using namespace agdbg::testing;

namespace {

const char* const kBugRule = "B.pos = L0.pos + 1";

std::string text(const AttributedTree& at, const RuleApplication& r) {
  return format_rule(at.grammar->productions[r.production], at.rule(r));
}

std::vector<std::string> asked(const AttributedTree& at, const Diagnosis& d) {
  std::vector<std::string> out;
  for (const TranscriptEntry& e : d.transcript) {
    std::string kind = std::holds_alternative<SynthQuery>(e.query) ? "S " : "V ";
    out.push_back(kind + at.instance_name(query_instance(e.query)) + " " +
                  answer_kind_name(e.answer.kind));
  }
  return out;
}

std::vector<std::string> candidates(const AttributedTree& at, const Diagnosis& d) {
  std::vector<std::string> out;
  for (const RuleApplication& r : d.candidates) out.push_back(text(at, r));
  return out;
}

struct Fixture {
  AttributedTree at = eval_file("binfrac_buggy.ag", ".011");
  GoldenOracle golden{load_grammar("binfrac_fixed.ag"), at};
};

}  // namespace

TEST_SUITE("debugger") {
  TEST_CASE("algorithmic walkthrough") {
    Fixture f;
    Diagnosis d = algorithmic_debug(f.at, inst(f.at, "L2.val"), f.golden);
    CHECK(asked(f.at, d) == std::vector<std::string>{"S L2.val incorrect", "S B2.val correct",
                                                     "S L3.val correct"});
    CHECK(d.queries_asked() == 3);
    CHECK(d.certainty == Certainty::CandidateSet);
    CHECK(candidates(f.at, d) ==
          std::vector<std::string>{"B.pos = L0.pos + 1", "L1.pos = L0.pos + 1",
                                   "L0.val = B.val + L1.val"});
    const auto& q = std::get<SynthQuery>(d.transcript[0].query);
    CHECK(q.shown == Value(Rational(1, 4)));
    CHECK(q.span == InputSpan{2, 4});
    REQUIRE(q.premises.size() == 1);
    CHECK(q.premises[0].second == Value::integer(2));
  }

  TEST_CASE("algorithmic walkthrough with refinement") {
    Fixture f;
    AlgorithmicOptions opts;
    opts.refine = true;
    Diagnosis d = algorithmic_debug(f.at, inst(f.at, "L2.val"), f.golden, opts);
    CHECK(asked(f.at, d) == std::vector<std::string>{"S L2.val incorrect", "S B2.val correct",
                                                     "S L3.val correct", "V B2.pos incorrect"});
    CHECK(d.certainty == Certainty::Exact);
    REQUIRE(d.candidates.size() == 1);
    CHECK(text(f.at, d.candidates[0]) == kBugRule);
    CHECK(d.candidates[0].node == 6);
    const auto& vq = std::get<ValueQuery>(d.transcript[3].query);
    CHECK(vq.context == 6);
    CHECK(vq.shown == Slot{Value::integer(3)});
  }

  TEST_CASE("algorithmic debugging from the root, both strategies") {
    Fixture f;
    InstanceId root = default_root_symptom(f.at);
    CHECK(f.at.instance_name(root) == "F1.val");
    Diagnosis top = algorithmic_debug(f.at, root, f.golden);
    CHECK(asked(f.at, top) ==
          std::vector<std::string>{"S F1.val incorrect", "S L1.val incorrect", "S B1.val correct",
                                   "S L2.val incorrect", "S B2.val correct", "S L3.val correct"});
    AlgorithmicOptions dq;
    dq.strategy = Strategy::DivideAndQuery;
    Diagnosis d = algorithmic_debug(f.at, root, f.golden, dq);
    CHECK(asked(f.at, d) ==
          std::vector<std::string>{"S F1.val incorrect", "S L1.val incorrect", "S L2.val incorrect",
                                   "S L3.val correct", "S B2.val correct"});
    CHECK(d.candidates == top.candidates);
  }

  TEST_CASE("no symptom on the fixed grammar") {
    AttributedTree at = eval_file("binfrac_fixed.ag", ".011");
    GoldenOracle golden(load_grammar("binfrac_fixed.ag"), at);
    CHECK_THROWS_AS(algorithmic_debug(at, default_root_symptom(at), golden), NoSymptomError);
    CHECK_THROWS_AS(slice_debug(at, inst(at, "L2.val"), golden), SymptomNotIncorrectError);
  }

  TEST_CASE("slice walkthrough with the four-of-nine cut") {
    Fixture f;
    Diagnosis d = slice_debug(f.at, inst(f.at, "L2.val"), f.golden, SliceOptions{4});
    CHECK(asked(f.at, d) == std::vector<std::string>{"V B2.val incorrect", "V L2.pos correct",
                                                     "V B2.pos incorrect"});
    CHECK(d.certainty == Certainty::Exact);
    REQUIRE(d.candidates.size() == 1);
    CHECK(text(f.at, d.candidates[0]) == kBugRule);
    CHECK(std::get<ValueQuery>(d.transcript[0].query).shown == Slot{Value(Rational(1, 8))});
    // The midpoint of nine is the same cut.
    CHECK(slice_debug(f.at, inst(f.at, "L2.val"), f.golden).transcript.size() == 3);
  }

  TEST_CASE("slice engine state between answers") {
    Fixture f;
    SliceDebugger s(f.at, inst(f.at, "L2.val"), SliceOptions{4});
    CHECK(s.sequence().size() == 9);
    CHECK(s.excluded().empty());
    REQUIRE(s.pending());
    s.answer(Answer::incorrect());
    CHECK(s.sequence().size() == 4);
    CHECK(s.excluded().size() == 5);
    s.answer(Answer::correct());
    CHECK(f.at.instance_name(query_instance(*s.pending())) == "B2.pos");
    CHECK(s.sequence().size() == 2);
    s.answer(Answer::incorrect());
    CHECK(s.finished());
    CHECK_FALSE(s.pending());
    CHECK(s.rounds() == 3);
    CHECK_THROWS_AS(s.answer(Answer::correct()), std::logic_error);
  }

  TEST_CASE("singleton slice needs no queries") {
    Fixture f;
    FunctionOracle oracle([](const Query&) { return Answer::incorrect(); });
    Diagnosis d = slice_debug(f.at, inst(f.at, "L1.pos"), oracle);
    CHECK(d.transcript.empty());
    CHECK(d.certainty == Certainty::Exact);
    CHECK(text(f.at, d.candidates[0]) == "L.pos = 1");
  }

  TEST_CASE("slice debugging on a partial tree") {
    AttributedTree at = eval_file("average_buggy.ag", "#1");
    GoldenOracle golden(load_grammar("average_fixed.ag"), at);
    Diagnosis d = slice_debug(at, *at.failed, golden);
    CHECK(asked(at, d) == std::vector<std::string>{"V D1.len incorrect", "V D1.n incorrect"});
    REQUIRE(d.candidates.size() == 1);
    CHECK(text(at, d.candidates[0]) == "D.n = 0");
    CHECK_THROWS_AS(AlgorithmicDebugger(at, inst(at, "S1.val")), ComputationTreeUnavailable);
  }

  TEST_CASE("unknown answers defer children") {
    Fixture f;
    ScriptedOracle script({Answer::incorrect(), Answer::unknown(), Answer::correct()});
    Diagnosis d = algorithmic_debug(f.at, inst(f.at, "L2.val"), script);
    CHECK(d.certainty == Certainty::CandidateSet);
    CHECK(candidates(f.at, d) ==
          std::vector<std::string>{"B.pos = L0.pos + 1", "B.val = pow(2, -B.pos)",
                                   "L1.pos = L0.pos + 1", "L0.val = B.val + L1.val"});
  }

  TEST_CASE("unknown answers during refinement") {
    Fixture f;
    AlgorithmicOptions opts;
    opts.refine = true;
    ScriptedOracle script({Answer::incorrect(), Answer::correct(), Answer::correct(),
                           Answer::unknown(), Answer::correct()});
    Diagnosis d = algorithmic_debug(f.at, inst(f.at, "L2.val"), script, opts);
    CHECK(candidates(f.at, d) ==
          std::vector<std::string>{"B.pos = L0.pos + 1", "L0.val = B.val + L1.val"});
    CHECK(d.certainty == Certainty::CandidateSet);
  }

  TEST_CASE("unknown crossing values never prune") {
    Fixture f;
    InstanceId b2val = inst(f.at, "B2.val");
    FunctionOracle oracle([&](const Query& q) {
      if (query_instance(q) == b2val) return Answer::unknown();
      return f.golden.answer(q);
    });
    Diagnosis d = slice_debug(f.at, inst(f.at, "L2.val"), oracle, SliceOptions{4});
    CHECK(asked(f.at, d) == std::vector<std::string>{"V B2.val unknown", "V L2.pos correct",
                                                     "V B2.pos incorrect", "V L1.pos correct"});
    REQUIRE(d.candidates.size() == 1);
    CHECK(text(f.at, d.candidates[0]) == kBugRule);

    FunctionOracle shrug([](const Query&) { return Answer::unknown(); });
    Diagnosis all = slice_debug(f.at, inst(f.at, "L3.pos"), shrug);
    CHECK(all.certainty == Certainty::CandidateSet);
    CHECK(candidates(f.at, all) == std::vector<std::string>{"L.pos = 1", "L1.pos = L0.pos + 1",
                                                           "L1.pos = L0.pos + 1"});
  }

  TEST_CASE("a wrong premise redirects to slice debugging") {
    Fixture f;
    InstanceId l2pos = inst(f.at, "L2.pos");
    AlgorithmicDebugger d(f.at, inst(f.at, "L2.val"));
    CHECK_THROWS_AS(d.answer(Answer::premise_wrong(inst(f.at, "B2.pos"))), std::invalid_argument);
    CHECK(d.transcript().empty());
    d.answer(Answer::premise_wrong(l2pos));
    REQUIRE(d.delegate());
    REQUIRE(d.pending());
    CHECK(f.at.instance_name(query_instance(*d.pending())) == "L1.pos");
    CHECK_THROWS_AS(d.answer(Answer::premise_wrong(l2pos)), std::invalid_argument);
    d.answer(Answer::correct());
    REQUIRE(d.finished());
    CHECK(d.diagnosis()->transcript.size() == 2);
    CHECK(text(f.at, d.diagnosis()->candidates[0]) == "L1.pos = L0.pos + 1");
    CHECK(d.diagnosis()->candidates[0].node == 3);
  }

  TEST_CASE("rejected answers leave the engine unchanged") {
    Fixture f;
    AlgorithmicDebugger d(f.at, inst(f.at, "L2.val"));
    CHECK_THROWS_AS(d.answer(Answer::correct()), NoSymptomError);
    CHECK(d.transcript().empty());
    REQUIRE(d.pending());
    CHECK(query_instance(*d.pending()) == inst(f.at, "L2.val"));
    d.answer(Answer::incorrect());
    CHECK(d.transcript().size() == 1);
  }

  TEST_CASE("replaying a transcript reproduces the diagnosis") {
    Fixture f;
    AlgorithmicOptions opts;
    opts.refine = true;
    for (InstanceId root : {inst(f.at, "L2.val"), inst(f.at, "F1.val")}) {
      Diagnosis d = algorithmic_debug(f.at, root, f.golden, opts);
      std::vector<Answer> answers;
      for (const auto& e : d.transcript) answers.push_back(e.answer);
      ScriptedOracle replay(answers);
      Diagnosis again = algorithmic_debug(f.at, root, replay, opts);
      CHECK(again.candidates == d.candidates);
      CHECK(again.certainty == d.certainty);
      REQUIRE(again.transcript.size() == d.transcript.size());
      for (std::size_t i = 0; i < d.transcript.size(); ++i)
        CHECK(again.transcript[i].query == d.transcript[i].query);
      CHECK(replay.remaining() == 0);
    }
    ScriptedOracle short_script({Answer::incorrect()});
    CHECK_THROWS_AS(algorithmic_debug(f.at, inst(f.at, "L2.val"), short_script), OracleAborted);
  }
}
