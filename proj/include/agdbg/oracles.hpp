// Oracle implementations: a reference grammar, recorded answers, and a
// callback.
#pragma once

#include "agdbg/debugger.hpp"

#include <deque>
#include <functional>
#include <memory>

namespace agdbg {

class StructuralMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Answers by evaluating a reference grammar on the same parse tree. The
/// reference must agree with the debugged grammar on productions (ids, sides),
/// terminals and attribute declarations; only attribution rules may differ.
class GoldenOracle : public Oracle {
 public:
  /// Throws StructuralMismatch, or CircularityError when the reference is
  /// circular on this tree.
  GoldenOracle(std::shared_ptr<const Grammar> reference, const AttributedTree& at);

  Answer answer(const Query& q) override;
  bool confirms_symptom(const ValueQuery& q) override;

  const AttributedTree& reference() const { return ref_; }
  /// Correct value of `id` under the reference grammar.
  const Slot& expected(InstanceId id) const { return ref_.value(id); }

 private:
  Slot expected_for(const Query& q) const;

  const AttributedTree& at_;
  AttributedTree ref_;
};

/// Throws StructuralMismatch when the grammars differ outside their rules.
void check_same_structure(const Grammar& debugged, const Grammar& reference);

class ScriptExhausted : public OracleAborted {
 public:
  using OracleAborted::OracleAborted;
};

/// Replays answers in order. Throws ScriptExhausted when out of answers.
class ScriptedOracle : public Oracle {
 public:
  explicit ScriptedOracle(std::vector<Answer> answers) : answers_(answers.begin(), answers.end()) {}
  Answer answer(const Query& q) override;
  std::size_t remaining() const { return answers_.size(); }

 private:
  std::deque<Answer> answers_;
};

class FunctionOracle : public Oracle {
 public:
  using Fn = std::function<Answer(const Query&)>;
  explicit FunctionOracle(Fn fn) : fn_(std::move(fn)) {}
  Answer answer(const Query& q) override { return fn_(q); }

 private:
  Fn fn_;
};

}  // namespace agdbg
