// Query-driven fault localization: algorithmic debugging over the
// computation tree and bisection over dynamic slices.
//
// Both engines are state machines with at most one pending query. The free
// functions algorithmic_debug and slice_debug drive them with an Oracle.
#pragma once

#include "agdbg/slicing.hpp"
#include "agdbg/synth_tree.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace agdbg {

using Premises = std::vector<std::pair<InstanceId, Value>>;

/// Is `shown` the correct value of `instance` given `premises`?
struct SynthQuery {
  InstanceId instance = 0;
  NodeId node = 0;
  std::string attr;
  Value shown;
  Premises premises;
  InputSpan span;  // yield of the subtree at `node`
  friend bool operator==(const SynthQuery&, const SynthQuery&) = default;
};

/// Is `shown` the correct value of `instance`? With a context node, the
/// question is relative to that node's inherited attributes taking the
/// values in `premises`.
struct ValueQuery {
  InstanceId instance = 0;
  Slot shown;
  InputSpan span;
  std::optional<NodeId> context;
  Premises premises;
  friend bool operator==(const ValueQuery&, const ValueQuery&) = default;
};

using Query = std::variant<SynthQuery, ValueQuery>;

InstanceId query_instance(const Query& q);

struct Answer {
  enum class Kind { Correct, Incorrect, PremiseWrong, Unknown };
  Kind kind = Kind::Unknown;
  InstanceId premise = -1;  // PremiseWrong only

  static Answer correct() { return {Kind::Correct, -1}; }
  static Answer incorrect() { return {Kind::Incorrect, -1}; }
  static Answer unknown() { return {Kind::Unknown, -1}; }
  static Answer premise_wrong(InstanceId i) { return {Kind::PremiseWrong, i}; }
  friend bool operator==(const Answer&, const Answer&) = default;
};

const char* answer_kind_name(Answer::Kind k);

struct TranscriptEntry {
  Query query;
  Answer answer;
  std::int64_t timestamp_ms = 0;
};

enum class Certainty { Exact, CandidateSet };

struct Diagnosis {
  std::vector<RuleApplication> candidates;  // evaluation order of the defined instances
  Certainty certainty = Certainty::CandidateSet;
  std::vector<TranscriptEntry> transcript;
  std::size_t queries_asked() const { return transcript.size(); }
};

class Oracle {
 public:
  virtual ~Oracle() = default;
  virtual Answer answer(const Query& q) = 0;
  /// Asked once before slice debugging starts; not part of the transcript.
  virtual bool confirms_symptom(const ValueQuery& q);
};

class DebugError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class NoSymptomError : public DebugError {
 public:
  using DebugError::DebugError;
};
class SymptomNotIncorrectError : public DebugError {
 public:
  using DebugError::DebugError;
};
class OracleAborted : public DebugError {
 public:
  using DebugError::DebugError;
};

/// The instance a rule application defines.
InstanceId defined_instance(const AttributedTree& at, const RuleApplication& r);

SynthQuery make_synth_query(const AttributedTree& at, const SynthApplication& app);
ValueQuery make_value_query(const AttributedTree& at, InstanceId id);

class Debugger {
 public:
  virtual ~Debugger() = default;

  bool finished() const { return diagnosis_.has_value(); }
  const std::optional<Query>& pending() const { return pending_; }
  const std::optional<Diagnosis>& diagnosis() const { return diagnosis_; }
  const std::vector<TranscriptEntry>& transcript() const { return transcript_; }

  /// Answers the pending query. Throws std::logic_error when nothing is
  /// pending and std::invalid_argument for an answer that does not fit the
  /// query. `timestamp_ms` defaults to the wall clock.
  void answer(const Answer& a, std::optional<std::int64_t> timestamp_ms = std::nullopt);

  /// Instances still under suspicion (for display).
  virtual std::vector<InstanceId> search_space() const = 0;

 protected:
  explicit Debugger(const AttributedTree& at) : at_(at) {}
  virtual void on_answer(const Answer& a) = 0;
  void ask(Query q) { pending_ = std::move(q); }
  void finish(std::vector<RuleApplication> candidates, Certainty c);
  void adopt_transcript(std::vector<TranscriptEntry> t) { transcript_ = std::move(t); }
  std::vector<RuleApplication> ordered(const std::set<RuleApplication>& rules) const;

  const AttributedTree& at_;
  std::optional<Query> pending_;
  std::optional<Diagnosis> diagnosis_;
  std::vector<TranscriptEntry> transcript_;
};

struct SliceOptions {
  /// Size of s1 in the first round; later rounds (and the first, when
  /// unset) cut at the midpoint.
  std::optional<std::size_t> first_cut;
};

class SliceDebugger : public Debugger {
 public:
  /// `symptom` is taken to be incorrect.
  SliceDebugger(const AttributedTree& at, InstanceId symptom, SliceOptions opts = {});

  InstanceId symptom() const { return symptom_; }
  const EvaluationSequence& sequence() const { return seq_; }
  /// Instances removed from the search space so far.
  std::vector<InstanceId> excluded() const;
  std::size_t rounds() const { return rounds_; }
  std::vector<InstanceId> search_space() const override { return seq_; }

 protected:
  void on_answer(const Answer& a) override;

 private:
  friend class AlgorithmicDebugger;
  void start_round();
  void advance();
  bool try_partition(std::size_t cut);
  void conclude_round();

  InstanceId symptom_;
  SliceOptions opts_;
  Slice full_;
  EvaluationSequence seq_;
  std::size_t rounds_ = 0;
  std::map<InstanceId, Answer::Kind> cache_;
  // Current round.
  Partition part_;
  std::vector<InstanceId> crossing_;  // query order
  std::size_t next_ = 0;
  std::vector<std::size_t> cuts_left_;
};

enum class Strategy { TopDown, DivideAndQuery };

struct AlgorithmicOptions {
  Strategy strategy = Strategy::TopDown;
  bool refine = false;
  SliceOptions slice;  // used after a PremiseWrong redirect
};

class AlgorithmicDebugger : public Debugger {
 public:
  /// Throws ComputationTreeUnavailable when `root` has no computation tree.
  AlgorithmicDebugger(const AttributedTree& at, InstanceId root, AlgorithmicOptions opts = {});

  const ComputationTree& tree() const { return ct_; }
  const SynthApplication& current() const { return *current_; }
  std::vector<InstanceId> search_space() const override;
  /// Set after a PremiseWrong answer hands over to slice debugging.
  const SliceDebugger* delegate() const { return delegate_.get(); }

 protected:
  void on_answer(const Answer& a) override;

 private:
  enum class Phase { Root, Children, Refine, Delegated };
  void enter(const SynthApplication& node);
  void next_child();
  void settle();
  void next_refinement();
  void finish_refinement(std::optional<InstanceId> incorrect);
  void redirect(InstanceId premise);

  AlgorithmicOptions opts_;
  ComputationTree ct_;
  Phase phase_ = Phase::Root;
  const SynthApplication* current_ = nullptr;
  std::vector<const SynthApplication*> order_;
  std::size_t next_ = 0;
  std::vector<const SynthApplication*> deferred_;
  std::size_t refine_next_ = 0;
  std::vector<InstanceId> refine_unknown_;
  std::unique_ptr<SliceDebugger> delegate_;
};

/// Runs an engine to completion. Throws OracleAborted if the oracle does.
Diagnosis run_debugger(Debugger& d, Oracle& oracle);

/// Throws NoSymptomError when the root query is not answered Incorrect.
Diagnosis algorithmic_debug(const AttributedTree& at, InstanceId root, Oracle& oracle,
                            AlgorithmicOptions opts = {});

/// Throws SymptomNotIncorrectError when the oracle rejects the symptom.
Diagnosis slice_debug(const AttributedTree& at, InstanceId symptom, Oracle& oracle,
                      SliceOptions opts = {});

/// Default algorithmic root: the first synthesized attribute of the root
/// node. Throws DebugError if the root carries none.
InstanceId default_root_symptom(const AttributedTree& at);

}  // namespace agdbg
