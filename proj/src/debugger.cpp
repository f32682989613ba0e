#include "agdbg/debugger.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>

namespace agdbg {

InstanceId query_instance(const Query& q) {
  return std::visit([](const auto& v) { return v.instance; }, q);
}

const char* answer_kind_name(Answer::Kind k) {
  switch (k) {
    case Answer::Kind::Correct: return "correct";
    case Answer::Kind::Incorrect: return "incorrect";
    case Answer::Kind::PremiseWrong: return "premiseWrong";
    case Answer::Kind::Unknown: return "unknown";
  }
  return "?";
}

bool Oracle::confirms_symptom(const ValueQuery&) { return true; }

InstanceId defined_instance(const AttributedTree& at, const RuleApplication& r) {
  const AttributionRule& rule = at.rule(r);
  return at.instance(at.tree.occurrence_node(r.node, rule.target.occurrence), rule.target.attr);
}

SynthQuery make_synth_query(const AttributedTree& at, const SynthApplication& app) {
  SynthQuery q;
  q.instance = app.instance;
  q.node = app.node;
  q.attr = app.attr;
  q.shown = app.result;
  q.premises = app.premises;
  q.span = at.tree.node(app.node).span;
  return q;
}

ValueQuery make_value_query(const AttributedTree& at, InstanceId id) {
  ValueQuery q;
  q.instance = id;
  q.shown = at.value(id);
  q.span = at.tree.node(at.graph.instance(id).node).span;
  return q;
}

// ---------------------------------------------------------------------------

void Debugger::answer(const Answer& a, std::optional<std::int64_t> timestamp_ms) {
  if (!pending_) throw std::logic_error("no pending query");
  if (a.kind == Answer::Kind::PremiseWrong) {
    const auto* sq = std::get_if<SynthQuery>(&*pending_);
    if (!sq) throw std::invalid_argument("premiseWrong answers only a Synth query");
    bool named = std::any_of(sq->premises.begin(), sq->premises.end(),
                             [&](const auto& p) { return p.first == a.premise; });
    if (!named) throw std::invalid_argument("premiseWrong must name a premise of the query");
  }
  std::int64_t ts = timestamp_ms.value_or(
      std::chrono::duration_cast<std::chrono::milliseconds>(
          std::chrono::system_clock::now().time_since_epoch())
          .count());
  Query q = std::move(*pending_);
  pending_.reset();
  transcript_.push_back({q, a, ts});
  try {
    on_answer(a);
  } catch (...) {
    transcript_.pop_back();
    pending_ = std::move(q);
    throw;
  }
}

void Debugger::finish(std::vector<RuleApplication> candidates, Certainty c) {
  Diagnosis d;
  d.candidates = std::move(candidates);
  d.certainty = d.candidates.size() == 1 ? Certainty::Exact : c;
  d.transcript = transcript_;
  pending_.reset();
  diagnosis_ = std::move(d);
}

std::vector<RuleApplication> Debugger::ordered(const std::set<RuleApplication>& rules) const {
  std::vector<std::size_t> order = at_.order_index();
  std::vector<RuleApplication> out(rules.begin(), rules.end());
  std::stable_sort(out.begin(), out.end(), [&](const RuleApplication& a, const RuleApplication& b) {
    return order[defined_instance(at_, a)] < order[defined_instance(at_, b)];
  });
  return out;
}

// ---------------------------------------------------------------------------
// Slice debugging

SliceDebugger::SliceDebugger(const AttributedTree& at, InstanceId symptom, SliceOptions opts)
    : Debugger(at), symptom_(symptom), opts_(opts) {
  full_ = dynamic_slice(at.graph, symptom);
  seq_ = slice_sequence(full_, at);
  cache_[symptom] = Answer::Kind::Incorrect;
  start_round();
}

std::vector<InstanceId> SliceDebugger::excluded() const {
  std::vector<InstanceId> out;
  for (InstanceId id : full_.members)
    if (std::find(seq_.begin(), seq_.end(), id) == seq_.end()) out.push_back(id);
  return out;
}

void SliceDebugger::start_round() {
  if (seq_.size() == 1) {
    const auto& def = at_.graph.definition(seq_.front());
    finish({def.value()}, Certainty::Exact);
    return;
  }
  ++rounds_;
  std::size_t mid = seq_.size() / 2;
  std::size_t first = mid;
  if (rounds_ == 1 && opts_.first_cut && *opts_.first_cut > 0 && *opts_.first_cut < seq_.size())
    first = *opts_.first_cut;
  // Fallback cuts, nearest the preferred one first, for rounds where
  // Unknown answers block progress.
  cuts_left_.clear();
  for (std::size_t c = 1; c < seq_.size(); ++c)
    if (c != first) cuts_left_.push_back(c);
  std::stable_sort(cuts_left_.begin(), cuts_left_.end(), [&](std::size_t a, std::size_t b) {
    auto da = a > first ? a - first : first - a;
    auto db = b > first ? b - first : first - b;
    return da < db;
  });
  std::reverse(cuts_left_.begin(), cuts_left_.end());  // pop from the back
  try_partition(first);
}

bool SliceDebugger::try_partition(std::size_t cut) {
  part_ = bisect(seq_, cut);
  crossing_ = crossing_values(at_.graph, part_);
  // Nearest the boundary first.
  std::reverse(crossing_.begin(), crossing_.end());
  next_ = 0;
  advance();
  return true;
}

void SliceDebugger::advance() {
  while (next_ < crossing_.size()) {
    InstanceId x = crossing_[next_];
    auto it = cache_.find(x);
    if (it == cache_.end()) {
      ask(make_value_query(at_, x));
      return;
    }
    if (it->second == Answer::Kind::Incorrect) break;
    ++next_;
  }
  conclude_round();
}

void SliceDebugger::conclude_round() {
  auto restrict_to_s1 = [&](InstanceId x, std::set<InstanceId>& keep) {
    Slice sx = dynamic_slice(at_.graph, x);
    for (InstanceId id : part_.s1)
      if (sx.contains(id)) keep.insert(id);
  };
  if (next_ < crossing_.size()) {
    std::set<InstanceId> keep;
    restrict_to_s1(crossing_[next_], keep);
    EvaluationSequence nseq;
    for (InstanceId id : part_.s1)
      if (keep.count(id)) nseq.push_back(id);
    seq_ = std::move(nseq);
    start_round();
    return;
  }
  std::set<InstanceId> keep(part_.s2.begin(), part_.s2.end());
  for (InstanceId x : crossing_)
    if (cache_.at(x) == Answer::Kind::Unknown) restrict_to_s1(x, keep);
  if (keep.size() < seq_.size()) {
    EvaluationSequence nseq;
    for (InstanceId id : seq_)
      if (keep.count(id)) nseq.push_back(id);
    seq_ = std::move(nseq);
    start_round();
    return;
  }
  if (!cuts_left_.empty()) {
    std::size_t c = cuts_left_.back();
    cuts_left_.pop_back();
    try_partition(c);
    return;
  }
  std::set<RuleApplication> rules;
  for (InstanceId id : seq_) rules.insert(at_.graph.definition(id).value());
  finish(ordered(rules), Certainty::CandidateSet);
}

void SliceDebugger::on_answer(const Answer& a) {
  if (a.kind == Answer::Kind::PremiseWrong)
    throw std::invalid_argument("premiseWrong answers only a Synth query");
  cache_[crossing_.at(next_)] = a.kind;
  advance();
}

// ---------------------------------------------------------------------------
// Algorithmic debugging

AlgorithmicDebugger::AlgorithmicDebugger(const AttributedTree& at, InstanceId root,
                                         AlgorithmicOptions opts)
    : Debugger(at), opts_(opts), ct_(build_computation_tree(at, root)) {
  current_ = &ct_.root;
  ask(make_synth_query(at_, ct_.root));
}

std::vector<InstanceId> AlgorithmicDebugger::search_space() const {
  if (delegate_) return delegate_->search_space();
  std::vector<InstanceId> out;
  std::vector<const SynthApplication*> stack{current_};
  while (!stack.empty()) {
    const SynthApplication* a = stack.back();
    stack.pop_back();
    out.push_back(a->instance);
    for (const auto& c : a->children) stack.push_back(&c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

void AlgorithmicDebugger::enter(const SynthApplication& node) {
  current_ = &node;
  phase_ = Phase::Children;
  deferred_.clear();
  order_.clear();
  for (const auto& c : node.children) order_.push_back(&c);
  if (opts_.strategy == Strategy::DivideAndQuery)
    std::stable_sort(order_.begin(), order_.end(),
                     [](const SynthApplication* a, const SynthApplication* b) {
                       return a->size() > b->size();
                     });
  next_ = 0;
  next_child();
}

void AlgorithmicDebugger::next_child() {
  if (next_ < order_.size()) {
    ask(make_synth_query(at_, *order_[next_]));
    return;
  }
  settle();
}

void AlgorithmicDebugger::settle() {
  if (!deferred_.empty()) {
    std::set<RuleApplication> rules = current_->region;
    for (const SynthApplication* d : deferred_) {
      std::vector<const SynthApplication*> stack{d};
      while (!stack.empty()) {
        const SynthApplication* a = stack.back();
        stack.pop_back();
        rules.insert(a->region.begin(), a->region.end());
        for (const auto& c : a->children) stack.push_back(&c);
      }
    }
    finish(ordered(rules), Certainty::CandidateSet);
    return;
  }
  if (!opts_.refine) {
    finish(ordered(current_->region), Certainty::CandidateSet);
    return;
  }
  phase_ = Phase::Refine;
  refine_next_ = 0;
  refine_unknown_.clear();
  next_refinement();
}

void AlgorithmicDebugger::next_refinement() {
  if (refine_next_ < current_->internal.size()) {
    ValueQuery q = make_value_query(at_, current_->internal[refine_next_]);
    q.context = current_->node;
    q.premises = current_->premises;
    ask(std::move(q));
    return;
  }
  finish_refinement(std::nullopt);
}

void AlgorithmicDebugger::finish_refinement(std::optional<InstanceId> incorrect) {
  // The first instance that is really wrong has a faulty rule; it is either
  // the one answered Incorrect (or the result) or an earlier Unknown.
  std::set<RuleApplication> rules;
  for (InstanceId u : refine_unknown_) rules.insert(at_.graph.definition(u).value());
  rules.insert(at_.graph.definition(incorrect.value_or(current_->instance)).value());
  finish(ordered(rules), Certainty::CandidateSet);
}

void AlgorithmicDebugger::redirect(InstanceId premise) {
  phase_ = Phase::Delegated;
  delegate_ = std::make_unique<SliceDebugger>(at_, premise, opts_.slice);
  if (delegate_->finished()) {
    finish(delegate_->diagnosis()->candidates, delegate_->diagnosis()->certainty);
  } else {
    ask(*delegate_->pending());
  }
}

void AlgorithmicDebugger::on_answer(const Answer& a) {
  switch (phase_) {
    case Phase::Root:
      if (a.kind == Answer::Kind::PremiseWrong) {
        redirect(a.premise);
        return;
      }
      if (a.kind != Answer::Kind::Incorrect)
        throw NoSymptomError("no symptom: " + at_.instance_name(ct_.root.instance) + " = " +
                             ct_.root.result.to_string() + " was not confirmed incorrect");
      enter(ct_.root);
      return;
    case Phase::Children: {
      const SynthApplication* child = order_[next_];
      switch (a.kind) {
        case Answer::Kind::Incorrect: enter(*child); return;
        case Answer::Kind::Correct: break;
        case Answer::Kind::Unknown: deferred_.push_back(child); break;
        case Answer::Kind::PremiseWrong: redirect(a.premise); return;
      }
      ++next_;
      next_child();
      return;
    }
    case Phase::Refine: {
      InstanceId id = current_->internal[refine_next_];
      if (a.kind == Answer::Kind::Incorrect) {
        finish_refinement(id);
        return;
      }
      if (a.kind == Answer::Kind::Unknown) refine_unknown_.push_back(id);
      ++refine_next_;
      next_refinement();
      return;
    }
    case Phase::Delegated:
      delegate_->answer(a, transcript_.back().timestamp_ms);
      if (delegate_->finished())
        finish(delegate_->diagnosis()->candidates, delegate_->diagnosis()->certainty);
      else
        ask(*delegate_->pending());
      return;
  }
}

// ---------------------------------------------------------------------------

Diagnosis run_debugger(Debugger& d, Oracle& oracle) {
  while (!d.finished()) d.answer(oracle.answer(*d.pending()));
  return *d.diagnosis();
}

Diagnosis algorithmic_debug(const AttributedTree& at, InstanceId root, Oracle& oracle,
                            AlgorithmicOptions opts) {
  AlgorithmicDebugger d(at, root, opts);
  return run_debugger(d, oracle);
}

Diagnosis slice_debug(const AttributedTree& at, InstanceId symptom, Oracle& oracle,
                      SliceOptions opts) {
  if (!oracle.confirms_symptom(make_value_query(at, symptom)))
    throw SymptomNotIncorrectError("symptom " + at.instance_name(symptom) + " = " +
                                   slot_to_string(at.value(symptom)) + " is not incorrect");
  SliceDebugger d(at, symptom, opts);
  return run_debugger(d, oracle);
}

InstanceId default_root_symptom(const AttributedTree& at) {
  for (InstanceId id = 0; id < static_cast<InstanceId>(at.graph.size()); ++id) {
    const AttributeInstance& inst = at.graph.instance(id);
    if (inst.node != at.tree.root()) break;
    if (inst.kind == AttrKind::Synthesized) return id;
  }
  throw DebugError("the root symbol carries no synthesized attribute");
}

}  // namespace agdbg
