#include "agdbg/session.hpp"

#include "agdbg/grammar_parser.hpp"
#include "agdbg/validate.hpp"

#include <iomanip>
#include <random>
#include <sstream>

namespace agdbg {

const char* mode_name(Mode m) { return m == Mode::Algorithmic ? "algorithmic" : "slice"; }

Mode parse_mode(std::string_view s) {
  if (s == "algorithmic") return Mode::Algorithmic;
  if (s == "slice") return Mode::Slice;
  throw std::invalid_argument("unknown mode '" + std::string(s) + "'");
}

int SessionError::http_status() const {
  switch (code_) {
    case Code::BadRequest: return 400;
    case Code::NotFound: return 404;
    case Code::Conflict: return 409;
    case Code::Unprocessable: return 422;
  }
  return 500;
}

std::unique_ptr<AttributedTree> prepare_tree(const std::string& grammar_text,
                                             const std::string& input) {
  using Code = SessionError::Code;
  auto g = std::make_shared<Grammar>();
  try {
    *g = parse_grammar(grammar_text);
  } catch (const GrammarSyntaxError& e) {
    throw SessionError(Code::Unprocessable, std::string("grammar syntax error: ") + e.what(),
                       {{"stage", "grammar"}, {"line", e.line()}, {"column", e.column()}});
  }
  ValidationReport report = validate_grammar(*g);
  if (!report.empty()) {
    json issues = json::array();
    for (const ValidationIssue& i : report.issues)
      issues.push_back({{"production", i.production},
                        {"span", source_span_to_json(i.span)},
                        {"message", i.message}});
    throw SessionError(Code::Unprocessable, "invalid grammar:\n" + report.to_string(),
                       {{"stage", "validate"}, {"issues", std::move(issues)}});
  }
  try {
    return std::make_unique<AttributedTree>(attribute_input(g, input));
  } catch (const InputError& e) {
    throw SessionError(Code::Unprocessable, e.what(), {{"stage", "input"}, {"offset", e.offset()}});
  } catch (const CircularityError& e) {
    throw SessionError(Code::Unprocessable, e.what(), {{"stage", "evaluate"}, {"cycle", e.cycle()}});
  }
}

std::string query_text(const AttributedTree& at, const Query& q) {
  std::ostringstream out;
  const Premises* premises = nullptr;
  bool own_premises = false;
  InputSpan span;
  if (const auto* sq = std::get_if<SynthQuery>(&q)) {
    out << sq->attr << " = " << sq->shown.to_string();
    premises = &sq->premises;
    own_premises = true;
    span = sq->span;
  } else {
    const auto& vq = std::get<ValueQuery>(q);
    out << at.instance_name(vq.instance) << " = " << slot_to_string(vq.shown);
    if (vq.context) premises = &vq.premises;
    span = vq.span;
  }
  if (premises && !premises->empty()) {
    out << " given ";
    for (std::size_t i = 0; i < premises->size(); ++i) {
      const auto& [id, v] = (*premises)[i];
      if (i) out << ", ";
      out << (own_premises ? at.graph.instance(id).attr : at.instance_name(id)) << " = "
          << v.to_string();
    }
  }
  out << " over input `" << at.input.substr(span.begin, span.end - span.begin) << "`";
  return out.str();
}

// ---------------------------------------------------------------------------

Session::Session(std::string id, SessionConfig config)
    : id_(std::move(id)), config_(std::move(config)) {
  using Code = SessionError::Code;
  at_ = prepare_tree(config_.grammar_text, config_.input);
  try {
    if (config_.symptom) {
      symptom_ = parse_instance_address(*at_, *config_.symptom);
    } else if (config_.mode == Mode::Slice) {
      if (!at_->failed)
        throw SessionError(Code::BadRequest, "slice mode needs a symptom");
      symptom_ = *at_->failed;
    } else {
      symptom_ = default_root_symptom(*at_);
    }
  } catch (const std::invalid_argument& e) {
    throw SessionError(Code::BadRequest, e.what());
  } catch (const DebugError& e) {
    throw SessionError(Code::Unprocessable, e.what());
  }
  if (config_.mode == Mode::Algorithmic && at_->status != EvalStatus::Complete)
    throw SessionError(Code::Unprocessable,
                       "algorithmic debugging needs a complete evaluation; evaluation of " +
                           at_->instance_name(at_->failed.value_or(symptom_)) +
                           " failed (use slice mode)");
  rebuild();
}

void Session::rebuild() {
  if (config_.mode == Mode::Algorithmic) {
    AlgorithmicOptions opts;
    opts.strategy = config_.strategy;
    opts.refine = config_.refine;
    opts.slice.first_cut = config_.first_cut;
    try {
      engine_ = std::make_unique<AlgorithmicDebugger>(*at_, symptom_, opts);
    } catch (const ComputationTreeUnavailable& e) {
      throw SessionError(SessionError::Code::Unprocessable, e.what());
    }
  } else {
    engine_ = std::make_unique<SliceDebugger>(*at_, symptom_, SliceOptions{config_.first_cut});
  }
  for (const auto& [a, ts] : answers_) engine_->answer(a, ts);
}

void Session::submit(std::uint64_t seq, const json& answer, std::optional<std::int64_t> ts) {
  if (answer.is_string() && answer.get<std::string>() == "undo") {
    undo(seq);
    return;
  }
  Answer a;
  try {
    a = answer_from_json(*at_, answer);
  } catch (const std::invalid_argument& e) {
    throw SessionError(SessionError::Code::BadRequest, e.what());
  }
  submit(seq, a, ts);
}

void Session::submit(std::uint64_t seq, const Answer& a, std::optional<std::int64_t> ts) {
  using Code = SessionError::Code;
  if (seq != this->seq())
    throw SessionError(Code::Conflict, "stale answer: expected seq " + std::to_string(this->seq()) +
                                           ", got " + std::to_string(seq));
  if (engine_->finished()) throw SessionError(Code::Conflict, "diagnosis ready");
  try {
    engine_->answer(a, ts);
  } catch (const NoSymptomError& e) {
    throw SessionError(Code::Unprocessable, e.what());
  } catch (const std::invalid_argument& e) {
    throw SessionError(Code::BadRequest, e.what());
  }
  answers_.emplace_back(a, engine_->transcript().back().timestamp_ms);
}

void Session::undo(std::uint64_t seq) {
  using Code = SessionError::Code;
  if (seq != this->seq())
    throw SessionError(Code::Conflict, "stale answer: expected seq " + std::to_string(this->seq()) +
                                           ", got " + std::to_string(seq));
  if (answers_.empty()) throw SessionError(Code::Conflict, "nothing to undo");
  answers_.pop_back();
  rebuild();
}

json Session::query_payload() const {
  if (engine_->finished()) throw SessionError(SessionError::Code::Conflict, "diagnosis ready");
  const Query& q = *engine_->pending();
  const AttributedTree& at = *at_;
  InstanceId id = query_instance(q);
  json premises = json::object();
  InputSpan span;
  std::set<RuleApplication> rules;
  if (const auto* sq = std::get_if<SynthQuery>(&q)) {
    for (const auto& [p, v] : sq->premises) premises[at.graph.instance(p).attr] = v.to_string();
    span = sq->span;
    if (const auto* alg = dynamic_cast<const AlgorithmicDebugger*>(engine_.get()))
      if (const SynthApplication* app = alg->tree().find(sq->instance)) rules = app->region;
  } else {
    const auto& vq = std::get<ValueQuery>(q);
    for (const auto& [p, v] : vq.premises) premises[at.instance_name(p)] = v.to_string();
    span = vq.span;
    rules.insert(at.graph.definition(id).value());
  }
  json jrules = json::array();
  for (const RuleApplication& r : rules) jrules.push_back(rule_application_to_json(at, r));
  const Slot shown = std::visit([](const auto& v) -> Slot { return v.shown; }, q);
  return {{"id", id_},
          {"seq", seq()},
          {"query", query_to_json(at, q)},
          {"text", query_text(at, q)},
          {"value", at.graph.instance(id).attr + " = " + slot_to_string(shown)},
          {"premises", std::move(premises)},
          {"highlight", span_to_json(span)},
          {"source", at.input.substr(span.begin, span.end - span.begin)},
          {"rules", std::move(jrules)}};
}

json Session::state() const {
  json s = {{"id", id_}, {"seq", seq()}, {"finished", engine_->finished()}};
  if (engine_->finished())
    s["diagnosis"] = diagnosis_to_json(*at_, *engine_->diagnosis());
  else
    s["pendingQuery"] = query_payload();
  return s;
}

json Session::snapshot(bool with_timestamps) const {
  const AttributedTree& at = *at_;
  json snap = state();
  snap["mode"] = mode_name(config_.mode);
  snap["grammar"] = config_.grammar_text;
  snap["input"] = config_.input;
  snap["symptom"] = instance_to_json(at, symptom_);
  snap["options"] = {{"refine", config_.refine},
                     {"strategy", config_.strategy == Strategy::TopDown ? "top-down" : "dq"}};
  if (config_.first_cut) snap["options"]["firstCut"] = *config_.first_cut;
  snap["tree"] = tree_to_json(at);
  json transcript = transcript_to_json(at, engine_->transcript());
  if (!with_timestamps)
    for (json& e : transcript) e.erase("timestamp");
  snap["transcript"] = std::move(transcript);
  json space = json::array();
  for (InstanceId i : engine_->search_space()) space.push_back(at.instance_name(i));
  snap["searchSpace"] = std::move(space);

  const SliceDebugger* slice = dynamic_cast<const SliceDebugger*>(engine_.get());
  if (const auto* alg = dynamic_cast<const AlgorithmicDebugger*>(engine_.get())) {
    snap["computationTree"] = computation_tree_to_json(at, alg->tree());
    snap["current"] = at.instance_name(alg->current().instance);
    slice = alg->delegate();
  }
  if (slice) {
    json excluded = json::array();
    for (InstanceId i : slice->excluded()) excluded.push_back(at.instance_name(i));
    snap["excluded"] = std::move(excluded);
    snap["slice"] = slice_to_json(at, dynamic_slice(at.graph, slice->symptom()));
  }
  return snap;
}

json Session::save() const {
  json answers = json::array();
  for (const auto& [a, ts] : answers_)
    answers.push_back({{"answer", answer_to_json(*at_, a)}, {"timestamp", ts}});
  json j = {{"format", "agdbg-session"},
            {"version", 1},
            {"grammar", config_.grammar_text},
            {"input", config_.input},
            {"mode", mode_name(config_.mode)},
            {"refine", config_.refine},
            {"strategy", config_.strategy == Strategy::TopDown ? "top-down" : "dq"},
            {"answers", std::move(answers)}};
  if (config_.symptom) j["symptom"] = *config_.symptom;
  if (config_.first_cut) j["firstCut"] = *config_.first_cut;
  return j;
}

std::unique_ptr<Session> Session::load(std::string id, const json& saved) {
  using Code = SessionError::Code;
  SessionConfig c;
  std::vector<std::pair<json, std::int64_t>> answers;
  try {
    if (saved.value("format", "") != "agdbg-session")
      throw SessionError(Code::BadRequest, "not a saved session");
    c.grammar_text = saved.at("grammar").get<std::string>();
    c.input = saved.at("input").get<std::string>();
    c.mode = parse_mode(saved.at("mode").get<std::string>());
    c.refine = saved.value("refine", false);
    c.strategy = saved.value("strategy", "top-down") == "dq" ? Strategy::DivideAndQuery
                                                             : Strategy::TopDown;
    if (saved.contains("symptom")) c.symptom = saved.at("symptom").get<std::string>();
    if (saved.contains("firstCut")) c.first_cut = saved.at("firstCut").get<std::size_t>();
    for (const json& a : saved.at("answers"))
      answers.emplace_back(a.at("answer"), a.value("timestamp", std::int64_t{0}));
  } catch (const json::exception& e) {
    throw SessionError(Code::BadRequest, std::string("malformed session file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw SessionError(Code::BadRequest, e.what());
  }
  auto s = std::make_unique<Session>(std::move(id), std::move(c));
  for (const auto& [a, ts] : answers) s->submit(s->seq(), a, ts);
  return s;
}

// ---------------------------------------------------------------------------

std::string SessionManager::fresh_id() {
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << (rng() ^ ++counter_);
  return out.str();
}

std::string SessionManager::create(SessionConfig config) {
  std::string id;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    do id = fresh_id();
    while (sessions_.count(id));
  }
  auto entry = std::make_shared<Entry>();
  entry->session = std::make_unique<Session>(id, std::move(config));
  std::lock_guard<std::mutex> lock(mutex_);
  sessions_[id] = std::move(entry);
  return id;
}

std::shared_ptr<SessionManager::Entry> SessionManager::find(const std::string& id) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end())
    throw SessionError(SessionError::Code::NotFound, "unknown session " + id);
  return it->second;
}

void SessionManager::remove(const std::string& id) {
  std::lock_guard<std::mutex> lock(mutex_);
  if (!sessions_.erase(id)) throw SessionError(SessionError::Code::NotFound, "unknown session " + id);
}

std::size_t SessionManager::size() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return sessions_.size();
}

}  // namespace agdbg
