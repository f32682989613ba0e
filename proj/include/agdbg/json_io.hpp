// JSON forms of trees, slices, computation trees, queries and diagnoses,
// plus the textual instance addresses used on the command line.
#pragma once

#include "agdbg/debugger.hpp"

#include <json.hpp>

#include <string>
#include <string_view>

namespace agdbg {

using nlohmann::json;

/// Rationals as {"num", "den"} (integers when they fit in 64 bits, decimal
/// strings otherwise); booleans and strings as themselves.
json value_to_json(const Value& v);
Value value_from_json(const json& j);
/// Values as above, {"error": msg} for failures, null when unevaluated.
json slot_to_json(const Slot& s);

json span_to_json(const InputSpan& s);
json source_span_to_json(const SourceSpan& s);
/// {"id", "node", "attr", "name"}
json instance_to_json(const AttributedTree& at, InstanceId id);

/// {nodes: [...], evalOrder: [[node, attr], ...], status, failed?}
json tree_to_json(const AttributedTree& at);
/// {target, members, sequence, edges}
json slice_to_json(const AttributedTree& at, const Slice& s);
json computation_tree_to_json(const AttributedTree& at, const ComputationTree& ct);
json synth_application_to_json(const AttributedTree& at, const SynthApplication& app);

/// {production, ruleIndex, nodeId, span, ruleSpan, text}
json rule_application_to_json(const AttributedTree& at, const RuleApplication& r);
/// {candidates, certainty, queriesAsked}
json diagnosis_to_json(const AttributedTree& at, const Diagnosis& d);

json query_to_json(const AttributedTree& at, const Query& q);
/// "correct" | "incorrect" | "unknown" | {"kind": "premiseWrong", "premise": id}
json answer_to_json(const AttributedTree& at, const Answer& a);
/// Accepts the forms above; `premise` may be an instance id or an address.
/// Throws std::invalid_argument on malformed input.
Answer answer_from_json(const AttributedTree& at, const json& j);
/// [{query, answer, timestamp}]
json transcript_to_json(const AttributedTree& at, const std::vector<TranscriptEntry>& t);

/// Resolves `L.val@node6`, `val@6`, `L[2].val` (second L in preorder) or
/// `L2.val`. Throws std::invalid_argument when nothing matches.
InstanceId parse_instance_address(const AttributedTree& at, std::string_view text);

}  // namespace agdbg
