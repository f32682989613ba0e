#pragma once

#include "agdbg/grammar.hpp"

#include <string>

namespace agdbg {

/// Canonical AG-DSL text; `parse_grammar(format_grammar(g)) == g` for every
/// parsed grammar.
std::string format_grammar(const Grammar& g);

std::string format_expr(const Production& p, const Expr& e);
/// `B.pos = L0.pos + 1` (no trailing semicolon).
std::string format_rule(const Production& p, const AttributionRule& r);
/// `L ::= B L`
std::string format_production_head(const Production& p);
/// Literal in re-parseable form (`0.375`, `-1`, `"x"`, `true`).
std::string format_literal(const Value& v);

}  // namespace agdbg
