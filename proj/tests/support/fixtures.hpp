// Shared helpers for tests: grammar files and instance lookup by name.
#pragma once

#include "agdbg/attribution.hpp"
#include "agdbg/grammar.hpp"

#include <memory>
#include <string>

namespace agdbg::testing {

std::string grammar_path(const std::string& file);
std::string read_text(const std::string& path);
std::shared_ptr<const Grammar> load_grammar(const std::string& file);
AttributedTree eval_file(const std::string& file, const std::string& input);
/// Instance by display name, e.g. "L2.val".
InstanceId inst(const AttributedTree& at, const std::string& name);
/// Value of a rational instance; fails the calling test when not evaluated.
Rational rat(const AttributedTree& at, const std::string& name);

}  // namespace agdbg::testing
