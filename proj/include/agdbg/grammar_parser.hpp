#pragma once

#include "agdbg/grammar.hpp"

#include <stdexcept>
#include <string>
#include <string_view>

namespace agdbg {

/// Syntax error in grammar source, with a 1-based position.
class GrammarSyntaxError : public std::runtime_error {
 public:
  GrammarSyntaxError(int line, int column, const std::string& message);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Parse AG-DSL source text. Rule spans are preserved; productions without
/// an explicit `label:` prefix receive `default_production_id`.
Grammar parse_grammar(std::string_view text);

}  // namespace agdbg
