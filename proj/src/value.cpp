#include "agdbg/value.hpp"

namespace agdbg {

const char* sort_name(Sort s) {
  switch (s) {
    case Sort::Rational: return "rational";
    case Sort::Boolean: return "boolean";
    case Sort::String: return "string";
  }
  return "?";
}

Sort Value::sort() const {
  if (is_rational()) return Sort::Rational;
  if (is_boolean()) return Sort::Boolean;
  return Sort::String;
}

std::string Value::to_string() const {
  if (is_rational()) {
    const Rational& r = as_rational();
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
  }
  if (is_boolean()) return as_boolean() ? "true" : "false";
  std::string out = "\"";
  for (char c : as_string()) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string slot_to_string(const Slot& s) {
  if (const auto* v = std::get_if<Value>(&s)) return v->to_string();
  if (const auto* e = std::get_if<EvalError>(&s)) return "<error: " + e->message + ">";
  return "<unevaluated>";
}

}  // namespace agdbg
