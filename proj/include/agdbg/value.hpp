// Attribute values: exact rationals, booleans and strings.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>
#include <variant>

namespace agdbg {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

enum class Sort { Rational, Boolean, String };

const char* sort_name(Sort s);

class Value {
 public:
  Value() : data_(Rational(0)) {}
  Value(Rational r) : data_(std::move(r)) {}
  Value(bool b) : data_(b) {}
  Value(std::string s) : data_(std::move(s)) {}
  static Value integer(long long v) { return Value(Rational(v)); }

  Sort sort() const;
  bool is_rational() const { return std::holds_alternative<Rational>(data_); }
  bool is_boolean() const { return std::holds_alternative<bool>(data_); }
  bool is_string() const { return std::holds_alternative<std::string>(data_); }

  const Rational& as_rational() const { return std::get<Rational>(data_); }
  bool as_boolean() const { return std::get<bool>(data_); }
  const std::string& as_string() const { return std::get<std::string>(data_); }

  /// Display form: `1/4`, `-2`, `true`, `"abc"`.
  std::string to_string() const;

  friend bool operator==(const Value& a, const Value& b) { return a.data_ == b.data_; }

 private:
  std::variant<Rational, bool, std::string> data_;
};

/// Raised while evaluating a single attribution rule; recorded per instance.
class EvalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EvalError {
  std::string message;
  friend bool operator==(const EvalError&, const EvalError&) = default;
};

struct Unevaluated {
  friend bool operator==(const Unevaluated&, const Unevaluated&) = default;
};

/// State of one attribute instance after evaluation.
using Slot = std::variant<Unevaluated, Value, EvalError>;

inline bool has_value(const Slot& s) { return std::holds_alternative<Value>(s); }
std::string slot_to_string(const Slot& s);

}  // namespace agdbg
