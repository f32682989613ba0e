#include "agdbg/attribution.hpp"
#include "agdbg/grammar_parser.hpp"

#include <doctest.h>

using namespace agdbg;

namespace {

Value eval_text(const std::string& expr) {
  // One-rule grammar whose only rule is the expression under test.
  std::string src = "attr syn v : rational on S;\nS ::= \"x\" { S.v = " + expr + "; }\n";
  Grammar g = parse_grammar(src);
  return evaluate_expr(g.productions[0].rules[0].expr, [](const AttrRef&) -> Value {
    throw EvalFailure("no operands");
  });
}

std::string eval_error(const std::string& expr) {
  try {
    eval_text(expr);
  } catch (const EvalFailure& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_SUITE("value") {
  TEST_CASE("display forms") {
    CHECK(Value(Rational(1, 4)).to_string() == "1/4");
    CHECK(Value::integer(-2).to_string() == "-2");
    CHECK(Value(Rational(-3, 6)).to_string() == "-1/2");
    CHECK(Value(true).to_string() == "true");
    CHECK(Value(std::string("a\"b")).to_string() == "\"a\\\"b\"");
    CHECK(slot_to_string(Slot{EvalError{"division by zero"}}) == "<error: division by zero>");
    CHECK(slot_to_string(Slot{Unevaluated{}}) == "<unevaluated>");
  }

  TEST_CASE("equality is exact and sort-aware") {
    CHECK(Value(Rational(2, 4)) == Value(Rational(1, 2)));
    CHECK_FALSE(Value(Rational(1, 3)) == Value(Rational(333333, 1000000)));
    CHECK_FALSE(Value::integer(1) == Value(true));
    CHECK(Value(std::string("1")).sort() == Sort::String);
  }

  TEST_CASE("exact rational arithmetic") {
    CHECK(eval_text("0.1 + 0.2") == Value(Rational(3, 10)));
    CHECK(eval_text("2 ^ -3") == Value(Rational(1, 8)));
    CHECK(eval_text("pow(2, 0 - 3)") == Value(Rational(1, 8)));
    CHECK(eval_text("(1/3) * 3") == Value::integer(1));
    CHECK(eval_text("-(1) - -2") == Value::integer(1));
    CHECK(eval_text("pow(-2/3, 3)") == Value(Rational(-8, 27)));
    CHECK(eval_text("0 ^ 0") == Value::integer(1));
    CHECK(eval_text("if 1 < 2 then 7 else 8") == Value::integer(7));
  }

  TEST_CASE("booleans and strings") {
    Grammar g = parse_grammar(
        "attr syn b : boolean on S;\nattr syn s : string on S;\n"
        "S ::= \"x\" { S.b = \"ab\" < \"b\"; S.s = \"a\" ++ \"b\"; }\n");
    auto none = [](const AttrRef&) -> Value { throw EvalFailure("none"); };
    CHECK(evaluate_expr(g.productions[0].rules[0].expr, none) == Value(true));
    CHECK(evaluate_expr(g.productions[0].rules[1].expr, none) == Value(std::string("ab")));
  }

  TEST_CASE("arithmetic failures") {
    CHECK(eval_error("1 / 0") == "division by zero");
    CHECK(eval_error("0 ^ -1") == "division by zero");
    CHECK(eval_error("2 ^ (1/2)") == "non-integer exponent 1/2");
    CHECK(eval_error("2 ^ 100000") == "value too large");
    CHECK(eval_error("2 ^ 65536") == "value too large");
    CHECK(eval_text("2 ^ 65535") == Value(Rational(BigInt(1) << 65535)));
  }
}
