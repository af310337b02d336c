#pragma once

#include <string>
#include <vector>

#include "asc1/eval.hpp"

namespace asc1::test {

// Exhaustive coverage of the partial-operator table: the defined branch
// and every failure branch of each operator, including division and
// modulus by zero, 64-bit overflow and underflow, and both
// short-circuit identities. Bottom operands are produced by 1/0.
struct OperatorCase {
  std::string name;
  ExprPtr script;
  ScriptValue expected;
};

inline std::vector<OperatorCase> operatorTableCases() {
  using namespace expr;
  const u64 MAX = ~u64{0};
  ExprPtr bottom = div(natConst(1), natConst(0));
  auto nat = [](u64 v) { return ScriptValue::nat(v); };
  ScriptValue bot = ScriptValue::bottom();

  std::vector<OperatorCase> cases;
  auto add_ = [&](std::string name, ExprPtr e, ScriptValue v) {
    cases.push_back({std::move(name), std::move(e), std::move(v)});
  };

  // addition
  add_("add defined", add(natConst(1), natConst(1)), nat(2));
  add_("add overflow", add(natConst(MAX), natConst(1)), bot);
  add_("add bottom left", add(bottom, natConst(1)), bot);
  add_("add bottom right", add(natConst(1), bottom), bot);

  // subtraction
  add_("sub defined", sub(natConst(5), natConst(3)), nat(2));
  add_("sub underflow", sub(natConst(3), natConst(5)), bot);
  add_("sub bottom left", sub(bottom, natConst(1)), bot);
  add_("sub bottom right", sub(natConst(1), bottom), bot);

  // multiplication
  add_("mul defined", mul(natConst(6), natConst(7)), nat(42));
  add_("mul zero", mul(natConst(0), natConst(9)), nat(0));
  add_("mul overflow", mul(natConst(MAX), natConst(2)), bot);
  add_("mul bottom left", mul(bottom, natConst(2)), bot);
  add_("mul bottom right", mul(natConst(2), bottom), bot);

  // floor division
  add_("div floor", div(natConst(7), natConst(2)), nat(3));
  add_("div exact", div(natConst(8), natConst(2)), nat(4));
  add_("div zero dividend", div(natConst(0), natConst(5)), nat(0));
  add_("div by zero", div(natConst(1), natConst(0)), bot);
  add_("div bottom left", div(bottom, natConst(2)), bot);
  add_("div bottom right", div(natConst(2), bottom), bot);

  // modulus
  add_("mod defined", mod(natConst(7), natConst(2)), nat(1));
  add_("mod zero result", mod(natConst(8), natConst(2)), nat(0));
  add_("mod by zero", mod(natConst(1), natConst(0)), bot);
  add_("mod bottom left", mod(bottom, natConst(2)), bot);
  add_("mod bottom right", mod(natConst(2), bottom), bot);

  // comparisons: holds, fails, bottom
  add_("lt holds", lt(natConst(1), natConst(2)), nat(1));
  add_("lt fails", lt(natConst(2), natConst(2)), nat(0));
  add_("lt bottom", lt(bottom, natConst(2)), bot);
  add_("le holds", le(natConst(2), natConst(2)), nat(1));
  add_("le fails", le(natConst(3), natConst(2)), nat(0));
  add_("le bottom", le(natConst(2), bottom), bot);
  add_("eq holds", eq(natConst(4), natConst(4)), nat(1));
  add_("eq fails", eq(natConst(4), natConst(5)), nat(0));
  add_("eq bottom", eq(bottom, natConst(4)), bot);
  add_("ge holds", ge(natConst(2), natConst(2)), nat(1));
  add_("ge fails", ge(natConst(1), natConst(2)), nat(0));
  add_("ge bottom", ge(natConst(2), bottom), bot);
  add_("gt holds", gt(natConst(3), natConst(2)), nat(1));
  add_("gt fails", gt(natConst(2), natConst(2)), nat(0));
  add_("gt bottom", gt(bottom, bottom), bot);

  // conjunction: the short-circuit row and the strict rows
  add_("and zero short-circuits bottom", andE(natConst(0), bottom), nat(0));
  add_("and nonzero yields right value", andE(natConst(2), natConst(5)), nat(5));
  add_("and nonzero yields right zero", andE(natConst(1), natConst(0)), nat(0));
  add_("and bottom left", andE(bottom, natConst(1)), bot);
  add_("and nonzero bottom right", andE(natConst(1), bottom), bot);

  // disjunction
  add_("or nonzero short-circuits bottom", orE(natConst(1), bottom), nat(1));
  add_("or nonzero normalizes to one", orE(natConst(7), natConst(0)), nat(1));
  add_("or zero yields right value", orE(natConst(0), natConst(5)), nat(5));
  add_("or zero yields right zero", orE(natConst(0), natConst(0)), nat(0));
  add_("or bottom left", orE(bottom, natConst(1)), bot);
  add_("or zero bottom right", orE(natConst(0), bottom), bot);

  // negation
  add_("not zero", notE(natConst(0)), nat(1));
  add_("not nonzero", notE(natConst(5)), nat(0));
  add_("not bottom", notE(bottom), bot);

  // equality across the byte extension stays tag-strict
  Bytes bs{0x01, 0x02};
  add_("eq bytes holds", eq(bytesConst(bs), bytesConst(bs)), nat(1));
  add_("eq bytes fails", eq(bytesConst(bs), bytesConst({0x01, 0x03})), nat(0));
  add_("eq mixed tags", eq(bytesConst(bs), natConst(0)), bot);
  add_("eq mixed tags flipped", eq(natConst(0), bytesConst(bs)), bot);

  // logical guards require numbers
  add_("and byte guard", andE(bytesConst(bs), natConst(1)), bot);
  add_("or byte guard", orE(bytesConst(bs), natConst(1)), bot);
  add_("not byte operand", notE(bytesConst(bs)), bot);

  return cases;
}

}  // namespace asc1::test
