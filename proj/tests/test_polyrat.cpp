#include "doctest.h"
#include "halfloop/polyrat.hpp"

using namespace halfloop;

TEST_CASE("poly arithmetic") {
  const Poly x = Poly::q(0);
  const Poly y = Poly::q(1);
  const Poly s = (x + y).pow(3);
  CHECK(s.size() == 4);
  CHECK(s.derivative(var::q(0)) == (x + y).pow(2) * CycNum(3));
  CHECK((x - y) * (x + y) == x * x - y * y);
  CHECK(Poly::variable(var::kLambda).str() == "lambda");
}

TEST_CASE("division by linear forms") {
  const CycNum w = CycNum::root(3, 1);
  const Poly x = Poly::q(0);
  const Poly y = Poly::q(1);
  const LinForm f{0, 1, w};
  const Poly p = f.to_poly() * (x * x + y + Poly(5));
  auto q = divide_by(p, f);
  REQUIRE(q);
  CHECK(*q == x * x + y + Poly(5));
  CHECK_FALSE(divide_by(x * x + y, f));
  CHECK(divide_by(x * y, LinForm::single(1)).value() == x);

  // x^3 - y^3 splits over the cube roots of unity.
  auto fac = factor_linear(x.pow(3) - y.pow(3), 3);
  REQUIRE(fac);
  CHECK(fac->second.size() == 3);
}

TEST_CASE("rational functions") {
  const CycNum w = CycNum::root(3, 1);
  const RatFun a = RatFun::inverse_difference(0, w, 1);
  const RatFun b = RatFun::inverse_difference(1, w.inverse(), 0);  // 1/(q2 - w^-1 q1) = -w/(q1 - w q2)
  CHECK(ratfun_equal(b, a * (-w)));
  CHECK(ratfun_equal(a * RatFun(LinForm{0, 1, w}.to_poly()), RatFun(1)));

  // d/dq1 of 1/(q1 - w q2) = -1/(q1 - w q2)^2
  CHECK(ratfun_equal(a.derivative(0), -(a * a)));
  // d/dq2 = w/(q1 - w q2)^2
  CHECK(ratfun_equal(a.derivative(1), a * a * w));

  // partial fractions: 1/(x(x-y)) = 1/y * (1/(x-y) - 1/x) checked by multiplying by y
  const RatFun lhs = RatFun::inverse_position(0) * RatFun::inverse_difference(0, CycNum(1), 1) *
                     RatFun(Poly::q(1));
  const RatFun rhs = RatFun::inverse_difference(0, CycNum(1), 1) - RatFun::inverse_position(0);
  CHECK(ratfun_equal(lhs, rhs));
}

TEST_CASE("position action") {
  const CycNum w = CycNum::root(3, 1);
  PositionAction act = PositionAction::identity(2);
  act.target = {1, 0};
  act.scale = {w, CycNum(1)};  // q1 -> w q2, q2 -> q1
  const RatFun r = RatFun::inverse_difference(0, CycNum(1), 1);
  const RatFun s = r.substitute(act);  // 1/(w q2 - q1)
  CHECK(ratfun_equal(s, RatFun::inverse_difference(0, w, 1) * CycNum(-1)));
  auto vals = [&](int slot) { return slot == 0 ? CycNum(2) : CycNum(5); };
  CHECK(s.evaluate(vals) == (w * CycNum(5) - CycNum(2)).inverse());
  auto inv = RatFun(Poly::q(0).pow(2) - Poly::q(1).pow(2)).try_inverse(4);
  REQUIRE(inv);
  CHECK(ratfun_equal(*inv * RatFun(Poly::q(0).pow(2) - Poly::q(1).pow(2)), RatFun(1)));
}
