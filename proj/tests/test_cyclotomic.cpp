#include "doctest.h"
#include "halfloop/cyclotomic.hpp"

using namespace halfloop;

TEST_CASE("cyclotomic polynomials") {
  CHECK(cyclotomic_polynomial(1) == std::vector<BigInt>{-1, 1});
  CHECK(cyclotomic_polynomial(4) == std::vector<BigInt>{1, 0, 1});
  CHECK(cyclotomic_polynomial(12) == std::vector<BigInt>{1, 0, -1, 0, 1});
  CHECK(cyclotomic_polynomial(6) == std::vector<BigInt>{1, -1, 1});
  for (long m = 1; m <= 30; ++m) CHECK(static_cast<long>(cyclotomic_polynomial(m).size()) == euler_phi(m) + 1);
}

TEST_CASE("roots of unity") {
  for (long m : {3L, 4L, 5L, 8L, 12L, 15L}) {
    CycNum sum;
    for (long k = 0; k < m; ++k) sum += CycNum::root(m, k);
    CHECK(sum.is_zero());
    CHECK(CycNum::root(m, 1).pow(m).is_one());
    CHECK(CycNum::root(m, -1) * CycNum::root(m, 1) == CycNum(1));
  }
  CHECK(CycNum::root(4, 2) == CycNum(-1));
  CHECK(CycNum::root(4, 1).is_rational() == false);
}

TEST_CASE("inverse and field operations") {
  const CycNum z = CycNum::root(3, 1);
  const CycNum inv = (CycNum(1) - z).inverse();
  CHECK(inv == (CycNum(2) + z) / CycNum(3));
  CHECK((CycNum(1) - z) * inv == CycNum(1));
  const CycNum w = CycNum::root(12, 5) * CycNum(3) - CycNum::root(12, 2) + CycNum(BigRational(1, 7));
  CHECK(w * w.inverse() == CycNum(1));
  CHECK_THROWS_AS(CycNum(0).inverse(), DivisionByZero);
}

TEST_CASE("order lifting and mismatch") {
  const CycNum z3 = CycNum::root(3, 1).lift_order(12);
  CHECK(z3 == CycNum::root(12, 4));
  CHECK(z3.pow(3).is_one());
  CHECK_THROWS_AS(CycNum::root(3, 1) + CycNum::root(4, 1), OrderMismatch);
  CHECK_NOTHROW(CycNum::root(3, 1) + CycNum(BigRational(1, 2)));
}

TEST_CASE("conjugation and complex values") {
  const CycNum i = CycNum::root(4, 1);
  CHECK(i.conj() == -i);
  const CycNum x = CycNum::root(12, 1) + CycNum(2) * CycNum::root(12, 7);
  CHECK((x * x.conj()).conj() == x * x.conj());
  const auto c = CycNum::root(8, 1).to_complex();
  CHECK(c.real() == doctest::Approx(std::sqrt(0.5)));
  CHECK(c.imag() == doctest::Approx(std::sqrt(0.5)));
}

TEST_CASE("text form") {
  CHECK(CycNum(BigRational(3, 2)).str() == "3/2");
  CHECK(CycNum::root(12, 1).str() == "zeta(12,1)");
  CHECK(CycNum(0).str() == "0");
  CHECK((CycNum(1) - CycNum(2) * CycNum::root(12, 3)).str() == "1 - 2*zeta(12,3)");
}
