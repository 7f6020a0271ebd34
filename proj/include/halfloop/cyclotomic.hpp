#pragma once

// Exact arithmetic in the cyclotomic fields Q(zeta_m), zeta_m = exp(2 pi i / m).

#include <complex>
#include <compare>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace halfloop {

using BigInt = mpz_class;
using BigRational = mpq_class;

struct OrderMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DivisionByZero : std::domain_error {
  using std::domain_error::domain_error;
};

long euler_phi(long m);
long gcd_long(long a, long b);
long lcm_long(long a, long b);

/// Phi_m with integer coefficients, lowest degree first.
/// Computed by dividing x^m - 1 by Phi_d for every proper divisor d of m.
std::vector<BigInt> cyclotomic_polynomial(long m);

/// An element sum_k c_k zeta_m^k of Q(zeta_m) in the power basis modulo Phi_m.
///
/// Coefficients are held as integers over one positive common denominator with
/// gcd(content, den) = 1. Any value that happens to be rational is stored at
/// order 1, so equal field elements always have equal representations and
/// rationals mix freely with every order. Two irrational operands must share
/// their order (lift_order first otherwise).
class CycNum {
 public:
  CycNum();
  CycNum(long v);  // NOLINT(google-explicit-constructor)
  CycNum(const BigInt& v);  // NOLINT(google-explicit-constructor)
  CycNum(const BigRational& v);  // NOLINT(google-explicit-constructor)

  /// zeta_m^k, any integer k.
  static CycNum root(long m, long k);
  /// Built from power-basis coefficients of length phi(m).
  static CycNum from_coeffs(long m, const std::vector<BigRational>& coeffs);

  long order() const { return order_; }
  bool is_zero() const;
  bool is_one() const;
  bool is_rational() const { return order_ == 1; }
  BigRational rational_value() const;  // throws unless is_rational()
  /// Power-basis coefficient of zeta^k, 0 <= k < phi(order()).
  BigRational coeff(std::size_t k) const;
  std::size_t size() const { return num_.size(); }

  CycNum lift_order(long m) const;
  CycNum inverse() const;
  CycNum conj() const;
  CycNum pow(long e) const;
  std::complex<double> to_complex() const;

  CycNum operator-() const;
  CycNum& operator+=(const CycNum& o);
  CycNum& operator-=(const CycNum& o);
  CycNum& operator*=(const CycNum& o);
  CycNum& operator/=(const CycNum& o);
  friend CycNum operator+(CycNum a, const CycNum& b) { return a += b; }
  friend CycNum operator-(CycNum a, const CycNum& b) { return a -= b; }
  friend CycNum operator*(CycNum a, const CycNum& b) { return a *= b; }
  friend CycNum operator/(CycNum a, const CycNum& b) { return a /= b; }

  friend bool operator==(const CycNum& a, const CycNum& b);
  /// Total order on representations; used for map keys and canonical sorting.
  friend std::strong_ordering operator<=>(const CycNum& a, const CycNum& b);

  /// Deterministic text: "3/2", "zeta(12,1)", "1 - 2*zeta(12,3)".
  std::string str() const;
  /// True when str() is a single token (no top-level + or -).
  bool is_atomic_text() const;
  std::size_t hash() const;

 private:
  CycNum(long order, std::vector<BigInt> num, BigInt den);
  void normalize();
  void collapse_if_rational();
  static void align(CycNum& a, CycNum& b);

  long order_ = 1;
  std::vector<BigInt> num_;
  BigInt den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const CycNum& c);

}  // namespace halfloop
