#pragma once

// Polynomials and rational functions over CycNum in the position variables
// q_1..q_8 and the numerator-only parameters lambda, mu_0..mu_5, hbar.
// Denominators are multisets of linear forms (q_i - c q_j) and q_i.

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "halfloop/cyclotomic.hpp"

namespace halfloop {

/// Variable slots. Canonical order: q_1 < ... < q_8 < lambda < mu_0 < ... < mu_5 < hbar.
namespace var {
inline constexpr int kMaxPositions = 8;
inline constexpr int kLambda = 8;
inline constexpr int kMu0 = 9;
inline constexpr int kMaxMu = 6;
inline constexpr int kHbar = 15;
inline constexpr int kSlots = 16;

/// Slot of the position variable q_{i+1} (i is 0-based).
int q(int i);
int mu(int k);
bool is_position(int slot);
std::string name(int slot);
}  // namespace var

class Monomial {
 public:
  Monomial() { exps_.fill(0); }
  static Monomial variable(int slot, int exponent = 1);

  int operator[](int slot) const { return exps_[static_cast<std::size_t>(slot)]; }
  void set(int slot, int exponent);
  int degree() const;
  int position_degree() const;
  bool is_one() const;
  Monomial operator*(const Monomial& o) const;
  /// Graded order: total degree first, then lexicographic with slot 0 most significant.
  friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b);
  friend bool operator==(const Monomial& a, const Monomial& b) = default;
  std::string str() const;

 private:
  std::array<std::uint8_t, var::kSlots> exps_;
};

struct PositionAction;

class Poly {
 public:
  using Terms = std::map<Monomial, CycNum>;

  Poly() = default;
  Poly(const CycNum& c);  // NOLINT(google-explicit-constructor)
  Poly(long c) : Poly(CycNum(c)) {}  // NOLINT(google-explicit-constructor)
  static Poly variable(int slot);
  static Poly q(int i) { return variable(var::q(i)); }
  static Poly monomial(const Monomial& m, const CycNum& c);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  CycNum constant_term() const;
  std::size_t size() const { return terms_.size(); }
  int degree_in(int slot) const;
  bool depends_on_positions() const;

  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Poly& o);
  Poly& operator*=(const CycNum& c);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(Poly a, const CycNum& c) { return a *= c; }
  friend bool operator==(const Poly& a, const Poly& b) = default;
  Poly pow(int e) const;

  void add_term(const Monomial& m, const CycNum& c);
  Poly derivative(int slot) const;
  Poly substitute(const PositionAction& action) const;
  /// Replace one variable by a constant.
  Poly substitute_value(int slot, const CycNum& value) const;
  CycNum evaluate(const std::function<CycNum(int)>& value_of) const;
  std::string str() const;

 private:
  Terms terms_;
};

/// Either q_i - c q_j with i < j and c != 0, or q_i alone (j == -1).
struct LinForm {
  int i = 0;
  int j = -1;
  CycNum c;

  static LinForm single(int i) { return LinForm{i, -1, CycNum(0)}; }
  bool is_single() const { return j < 0; }
  Poly to_poly() const;
  std::string str() const;
  friend std::strong_ordering operator<=>(const LinForm& a, const LinForm& b);
  friend bool operator==(const LinForm& a, const LinForm& b);
};

/// Normalize a q_a - c q_b (a != b) into scalar * LinForm.
std::pair<CycNum, LinForm> normalize_difference(int a, const CycNum& coeff_a, int b,
                                                const CycNum& coeff_b);

/// Group action on positions: q_k -> scale[k] * q_{target[k]}.
struct PositionAction {
  std::vector<CycNum> scale;
  std::vector<int> target;

  static PositionAction identity(int L);
  bool is_identity() const;
};

class RatFun {
 public:
  using Den = std::map<LinForm, int>;

  RatFun() = default;
  RatFun(const Poly& num) : num_(num) {}  // NOLINT(google-explicit-constructor)
  RatFun(const CycNum& c) : num_(c) {}  // NOLINT(google-explicit-constructor)
  RatFun(long c) : num_(CycNum(c)) {}  // NOLINT(google-explicit-constructor)
  RatFun(Poly num, Den den);

  /// 1 / (q_i - c q_j), normalized whatever the order of i and j.
  static RatFun inverse_difference(int i, const CycNum& c, int j);
  static RatFun inverse_position(int i);

  const Poly& num() const { return num_; }
  const Den& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.empty(); }
  bool is_constant() const { return den_.empty() && num_.is_constant(); }

  RatFun operator-() const;
  RatFun& operator+=(const RatFun& o);
  RatFun& operator-=(const RatFun& o);
  RatFun& operator*=(const RatFun& o);
  RatFun& operator*=(const CycNum& c);
  friend RatFun operator+(RatFun a, const RatFun& b) { return a += b; }
  friend RatFun operator-(RatFun a, const RatFun& b) { return a -= b; }
  friend RatFun operator*(RatFun a, const RatFun& b) { return a *= b; }
  friend RatFun operator*(RatFun a, const CycNum& c) { return a *= c; }

  RatFun derivative(int position) const;
  RatFun substitute(const PositionAction& action) const;
  RatFun substitute_value(int slot, const CycNum& value) const;
  /// Inverse when the numerator factors into linear forms over the m-th roots of unity.
  std::optional<RatFun> try_inverse(long field_order) const;
  CycNum evaluate(const std::function<CycNum(int)>& value_of) const;

  /// Deterministic text form: "num" or "(num)/(f1^2*f2)".
  std::string str() const;

  /// Divide out every denominator factor that divides the numerator.
  void simplify();

 private:
  Poly num_;
  Den den_;
};

/// Semantic equality by cross-multiplication.
bool ratfun_equal(const RatFun& f, const RatFun& g);

/// Exact quotient of p by the linear form, or nullopt when it does not divide.
std::optional<Poly> divide_by(const Poly& p, const LinForm& f);

/// Factor p completely into linear forms over the m-th roots of unity.
/// Returns the constant and the factor multiset, or nullopt.
std::optional<std::pair<CycNum, RatFun::Den>> factor_linear(const Poly& p, long field_order);

}  // namespace halfloop
