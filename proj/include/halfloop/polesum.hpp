#pragma once

// Operator-valued rational functions of the spectral parameter.
//
// PoleSum holds sum coeff / (u - pole)^order. BiFraction holds sums of
// coeff / prod(linear forms in u and v) and decides identities in two
// spectral variables exactly by clearing one common denominator.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "halfloop/tensor_ops.hpp"

namespace halfloop {

struct PoleKey {
  CycNum pole;
  int order = 1;
  friend auto operator<=>(const PoleKey&, const PoleKey&) = default;
  friend bool operator==(const PoleKey&, const PoleKey&) = default;
};

class PoleSum {
 public:
  using Terms = std::map<PoleKey, SparseOp>;

  PoleSum() = default;
  explicit PoleSum(SpaceLayout layout) : layout_(std::move(layout)) {}

  const SpaceLayout& layout() const { return layout_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  void add(const CycNum& pole, int order, const SparseOp& coeff);
  SparseOp coeff(const CycNum& pole, int order) const;
  int max_order() const;

  PoleSum operator-() const;
  PoleSum& operator+=(const PoleSum& o);
  PoleSum& operator-=(const PoleSum& o);
  PoleSum& operator*=(const CycNum& c);
  friend PoleSum operator+(PoleSum a, const PoleSum& b) { return a += b; }
  friend PoleSum operator-(PoleSum a, const PoleSum& b) { return a -= b; }
  friend PoleSum operator*(PoleSum a, const CycNum& c) { return a *= c; }
  /// Noncommutative product, re-expanded into partial fractions.
  friend PoleSum operator*(const PoleSum& a, const PoleSum& b);

  /// op * X and X * op for a constant operator.
  PoleSum left(const SparseOp& op) const;
  PoleSum right(const SparseOp& op) const;
  /// The function u -> X(c u), c != 0.
  PoleSum rescale(const CycNum& c) const;
  PoleSum partial_trace(const std::vector<int>& slots) const;
  PoleSum embed(const SpaceLayout& target, const std::vector<int>& slot_map) const;
  template <class F>
  PoleSum map_coeffs(F f) const {
    PoleSum out;
    bool first = true;
    for (const auto& [k, c] : terms_) {
      SparseOp m = f(c);
      if (first) out.layout_ = m.layout();
      first = false;
      if (!m.is_zero()) out.terms_.emplace(k, std::move(m));
    }
    if (first) out.layout_ = layout_;
    return out;
  }

  /// Coefficient of u^{-(alpha+1)} in the expansion at infinity.
  SparseOp series_coeff(int alpha) const;
  /// Text of the first term, for witnesses.
  std::string first_term() const;

 private:
  SpaceLayout layout_;
  Terms terms_;
};

/// a*u + b*v + c, normalized so the first nonzero of (a, b) is 1.
struct UVForm {
  CycNum a, b, c;
  friend auto operator<=>(const UVForm&, const UVForm&) = default;
  friend bool operator==(const UVForm&, const UVForm&) = default;
  std::string str() const;
};

enum class Spectral { u, v };

class BiFraction {
 public:
  using Denominator = std::vector<std::pair<UVForm, int>>;  // sorted, multiplicities > 0
  using Terms = std::map<Denominator, SparseOp>;

  BiFraction() = default;
  explicit BiFraction(SpaceLayout layout) : layout_(std::move(layout)) {}
  /// X(scale * var) for a one-variable PoleSum.
  static BiFraction from(const PoleSum& x, Spectral var, const CycNum& scale = CycNum(1));
  /// op / (a u + b v + c)^power; power may be 0.
  static BiFraction over(const SparseOp& op, const CycNum& a, const CycNum& b, const CycNum& c,
                         int power = 1);
  static BiFraction constant(const SparseOp& op);

  const SpaceLayout& layout() const { return layout_; }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  BiFraction operator-() const;
  BiFraction& operator+=(const BiFraction& o);
  BiFraction& operator-=(const BiFraction& o);
  BiFraction& operator*=(const CycNum& c);
  friend BiFraction operator+(BiFraction a, const BiFraction& b) { return a += b; }
  friend BiFraction operator-(BiFraction a, const BiFraction& b) { return a -= b; }
  friend BiFraction operator*(BiFraction a, const CycNum& c) { return a *= c; }
  friend BiFraction operator*(const BiFraction& a, const BiFraction& b);

  BiFraction left(const SparseOp& op) const;
  BiFraction right(const SparseOp& op) const;
  BiFraction partial_trace(const std::vector<int>& slots) const;

  /// Exact zero test. On failure, witness names one nonzero numerator coefficient.
  bool is_zero(std::string* witness = nullptr) const;

 private:
  void add_term(const Denominator& den, const SparseOp& op);
  SpaceLayout layout_;
  Terms terms_;
};

BiFraction commutator(const BiFraction& a, const BiFraction& b);

}  // namespace halfloop
