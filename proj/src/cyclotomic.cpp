#include "halfloop/cyclotomic.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <ostream>
#include <sstream>

namespace halfloop {

long gcd_long(long a, long b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b != 0) {
    long t = a % b;
    a = b;
    b = t;
  }
  return a;
}

long lcm_long(long a, long b) { return a / gcd_long(a, b) * b; }

long euler_phi(long m) {
  if (m < 1) throw std::invalid_argument("euler_phi: m must be positive");
  long result = m;
  long x = m;
  for (long p = 2; p * p <= x; ++p) {
    if (x % p == 0) {
      while (x % p == 0) x /= p;
      result -= result / p;
    }
  }
  if (x > 1) result -= result / x;
  return result;
}

namespace {

using IntPoly = std::vector<BigInt>;  // lowest degree first

void trim(IntPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

// Exact division of integer polynomials by a monic divisor.
IntPoly divide_monic(IntPoly num, const IntPoly& den) {
  trim(num);
  const std::size_t dn = den.size() - 1;
  if (num.size() < den.size()) return {};
  IntPoly q(num.size() - dn, 0);
  for (std::size_t k = num.size(); k-- > dn;) {
    BigInt lead = num[k];
    if (lead == 0) continue;
    q[k - dn] = lead;
    for (std::size_t i = 0; i <= dn; ++i) num[k - dn + i] -= lead * den[i];
  }
  trim(num);
  if (!num.empty()) throw std::logic_error("cyclotomic_polynomial: inexact division");
  trim(q);
  return q;
}

struct FieldData {
  long m = 1;
  long phi = 1;
  IntPoly cyclo;
  // x^k reduced mod Phi_m, for 0 <= k < max(m, 2 phi - 1).
  std::vector<IntPoly> xpow;
};

IntPoly compute_cyclotomic(long m) {
  IntPoly p(static_cast<std::size_t>(m) + 1, 0);
  p[0] = -1;
  p[static_cast<std::size_t>(m)] = 1;
  for (long d = 1; d < m; ++d) {
    if (m % d == 0) p = divide_monic(p, cyclotomic_polynomial(d));
  }
  return p;
}

std::mutex& cache_mutex() {
  static std::mutex mu;
  return mu;
}

const FieldData& field(long m) {
  static std::map<long, std::unique_ptr<FieldData>> cache;
  {
    std::lock_guard<std::mutex> lock(cache_mutex());
    auto it = cache.find(m);
    if (it != cache.end()) return *it->second;
  }
  auto fd = std::make_unique<FieldData>();
  fd->m = m;
  fd->phi = euler_phi(m);
  fd->cyclo = cyclotomic_polynomial(m);
  const auto phi = static_cast<std::size_t>(fd->phi);
  const std::size_t count = std::max<std::size_t>(static_cast<std::size_t>(m), 2 * phi);
  fd->xpow.reserve(count);
  IntPoly cur(phi, 0);
  cur[0] = 1;
  for (std::size_t k = 0; k < count; ++k) {
    fd->xpow.push_back(cur);
    // multiply by x and reduce with x^phi = -sum_{i<phi} c_i x^i
    BigInt top = cur[phi - 1];
    for (std::size_t i = phi - 1; i > 0; --i) cur[i] = cur[i - 1];
    cur[0] = 0;
    if (top != 0) {
      for (std::size_t i = 0; i < phi; ++i) cur[i] -= top * fd->cyclo[i];
    }
  }
  std::lock_guard<std::mutex> lock(cache_mutex());
  auto [it, inserted] = cache.emplace(m, std::move(fd));
  return *it->second;
}

// Rational polynomial helpers for the extended Euclidean algorithm.
using RatPoly = std::vector<BigRational>;

void trim(RatPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

void divmod(const RatPoly& a, const RatPoly& b, RatPoly& q, RatPoly& r) {
  r = a;
  trim(r);
  q.assign(r.size() >= b.size() ? r.size() - b.size() + 1 : 0, 0);
  while (!r.empty() && r.size() >= b.size()) {
    const std::size_t shift = r.size() - b.size();
    BigRational c = r.back() / b.back();
    q[shift] = c;
    for (std::size_t i = 0; i < b.size(); ++i) r[shift + i] -= c * b[i];
    trim(r);
  }
}

RatPoly mul(const RatPoly& a, const RatPoly& b) {
  if (a.empty() || b.empty()) return {};
  RatPoly out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  trim(out);
  return out;
}

RatPoly sub(const RatPoly& a, const RatPoly& b) {
  RatPoly out(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] -= b[i];
  trim(out);
  return out;
}

}  // namespace

std::vector<BigInt> cyclotomic_polynomial(long m) {
  if (m < 1) throw std::invalid_argument("cyclotomic_polynomial: m must be positive");
  if (m == 1) return {BigInt(-1), BigInt(1)};
  static std::map<long, IntPoly> memo;
  static std::mutex mu;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = memo.find(m);
    if (it != memo.end()) return it->second;
  }
  IntPoly p = compute_cyclotomic(m);
  std::lock_guard<std::mutex> lock(mu);
  memo.emplace(m, p);
  return p;
}

CycNum::CycNum() : order_(1), num_{BigInt(0)}, den_(1) {}
CycNum::CycNum(long v) : order_(1), num_{BigInt(v)}, den_(1) {}
CycNum::CycNum(const BigInt& v) : order_(1), num_{v}, den_(1) {}
CycNum::CycNum(const BigRational& v) : order_(1), num_{v.get_num()}, den_(v.get_den()) {}

CycNum::CycNum(long order, std::vector<BigInt> num, BigInt den)
    : order_(order), num_(std::move(num)), den_(std::move(den)) {
  normalize();
}

void CycNum::normalize() {
  if (den_ < 0) {
    den_ = -den_;
    for (auto& c : num_) c = -c;
  }
  BigInt g = den_;
  for (const auto& c : num_) {
    if (g == 1) break;
    if (c != 0) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  }
  bool all_zero = true;
  for (const auto& c : num_) {
    if (c != 0) {
      all_zero = false;
      break;
    }
  }
  if (all_zero) {
    den_ = 1;
  } else if (g != 1) {
    for (auto& c : num_) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
    mpz_divexact(den_.get_mpz_t(), den_.get_mpz_t(), g.get_mpz_t());
  }
  collapse_if_rational();
}

void CycNum::collapse_if_rational() {
  if (order_ == 1) return;
  for (std::size_t k = 1; k < num_.size(); ++k) {
    if (num_[k] != 0) return;
  }
  order_ = 1;
  num_.resize(1);
}

CycNum CycNum::root(long m, long k) {
  if (m < 1) throw std::invalid_argument("root: order must be positive");
  if (m == 1) return CycNum(1);
  long r = k % m;
  if (r < 0) r += m;
  const FieldData& fd = field(m);
  return CycNum(m, fd.xpow[static_cast<std::size_t>(r)], BigInt(1));
}

CycNum CycNum::from_coeffs(long m, const std::vector<BigRational>& coeffs) {
  const long phi = euler_phi(m);
  if (static_cast<long>(coeffs.size()) != phi)
    throw std::invalid_argument("from_coeffs: expected phi(m) coefficients");
  BigInt den = 1;
  for (const auto& c : coeffs) {
    BigInt d = c.get_den();
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), d.get_mpz_t());
  }
  std::vector<BigInt> num;
  num.reserve(coeffs.size());
  for (const auto& c : coeffs) num.push_back(c.get_num() * (den / c.get_den()));
  if (m == 1) return CycNum(BigRational(num[0], den));
  return CycNum(m, std::move(num), std::move(den));
}

bool CycNum::is_zero() const { return order_ == 1 && num_[0] == 0; }
bool CycNum::is_one() const { return order_ == 1 && num_[0] == 1 && den_ == 1; }

BigRational CycNum::rational_value() const {
  if (order_ != 1) throw std::logic_error("CycNum::rational_value on an irrational value");
  BigRational r(num_[0], den_);
  r.canonicalize();
  return r;
}

BigRational CycNum::coeff(std::size_t k) const {
  if (k >= num_.size()) return BigRational(0);
  BigRational r(num_[k], den_);
  r.canonicalize();
  return r;
}

CycNum CycNum::lift_order(long m) const {
  if (m < 1) throw std::invalid_argument("lift_order: order must be positive");
  if (order_ == 1) return *this;
  if (m % order_ != 0) throw std::invalid_argument("lift_order: target order is not a multiple");
  if (m == order_) return *this;
  const long step = m / order_;
  const FieldData& fd = field(m);
  std::vector<BigInt> acc(static_cast<std::size_t>(fd.phi), 0);
  for (std::size_t k = 0; k < num_.size(); ++k) {
    if (num_[k] == 0) continue;
    const auto& basis = fd.xpow[static_cast<std::size_t>((static_cast<long>(k) * step) % m)];
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += num_[k] * basis[i];
  }
  return CycNum(m, std::move(acc), den_);
}

void CycNum::align(CycNum& a, CycNum& b) {
  if (a.order_ == b.order_) return;
  if (a.order_ == 1) {
    a = a.lift_order(b.order_);
    a.order_ = b.order_;
    a.num_.resize(b.num_.size(), 0);
    return;
  }
  if (b.order_ == 1) {
    b.order_ = a.order_;
    b.num_.resize(a.num_.size(), 0);
    return;
  }
  throw OrderMismatch("CycNum: operands live in Q(zeta_" + std::to_string(a.order_) +
                      ") and Q(zeta_" + std::to_string(b.order_) + ")");
}

CycNum CycNum::operator-() const {
  CycNum r = *this;
  for (auto& c : r.num_) c = -c;
  return r;
}

CycNum& CycNum::operator+=(const CycNum& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  CycNum b = o;
  align(*this, b);
  if (den_ == b.den_) {
    for (std::size_t i = 0; i < num_.size(); ++i) num_[i] += b.num_[i];
  } else {
    for (std::size_t i = 0; i < num_.size(); ++i) num_[i] = num_[i] * b.den_ + b.num_[i] * den_;
    den_ *= b.den_;
  }
  normalize();
  return *this;
}

CycNum& CycNum::operator-=(const CycNum& o) { return *this += -o; }

CycNum& CycNum::operator*=(const CycNum& o) {
  if (is_zero()) return *this;
  if (o.is_zero()) return *this = CycNum();
  if (o.order_ == 1) {
    for (auto& c : num_) c *= o.num_[0];
    den_ *= o.den_;
    normalize();
    return *this;
  }
  if (order_ == 1) {
    CycNum r = o;
    for (auto& c : r.num_) c *= num_[0];
    r.den_ *= den_;
    r.normalize();
    return *this = std::move(r);
  }
  if (order_ != o.order_)
    throw OrderMismatch("CycNum: operands live in different cyclotomic fields");
  const FieldData& fd = field(order_);
  const std::size_t phi = num_.size();
  std::vector<BigInt> prod(2 * phi - 1, 0);
  for (std::size_t i = 0; i < phi; ++i) {
    if (num_[i] == 0) continue;
    for (std::size_t j = 0; j < phi; ++j) {
      if (o.num_[j] == 0) continue;
      prod[i + j] += num_[i] * o.num_[j];
    }
  }
  std::vector<BigInt> out(prod.begin(), prod.begin() + static_cast<long>(phi));
  for (std::size_t k = phi; k < prod.size(); ++k) {
    if (prod[k] == 0) continue;
    const auto& basis = fd.xpow[k];
    for (std::size_t i = 0; i < phi; ++i) out[i] += prod[k] * basis[i];
  }
  num_ = std::move(out);
  den_ *= o.den_;
  normalize();
  return *this;
}

CycNum& CycNum::operator/=(const CycNum& o) { return *this *= o.inverse(); }

CycNum CycNum::inverse() const {
  if (is_zero()) throw DivisionByZero("CycNum: inverse of zero");
  if (order_ == 1) return CycNum(BigRational(den_, num_[0]));
  // s * a + t * Phi = g with g a nonzero constant
  const FieldData& fd = field(order_);
  RatPoly a(num_.size());
  for (std::size_t i = 0; i < num_.size(); ++i) a[i] = BigRational(num_[i]);
  trim(a);
  RatPoly phi_poly(fd.cyclo.size());
  for (std::size_t i = 0; i < fd.cyclo.size(); ++i) phi_poly[i] = BigRational(fd.cyclo[i]);
  RatPoly r0 = phi_poly, r1 = a;
  RatPoly s0, s1{BigRational(1)};
  while (r1.size() > 1) {
    RatPoly q, r;
    divmod(r0, r1, q, r);
    RatPoly s2 = sub(s0, mul(q, s1));
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  if (r1.empty()) throw std::logic_error("CycNum::inverse: element is a zero divisor");
  const BigRational g = r1[0];
  std::vector<BigRational> coeffs(num_.size(), 0);
  // s1 * (a / den) = g  =>  inverse = s1 * den / g
  for (std::size_t i = 0; i < s1.size() && i < coeffs.size(); ++i)
    coeffs[i] = s1[i] * BigRational(den_) / g;
  return from_coeffs(order_, coeffs);
}

CycNum CycNum::conj() const {
  if (order_ == 1) return *this;
  CycNum acc;
  for (std::size_t k = 0; k < num_.size(); ++k) {
    if (num_[k] == 0) continue;
    acc += CycNum(BigRational(num_[k], den_)) * root(order_, -static_cast<long>(k));
  }
  return acc;
}

CycNum CycNum::pow(long e) const {
  if (e < 0) return inverse().pow(-e);
  CycNum result(1);
  CycNum base = *this;
  while (e > 0) {
    if (e & 1) result *= base;
    e >>= 1;
    if (e > 0) base *= base;
  }
  return result;
}

std::complex<double> CycNum::to_complex() const {
  std::complex<double> acc(0.0, 0.0);
  for (std::size_t k = 0; k < num_.size(); ++k) {
    if (num_[k] == 0) continue;
    BigRational c(num_[k], den_);
    c.canonicalize();
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(order_);
    acc += c.get_d() * std::complex<double>(std::cos(angle), std::sin(angle));
  }
  return acc;
}

bool operator==(const CycNum& a, const CycNum& b) {
  return a.order_ == b.order_ && a.den_ == b.den_ && a.num_ == b.num_;
}

std::strong_ordering operator<=>(const CycNum& a, const CycNum& b) {
  if (a.order_ != b.order_) return a.order_ <=> b.order_;
  int c = cmp(a.den_, b.den_);
  if (c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  for (std::size_t i = 0; i < a.num_.size(); ++i) {
    c = cmp(a.num_[i], b.num_[i]);
    if (c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  return std::strong_ordering::equal;
}

std::string CycNum::str() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t k = 0; k < num_.size(); ++k) {
    if (num_[k] == 0) continue;
    BigRational c(num_[k], den_);
    c.canonicalize();
    const bool negative = c < 0;
    if (negative) c = -c;
    if (first) {
      if (negative) os << "-";
    } else {
      os << (negative ? " - " : " + ");
    }
    first = false;
    if (k == 0) {
      os << c.get_str();
    } else {
      if (c != 1) os << c.get_str() << "*";
      os << "zeta(" << order_ << "," << k << ")";
    }
  }
  if (first) os << "0";
  return os.str();
}

bool CycNum::is_atomic_text() const {
  std::size_t nonzero = 0;
  for (const auto& c : num_) nonzero += (c != 0) ? 1 : 0;
  if (nonzero > 1) return false;
  return true;
}

std::size_t CycNum::hash() const {
  std::size_t h = static_cast<std::size_t>(order_) * 0x9e3779b97f4a7c15ULL;
  auto mix = [&h](const BigInt& x) {
    const unsigned long v = mpz_fdiv_ui(x.get_mpz_t(), 4294967291UL);
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= static_cast<std::size_t>(mpz_sgn(x.get_mpz_t()) + 1);
  };
  mix(den_);
  for (const auto& c : num_) mix(c);
  return h;
}

std::ostream& operator<<(std::ostream& os, const CycNum& c) { return os << c.str(); }

}  // namespace halfloop
