#include "halfloop/polesum.hpp"

#include <algorithm>
#include <sstream>

namespace halfloop {

namespace {

BigInt binomial(long n, long k) {
  if (k < 0 || k > n) return 0;
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

}  // namespace

// ---------------------------------------------------------------- PoleSum

void PoleSum::add(const CycNum& pole, int order, const SparseOp& coeff) {
  if (order < 1) throw std::invalid_argument("PoleSum: order must be positive");
  if (terms_.empty() && layout_.slots() == 0) layout_ = coeff.layout();
  if (!(coeff.layout() == layout_)) throw LayoutMismatch("PoleSum: coefficient layout");
  if (coeff.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(PoleKey{pole, order}, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

SparseOp PoleSum::coeff(const CycNum& pole, int order) const {
  auto it = terms_.find(PoleKey{pole, order});
  return it == terms_.end() ? SparseOp(layout_) : it->second;
}

int PoleSum::max_order() const {
  int m = 0;
  for (const auto& [k, c] : terms_) m = std::max(m, k.order);
  return m;
}

PoleSum PoleSum::operator-() const {
  PoleSum r = *this;
  for (auto& [k, c] : r.terms_) c = -c;
  return r;
}

PoleSum& PoleSum::operator+=(const PoleSum& o) {
  for (const auto& [k, c] : o.terms_) add(k.pole, k.order, c);
  return *this;
}

PoleSum& PoleSum::operator-=(const PoleSum& o) {
  for (const auto& [k, c] : o.terms_) add(k.pole, k.order, -c);
  return *this;
}

PoleSum& PoleSum::operator*=(const CycNum& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [k, op] : terms_) op *= c;
  return *this;
}

PoleSum operator*(const PoleSum& x, const PoleSum& y) {
  PoleSum out(x.layout_);
  for (const auto& [kx, cx] : x.terms_) {
    for (const auto& [ky, cy] : y.terms_) {
      const SparseOp cd = cx * cy;
      if (cd.is_zero()) continue;
      const CycNum& a = kx.pole;
      const CycNum& b = ky.pole;
      const int r = kx.order;
      const int s = ky.order;
      if (a == b) {
        out.add(a, r + s, cd);
        continue;
      }
      // 1/((u-a)^r (u-b)^s) = sum_i A_i/(u-a)^i + sum_j B_j/(u-b)^j
      const CycNum ab = a - b;
      for (int i = 1; i <= r; ++i) {
        CycNum A = CycNum(binomial(r + s - i - 1, s - 1)) / ab.pow(r + s - i);
        if ((r - i) % 2) A = -A;
        out.add(a, i, cd * A);
      }
      const CycNum ba = b - a;
      for (int j = 1; j <= s; ++j) {
        CycNum B = CycNum(binomial(r + s - j - 1, r - 1)) / ba.pow(r + s - j);
        if ((s - j) % 2) B = -B;
        out.add(b, j, cd * B);
      }
    }
  }
  return out;
}

PoleSum PoleSum::left(const SparseOp& op) const {
  return map_coeffs([&](const SparseOp& c) { return op * c; });
}

PoleSum PoleSum::right(const SparseOp& op) const {
  return map_coeffs([&](const SparseOp& c) { return c * op; });
}

PoleSum PoleSum::rescale(const CycNum& c) const {
  if (c.is_zero()) throw DivisionByZero("PoleSum::rescale by zero");
  const CycNum inv = c.inverse();
  PoleSum out(layout_);
  for (const auto& [k, op] : terms_) out.add(k.pole * inv, k.order, op * inv.pow(k.order));
  return out;
}

PoleSum PoleSum::partial_trace(const std::vector<int>& slots) const {
  PoleSum out(layout_.without(slots));
  for (const auto& [k, op] : terms_) out.add(k.pole, k.order, halfloop::partial_trace(op, slots));
  return out;
}

PoleSum PoleSum::embed(const SpaceLayout& target, const std::vector<int>& slot_map) const {
  PoleSum out(target);
  for (const auto& [k, op] : terms_) out.add(k.pole, k.order, halfloop::embed(op, target, slot_map));
  return out;
}

SparseOp PoleSum::series_coeff(int alpha) const {
  SparseOp out(layout_);
  for (const auto& [k, op] : terms_) {
    if (alpha < k.order - 1) continue;
    const CycNum f = CycNum(binomial(alpha, k.order - 1)) * k.pole.pow(alpha - k.order + 1);
    out += op * f;
  }
  return out;
}

std::string PoleSum::first_term() const {
  if (terms_.empty()) return "";
  const auto& [k, op] = *terms_.begin();
  std::ostringstream os;
  os << "pole " << k.pole.str() << " order " << k.order << ": " << op.first_nonzero();
  return os.str();
}

// ---------------------------------------------------------------- UVForm

std::string UVForm::str() const {
  std::ostringstream os;
  bool first = true;
  auto put = [&](const CycNum& x, const char* var) {
    if (x.is_zero()) return;
    std::string t = x.str();
    const bool atomic = x.is_atomic_text();
    bool neg = atomic && t[0] == '-';
    if (neg) t = t.substr(1);
    if (!atomic) t = "(" + t + ")";
    os << (first ? (neg ? "-" : "") : (neg ? " - " : " + "));
    if (*var && t == "1") {
      os << var;
    } else {
      os << t << (*var ? "*" : "") << var;
    }
    first = false;
  };
  put(a, "u");
  put(b, "v");
  put(c, "");
  return os.str();
}

namespace {

// f = lambda * normalized.
std::pair<CycNum, UVForm> normalize(const CycNum& a, const CycNum& b, const CycNum& c) {
  const CycNum lead = !a.is_zero() ? a : b;
  if (lead.is_zero()) throw std::invalid_argument("UVForm: no spectral variable");
  const CycNum inv = lead.inverse();
  return {lead, UVForm{a * inv, b * inv, c * inv}};
}

BiFraction::Denominator merge(const BiFraction::Denominator& x, const BiFraction::Denominator& y) {
  BiFraction::Denominator out;
  std::size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
      out.push_back(x[i++]);
    } else if (i == x.size() || y[j].first < x[i].first) {
      out.push_back(y[j++]);
    } else {
      out.emplace_back(x[i].first, x[i].second + y[j].second);
      ++i;
      ++j;
    }
  }
  return out;
}

using Mono = std::pair<int, int>;
using Poly2 = std::map<Mono, CycNum>;

Poly2 mul2(const Poly2& p, const Poly2& q) {
  Poly2 out;
  for (const auto& [mp, cp] : p)
    for (const auto& [mq, cq] : q) {
      const Mono m{mp.first + mq.first, mp.second + mq.second};
      auto [it, inserted] = out.try_emplace(m, cp * cq);
      if (!inserted) it->second += cp * cq;
    }
  std::erase_if(out, [](const auto& t) { return t.second.is_zero(); });
  return out;
}

Poly2 form_poly(const UVForm& f) {
  Poly2 p;
  if (!f.a.is_zero()) p[{1, 0}] = f.a;
  if (!f.b.is_zero()) p[{0, 1}] = f.b;
  if (!f.c.is_zero()) p[{0, 0}] = f.c;
  return p;
}

}  // namespace

// ---------------------------------------------------------------- BiFraction

void BiFraction::add_term(const Denominator& den, const SparseOp& op) {
  if (terms_.empty() && layout_.slots() == 0) layout_ = op.layout();
  if (!(op.layout() == layout_)) throw LayoutMismatch("BiFraction: coefficient layout");
  if (op.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(den, op);
  if (!inserted) {
    it->second += op;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

BiFraction BiFraction::from(const PoleSum& x, Spectral var, const CycNum& scale) {
  BiFraction out(x.layout());
  for (const auto& [k, op] : x.terms()) {
    const CycNum a = var == Spectral::u ? scale : CycNum(0);
    const CycNum b = var == Spectral::v ? scale : CycNum(0);
    auto [lambda, f] = normalize(a, b, -k.pole);
    out.add_term({{f, k.order}}, op * lambda.pow(-k.order));
  }
  return out;
}

BiFraction BiFraction::over(const SparseOp& op, const CycNum& a, const CycNum& b, const CycNum& c,
                            int power) {
  BiFraction out(op.layout());
  if (power == 0) {
    out.add_term({}, op);
    return out;
  }
  auto [lambda, f] = normalize(a, b, c);
  out.add_term({{f, power}}, op * lambda.pow(-power));
  return out;
}

BiFraction BiFraction::constant(const SparseOp& op) {
  BiFraction out(op.layout());
  out.add_term({}, op);
  return out;
}

BiFraction BiFraction::operator-() const {
  BiFraction r = *this;
  for (auto& [d, op] : r.terms_) op = -op;
  return r;
}

BiFraction& BiFraction::operator+=(const BiFraction& o) {
  for (const auto& [d, op] : o.terms_) add_term(d, op);
  return *this;
}

BiFraction& BiFraction::operator-=(const BiFraction& o) {
  for (const auto& [d, op] : o.terms_) add_term(d, -op);
  return *this;
}

BiFraction& BiFraction::operator*=(const CycNum& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [d, op] : terms_) op *= c;
  return *this;
}

BiFraction operator*(const BiFraction& x, const BiFraction& y) {
  BiFraction out(x.layout_);
  for (const auto& [dx, ox] : x.terms_)
    for (const auto& [dy, oy] : y.terms_) out.add_term(merge(dx, dy), ox * oy);
  return out;
}

BiFraction BiFraction::left(const SparseOp& op) const {
  BiFraction out(layout_);
  for (const auto& [d, c] : terms_) out.add_term(d, op * c);
  return out;
}

BiFraction BiFraction::right(const SparseOp& op) const {
  BiFraction out(layout_);
  for (const auto& [d, c] : terms_) out.add_term(d, c * op);
  return out;
}

BiFraction BiFraction::partial_trace(const std::vector<int>& slots) const {
  BiFraction out(layout_.without(slots));
  for (const auto& [d, c] : terms_) out.add_term(d, halfloop::partial_trace(c, slots));
  return out;
}

bool BiFraction::is_zero(std::string* witness) const {
  if (terms_.empty()) return true;
  std::map<UVForm, int> common;
  for (const auto& [d, op] : terms_)
    for (const auto& [f, m] : d) common[f] = std::max(common[f], m);

  std::map<std::pair<UVForm, int>, Poly2> powers;
  auto power = [&](const UVForm& f, int e) -> const Poly2& {
    auto it = powers.find({f, e});
    if (it != powers.end()) return it->second;
    Poly2 p{{{0, 0}, CycNum(1)}};
    const Poly2 base = form_poly(f);
    for (int k = 0; k < e; ++k) p = mul2(p, base);
    return powers.emplace(std::make_pair(f, e), std::move(p)).first->second;
  };

  std::map<Mono, SparseOp> numerator;
  for (const auto& [d, op] : terms_) {
    Poly2 mult{{{0, 0}, CycNum(1)}};
    for (const auto& [f, m] : common) {
      auto it = std::find_if(d.begin(), d.end(), [&](const auto& t) { return t.first == f; });
      const int have = it == d.end() ? 0 : it->second;
      if (m > have) mult = mul2(mult, power(f, m - have));
    }
    for (const auto& [mono, c] : mult) {
      auto [slot, inserted] = numerator.try_emplace(mono, layout_);
      slot->second += op * c;
    }
  }
  for (const auto& [mono, op] : numerator) {
    if (op.is_zero()) continue;
    if (witness) {
      std::ostringstream os;
      os << "numerator coefficient of u^" << mono.first << " v^" << mono.second << ": "
         << op.first_nonzero();
      *witness = os.str();
    }
    return false;
  }
  return true;
}

BiFraction commutator(const BiFraction& a, const BiFraction& b) { return a * b - b * a; }

}  // namespace halfloop
