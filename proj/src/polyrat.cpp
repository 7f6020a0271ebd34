#include "halfloop/polyrat.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace halfloop {

namespace var {

int q(int i) {
  if (i < 0 || i >= kMaxPositions) throw std::out_of_range("position index out of range");
  return i;
}

int mu(int k) {
  if (k < 0 || k >= kMaxMu) throw std::out_of_range("mu index out of range");
  return kMu0 + k;
}

bool is_position(int slot) { return slot >= 0 && slot < kMaxPositions; }

std::string name(int slot) {
  if (is_position(slot)) return "q" + std::to_string(slot + 1);
  if (slot == kLambda) return "lambda";
  if (slot == kHbar) return "hbar";
  if (slot >= kMu0 && slot < kMu0 + kMaxMu) return "mu" + std::to_string(slot - kMu0);
  throw std::out_of_range("unknown variable slot");
}

}  // namespace var

// ---------------------------------------------------------------- Monomial

Monomial Monomial::variable(int slot, int exponent) {
  Monomial m;
  m.set(slot, exponent);
  return m;
}

void Monomial::set(int slot, int exponent) {
  if (exponent < 0 || exponent > 255) throw std::out_of_range("monomial exponent out of range");
  exps_[static_cast<std::size_t>(slot)] = static_cast<std::uint8_t>(exponent);
}

int Monomial::degree() const {
  int d = 0;
  for (auto e : exps_) d += e;
  return d;
}

int Monomial::position_degree() const {
  int d = 0;
  for (int s = 0; s < var::kMaxPositions; ++s) d += exps_[static_cast<std::size_t>(s)];
  return d;
}

bool Monomial::is_one() const {
  return std::all_of(exps_.begin(), exps_.end(), [](std::uint8_t e) { return e == 0; });
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial r;
  for (std::size_t s = 0; s < exps_.size(); ++s) {
    const int e = exps_[s] + o.exps_[s];
    if (e > 255) throw std::overflow_error("monomial exponent overflow");
    r.exps_[s] = static_cast<std::uint8_t>(e);
  }
  return r;
}

std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
  const int da = a.degree();
  const int db = b.degree();
  if (da != db) return da <=> db;
  for (std::size_t s = 0; s < a.exps_.size(); ++s) {
    if (a.exps_[s] != b.exps_[s]) return a.exps_[s] <=> b.exps_[s];
  }
  return std::strong_ordering::equal;
}

std::string Monomial::str() const {
  std::string out;
  for (int s = 0; s < var::kSlots; ++s) {
    const int e = exps_[static_cast<std::size_t>(s)];
    if (e == 0) continue;
    if (!out.empty()) out += "*";
    out += var::name(s);
    if (e > 1) out += "^" + std::to_string(e);
  }
  return out.empty() ? "1" : out;
}

// ---------------------------------------------------------------- Poly

Poly::Poly(const CycNum& c) {
  if (!c.is_zero()) terms_.emplace(Monomial(), c);
}

Poly Poly::variable(int slot) { return monomial(Monomial::variable(slot), CycNum(1)); }

Poly Poly::monomial(const Monomial& m, const CycNum& c) {
  Poly p;
  p.add_term(m, c);
  return p;
}

bool Poly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

CycNum Poly::constant_term() const {
  auto it = terms_.find(Monomial());
  return it == terms_.end() ? CycNum(0) : it->second;
}

int Poly::degree_in(int slot) const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m[slot]);
  return d;
}

bool Poly::depends_on_positions() const {
  return std::any_of(terms_.begin(), terms_.end(),
                     [](const auto& t) { return t.first.position_degree() > 0; });
}

void Poly::add_term(const Monomial& m, const CycNum& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

Poly& Poly::operator+=(const Poly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  Poly r;
  if (a.is_zero() || b.is_zero()) return r;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
  }
  return r;
}

Poly& Poly::operator*=(const Poly& o) { return *this = *this * o; }

Poly& Poly::operator*=(const CycNum& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  if (c.is_one()) return *this;
  for (auto& [m, v] : terms_) v *= c;
  return *this;
}

Poly Poly::pow(int e) const {
  if (e < 0) throw std::invalid_argument("Poly::pow: negative exponent");
  Poly result(1);
  Poly base = *this;
  while (e > 0) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return result;
}

Poly Poly::derivative(int slot) const {
  Poly r;
  for (const auto& [m, c] : terms_) {
    const int e = m[slot];
    if (e == 0) continue;
    Monomial dm = m;
    dm.set(slot, e - 1);
    r.add_term(dm, c * CycNum(static_cast<long>(e)));
  }
  return r;
}

Poly Poly::substitute(const PositionAction& action) const {
  if (action.is_identity()) return *this;
  Poly r;
  const int L = static_cast<int>(action.target.size());
  for (const auto& [m, c] : terms_) {
    Monomial nm = m;
    CycNum coeff = c;
    for (int k = 0; k < L; ++k) nm.set(k, 0);
    for (int k = 0; k < L; ++k) {
      const int e = m[k];
      if (e == 0) continue;
      nm.set(action.target[static_cast<std::size_t>(k)], e);
      const CycNum& s = action.scale[static_cast<std::size_t>(k)];
      if (!s.is_one()) coeff *= s.pow(e);
    }
    for (int k = L; k < var::kMaxPositions; ++k) {
      if (m[k] != 0) throw std::logic_error("Poly::substitute: position outside the action");
    }
    r.add_term(nm, coeff);
  }
  return r;
}

Poly Poly::substitute_value(int slot, const CycNum& value) const {
  Poly r;
  for (const auto& [m, c] : terms_) {
    const int e = m[slot];
    if (e == 0) {
      r.add_term(m, c);
      continue;
    }
    Monomial nm = m;
    nm.set(slot, 0);
    r.add_term(nm, c * value.pow(e));
  }
  return r;
}

CycNum Poly::evaluate(const std::function<CycNum(int)>& value_of) const {
  CycNum acc;
  std::map<int, CycNum> cache;
  for (const auto& [m, c] : terms_) {
    CycNum t = c;
    for (int s = 0; s < var::kSlots; ++s) {
      const int e = m[s];
      if (e == 0) continue;
      auto it = cache.find(s);
      if (it == cache.end()) it = cache.emplace(s, value_of(s)).first;
      t *= it->second.pow(e);
    }
    acc += t;
  }
  return acc;
}

namespace {

// Appends "c*m" with the sign pulled out where the coefficient text allows it.
void append_term(std::ostringstream& os, bool first, const CycNum& c, const std::string& body) {
  std::string ct = c.str();
  bool negative = false;
  if (c.is_atomic_text() && !ct.empty() && ct[0] == '-') {
    negative = true;
    ct = ct.substr(1);
  }
  if (first) {
    if (negative) os << "-";
  } else {
    os << (negative ? " - " : " + ");
  }
  const bool unit = (ct == "1");
  if (body.empty()) {
    os << (c.is_atomic_text() ? ct : "(" + ct + ")");
  } else if (unit) {
    os << body;
  } else {
    os << (c.is_atomic_text() ? ct : "(" + ct + ")") << "*" << body;
  }
}

}  // namespace

std::string Poly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    append_term(os, first, it->second, it->first.is_one() ? std::string() : it->first.str());
    first = false;
  }
  return os.str();
}

// ---------------------------------------------------------------- LinForm

Poly LinForm::to_poly() const {
  Poly p = Poly::q(i);
  if (!is_single()) p -= Poly::q(j) * c;
  return p;
}

std::string LinForm::str() const {
  const std::string qi = var::name(var::q(i));
  if (is_single()) return qi;
  std::ostringstream os;
  os << qi;
  const CycNum neg = -c;
  append_term(os, false, neg, var::name(var::q(j)));
  return os.str();
}

std::strong_ordering operator<=>(const LinForm& a, const LinForm& b) {
  if (a.i != b.i) return a.i <=> b.i;
  if (a.j != b.j) return a.j <=> b.j;
  if (a.is_single()) return std::strong_ordering::equal;
  return a.c <=> b.c;
}

bool operator==(const LinForm& a, const LinForm& b) {
  return a.i == b.i && a.j == b.j && (a.is_single() || a.c == b.c);
}

std::pair<CycNum, LinForm> normalize_difference(int a, const CycNum& coeff_a, int b,
                                                const CycNum& coeff_b) {
  if (a == b) throw std::invalid_argument("normalize_difference: identical positions");
  if (coeff_a.is_zero() || coeff_b.is_zero())
    throw std::invalid_argument("normalize_difference: zero coefficient");
  if (a < b) return {coeff_a, LinForm{a, b, -coeff_b / coeff_a}};
  return {coeff_b, LinForm{b, a, -coeff_a / coeff_b}};
}

PositionAction PositionAction::identity(int L) {
  PositionAction a;
  a.scale.assign(static_cast<std::size_t>(L), CycNum(1));
  a.target.resize(static_cast<std::size_t>(L));
  for (int k = 0; k < L; ++k) a.target[static_cast<std::size_t>(k)] = k;
  return a;
}

bool PositionAction::is_identity() const {
  for (std::size_t k = 0; k < target.size(); ++k) {
    if (target[k] != static_cast<int>(k) || !scale[k].is_one()) return false;
  }
  return true;
}

// ---------------------------------------------------------------- division

std::optional<Poly> divide_by(const Poly& p, const LinForm& f) {
  if (p.is_zero()) return Poly();
  const int qi = var::q(f.i);
  if (f.is_single()) {
    Poly r;
    for (const auto& [m, c] : p.terms()) {
      if (m[qi] == 0) return std::nullopt;
      Monomial nm = m;
      nm.set(qi, m[qi] - 1);
      r.add_term(nm, c);
    }
    return r;
  }
  // p = sum_k N_k q_i^k; divide by (q_i - c q_j), monic in q_i.
  std::map<int, Poly> by_power;
  for (const auto& [m, c] : p.terms()) {
    Monomial rest = m;
    rest.set(qi, 0);
    by_power[m[qi]].add_term(rest, c);
  }
  const int d = by_power.rbegin()->first;
  if (d == 0) return std::nullopt;
  const Poly shift = Poly::q(f.j) * f.c;
  std::vector<Poly> quotient(static_cast<std::size_t>(d));
  Poly carry;  // Q_k
  for (int k = d; k >= 1; --k) {
    Poly nk;
    if (auto it = by_power.find(k); it != by_power.end()) nk = it->second;
    carry = (k == d) ? nk : nk + shift * carry;
    quotient[static_cast<std::size_t>(k - 1)] = carry;
  }
  Poly remainder;
  if (auto it = by_power.find(0); it != by_power.end()) remainder = it->second;
  remainder += shift * carry;
  if (!remainder.is_zero()) return std::nullopt;
  Poly out;
  for (int k = 0; k < d; ++k) {
    for (const auto& [m, c] : quotient[static_cast<std::size_t>(k)].terms()) {
      Monomial nm = m;
      nm.set(qi, k);
      out.add_term(nm, c);
    }
  }
  return out;
}

std::optional<std::pair<CycNum, RatFun::Den>> factor_linear(const Poly& p, long field_order) {
  if (p.is_zero()) return std::nullopt;
  RatFun::Den factors;
  Poly rest = p;
  while (!rest.is_constant()) {
    std::vector<int> present;
    for (int s = 0; s < var::kMaxPositions; ++s) {
      if (rest.degree_in(s) > 0) present.push_back(s);
    }
    for (const auto& [m, c] : rest.terms()) {
      if (m.degree() != m.position_degree()) return std::nullopt;  // parameters in a denominator
    }
    bool found = false;
    for (int a : present) {
      LinForm single = LinForm::single(a);
      if (auto q = divide_by(rest, single)) {
        rest = std::move(*q);
        ++factors[single];
        found = true;
        break;
      }
    }
    for (std::size_t x = 0; !found && x < present.size(); ++x) {
      for (std::size_t y = x + 1; !found && y < present.size(); ++y) {
        for (long k = 0; !found && k < field_order; ++k) {
          LinForm f{present[x], present[y], CycNum::root(field_order, k)};
          if (auto q = divide_by(rest, f)) {
            rest = std::move(*q);
            ++factors[f];
            found = true;
          }
        }
      }
    }
    if (!found) return std::nullopt;
  }
  return std::make_pair(rest.constant_term(), std::move(factors));
}

// ---------------------------------------------------------------- RatFun

RatFun::RatFun(Poly num, Den den) : num_(std::move(num)), den_(std::move(den)) {
  for (auto it = den_.begin(); it != den_.end();) {
    if (it->second < 0) throw std::invalid_argument("RatFun: negative multiplicity");
    it = (it->second == 0) ? den_.erase(it) : std::next(it);
  }
  simplify();
}

RatFun RatFun::inverse_difference(int i, const CycNum& c, int j) {
  if (i == j) throw std::invalid_argument("inverse_difference: identical positions");
  auto [scalar, form] = normalize_difference(i, CycNum(1), j, -c);
  RatFun r(Poly(scalar.inverse()));
  r.den_[form] = 1;
  return r;
}

RatFun RatFun::inverse_position(int i) {
  RatFun r(Poly(1));
  r.den_[LinForm::single(i)] = 1;
  return r;
}

void RatFun::simplify() {
  if (num_.is_zero()) {
    den_.clear();
    return;
  }
  for (auto it = den_.begin(); it != den_.end();) {
    if (!num_.depends_on_positions()) break;
    while (it->second > 0) {
      auto q = divide_by(num_, it->first);
      if (!q) break;
      num_ = std::move(*q);
      --it->second;
    }
    it = (it->second == 0) ? den_.erase(it) : std::next(it);
  }
}

RatFun RatFun::operator-() const {
  RatFun r = *this;
  r.num_ = -r.num_;
  return r;
}

RatFun& RatFun::operator+=(const RatFun& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  if (den_ == o.den_) {
    num_ += o.num_;
    simplify();
    return *this;
  }
  Den common = den_;
  for (const auto& [f, k] : o.den_) {
    auto& slot = common[f];
    slot = std::max(slot, k);
  }
  auto lift = [&common](const Poly& num, const Den& den) {
    Poly out = num;
    for (const auto& [f, k] : common) {
      auto it = den.find(f);
      const int have = it == den.end() ? 0 : it->second;
      if (k > have) out = out * f.to_poly().pow(k - have);
    }
    return out;
  };
  num_ = lift(num_, den_) + lift(o.num_, o.den_);
  den_ = std::move(common);
  simplify();
  return *this;
}

RatFun& RatFun::operator-=(const RatFun& o) { return *this += -o; }

RatFun& RatFun::operator*=(const RatFun& o) {
  if (is_zero()) return *this;
  if (o.is_zero()) return *this = RatFun();
  num_ = num_ * o.num_;
  for (const auto& [f, k] : o.den_) den_[f] += k;
  simplify();
  return *this;
}

RatFun& RatFun::operator*=(const CycNum& c) {
  num_ *= c;
  if (num_.is_zero()) den_.clear();
  return *this;
}

RatFun RatFun::derivative(int position) const {
  const int slot = var::q(position);
  std::vector<std::pair<LinForm, std::pair<int, CycNum>>> moving;  // factor, (mult, d factor)
  for (const auto& [f, k] : den_) {
    CycNum d;
    if (f.i == position) d = CycNum(1);
    if (!f.is_single() && f.j == position) d = -f.c;
    if (!d.is_zero()) moving.push_back({f, {k, d}});
  }
  if (moving.empty()) return RatFun(num_.derivative(slot), den_);
  Poly all = Poly(1);
  for (const auto& mv : moving) all = all * mv.first.to_poly();
  Poly out = num_.derivative(slot) * all;
  for (std::size_t a = 0; a < moving.size(); ++a) {
    Poly others(1);
    for (std::size_t b = 0; b < moving.size(); ++b) {
      if (b != a) others = others * moving[b].first.to_poly();
    }
    const CycNum w = moving[a].second.second * CycNum(static_cast<long>(moving[a].second.first));
    out -= num_ * others * w;
  }
  Den den = den_;
  for (const auto& mv : moving) ++den[mv.first];
  return RatFun(std::move(out), std::move(den));
}

RatFun RatFun::substitute(const PositionAction& action) const {
  if (action.is_identity()) return *this;
  Poly num = num_.substitute(action);
  Den den;
  CycNum scalar(1);
  for (const auto& [f, k] : den_) {
    const auto ta = static_cast<std::size_t>(f.i);
    if (f.is_single()) {
      scalar *= action.scale[ta].pow(k);
      den[LinForm::single(action.target[ta])] += k;
      continue;
    }
    const auto tb = static_cast<std::size_t>(f.j);
    auto [s, form] = normalize_difference(action.target[ta], action.scale[ta], action.target[tb],
                                          -(f.c * action.scale[tb]));
    scalar *= s.pow(k);
    den[form] += k;
  }
  num *= scalar.inverse();
  return RatFun(std::move(num), std::move(den));
}

RatFun RatFun::substitute_value(int slot, const CycNum& value) const {
  if (var::is_position(slot)) throw std::invalid_argument("substitute_value: parameters only");
  return RatFun(num_.substitute_value(slot, value), den_);
}

std::optional<RatFun> RatFun::try_inverse(long field_order) const {
  if (is_zero()) throw DivisionByZero("RatFun: inverse of zero");
  auto factored = factor_linear(num_, field_order);
  if (!factored) return std::nullopt;
  Poly num(factored->first.inverse());
  for (const auto& [f, k] : den_) num = num * f.to_poly().pow(k);
  return RatFun(std::move(num), std::move(factored->second));
}

CycNum RatFun::evaluate(const std::function<CycNum(int)>& value_of) const {
  CycNum d(1);
  for (const auto& [f, k] : den_) d *= f.to_poly().evaluate(value_of).pow(k);
  if (d.is_zero()) throw DivisionByZero("RatFun::evaluate: pole");
  return num_.evaluate(value_of) / d;
}

std::string RatFun::str() const {
  if (den_.empty()) return num_.str();
  std::ostringstream os;
  os << "(" << num_.str() << ")/(";
  bool first = true;
  for (const auto& [f, k] : den_) {
    if (!first) os << "*";
    first = false;
    os << "(" << f.str() << ")";
    if (k > 1) os << "^" << k;
  }
  os << ")";
  return os.str();
}

bool ratfun_equal(const RatFun& f, const RatFun& g) { return (f - g).is_zero(); }

}  // namespace halfloop
