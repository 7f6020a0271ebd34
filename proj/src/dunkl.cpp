#include "halfloop/dunkl.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

namespace halfloop {

namespace {

int mod(long a, int n) {
  const long r = a % n;
  return static_cast<int>(r < 0 ? r + n : r);
}

long binomial(int n, int k) {
  long r = 1;
  for (int t = 1; t <= k; ++t) r = r * (n - k + t) / t;
  return r;
}

CycNum imag_unit(long m) { return CycNum::root(m, m / 4); }

RatFun minus_i_hbar(long m) { return RatFun(Poly::variable(var::kHbar) * -imag_unit(m)); }

}  // namespace

// ---------------------------------------------------------------- WreathElem

WreathElem WreathElem::identity(int n, int L) {
  WreathElem w;
  w.n = n;
  w.phase.assign(static_cast<std::size_t>(L), 0);
  w.perm.resize(static_cast<std::size_t>(L));
  std::iota(w.perm.begin(), w.perm.end(), 0);
  return w;
}

WreathElem WreathElem::rotation(int n, int L, int i, int power) {
  WreathElem w = identity(n, L);
  w.phase[static_cast<std::size_t>(i)] = mod(power, n);
  return w;
}

WreathElem WreathElem::transposition(int n, int L, int i, int j) {
  WreathElem w = identity(n, L);
  std::swap(w.perm[static_cast<std::size_t>(i)], w.perm[static_cast<std::size_t>(j)]);
  return w;
}

WreathElem WreathElem::permutation(int n, std::vector<int> perm) {
  WreathElem w = identity(n, static_cast<int>(perm.size()));
  std::vector<int> sorted = perm;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != w.perm) throw std::invalid_argument("not a permutation");
  w.perm = std::move(perm);
  return w;
}

bool WreathElem::is_identity() const {
  for (std::size_t j = 0; j < perm.size(); ++j)
    if (phase[j] != 0 || perm[j] != static_cast<int>(j)) return false;
  return true;
}

WreathElem operator*(const WreathElem& x, const WreathElem& y) {
  // (a, pi)(b, rho) = (a + pi.b, pi rho), (pi.b)_{pi(j)} = b_j
  WreathElem w = x;
  for (std::size_t j = 0; j < y.perm.size(); ++j) {
    const auto t = static_cast<std::size_t>(x.perm[j]);
    w.phase[t] = mod(w.phase[t] + y.phase[j], x.n);
    w.perm[j] = x.perm[static_cast<std::size_t>(y.perm[j])];
  }
  return w;
}

WreathElem WreathElem::inverse() const {
  WreathElem w = *this;
  for (std::size_t j = 0; j < perm.size(); ++j) {
    const auto t = static_cast<std::size_t>(perm[j]);
    w.perm[t] = static_cast<int>(j);
    w.phase[j] = mod(-phase[t], n);
  }
  return w;
}

int WreathElem::sign() const {
  std::vector<bool> seen(perm.size(), false);
  int s = 1;
  for (std::size_t j = 0; j < perm.size(); ++j) {
    if (seen[j]) continue;
    std::size_t len = 0;
    for (std::size_t k = j; !seen[k]; k = static_cast<std::size_t>(perm[k])) {
      seen[k] = true;
      ++len;
    }
    if (len % 2 == 0) s = -s;
  }
  return s;
}

PositionAction WreathElem::position_action(long m) const {
  PositionAction a;
  for (std::size_t j = 0; j < perm.size(); ++j) {
    const auto t = static_cast<std::size_t>(perm[j]);
    a.target.push_back(perm[j]);
    a.scale.push_back(CycNum::root(m, -(m / n) * phase[t]));
  }
  return a;
}

std::string WreathElem::str() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t j = 0; j < phase.size(); ++j) {
    if (!phase[j]) continue;
    os << (first ? "" : "*") << "Q" << j + 1;
    if (phase[j] != 1) os << "^" << phase[j];
    first = false;
  }
  bool trivial = true;
  for (std::size_t j = 0; j < perm.size(); ++j) trivial = trivial && perm[j] == static_cast<int>(j);
  if (!trivial) {
    os << (first ? "" : "*") << "perm(";
    for (std::size_t j = 0; j < perm.size(); ++j) os << (j ? "," : "") << perm[j] + 1;
    os << ")";
    first = false;
  }
  return first ? "1" : os.str();
}

RatFun act_on_ratfun(const WreathElem& w, const RatFun& f, long m) {
  if (w.is_identity()) return f;
  return f.substitute(w.position_action(m));
}

// ---------------------------------------------------------------- AlgebraElem

AlgebraElem AlgebraElem::scalar(int n, int L, long m, const RatFun& f) {
  AlgebraElem a(n, L, m);
  a.add_term(Key{std::vector<int>(static_cast<std::size_t>(L), 0), WreathElem::identity(n, L)}, f);
  return a;
}

AlgebraElem AlgebraElem::momentum(int n, int L, long m, int i, int power) {
  AlgebraElem a(n, L, m);
  std::vector<int> mom(static_cast<std::size_t>(L), 0);
  mom[static_cast<std::size_t>(i)] = power;
  a.add_term(Key{mom, WreathElem::identity(n, L)}, RatFun(1));
  return a;
}

AlgebraElem AlgebraElem::group(int n, int L, long m, const WreathElem& w) {
  AlgebraElem a(n, L, m);
  a.add_term(Key{std::vector<int>(static_cast<std::size_t>(L), 0), w}, RatFun(1));
  return a;
}

std::optional<RatFun> AlgebraElem::as_function() const {
  if (terms_.empty()) return RatFun(0);
  if (terms_.size() != 1) return std::nullopt;
  const auto& [k, f] = *terms_.begin();
  if (!k.w.is_identity()) return std::nullopt;
  for (int e : k.mom)
    if (e) return std::nullopt;
  return f;
}

void AlgebraElem::add_term(const Key& k, const RatFun& f) {
  if (f.is_zero()) return;
  auto it = terms_.find(k);
  if (it == terms_.end()) {
    terms_.emplace(k, f);
    return;
  }
  it->second += f;
  if (it->second.is_zero()) terms_.erase(it);
}

AlgebraElem AlgebraElem::operator-() const {
  AlgebraElem r = *this;
  for (auto& [k, f] : r.terms_) f = -f;
  return r;
}

AlgebraElem& AlgebraElem::operator+=(const AlgebraElem& o) {
  if (terms_.empty()) {
    n_ = o.n_;
    L_ = o.L_;
    m_ = o.m_;
  } else if (!o.terms_.empty() && (o.n_ != n_ || o.L_ != L_)) {
    throw std::invalid_argument("AlgebraElem: mismatched (n, L)");
  }
  for (const auto& [k, f] : o.terms_) add_term(k, f);
  return *this;
}

AlgebraElem& AlgebraElem::operator-=(const AlgebraElem& o) { return *this += -o; }

AlgebraElem& AlgebraElem::operator*=(const RatFun& f) {
  if (f.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [k, g] : terms_) g = f * g;
  return *this;
}

AlgebraElem operator*(const AlgebraElem& a, const AlgebraElem& b) {
  if (a.n_ != b.n_ || a.L_ != b.L_) throw std::invalid_argument("AlgebraElem: mismatched (n, L)");
  AlgebraElem out(a.n_, a.L_, a.m_);
  const long m = a.m_;
  const int L = a.L_;
  const RatFun mih = minus_i_hbar(m);
  for (const auto& [ka, fa] : a.terms_) {
    const WreathElem& w = ka.w;
    // Collect the momenta of the other factor moved through w: w p_j w^-1 = tau^{a_pi(j)} p_pi(j).
    std::vector<std::pair<std::vector<int>, CycNum>> moved;
    for (const auto& [kb, fb] : b.terms_) {
      std::vector<int> mom(static_cast<std::size_t>(L), 0);
      long phase = 0;
      for (int j = 0; j < L; ++j) {
        const int e = kb.mom[static_cast<std::size_t>(j)];
        if (!e) continue;
        const auto t = static_cast<std::size_t>(w.perm[static_cast<std::size_t>(j)]);
        mom[t] = e;
        phase += static_cast<long>(w.phase[t]) * e;
      }
      moved.emplace_back(std::move(mom), CycNum::root(m, (m / a.n_) * phase));
    }
    // Leibniz: p^alpha f = sum_gamma C(alpha, gamma) (-i hbar)^|gamma| (d^gamma f) p^(alpha - gamma).
    std::vector<std::vector<int>> gammas{std::vector<int>(static_cast<std::size_t>(L), 0)};
    for (int i = 0; i < L; ++i) {
      std::vector<std::vector<int>> next;
      for (const auto& g : gammas)
        for (int e = 0; e <= ka.mom[static_cast<std::size_t>(i)]; ++e) {
          auto h = g;
          h[static_cast<std::size_t>(i)] = e;
          next.push_back(std::move(h));
        }
      gammas = std::move(next);
    }
    std::size_t idx = 0;
    for (const auto& [kb, fb] : b.terms_) {
      const auto& [mom_b, phase_b] = moved[idx++];
      const RatFun moved_f = act_on_ratfun(w, fb, m);
      const WreathElem wv = w * kb.w;
      for (const auto& g : gammas) {
        RatFun df = moved_f;
        long coeff = 1;
        int order = 0;
        for (int i = 0; i < L; ++i) {
          const int e = g[static_cast<std::size_t>(i)];
          for (int t = 0; t < e; ++t) df = df.derivative(i);
          coeff *= binomial(ka.mom[static_cast<std::size_t>(i)], e);
          order += e;
        }
        if (df.is_zero()) continue;
        RatFun c = fa * df * (phase_b * CycNum(coeff));
        for (int t = 0; t < order; ++t) c *= mih;
        AlgebraElem::Key key{std::vector<int>(static_cast<std::size_t>(L), 0), wv};
        for (int i = 0; i < L; ++i)
          key.mom[static_cast<std::size_t>(i)] =
              ka.mom[static_cast<std::size_t>(i)] - g[static_cast<std::size_t>(i)] + mom_b[static_cast<std::size_t>(i)];
        out.add_term(key, c);
      }
    }
  }
  return out;
}

bool operator==(const AlgebraElem& a, const AlgebraElem& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  auto it = b.terms_.begin();
  for (const auto& [k, f] : a.terms_) {
    if (!(k == it->first) || !ratfun_equal(f, it->second)) return false;
    ++it;
  }
  return true;
}

AlgebraElem AlgebraElem::pow(int e) const {
  if (e < 0) throw std::invalid_argument("AlgebraElem::pow: negative exponent");
  AlgebraElem r = scalar(n_, L_, m_, RatFun(1));
  for (int t = 0; t < e; ++t) r = r * *this;
  return r;
}

AlgebraElem AlgebraElem::substitute_value(int slot, const CycNum& value) const {
  AlgebraElem r(n_, L_, m_);
  for (const auto& [k, f] : terms_) r.add_term(k, f.substitute_value(slot, value));
  return r;
}

namespace {

std::string term_text(const AlgebraElem::Key& k, const RatFun& f) {
  std::ostringstream os;
  std::vector<std::string> parts;
  for (std::size_t i = 0; i < k.mom.size(); ++i) {
    if (!k.mom[i]) continue;
    std::string s = "p" + std::to_string(i + 1);
    if (k.mom[i] != 1) s += "^" + std::to_string(k.mom[i]);
    parts.push_back(s);
  }
  if (!k.w.is_identity()) parts.push_back(k.w.str());
  const bool one = f.is_constant() && f.num().constant_term().is_one();
  if (!one || parts.empty()) os << "(" << f.str() << ")";
  for (std::size_t t = 0; t < parts.size(); ++t) os << ((t || !one) ? "*" : "") << parts[t];
  return os.str();
}

}  // namespace

std::string AlgebraElem::str() const {
  if (terms_.empty()) return "0";
  std::string s;
  for (const auto& [k, f] : terms_) {
    if (!s.empty()) s += "\n + ";
    s += term_text(k, f);
  }
  return s;
}

std::string AlgebraElem::first_term() const {
  if (terms_.empty()) return {};
  return term_text(terms_.begin()->first, terms_.begin()->second);
}

AlgebraElem commutator(const AlgebraElem& a, const AlgebraElem& b) { return a * b - b * a; }

// ---------------------------------------------------------------- SpinPosOp

SpinPosOp::SpinPosOp(SpaceLayout spin, int n, int L, long m)
    : spin_(std::move(spin)), n_(n), L_(L), m_(m), rows_(spin_.total()) {}

SpinPosOp SpinPosOp::from(const SparseOp& spin, const AlgebraElem& a) {
  SpinPosOp r(spin.layout(), a.n(), a.L(), a.field_order());
  for (std::size_t i = 0; i < spin.dim(); ++i)
    for (const auto& [c, v] : spin.row(i)) r.add_to(i, c, a * RatFun(v));
  return r;
}

SpinPosOp SpinPosOp::identity(const SpaceLayout& spin, int n, int L, long m) {
  return from(SparseOp::identity(spin), AlgebraElem::scalar(n, L, m, RatFun(1)));
}

AlgebraElem SpinPosOp::at(std::size_t r, std::size_t c) const {
  auto it = rows_[r].find(c);
  return it == rows_[r].end() ? AlgebraElem(n_, L_, m_) : it->second;
}

void SpinPosOp::add_to(std::size_t r, std::size_t c, const AlgebraElem& a) {
  if (a.is_zero()) return;
  auto& row = rows_[r];
  auto it = row.find(c);
  if (it == row.end()) {
    row.emplace(c, a);
    return;
  }
  it->second += a;
  if (it->second.is_zero()) row.erase(it);
}

bool SpinPosOp::is_zero() const {
  for (const auto& row : rows_)
    if (!row.empty()) return false;
  return true;
}

void SpinPosOp::check(const SpinPosOp& o) const {
  if (!(spin_ == o.spin_)) throw LayoutMismatch("SpinPosOp: " + spin_.str() + " vs " + o.spin_.str());
  if (n_ != o.n_ || L_ != o.L_) throw std::invalid_argument("SpinPosOp: mismatched (n, L)");
}

SpinPosOp SpinPosOp::operator-() const {
  SpinPosOp r = *this;
  for (auto& row : r.rows_)
    for (auto& [c, a] : row) a = -a;
  return r;
}

SpinPosOp& SpinPosOp::operator+=(const SpinPosOp& o) {
  check(o);
  for (std::size_t r = 0; r < rows_.size(); ++r)
    for (const auto& [c, a] : o.rows_[r]) add_to(r, c, a);
  return *this;
}

SpinPosOp& SpinPosOp::operator-=(const SpinPosOp& o) { return *this += -o; }

SpinPosOp& SpinPosOp::operator*=(const CycNum& c) {
  if (c.is_zero()) {
    for (auto& row : rows_) row.clear();
    return *this;
  }
  for (auto& row : rows_)
    for (auto& [col, a] : row) a *= RatFun(c);
  return *this;
}

SpinPosOp operator*(const SpinPosOp& a, const SpinPosOp& b) {
  a.check(b);
  SpinPosOp out(a.spin_, a.n_, a.L_, a.m_);
  const auto rows = static_cast<std::int64_t>(a.rows_.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t r = 0; r < rows; ++r) {
    std::map<std::size_t, AlgebraElem> acc;
    for (const auto& [k, x] : a.rows_[static_cast<std::size_t>(r)])
      for (const auto& [c, y] : b.rows_[k]) {
        AlgebraElem p = x * y;
        auto it = acc.find(c);
        if (it == acc.end())
          acc.emplace(c, std::move(p));
        else
          it->second += p;
      }
    std::erase_if(acc, [](const auto& kv) { return kv.second.is_zero(); });
    out.rows_[static_cast<std::size_t>(r)] = std::move(acc);
  }
  return out;
}

bool operator==(const SpinPosOp& a, const SpinPosOp& b) {
  a.check(b);
  for (std::size_t r = 0; r < a.rows_.size(); ++r) {
    if (a.rows_[r].size() != b.rows_[r].size()) return false;
    auto it = b.rows_[r].begin();
    for (const auto& [c, x] : a.rows_[r]) {
      if (c != it->first || !(x == it->second)) return false;
      ++it;
    }
  }
  return true;
}

SpinPosOp SpinPosOp::partial_trace(const std::vector<int>& slots) const {
  for (int s : slots)
    if (s < 0 || s >= spin_.slots()) throw LayoutMismatch("partial_trace: slot out of range");
  const SpaceLayout reduced = spin_.without(slots);
  auto keep = [&](int s) { return std::find(slots.begin(), slots.end(), s) == slots.end(); };
  auto reduce = [&](std::size_t index) {
    std::size_t out = 0;
    int t = 0;
    for (int s = 0; s < spin_.slots(); ++s) {
      if (!keep(s)) continue;
      out += static_cast<std::size_t>(spin_.digit(index, s)) * reduced.stride(t++);
    }
    return out;
  };
  SpinPosOp out(reduced, n_, L_, m_);
  for (std::size_t r = 0; r < rows_.size(); ++r)
    for (const auto& [c, a] : rows_[r]) {
      bool diag = true;
      for (int s : slots) diag = diag && spin_.digit(r, s) == spin_.digit(c, s);
      if (diag) out.add_to(reduce(r), reduce(c), a);
    }
  return out;
}

SpinPosOp SpinPosOp::substitute_value(int slot, const CycNum& value) const {
  SpinPosOp out(spin_, n_, L_, m_);
  for (std::size_t r = 0; r < rows_.size(); ++r)
    for (const auto& [c, a] : rows_[r]) out.add_to(r, c, a.substitute_value(slot, value));
  return out;
}

namespace {

std::string index_text(const SpaceLayout& L, std::size_t r, std::size_t c) {
  std::ostringstream os;
  os << "[";
  for (int s = 0; s < L.slots(); ++s) os << (s ? "," : "") << L.digit(r, s) + 1;
  os << "|";
  for (int s = 0; s < L.slots(); ++s) os << (s ? "," : "") << L.digit(c, s) + 1;
  os << "]";
  return os.str();
}

}  // namespace

std::string SpinPosOp::first_nonzero() const {
  for (std::size_t r = 0; r < rows_.size(); ++r)
    if (!rows_[r].empty()) {
      const auto& [c, a] = *rows_[r].begin();
      return index_text(spin_, r, c) + " = " + a.first_term();
    }
  return {};
}

std::string SpinPosOp::str() const {
  std::ostringstream os;
  bool any = false;
  for (std::size_t r = 0; r < rows_.size(); ++r)
    for (const auto& [c, a] : rows_[r]) {
      os << index_text(spin_, r, c) << " = " << a.str() << "\n";
      any = true;
    }
  if (!any) os << "0\n";
  return os.str();
}

SpinPosOp commutator(const SpinPosOp& a, const SpinPosOp& b) { return a * b - b * a; }

// ---------------------------------------------------------------- WaveFun

bool WaveFun::is_zero() const {
  for (const auto& [k, f] : components)
    if (!f.is_zero()) return false;
  return true;
}

bool operator==(const WaveFun& a, const WaveFun& b) {
  std::map<std::size_t, RatFun> d = a.components;
  for (const auto& [k, f] : b.components) d[k] -= f;
  for (const auto& [k, f] : d)
    if (!f.is_zero()) return false;
  return true;
}

// ---------------------------------------------------------------- spec

CycNum DunklSpec::tau_pow(long p) const {
  const long m = field_order();
  return CycNum::root(m, (m / n) * p);
}

RatFun DunklSpec::lambda_value() const {
  return lambda ? RatFun(*lambda) : RatFun(Poly::variable(var::kLambda));
}

RatFun DunklSpec::mu(int k) const {
  switch (mu_mode) {
    case MuMode::symbolic: return RatFun(Poly::variable(var::mu(k)));
    case MuMode::zero: return RatFun(0);
    case MuMode::values: return RatFun(mu_values[static_cast<std::size_t>(k)]);
  }
  return RatFun(0);
}

SparseOp DunklSpec::G() const {
  std::vector<int> mult = multiplicities;
  if (mult.empty()) {
    mult.assign(static_cast<std::size_t>(n), 0);
    mult[0] = N;
  }
  return grading_matrix(n, mult, field_order());
}

SpaceLayout DunklSpec::spin_layout(int num_aux) const {
  return SpaceLayout::with_aux(num_aux, N, std::vector<int>(static_cast<std::size_t>(L), N));
}

void DunklSpec::validate() const {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  if (L < 1 || L > var::kMaxPositions)
    throw std::invalid_argument("L must lie in 1.." + std::to_string(var::kMaxPositions));
  if (N < 1) throw std::invalid_argument("N must be at least 1");
  if (mu_mode == MuMode::symbolic && n > var::kMaxMu)
    throw std::invalid_argument("symbolic mu supports n <= " + std::to_string(var::kMaxMu));
  if (mu_mode == MuMode::values && static_cast<int>(mu_values.size()) != n)
    throw std::invalid_argument("need exactly n mu values");
  if (!multiplicities.empty()) {
    if (static_cast<int>(multiplicities.size()) != n) throw std::invalid_argument("need exactly n multiplicities");
    int sum = 0;
    for (int k : multiplicities) {
      if (k < 0) throw std::invalid_argument("multiplicities must be non-negative");
      sum += k;
    }
    if (sum != N) throw std::invalid_argument("multiplicities must sum to N");
  }
  if (eps != 1 && eps != -1) throw std::invalid_argument("eps must be +1 or -1");
  if (truncation < -1) throw std::invalid_argument("truncation must be non-negative");
}

// ---------------------------------------------------------------- operators

AlgebraElem dunkl_operator(const DunklSpec& spec, int i) {
  const int n = spec.n, L = spec.L;
  const long m = spec.field_order();
  AlgebraElem d = AlgebraElem::momentum(n, L, m, i);
  const RatFun lambda = spec.lambda_value();
  for (int j = 0; j < L; ++j) {
    if (j == i) continue;
    for (int k = 0; k < n; ++k) {
      const WreathElem w = WreathElem::rotation(n, L, i, k) * WreathElem::transposition(n, L, i, j) *
                           WreathElem::rotation(n, L, i, -k);
      d += AlgebraElem::group(n, L, m, w) * (lambda * RatFun::inverse_difference(i, spec.tau_pow(k), j));
    }
  }
  for (int k = 0; k < n; ++k)
    d += AlgebraElem::group(n, L, m, WreathElem::rotation(n, L, i, k)) * (spec.mu(k) * RatFun::inverse_position(i));
  return d;
}

AlgebraElem power_sum(const DunklSpec& spec, int k) {
  AlgebraElem s(spec.n, spec.L, spec.field_order());
  for (int i = 0; i < spec.L; ++i) s += dunkl_operator(spec, i).pow(k);
  return s;
}

Check verify_dunkl_commutativity(const DunklSpec& spec) {
  std::vector<AlgebraElem> d;
  for (int i = 0; i < spec.L; ++i) d.push_back(dunkl_operator(spec, i));
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < spec.L; ++i)
    for (int j = i + 1; j < spec.L; ++j) pairs.emplace_back(i, j);
  std::vector<std::string> bad(pairs.size());
  const auto count = static_cast<std::int64_t>(pairs.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t t = 0; t < count; ++t) {
    const auto [i, j] = pairs[static_cast<std::size_t>(t)];
    const AlgebraElem c = commutator(d[static_cast<std::size_t>(i)], d[static_cast<std::size_t>(j)]);
    if (!c.is_zero())
      bad[static_cast<std::size_t>(t)] =
          "[d" + std::to_string(i + 1) + ",d" + std::to_string(j + 1) + "] " + c.first_term();
  }
  for (const auto& w : bad)
    if (!w.empty()) return make_check("dunkl_commute", false, w);
  return make_check("dunkl_commute", true, {}, std::to_string(pairs.size()) + " pairs, symbolic parameters");
}

namespace {

// P_pi on the spin space: the content of site j moves to site pi(j).
SparseOp spin_permutation(const SpaceLayout& layout, const std::vector<int>& perm) {
  SparseOp op(layout);
  const int aux = layout.num_aux();
  for (std::size_t c = 0; c < layout.total(); ++c) {
    std::size_t r = 0;
    for (int s = 0; s < aux; ++s) r += static_cast<std::size_t>(layout.digit(c, s)) * layout.stride(s);
    for (std::size_t j = 0; j < perm.size(); ++j)
      r += static_cast<std::size_t>(layout.digit(c, aux + static_cast<int>(j))) * layout.stride(aux + perm[j]);
    op.add_to(r, c, CycNum(1));
  }
  return op;
}

}  // namespace

SpinPosOp projector_P(const DunklSpec& spec, int num_aux) {
  const SpaceLayout layout = spec.spin_layout(num_aux);
  const long m = spec.field_order();
  SpinPosOp out(layout, spec.n, spec.L, m);
  std::vector<int> perm(static_cast<std::size_t>(spec.L));
  std::iota(perm.begin(), perm.end(), 0);
  long count = 0;
  do {
    const WreathElem w = WreathElem::permutation(spec.n, perm);
    const CycNum sgn(w.sign() == 1 ? 1 : spec.eps);
    out += SpinPosOp::from(spin_permutation(layout, perm), AlgebraElem::group(spec.n, spec.L, m, w)) * sgn;
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out * CycNum(BigRational(1, count));
}

SpinPosOp projector_Q(const DunklSpec& spec, int num_aux) {
  const SpaceLayout layout = spec.spin_layout(num_aux);
  const long m = spec.field_order();
  const SparseOp G = spec.G();
  SpinPosOp out = SpinPosOp::identity(layout, spec.n, spec.L, m);
  for (int i = 0; i < spec.L; ++i) {
    SpinPosOp f(layout, spec.n, spec.L, m);
    for (int j = 0; j < spec.n; ++j)
      f += SpinPosOp::from(on_slot(layout, layout.site_slot(i), matrix_power(G, -j)),
                           AlgebraElem::group(spec.n, spec.L, m, WreathElem::rotation(spec.n, spec.L, i, j)));
    out = out * (f * CycNum(BigRational(1, spec.n)));
  }
  return out;
}

SpinPosOp dunkl_T_coeff(const DunklSpec& spec, int p) {
  const SpaceLayout layout = spec.spin_layout(1);
  SpinPosOp T(layout, spec.n, spec.L, spec.field_order());
  for (int l = 0; l < spec.L; ++l)
    T += SpinPosOp::from(permutation(layout, 0, layout.site_slot(l)), dunkl_operator(spec, l).pow(p));
  return T;
}

SpinPosOp dunkl_B_coeff(const DunklSpec& spec, int p, bool reflected) {
  const SpaceLayout layout = spec.spin_layout(1);
  const long m = spec.field_order();
  const SpinPosOp T = dunkl_T_coeff(spec, p);
  const SparseOp G = spec.G();
  const AlgebraElem one = AlgebraElem::scalar(spec.n, spec.L, m, RatFun(1));
  SpinPosOp B(layout, spec.n, spec.L, m);
  for (int j = 0; j < spec.n; ++j) {
    const SpinPosOp Gj = SpinPosOp::from(on_slot(layout, 0, matrix_power(G, j)), one);
    const SpinPosOp Gmj = SpinPosOp::from(on_slot(layout, 0, matrix_power(G, -j)), one);
    B += (Gj * T * Gmj) * spec.tau_pow((reflected ? 1L : -1L) * j * p);
  }
  return B;
}

SpinPosOp tilde_charge(const DunklSpec& spec, int k) {
  return dunkl_B_coeff(spec, k).partial_trace({0}) * (projector_P(spec) * projector_Q(spec));
}

std::vector<Check> verify_projector_identities(const DunklSpec& spec) {
  std::vector<Check> out;
  const SpinPosOp LP = projector_P(spec), LQ = projector_Q(spec);
  const SpinPosOp Lam = LP * LQ;
  auto zero_check = [](const std::string& name, const SpinPosOp& d) {
    return make_check(name, d.is_zero(), d.first_nonzero());
  };
  out.push_back(zero_check("LambdaP_idempotent", LP * LP - LP));
  out.push_back(zero_check("LambdaQ_idempotent", LQ * LQ - LQ));
  out.push_back(zero_check("LambdaP_LambdaQ_commute", commutator(LP, LQ)));
  out.push_back(zero_check("Lambda_idempotent", Lam * Lam - Lam));

  const SpinPosOp LPa = projector_P(spec, 1), LQa = projector_Q(spec, 1);
  const SpinPosOp Lama = LPa * LQa;
  const int P = spec.trunc();
  std::vector<std::vector<Check>> per(static_cast<std::size_t>(P + 1));
  for (int p = 0; p <= P; ++p) {
    const std::string tag = " p=" + std::to_string(p);
    const SpinPosOp T = dunkl_T_coeff(spec, p);
    const SpinPosOp B = dunkl_B_coeff(spec, p);
    auto& v = per[static_cast<std::size_t>(p)];
    v.push_back(zero_check("T_exchange_projection" + tag, LPa * T * LPa - T * LPa));
    v.push_back(zero_check("B_commutes_with_LambdaQ" + tag, commutator(B, LQa)));
    const SpinPosOp BL = B * Lama;
    v.push_back(zero_check("B_preserves_Lambda" + tag, BL - Lama * BL));
    if ((2 * p) % spec.n != 0) {
      // Conjugation by Q_l G_l^{-1} multiplies B^(p) by tau^{2p}; the reflected phase is invariant.
      const SpinPosOp R = dunkl_B_coeff(spec, p, true);
      Check c = zero_check("B_reflected_commutes_with_LambdaQ" + tag, commutator(R, LQa));
      c.note = c.status == Status::pass ? "sum_j tau^{+jp} G_a^j T^(p) G_a^{-j} commutes with Lambda_Q"
                                        : "reflected phase also fails";
      c.status = Status::info;
      v.push_back(c);
    }
  }
  for (auto& v : per)
    for (auto& c : v) out.push_back(std::move(c));
  return out;
}

std::vector<Check> verify_tilde_vanishing(const DunklSpec& spec) {
  std::vector<Check> out;
  for (int k = 1; k <= spec.trunc(); ++k) {
    if (k % spec.n == 0) continue;
    const SpinPosOp t = tilde_charge(spec, k);
    out.push_back(make_check("tilde_charge_vanishes k=" + std::to_string(k), t.is_zero(), t.first_nonzero()));
  }
  return out;
}

// ---------------------------------------------------------------- evaluator

RatFun apply(const AlgebraElem& op, const RatFun& psi) {
  const long m = op.field_order();
  const RatFun mih = minus_i_hbar(m);
  RatFun out;
  for (const auto& [k, f] : op.terms()) {
    RatFun g = act_on_ratfun(k.w, psi, m);
    for (std::size_t i = 0; i < k.mom.size(); ++i)
      for (int t = 0; t < k.mom[i]; ++t) g = mih * g.derivative(static_cast<int>(i));
    out += f * g;
  }
  return out;
}

WaveFun apply(const SpinPosOp& op, const WaveFun& psi) {
  if (!(op.layout() == psi.spin)) throw LayoutMismatch("apply: spin layouts differ");
  WaveFun out{psi.spin, {}};
  for (std::size_t r = 0; r < op.layout().total(); ++r) {
    RatFun acc;
    for (const auto& [c, a] : op.row(r)) {
      auto it = psi.components.find(c);
      if (it != psi.components.end()) acc += apply(a, it->second);
    }
    if (!acc.is_zero()) out.components.emplace(r, std::move(acc));
  }
  return out;
}

namespace {

Poly random_poly(int L, std::mt19937& rng) {
  std::uniform_int_distribution<int> coeff(-3, 3), expo(0, 3), terms(2, 4);
  Poly p;
  const int t = terms(rng);
  for (int k = 0; k < t; ++k) {
    Monomial mono;
    for (int i = 0; i < L; ++i) mono.set(var::q(i), expo(rng));
    int c = coeff(rng);
    if (c == 0) c = 1;
    p.add_term(mono, CycNum(c));
  }
  return p;
}

}  // namespace

Check verify_dunkl_commutativity_evaluator(const DunklSpec& spec, int count, unsigned seed) {
  std::mt19937 rng(seed);
  std::vector<AlgebraElem> d;
  for (int i = 0; i < spec.L; ++i) d.push_back(dunkl_operator(spec, i));
  std::vector<Poly> states;
  for (int s = 0; s < count; ++s) states.push_back(random_poly(spec.L, rng));
  std::vector<std::string> bad(states.size());
  const auto total = static_cast<std::int64_t>(states.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t s = 0; s < total; ++s) {
    const RatFun psi(states[static_cast<std::size_t>(s)]);
    for (int i = 0; i < spec.L && bad[static_cast<std::size_t>(s)].empty(); ++i)
      for (int j = i + 1; j < spec.L; ++j) {
        const auto& di = d[static_cast<std::size_t>(i)];
        const auto& dj = d[static_cast<std::size_t>(j)];
        const RatFun r = apply(di, apply(dj, psi)) - apply(dj, apply(di, psi));
        if (!r.is_zero()) {
          bad[static_cast<std::size_t>(s)] = "[d" + std::to_string(i + 1) + ",d" + std::to_string(j + 1) +
                                             "] on " + psi.str() + " gives " + r.str();
          break;
        }
      }
  }
  for (const auto& w : bad)
    if (!w.empty()) return make_check("dunkl_commute_evaluator", false, w);
  return make_check("dunkl_commute_evaluator", true, {},
                    std::to_string(count) + " random polynomial states, seed " + std::to_string(seed));
}

Check verify_quasi_parity_evaluator(const DunklSpec& spec, int count, unsigned seed) {
  std::mt19937 rng(seed);
  const SpaceLayout layout = spec.spin_layout();
  const long m = spec.field_order();
  const SpinPosOp LQ = projector_Q(spec);
  const SparseOp G = spec.G();
  const AlgebraElem one = AlgebraElem::scalar(spec.n, spec.L, m, RatFun(1));
  for (int s = 0; s < count; ++s) {
    WaveFun psi{layout, {}};
    for (std::size_t r = 0; r < layout.total(); ++r) psi.components.emplace(r, RatFun(random_poly(spec.L, rng)));
    const WaveFun phi = apply(LQ, psi);
    for (int i = 0; i < spec.L; ++i) {
      const WaveFun g = apply(SpinPosOp::from(on_slot(layout, i, G), one), phi);
      const WaveFun q = apply(SpinPosOp::from(SparseOp::identity(layout),
                                              AlgebraElem::group(spec.n, spec.L, m,
                                                                 WreathElem::rotation(spec.n, spec.L, i))),
                              phi);
      if (!(g == q))
        return make_check("quasi_parity_evaluator", false,
                          "state " + std::to_string(s) + ", site " + std::to_string(i + 1));
    }
  }
  return make_check("quasi_parity_evaluator", true, {},
                    std::to_string(count) + " random spin states, seed " + std::to_string(seed));
}

}  // namespace halfloop
