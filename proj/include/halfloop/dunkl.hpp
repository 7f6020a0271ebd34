#pragma once

// Star-graph Dunkl operators in the algebra generated by positions q_i,
// momenta p_i = -i hbar d/dq_i, position transpositions and branch rotations.
//
// Normal order is R(q) * p^alpha * w with w = Q_1^{a_1}..Q_L^{a_L} Perm_pi.
// Perm_pi q_j Perm_pi^{-1} = q_{pi(j)} and Q_i q_i Q_i^{-1} = tau^{-1} q_i,
// so functions are acted on by (Q_i psi)(.., q_i, ..) = psi(.., tau^{-1} q_i, ..).

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "halfloop/check.hpp"
#include "halfloop/polyrat.hpp"
#include "halfloop/tensor_ops.hpp"

namespace halfloop {

struct WreathElem {
  int n = 1;
  std::vector<int> phase;  // a_i in [0, n)
  std::vector<int> perm;   // 0-based one-line notation, perm[j] = pi(j)

  static WreathElem identity(int n, int L);
  /// Q_i^power.
  static WreathElem rotation(int n, int L, int i, int power = 1);
  /// Position transposition of i and j.
  static WreathElem transposition(int n, int L, int i, int j);
  static WreathElem permutation(int n, std::vector<int> perm);

  int L() const { return static_cast<int>(perm.size()); }
  bool is_identity() const;
  WreathElem inverse() const;
  /// Parity of the permutation part.
  int sign() const;
  /// q_j -> tau^{-a_{pi(j)}} q_{pi(j)} in Q(zeta_m).
  PositionAction position_action(long m) const;
  std::string str() const;

  friend WreathElem operator*(const WreathElem& x, const WreathElem& y);
  friend auto operator<=>(const WreathElem& a, const WreathElem& b) {
    if (auto c = a.perm <=> b.perm; c != 0) return c;
    return a.phase <=> b.phase;
  }
  friend bool operator==(const WreathElem& a, const WreathElem& b) {
    return a.perm == b.perm && a.phase == b.phase;
  }
};

/// w f w^{-1} as a function.
RatFun act_on_ratfun(const WreathElem& w, const RatFun& f, long m);

class AlgebraElem {
 public:
  struct Key {
    std::vector<int> mom;
    WreathElem w;
    friend auto operator<=>(const Key& a, const Key& b) {
      if (auto c = a.mom <=> b.mom; c != 0) return c;
      return a.w <=> b.w;
    }
    friend bool operator==(const Key&, const Key&) = default;
  };
  using Terms = std::map<Key, RatFun>;

  AlgebraElem() = default;
  AlgebraElem(int n, int L, long m) : n_(n), L_(L), m_(m) {}
  static AlgebraElem scalar(int n, int L, long m, const RatFun& f);
  static AlgebraElem momentum(int n, int L, long m, int i, int power = 1);
  static AlgebraElem group(int n, int L, long m, const WreathElem& w);

  int n() const { return n_; }
  int L() const { return L_; }
  long field_order() const { return m_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  /// The RatFun when this is a pure function (no momenta, trivial group part).
  std::optional<RatFun> as_function() const;

  void add_term(const Key& k, const RatFun& f);
  AlgebraElem operator-() const;
  AlgebraElem& operator+=(const AlgebraElem& o);
  AlgebraElem& operator-=(const AlgebraElem& o);
  AlgebraElem& operator*=(const RatFun& f);  // f on the left
  friend AlgebraElem operator+(AlgebraElem a, const AlgebraElem& b) { return a += b; }
  friend AlgebraElem operator-(AlgebraElem a, const AlgebraElem& b) { return a -= b; }
  friend AlgebraElem operator*(AlgebraElem a, const RatFun& f) { return a *= f; }
  friend AlgebraElem operator*(const AlgebraElem& a, const AlgebraElem& b);
  friend bool operator==(const AlgebraElem& a, const AlgebraElem& b);

  AlgebraElem pow(int e) const;
  AlgebraElem substitute_value(int slot, const CycNum& value) const;
  std::string str() const;
  std::string first_term() const;

 private:
  int n_ = 1, L_ = 1;
  long m_ = 4;
  Terms terms_;
};

AlgebraElem commutator(const AlgebraElem& a, const AlgebraElem& b);

/// A spin-space matrix whose entries are AlgebraElem. The spin layout may carry
/// auxiliary slots first.
class SpinPosOp {
 public:
  SpinPosOp() = default;
  SpinPosOp(SpaceLayout spin, int n, int L, long m);
  static SpinPosOp from(const SparseOp& spin, const AlgebraElem& a);
  static SpinPosOp identity(const SpaceLayout& spin, int n, int L, long m);

  const SpaceLayout& layout() const { return spin_; }
  int n() const { return n_; }
  int L() const { return L_; }
  long field_order() const { return m_; }
  const std::map<std::size_t, AlgebraElem>& row(std::size_t r) const { return rows_[r]; }
  AlgebraElem at(std::size_t r, std::size_t c) const;
  void add_to(std::size_t r, std::size_t c, const AlgebraElem& a);
  bool is_zero() const;

  SpinPosOp operator-() const;
  SpinPosOp& operator+=(const SpinPosOp& o);
  SpinPosOp& operator-=(const SpinPosOp& o);
  SpinPosOp& operator*=(const CycNum& c);
  friend SpinPosOp operator+(SpinPosOp a, const SpinPosOp& b) { return a += b; }
  friend SpinPosOp operator-(SpinPosOp a, const SpinPosOp& b) { return a -= b; }
  friend SpinPosOp operator*(SpinPosOp a, const CycNum& c) { return a *= c; }
  friend SpinPosOp operator*(const SpinPosOp& a, const SpinPosOp& b);
  friend bool operator==(const SpinPosOp& a, const SpinPosOp& b);

  SpinPosOp partial_trace(const std::vector<int>& slots) const;
  SpinPosOp substitute_value(int slot, const CycNum& value) const;
  std::string first_nonzero() const;
  std::string str() const;

 private:
  void check(const SpinPosOp& o) const;
  SpaceLayout spin_;
  int n_ = 1, L_ = 1;
  long m_ = 4;
  std::vector<std::map<std::size_t, AlgebraElem>> rows_;
};

SpinPosOp commutator(const SpinPosOp& a, const SpinPosOp& b);

/// Spin wavefunction: components indexed by the spin basis, each a function of q.
struct WaveFun {
  SpaceLayout spin;
  std::map<std::size_t, RatFun> components;
  bool is_zero() const;
  friend bool operator==(const WaveFun& a, const WaveFun& b);
};

struct DunklSpec {
  enum class MuMode { symbolic, zero, values };

  int n = 1;
  int L = 2;
  int N = 1;
  std::vector<int> multiplicities;  // grading of G; empty means all of C^N in degree 0
  std::optional<CycNum> lambda;      // symbolic when empty
  MuMode mu_mode = MuMode::symbolic;
  std::vector<CycNum> mu_values;
  int eps = 1;
  int truncation = -1;  // -1: max(3, n)

  long field_order() const { return lcm_long(n, 4); }
  CycNum tau_pow(long p) const;
  int trunc() const { return truncation >= 0 ? truncation : std::max(3, n); }
  RatFun lambda_value() const;
  RatFun mu(int k) const;
  SparseOp G() const;
  SpaceLayout spin_layout(int num_aux = 0) const;
  void validate() const;
};

AlgebraElem dunkl_operator(const DunklSpec& spec, int i);
AlgebraElem power_sum(const DunklSpec& spec, int k);
Check verify_dunkl_commutativity(const DunklSpec& spec);

/// Normalized by 1/L!.
SpinPosOp projector_P(const DunklSpec& spec, int num_aux = 0);
SpinPosOp projector_Q(const DunklSpec& spec, int num_aux = 0);
/// T^(p) = sum_l P_{al} d_l^p on the layout [aux, sites].
SpinPosOp dunkl_T_coeff(const DunklSpec& spec, int p);
/// B^(p) = sum_j tau^{-jp} G_a^j T^(p) G_a^{-j}; `reflected` uses tau^{+jp}, the coefficient
/// for the opposite rotation direction.
SpinPosOp dunkl_B_coeff(const DunklSpec& spec, int p, bool reflected = false);
/// tr_a B^(k) Lambda_P Lambda_Q on the site spin space.
SpinPosOp tilde_charge(const DunklSpec& spec, int k);
std::vector<Check> verify_projector_identities(const DunklSpec& spec);
std::vector<Check> verify_tilde_vanishing(const DunklSpec& spec);

// ---- evaluator route

RatFun apply(const AlgebraElem& op, const RatFun& psi);
WaveFun apply(const SpinPosOp& op, const WaveFun& psi);
/// [d_i, d_j] psi through sequential application, on `count` random polynomial states.
Check verify_dunkl_commutativity_evaluator(const DunklSpec& spec, int count, unsigned seed);
/// G_i Lambda_Q psi = Q_i Lambda_Q psi on random spin states.
Check verify_quasi_parity_evaluator(const DunklSpec& spec, int count, unsigned seed);

// ---- fixtures

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parse an expression in p1, q1, Q1, P12 (positions), Ps12, G1 (spin), lambda, mu0, hbar,
/// eps, tau, i, zeta(m,k), perm(...), numbers, + - * / ^ and parentheses.
SpinPosOp parse_expression(const std::string& text, const DunklSpec& spec, const SpaceLayout& spin);
AlgebraElem parse_algebra(const std::string& text, const DunklSpec& spec);

struct FixtureSet {
  std::string I1, I2, I3, Itilde3;  // transcriptions
};

/// Reads I1.golden, I2.golden, I3.golden and Itilde3.golden from dir.
FixtureSet load_fixtures(const std::string& dir);

/// Engine renderings (file name, contents) of I^(1..3) with mu = 0 and symbolic hbar, and of
/// (1/n) tr_a B^(3) Lambda_P Lambda_Q; the regression counterpart of the transcriptions.
std::vector<std::pair<std::string, std::string>> render_fixtures(const DunklSpec& spec);

/// Candidates for hbar tried in order; the first that reproduces the printed I^(2) is used.
std::vector<CycNum> hbar_candidates(long m);

struct Calibration {
  std::optional<CycNum> hbar;
  std::string note;
};
Calibration calibrate_hbar(const DunklSpec& spec, const std::string& I1_text, const std::string& I2_text);

std::vector<Check> verify_fixtures(const DunklSpec& spec, const FixtureSet& fx, Calibration* calib = nullptr);

/// (a b) c == a (b c) over triples of generators.
Check associativity_check(const DunklSpec& spec);

/// Every check for one Dunkl model, in report order.
std::vector<Check> run_dunkl_suite(const DunklSpec& spec, const FixtureSet* fixtures, unsigned seed);

}  // namespace halfloop
