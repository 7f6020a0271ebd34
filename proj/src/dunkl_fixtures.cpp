#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "halfloop/dunkl.hpp"

namespace halfloop {

namespace {

class Parser {
 public:
  Parser(const std::string& text, const DunklSpec& spec, const SpaceLayout& spin)
      : s_(text), spec_(spec), spin_(spin), m_(spec.field_order()) {}

  SpinPosOp parse() {
    SpinPosOp v = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    std::size_t line = 1, col = 1;
    for (std::size_t k = 0; k < pos_ && k < s_.size(); ++k) {
      if (s_[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
  }

  void skip() {
    while (pos_ < s_.size()) {
      if (std::isspace(static_cast<unsigned char>(s_[pos_]))) {
        ++pos_;
      } else if (s_[pos_] == '#') {
        while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }

  long integer() {
    skip();
    bool neg = eat('-');
    skip();
    if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) fail("expected an integer");
    long v = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) v = v * 10 + (s_[pos_++] - '0');
    return neg ? -v : v;
  }

  SpinPosOp constant(const RatFun& f) const { return SpinPosOp::from(SparseOp::identity(spin_), alg(f)); }
  AlgebraElem alg(const RatFun& f) const { return AlgebraElem::scalar(spec_.n, spec_.L, m_, f); }
  SpinPosOp group(const WreathElem& w) const {
    return SpinPosOp::from(SparseOp::identity(spin_), AlgebraElem::group(spec_.n, spec_.L, m_, w));
  }
  SpinPosOp spin(const SparseOp& op) const { return SpinPosOp::from(op, alg(RatFun(1))); }

  int position_index(const std::string& id, std::size_t at) {
    if (at >= id.size() || !std::isdigit(static_cast<unsigned char>(id[at]))) fail("bad identifier '" + id + "'");
    const int i = id[at] - '1';
    if (i < 0 || i >= spec_.L) fail("index out of range in '" + id + "'");
    return i;
  }

  int site_slot(const std::string& id, int i) {
    if (spin_.num_sites() != spec_.L) fail("spin operator '" + id + "' in a spinless expression");
    return spin_.site_slot(i);
  }

  SpinPosOp expr() {
    SpinPosOp v = term();
    for (;;) {
      if (eat('+'))
        v += term();
      else if (eat('-'))
        v -= term();
      else
        return v;
    }
  }

  SpinPosOp term() {
    SpinPosOp v = unary();
    for (;;) {
      if (eat('*')) {
        v = v * unary();
      } else if (eat('/')) {
        const std::size_t at = pos_;
        SpinPosOp d = unary();
        auto inv = invert(d);
        if (!inv) {
          pos_ = at;
          fail("divisor is not invertible");
        }
        v = v * *inv;
      } else {
        return v;
      }
    }
  }

  SpinPosOp unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }

  SpinPosOp power() {
    SpinPosOp base = atom();
    if (!eat('^')) return base;
    bool paren = eat('(');
    const long e = integer();
    if (paren) expect(')');
    if (e < 0) {
      auto inv = invert(base);
      if (!inv) fail("negative power of a non-invertible factor");
      base = *inv;
    }
    SpinPosOp r = constant(RatFun(1));
    for (long k = 0; k < (e < 0 ? -e : e); ++k) r = r * base;
    return r;
  }

  SpinPosOp atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    if (eat('(')) {
      SpinPosOp v = expr();
      expect(')');
      return v;
    }
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string digits;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) digits += s_[pos_++];
      return constant(RatFun(CycNum(BigInt(digits))));
    }
    if (!std::isalpha(static_cast<unsigned char>(c))) fail("unexpected '" + std::string(1, c) + "'");
    const std::size_t start = pos_;
    std::string id;
    while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) id += s_[pos_++];
    return identifier(id, start);
  }

  SpinPosOp identifier(const std::string& id, std::size_t start) {
    const int n = spec_.n, L = spec_.L;
    if (id == "lambda") return constant(spec_.lambda_value());
    if (id == "hbar") return constant(RatFun(Poly::variable(var::kHbar)));
    if (id == "eps") return constant(RatFun(CycNum(spec_.eps)));
    if (id == "tau") return constant(RatFun(spec_.tau_pow(1)));
    if (id == "i") return constant(RatFun(CycNum::root(m_, m_ / 4)));
    if (id == "sqrt3") {
      if (m_ % 12) fail("sqrt3 needs a field order divisible by 12");
      return constant(RatFun(CycNum::root(m_, m_ / 12) + CycNum::root(m_, -m_ / 12)));
    }
    if (id == "zeta") {
      expect('(');
      const long a = integer();
      expect(',');
      const long k = integer();
      expect(')');
      if (a <= 0 || m_ % a) fail("zeta(" + std::to_string(a) + ",.) is outside the working field");
      return constant(RatFun(CycNum::root(m_, k * (m_ / a))));
    }
    if (id == "perm") {
      expect('(');
      std::vector<int> perm;
      do perm.push_back(static_cast<int>(integer()) - 1);
      while (eat(','));
      expect(')');
      if (static_cast<int>(perm.size()) != L) fail("perm needs " + std::to_string(L) + " entries");
      try {
        return group(WreathElem::permutation(n, perm));
      } catch (const std::invalid_argument&) {
        fail("perm is not a permutation");
      }
    }
    if (id.size() == 3 && id.compare(0, 2, "mu") == 0 && std::isdigit(static_cast<unsigned char>(id[2]))) {
      const int k = id[2] - '0';
      if (k >= n) fail("no parameter " + id);
      return constant(spec_.mu(k));
    }
    if (id.size() == 2 && id[0] == 'p') {
      const int i = position_index(id, 1);
      return SpinPosOp::from(SparseOp::identity(spin_), AlgebraElem::momentum(n, L, m_, i));
    }
    if (id.size() == 2 && id[0] == 'q') return constant(RatFun(Poly::q(position_index(id, 1))));
    if (id.size() == 2 && id[0] == 'Q') return group(WreathElem::rotation(n, L, position_index(id, 1)));
    if (id.size() == 3 && id[0] == 'P') {
      const int i = position_index(id, 1), j = position_index(id, 2);
      if (i == j) fail("degenerate transposition '" + id + "'");
      return group(WreathElem::transposition(n, L, i, j));
    }
    if (id.size() == 4 && id.compare(0, 2, "Ps") == 0) {
      const int i = position_index(id, 2), j = position_index(id, 3);
      if (i == j) fail("degenerate transposition '" + id + "'");
      return spin(permutation(spin_, site_slot(id, i), site_slot(id, j)));
    }
    if (id.size() == 2 && id[0] == 'G') {
      const int i = position_index(id, 1);
      return spin(on_slot(spin_, site_slot(id, i), spec_.G()));
    }
    pos_ = start;
    fail("unknown identifier '" + id + "'");
  }

  // Diagonal operators whose entries are single terms invert entrywise; constant matrices
  // invert as matrices.
  std::optional<SpinPosOp> invert(const SpinPosOp& x) const {
    SpinPosOp out(x.layout(), x.n(), x.L(), x.field_order());
    bool diagonal_single = true;
    for (std::size_t r = 0; r < x.layout().total() && diagonal_single; ++r) {
      const auto& row = x.row(r);
      if (row.size() != 1 || row.begin()->first != r || row.begin()->second.size() != 1) {
        diagonal_single = false;
        break;
      }
      const auto& [k, f] = *row.begin()->second.terms().begin();
      for (int e : k.mom)
        if (e) diagonal_single = false;
      if (!diagonal_single) break;
      auto finv = f.try_inverse(m_);
      if (!finv) return std::nullopt;
      const WreathElem winv = k.w.inverse();
      AlgebraElem a(x.n(), x.L(), x.field_order());
      a.add_term(AlgebraElem::Key{k.mom, winv}, act_on_ratfun(winv, *finv, m_));
      out.add_to(r, r, a);
    }
    if (diagonal_single) return out;
    SparseOp c(x.layout());
    for (std::size_t r = 0; r < x.layout().total(); ++r)
      for (const auto& [col, a] : x.row(r)) {
        auto f = a.as_function();
        if (!f || !f->is_constant()) return std::nullopt;
        c.add_to(r, col, f->num().constant_term());
      }
    auto inv = inverse(c);
    if (!inv) return std::nullopt;
    return spin(*inv);
  }

  const std::string& s_;
  const DunklSpec& spec_;
  SpaceLayout spin_;
  long m_;
  std::size_t pos_ = 0;
};

std::string diff_text(const std::string& label, const AlgebraElem& engine, const AlgebraElem& fixture) {
  const AlgebraElem d = engine - fixture;
  std::ostringstream os;
  os << label << ": engine - fixture has " << d.size() << " term(s); first: " << d.first_term();
  return os.str();
}

}  // namespace

SpinPosOp parse_expression(const std::string& text, const DunklSpec& spec, const SpaceLayout& spin) {
  return Parser(text, spec, spin).parse();
}

AlgebraElem parse_algebra(const std::string& text, const DunklSpec& spec) {
  return parse_expression(text, spec, SpaceLayout::single(1)).at(0, 0);
}

FixtureSet load_fixtures(const std::string& dir) {
  auto read = [&](const std::string& name) {
    const std::filesystem::path p = std::filesystem::path(dir) / name;
    std::ifstream f(p);
    if (!f) throw std::runtime_error("cannot read fixture " + p.string());
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
  };
  return FixtureSet{read("I1.golden"), read("I2.golden"), read("I3.golden"), read("Itilde3.golden")};
}

std::vector<std::pair<std::string, std::string>> render_fixtures(const DunklSpec& spec) {
  DunklSpec s = spec;
  s.mu_mode = DunklSpec::MuMode::zero;
  const std::string head = "# engine normal form, n = " + std::to_string(s.n) + ", L = " + std::to_string(s.L) +
                           ", mu = 0, hbar symbolic\n";
  std::vector<std::pair<std::string, std::string>> out;
  for (int k = 1; k <= 3; ++k)
    out.emplace_back("I" + std::to_string(k) + ".nf", head + power_sum(s, k).str() + "\n");
  const SpinPosOp tilde = tilde_charge(s, 3) * CycNum(BigRational(1, s.n));
  out.emplace_back("Itilde3.nf", "# (1/n) tr_a B^(3) Lambda_P Lambda_Q, N = " + std::to_string(s.N) + ", mu = 0\n" +
                                     tilde.str() + "\n");
  return out;
}

std::vector<CycNum> hbar_candidates(long m) {
  const CycNum i = CycNum::root(m, m / 4);
  return {i, -i, CycNum(1), CycNum(-1)};
}

namespace {

DunklSpec fixture_spec(const DunklSpec& spec) {
  DunklSpec s = spec;
  s.mu_mode = DunklSpec::MuMode::zero;
  return s;
}

}  // namespace

Calibration calibrate_hbar(const DunklSpec& spec, const std::string& I1_text, const std::string& I2_text) {
  const DunklSpec s = fixture_spec(spec);
  Calibration cal;
  const AlgebraElem I1 = power_sum(s, 1), I2 = power_sum(s, 2);
  const AlgebraElem f1 = parse_algebra(I1_text, s), f2 = parse_algebra(I2_text, s);
  std::vector<CycNum> first_order;
  for (const CycNum& h : hbar_candidates(s.field_order()))
    if (I1.substitute_value(var::kHbar, h) == f1) first_order.push_back(h);
  if (first_order.empty()) {
    cal.note = "no candidate hbar reproduces the printed first charge";
    return cal;
  }
  for (const CycNum& h : first_order)
    if (I2.substitute_value(var::kHbar, h) == f2) {
      cal.hbar = h;
      cal.note = "hbar = " + h.str() + " reproduces the printed first and second charges";
      return cal;
    }
  // The first charge carries no hbar; fall back to the convention p = d/dq of the printed
  // momentum terms, i.e. -i hbar = 1.
  cal.hbar = CycNum::root(s.field_order(), s.field_order() / 4);
  cal.note = "first charge is hbar-independent and no candidate reproduces the printed second charge; "
             "using hbar = i (p = d/dq, as in the printed momentum terms)";
  return cal;
}

std::vector<Check> verify_fixtures(const DunklSpec& spec, const FixtureSet& fx, Calibration* calib) {
  std::vector<Check> out;
  const DunklSpec s = fixture_spec(spec);
  if (s.n != 3 || s.L != 2) {
    Check c = make_check("fixtures", true, {}, "printed charges exist for n = 3, L = 2 only; skipped");
    c.status = Status::info;
    out.push_back(c);
    return out;
  }
  Calibration cal;
  try {
    cal = calibrate_hbar(s, fx.I1, fx.I2);
  } catch (const ParseError& e) {
    out.push_back(make_check("fixture_parse", false, e.what()));
    return out;
  }
  if (calib) *calib = cal;
  Check cc = make_check("hbar_calibration", cal.hbar.has_value(), cal.note, cal.note);
  out.push_back(cc);
  if (!cal.hbar) return out;
  const CycNum h = *cal.hbar;

  const std::string* texts[] = {&fx.I1, &fx.I2, &fx.I3};
  for (int k = 1; k <= 3; ++k) {
    const std::string name = "fixture_I" + std::to_string(k);
    try {
      const AlgebraElem engine = power_sum(s, k).substitute_value(var::kHbar, h);
      const AlgebraElem printed = parse_algebra(*texts[k - 1], s);
      out.push_back(make_check(name, engine == printed, diff_text(name, engine, printed)));
    } catch (const ParseError& e) {
      out.push_back(make_check(name, false, std::string("parse error ") + e.what()));
    }
  }
  {
    const std::string name = "fixture_Itilde3";
    try {
      const SpaceLayout spin = s.spin_layout();
      const SpinPosOp Lam = projector_P(s) * projector_Q(s);
      const SpinPosOp tilde = tilde_charge(s, 3).substitute_value(var::kHbar, h);
      const SpinPosOp printed = parse_expression(fx.Itilde3, s, spin) * Lam;
      const SpinPosOp d = tilde * CycNum(BigRational(1, s.n)) - printed;
      out.push_back(make_check(name, d.is_zero(), name + ": (1/n) tr_a B^(3) Lambda - printed Lambda at " +
                                                      d.first_nonzero(),
                               "compared as (1/n) tr_a B^(3) Lambda_P Lambda_Q"));
      const SpinPosOp lifted = SpinPosOp::from(SparseOp::identity(spin), power_sum(s, 3)).substitute_value(var::kHbar, h);
      const SpinPosOp dI = tilde * CycNum(BigRational(1, s.n)) - lifted * Lam;
      out.push_back(make_check("Itilde3_equals_I3_Lambda", dI.is_zero(), dI.first_nonzero(),
                               "(1/n) tr_a B^(3) Lambda = I^(3) Lambda"));
      Check raw = make_check("Itilde3_unnormalized", (tilde - lifted * Lam * CycNum(s.n)).is_zero(),
                             "tr_a B^(3) Lambda differs from n I^(3) Lambda",
                             "tr_a B^(3) Lambda = n I^(3) Lambda: each of the n terms of B contributes I^(3)");
      raw.status = Status::info;
      out.push_back(raw);
    } catch (const ParseError& e) {
      out.push_back(make_check(name, false, std::string("parse error ") + e.what()));
    }
  }
  return out;
}

Check associativity_check(const DunklSpec& spec) {
  const long m = spec.field_order();
  std::vector<AlgebraElem> gens;
  for (int i = 0; i < spec.L; ++i) {
    gens.push_back(dunkl_operator(spec, i));
    gens.push_back(AlgebraElem::group(spec.n, spec.L, m, WreathElem::rotation(spec.n, spec.L, i)));
    gens.push_back(AlgebraElem::scalar(spec.n, spec.L, m, RatFun(Poly::q(i))) +
                   AlgebraElem::momentum(spec.n, spec.L, m, i));
  }
  if (spec.L > 1) gens.push_back(AlgebraElem::group(spec.n, spec.L, m, WreathElem::transposition(spec.n, spec.L, 0, 1)));
  std::size_t triples = 0;
  for (std::size_t a = 0; a < gens.size(); ++a)
    for (std::size_t b = 0; b < gens.size(); ++b)
      for (std::size_t c = 0; c < gens.size(); c += 2) {
        ++triples;
        const AlgebraElem d = (gens[a] * gens[b]) * gens[c] - gens[a] * (gens[b] * gens[c]);
        if (!d.is_zero())
          return make_check("normal_form_associative", false,
                            "generators " + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) +
                                ": " + d.first_term());
      }
  return make_check("normal_form_associative", true, {}, std::to_string(triples) + " generator triples");
}

std::vector<Check> run_dunkl_suite(const DunklSpec& spec, const FixtureSet* fixtures, unsigned seed) {
  spec.validate();
  std::vector<Check> out;
  append_timed(out, [&] { return associativity_check(spec); });
  append_timed(out, [&] { return verify_dunkl_commutativity(spec); });
  append_timed(out, [&] { return verify_dunkl_commutativity_evaluator(spec, 20, seed); });
  append_timed(out, [&] { return verify_projector_identities(spec); });
  append_timed(out, [&] { return verify_quasi_parity_evaluator(spec, 5, seed); });
  append_timed(out, [&] { return verify_tilde_vanishing(spec); });
  if (fixtures && spec.n == 3 && spec.L == 2) append_timed(out, [&] { return verify_fixtures(spec, *fixtures); });
  return out;
}

}  // namespace halfloop
