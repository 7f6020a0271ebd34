#include "doctest.h"
#include "halfloop/dunkl.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace halfloop;

namespace {

DunklSpec spec(int n, int L, int N = 1, std::vector<int> mult = {}) {
  DunklSpec s;
  s.n = n;
  s.L = L;
  s.N = N;
  s.multiplicities = std::move(mult);
  return s;
}

DunklSpec n3_L2() {
  DunklSpec s = spec(3, 2, 3, {1, 1, 1});
  s.mu_mode = DunklSpec::MuMode::zero;
  return s;
}

AlgebraElem alg(const std::string& text, const DunklSpec& s) { return parse_algebra(text, s); }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

const std::filesystem::path kFixtures = std::filesystem::path(HALFLOOP_SOURCE_DIR) / "tests/fixtures/n3_L2";

}  // namespace

TEST_CASE("wreath relations in the normal form") {
  const DunklSpec s = spec(3, 2);
  CHECK(alg("P12*Q2", s) == alg("Q1*P12", s));
  CHECK(alg("Q1^3", s) == alg("1", s));
  CHECK(alg("Q1*Q1^-1", s) == alg("1", s));
  CHECK(alg("P12*P12", s) == alg("1", s));
  CHECK(alg("Q1*Q2", s) == alg("Q2*Q1", s));
}

TEST_CASE("canonical commutators") {
  const DunklSpec s = spec(3, 2);
  CHECK(commutator(alg("p1", s), alg("q1", s)) == alg("-i*hbar", s));
  CHECK(commutator(alg("p1", s), alg("q2", s)).is_zero());
  CHECK(commutator(alg("p1", s), alg("1/(q1-q2)", s)) == alg("i*hbar/(q1-q2)^2", s));
  CHECK(commutator(alg("p1", s), alg("p2", s)).is_zero());
}

TEST_CASE("rotations rescale positions and momenta") {
  const DunklSpec s = spec(3, 2);
  CHECK(alg("Q1*q1", s) == alg("tau^-1*q1*Q1", s));
  CHECK(alg("Q1*p1", s) == alg("tau*p1*Q1", s));
  CHECK(alg("Q1*q2", s) == alg("q2*Q1", s));
  CHECK(alg("P12*q1", s) == alg("q2*P12", s));
}

TEST_CASE("normal form product is associative on generators") {
  const Check c = associativity_check(spec(3, 2));
  CHECK_MESSAGE(c.status == Status::pass, c.witness);
}

TEST_CASE("group sector multiplies like the wreath product") {
  const DunklSpec s = spec(3, 3);
  const long m = s.field_order();
  const WreathElem a = WreathElem::rotation(3, 3, 0) * WreathElem::transposition(3, 3, 0, 2);
  const WreathElem b = WreathElem::rotation(3, 3, 1, 2) * WreathElem::transposition(3, 3, 1, 2);
  CHECK(AlgebraElem::group(3, 3, m, a) * AlgebraElem::group(3, 3, m, b) == AlgebraElem::group(3, 3, m, a * b));
  CHECK((a * a.inverse()).is_identity());
}

TEST_CASE("Dunkl operators commute") {
  for (const DunklSpec& s : {spec(1, 3), spec(2, 2), spec(3, 2)}) {
    const Check c = verify_dunkl_commutativity(s);
    CHECK_MESSAGE(c.status == Status::pass, c.witness);
  }
}

TEST_CASE("evaluator agrees with the normal form") {
  const DunklSpec s = spec(2, 2);
  const AlgebraElem d1 = dunkl_operator(s, 0), d2 = dunkl_operator(s, 1);
  const RatFun psi = alg("q1^2*q2 + 3*q2^3 - q1", s).as_function().value();
  CHECK((apply(power_sum(s, 2), psi) - apply(d1, apply(d1, psi)) - apply(d2, apply(d2, psi))).is_zero());
  CHECK((apply(d1 * d2, psi) - apply(d1, apply(d2, psi))).is_zero());
  const Check c = verify_dunkl_commutativity_evaluator(s, 4, 3);
  CHECK_MESSAGE(c.status == Status::pass, c.witness);
}

TEST_CASE("projectors are idempotent") {
  const DunklSpec s = spec(2, 2, 2);
  const SpinPosOp P = projector_P(s), Q = projector_Q(s);
  CHECK(P * P == P);
  CHECK(Q * Q == Q);
  CHECK(P * Q == Q * P);
}

TEST_CASE("single particle projectors") {
  const DunklSpec s = spec(2, 1, 2);
  CHECK(projector_P(s) == SpinPosOp::identity(s.spin_layout(), 2, 1, s.field_order()));
  const SpinPosOp Q = projector_Q(s);
  CHECK(Q * Q == Q);
}

TEST_CASE("parser reports positions") {
  const DunklSpec s = spec(3, 2);
  CHECK_THROWS_AS(alg("p1 +", s), ParseError);
  CHECK_THROWS_AS(alg("x1", s), ParseError);
  CHECK_THROWS_AS(alg("p9", s), ParseError);
  try {
    alg("p1 + (q1", s);
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).rfind("1:", 0) == 0);
  }
}

TEST_CASE("fixture normal forms are up to date") {
  const DunklSpec s = n3_L2();
  for (const auto& [name, text] : render_fixtures(s)) {
    INFO(name);
    CHECK(slurp(kFixtures / name) == text);
  }
}

TEST_CASE("engine renderings parse back to the charges") {
  DunklSpec s = n3_L2();
  CHECK(alg(slurp(kFixtures / "I1.nf"), s) == power_sum(s, 1));
  CHECK(alg(slurp(kFixtures / "I2.nf"), s) == power_sum(s, 2));
}

TEST_CASE("a corrupted transcription fails with a witness") {
  const DunklSpec s = n3_L2();
  FixtureSet fx = load_fixtures(kFixtures.string());
  const auto at = fx.I3.find("p1^3 + p2^3");
  REQUIRE(at != std::string::npos);
  fx.I3.replace(at, 11, "p1^3 + 2*p2^3");
  const auto cs = verify_fixtures(s, fx);
  bool seen = false;
  for (const auto& c : cs)
    if (c.name == "fixture_I3") {
      seen = true;
      CHECK(c.status == Status::fail);
      CHECK(c.witness.find("engine - fixture") != std::string::npos);
    }
  CHECK(seen);
}

TEST_CASE("a corrupted first charge defeats calibration") {
  FixtureSet fx = load_fixtures(kFixtures.string());
  fx.I1.replace(fx.I1.find("p1 + p2"), 7, "p1 + 2*p2");
  Calibration cal;
  const auto cs = verify_fixtures(n3_L2(), fx, &cal);
  CHECK(!cal.hbar.has_value());
  REQUIRE(cs.size() == 1);
  CHECK(cs[0].name == "hbar_calibration");
  CHECK(cs[0].status == Status::fail);
}
