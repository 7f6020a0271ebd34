#include "doctest.h"
#include "halfloop/gaudin.hpp"

#include <random>

using namespace halfloop;

namespace {

SparseOp evaluate(const PoleSum& x, const CycNum& at) {
  SparseOp out(x.layout());
  for (const auto& [k, c] : x.terms()) out += c * (at - k.pole).pow(-k.order);
  return out;
}

SparseOp random_op(const SpaceLayout& layout, std::mt19937& rng) {
  SparseOp op(layout);
  std::uniform_int_distribution<int> val(-2, 2), keep(0, 2);
  for (std::size_t r = 0; r < op.dim(); ++r)
    for (std::size_t c = 0; c < op.dim(); ++c)
      if (keep(rng) == 0) op.add_to(r, c, CycNum(val(rng)) + CycNum(val(rng)) * CycNum::root(4, 1));
  return op;
}

InnerModelSpec inner(int n, int N, std::vector<int> mult, std::vector<BigRational> z) {
  InnerModelSpec s;
  s.n = n;
  s.N = N;
  s.multiplicities = std::move(mult);
  s.z = std::move(z);
  for (std::size_t i = 0; i < s.z.size(); ++i) s.reps.push_back(RepMatrices::fundamental(N));
  return s;
}

OuterModelSpec outer(int N, int eta, std::vector<BigRational> z, int p = 0, int q = 0) {
  OuterModelSpec s;
  s.N = N;
  s.eta = eta;
  s.p = p;
  s.q = q;
  s.z = std::move(z);
  for (std::size_t i = 0; i < s.z.size(); ++i) s.reps.push_back(RepMatrices::fundamental(N));
  return s;
}

const Check& find(const std::vector<Check>& cs, const std::string& name) {
  for (const auto& c : cs)
    if (c.name == name) return c;
  FAIL("missing check " << name);
  return cs.front();
}

}  // namespace

TEST_CASE("pole sum product agrees with pointwise evaluation") {
  std::mt19937 rng(11);
  const SpaceLayout L = SpaceLayout::single(3);
  const CycNum i = CycNum::root(4, 1);
  const std::vector<CycNum> poles{CycNum(1), CycNum(-2), i, CycNum(1) + i};
  for (int trial = 0; trial < 5; ++trial) {
    PoleSum a(L), b(L);
    for (int t = 0; t < 3; ++t) {
      a.add(poles[static_cast<std::size_t>(rng() % poles.size())], 1 + static_cast<int>(rng() % 3), random_op(L, rng));
      b.add(poles[static_cast<std::size_t>(rng() % poles.size())], 1 + static_cast<int>(rng() % 2), random_op(L, rng));
    }
    const PoleSum ab = a * b;
    for (const CycNum& x : {CycNum(BigRational(7, 3)), CycNum(5) + i * CycNum(2)})
      CHECK(evaluate(ab, x) == evaluate(a, x) * evaluate(b, x));
  }
}

TEST_CASE("pole sum series and rescaling") {
  const SpaceLayout L = SpaceLayout::single(1);
  const SparseOp one = SparseOp::identity(L);
  PoleSum x(L);
  x.add(CycNum(3), 1, one);
  x.add(CycNum(2), 2, one);
  // 1/(u-3) + 1/(u-2)^2 = sum 3^a u^-(a+1) + sum a 2^(a-1) u^-(a+1)
  CHECK(x.series_coeff(0) == one);
  CHECK(x.series_coeff(1) == one * CycNum(3 + 1));
  CHECK(x.series_coeff(3) == one * CycNum(27 + 3 * 4));
  const PoleSum y = x.rescale(CycNum(2));
  const CycNum at(BigRational(1, 5));
  CHECK(evaluate(y, at) == evaluate(x, at * CycNum(2)));
  CHECK((x - x).is_zero());
}

TEST_CASE("bifraction zero test") {
  const SpaceLayout L = SpaceLayout::single(2);
  const SparseOp I = SparseOp::identity(L);
  const CycNum one(1), zero(0);
  // 1/((u-v)(v-1)) = 1/(u-1) * (1/(u-v) + 1/(v-1))
  const BiFraction uv = BiFraction::over(I, one, -one, zero);
  const BiFraction v1 = BiFraction::over(I, zero, one, -one);
  const BiFraction u1 = BiFraction::over(I, one, zero, -one);
  CHECK((uv * v1 - u1 * (uv + v1)).is_zero());
  std::string w;
  CHECK_FALSE((uv * v1 - u1 * (uv - v1)).is_zero(&w));
  CHECK_FALSE(w.empty());
  // Noncommuting numerators: [E12/(u-1), E21/(v-2)] is not zero.
  const BiFraction a = BiFraction::over(elementary(L, 0, 0, 1), one, zero, -one);
  const BiFraction b = BiFraction::over(elementary(L, 0, 1, 0), zero, one, CycNum(-2));
  CHECK_FALSE(commutator(a, b).is_zero());
  CHECK(commutator(a, a).is_zero());
}

TEST_CASE("spec validation") {
  auto s = inner(2, 2, {1, 1}, {1, 2});
  CHECK_NOTHROW(s.validate());
  s.multiplicities = {2, 1};
  CHECK_THROWS_AS(s.validate(), SpecError);
  s = inner(2, 2, {1, 1}, {1, 1});
  CHECK_THROWS_AS(s.validate(), SpecError);
  s = inner(2, 2, {1, 1}, {1, -2});
  CHECK_THROWS_AS(s.validate(), SpecError);
  CHECK_THROWS_AS(outer(3, -1, {1, 2}).validate(), SpecError);
  CHECK_THROWS_AS(outer(3, 1, {1, 2}, 1, 1).validate(), SpecError);
  CHECK_NOTHROW(outer(3, 1, {1, 2}, 2, 1).validate());
  auto o = outer(2, 1, {1, 2});
  o.K = canonical_K(2, -1, 0, 0);  // antisymmetric K with eta = +1
  CHECK_THROWS_AS(o.validate(), SpecError);
}

TEST_CASE("inner model with n = 1 reduces to the ordinary magnet") {
  const auto s = inner(1, 2, {2}, {1, 2, 3});
  const auto H = hamiltonians_inner(s);
  const SpaceLayout q = aux_layout(2, s.reps).quantum();
  // H_1 = P_12/(1-2) + P_13/(1-3)
  CHECK(H[0] == permutation(q, 0, 1) * CycNum(-1) + permutation(q, 0, 2) * CycNum(BigRational(-1, 2)));
  CHECK(verify_commuting(H).status == Status::pass);
  SparseOp sum(q);
  for (const auto& h : H) sum += h;
  CHECK(sum.is_zero());
  CHECK(symmetry_generators_inner(s).size() == 4);
}

TEST_CASE("inner suite, small model") {
  const auto cs = run_inner_suite(inner(2, 2, {1, 1}, {1, 2}));
  CHECK(all_passed(cs));
  CHECK(find(cs, "residue_identity_inner_as_printed").status == Status::info);
  CHECK(find(cs, "B_bracket_relation").status == Status::pass);
  CHECK(find(cs, "trace_B_squared_expansion").status == Status::pass);
}

TEST_CASE("inner suite with a spin-1 site") {
  auto s = inner(2, 2, {1, 1}, {1, 2});
  s.reps[0] = RepMatrices::sym2_gl2();
  const auto cs = run_inner_suite(s);
  CHECK(all_passed(cs));
  CHECK(find(cs, "double_pole_orbit_coefficient").status == Status::pass);
}

TEST_CASE("outer suite, small model") {
  const auto cs = run_outer_suite(outer(2, -1, {1, 2}));
  CHECK(all_passed(cs));
  CHECK(find(cs, "generator_span_dimension").status == Status::pass);
  CHECK(find(cs, "residue_identity_outer_printed_sign").status == Status::info);
}

TEST_CASE("negative controls") {
  // The all-plus boundary sign breaks commutativity for three sites.
  const auto o = outer(2, -1, {1, 2, 3});
  std::vector<SparseOp> printed;
  for (int k = 0; k < o.L(); ++k) printed.push_back(hamiltonian_outer_printed(o, k));
  CHECK(verify_commuting(printed).status == Status::fail);

  // A stray local term on one site breaks commutativity; a scalar shift does not.
  const auto s = inner(2, 2, {1, 1}, {1, 2, 3});
  auto H = hamiltonians_inner(s);
  H[1] += SparseOp::identity(H[1].layout()) * CycNum(5);  // harmless
  CHECK(verify_commuting(H).status == Status::pass);
  const SpaceLayout q = H[0].layout();
  H[1] += on_slot(q, 1, elementary(SpaceLayout::single(2), 0, 0, 1));
  const Check c = verify_commuting(H);
  CHECK(c.status == Status::fail);
  CHECK(c.witness.find("[H") == 0);

  // A B(u) whose twist uses the wrong root of unity fails the twisted bracket identity.
  auto bad = inner(4, 2, {1, 1, 0, 0}, {1, 2});
  const PoleSum B = build_B(bad);
  const SparseOp G = bad.G();
  const SparseOp Gl = on_slot(B.layout(), 0, G), Gr = on_slot(B.layout(), 0, matrix_power(G, -1));
  CHECK_FALSE((B - (B.rescale(bad.tau_pow(2)) * bad.tau_pow(2)).left(Gl).right(Gr)).is_zero());
}
