#include "doctest.h"
#include "halfloop/oracle.hpp"
#include "halfloop/tensor_ops.hpp"

#include <random>

using namespace halfloop;

namespace {

SparseOp random_op(const SpaceLayout& layout, std::mt19937& rng, long m, int density = 3) {
  SparseOp op(layout);
  std::uniform_int_distribution<int> val(-3, 3), k(0, static_cast<int>(m) - 1), keep(0, 9);
  for (std::size_t r = 0; r < op.dim(); ++r)
    for (std::size_t c = 0; c < op.dim(); ++c)
      if (keep(rng) < density) op.add_to(r, c, CycNum(val(rng)) * CycNum::root(m, k(rng)));
  return op;
}

}  // namespace

TEST_CASE("elementary and permutation") {
  const SpaceLayout two = SpaceLayout::single(2);
  CHECK(elementary(two, 0, 0, 1) * elementary(two, 0, 1, 0) == elementary(two, 0, 0, 0));
  CHECK(trace(elementary(two, 0, 0, 1)) == CycNum(0));
  CHECK(trace(elementary(two, 0, 1, 1)) == CycNum(1));

  const SpaceLayout L = SpaceLayout::with_aux(1, 3, {3, 3});
  const SparseOp P = permutation(L, 0, 2);
  CHECK(P * P == SparseOp::identity(L));
  CHECK(trace(P) == CycNum(9));  // tr P = N, times N for the spectator
  CHECK(partial_trace(P, {0}) == SparseOp::identity(L.without({0})));
  std::mt19937 rng(7);
  const SparseOp X = random_op(SpaceLayout::single(3), rng, 4);
  CHECK(P * on_slot(L, 0, X) * P == on_slot(L, 2, X));
  CHECK(coupling_P(L, 0, 1, RepMatrices::fundamental(3)) == permutation(L, 0, 1));
}

TEST_CASE("grading matrix") {
  const SparseOp G = grading_matrix(3, {1, 1, 1}, 12);
  CHECK(matrix_power(G, 3) == SparseOp::identity(G.layout()));
  CHECK_FALSE(matrix_power(G, 1) == SparseOp::identity(G.layout()));
  CHECK(grading_matrix(2, {1, 1}, 4).at(1, 1) == CycNum(-1));
  CHECK(grading_matrix(1, {3}, 4) == SparseOp::identity(SpaceLayout::single(3)));
  CHECK(matrix_power(G, -1) * G == SparseOp::identity(G.layout()));
}

TEST_CASE("representations") {
  CHECK_NOTHROW(RepMatrices::sym2_gl2());
  CHECK_NOTHROW(RepMatrices::dual(3));
  std::vector<SparseOp> bad;
  for (int k = 0; k < 4; ++k) bad.push_back(SparseOp::identity(SpaceLayout::single(2)));
  CHECK_THROWS(RepMatrices(2, bad, "bad"));

  // tr_a PP for spin 1 is the quadratic Casimir sum_ij rho(e_ij) rho(e_ji).
  const RepMatrices s = RepMatrices::sym2_gl2();
  const SpaceLayout L = SpaceLayout({2, 3}, 1);
  const SparseOp P = coupling_P(L, 0, 1, s);
  SparseOp cas(SpaceLayout::single(3));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) cas += s.rho(i, j) * s.rho(j, i);
  CHECK(partial_trace(P * P, {0}) == cas);
}

TEST_CASE("coupling Q") {
  const SpaceLayout L = SpaceLayout::with_aux(2, 2, {});
  const RepMatrices f = RepMatrices::fundamental(2);
  const SparseOp K = SparseOp::from_dense({{CycNum(0), CycNum(1)}, {CycNum(-1), CycNum(0)}});
  const SparseOp P = permutation(L, 0, 1);
  const SparseOp Q = coupling_Q(L, 0, 1, f, K);
  CHECK(P * Q == -Q);
  CHECK(Q * P == -Q);
  const SparseOp Qb = coupling_Q(L, 1, 0, f, K);
  CHECK(Q == Qb);
  const SparseOp Q1 = coupling_Q(L, 0, 1, f, SparseOp::identity(SpaceLayout::single(2)));
  CHECK(Q1 == transpose_slot(P, 0));
  CHECK(P * Q1 == Q1);
}

TEST_CASE("sparse operations agree with the dense oracle") {
  std::mt19937 rng(11);
  const std::vector<SpaceLayout> layouts{SpaceLayout({2, 2, 2}, 1), SpaceLayout({3, 3}, 1),
                                         SpaceLayout({2, 3, 2}, 1)};
  for (const auto& L : layouts) {
    const SparseOp A = random_op(L, rng, 12);
    const SparseOp B = random_op(L, rng, 12);
    const auto dA = oracle::from_sparse(A);
    const auto dB = oracle::from_sparse(B);
    CHECK(oracle::equal(A * B, oracle::mul(dA, dB)));
    CHECK(A * B == mul_serial(A, B));
    CHECK(oracle::equal(commutator(A, B), oracle::commutator(dA, dB)));
    CHECK(oracle::equal(partial_trace(A, {0}), oracle::partial_trace(dA, {0})));
    const int last = L.slots() - 1;
    CHECK(oracle::equal(partial_trace(A, {0, last}), oracle::partial_trace(dA, {0, last})));
    CHECK_THROWS_AS(partial_trace(A, {L.slots()}), LayoutMismatch);
    CHECK(oracle::equal(transpose_slot(A, 0), oracle::transpose_slot(dA, 0)));
    CHECK(transpose_slot(transpose_slot(A, 0), 0) == A);
    CHECK(trace(A) == oracle::trace(dA));
  }
  // (XY)^{t_a} differs from Y^{t_a} X^{t_a} once the quantum parts fail to commute.
  const SpaceLayout L({2, 2}, 1);
  const SparseOp X = elementary(L, 0, 0, 1) * elementary(L, 1, 0, 1);
  const SparseOp Y = elementary(L, 0, 1, 0) * elementary(L, 1, 1, 0);
  CHECK_FALSE(transpose_slot(X * Y, 0) == transpose_slot(Y, 0) * transpose_slot(X, 0));
  const SparseOp Z = elementary(L, 0, 1, 0) * elementary(L, 1, 0, 0);
  const SparseOp W = elementary(L, 0, 0, 1) * elementary(L, 1, 0, 0);
  CHECK(transpose_slot(W * Z, 0) == transpose_slot(Z, 0) * transpose_slot(W, 0));
}

TEST_CASE("rank and span") {
  const SpaceLayout L = SpaceLayout::single(2);
  std::vector<SparseOp> ops{elementary(L, 0, 0, 0), elementary(L, 0, 1, 1),
                            elementary(L, 0, 0, 0) + elementary(L, 0, 1, 1)};
  CHECK(rank(ops) == 2);
  CHECK(in_span(ops, SparseOp::identity(L) * CycNum(5)));
  CHECK_FALSE(in_span(ops, elementary(L, 0, 0, 1)));
}
