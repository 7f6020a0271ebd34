#include "halfloop/oracle_sweep.hpp"

#include <functional>
#include <random>

#include "halfloop/gaudin.hpp"
#include "halfloop/oracle.hpp"

namespace halfloop {

namespace {

using oracle::Dense;

SparseOp random_op(const SpaceLayout& layout, std::mt19937& rng, long m, int density) {
  SparseOp op(layout);
  std::uniform_int_distribution<int> val(-3, 3), k(0, static_cast<int>(m) - 1), keep(0, 99);
  for (std::size_t r = 0; r < op.dim(); ++r)
    for (std::size_t c = 0; c < op.dim(); ++c)
      if (keep(rng) < density) op.add_to(r, c, CycNum(val(rng)) * CycNum::root(m, k(rng)));
  return op;
}

SparseOp random_invertible(int d, std::mt19937& rng, long m) {
  for (;;) {
    SparseOp x = random_op(SpaceLayout::single(d), rng, m, 60);
    if (inverse(x)) return x;
  }
}

struct Tally {
  explicit Tally(std::string n) : name(std::move(n)) {}
  std::string name;
  std::size_t instances = 0;
  std::string witness;
  void record(bool ok, const std::string& where) {
    ++instances;
    if (!ok && witness.empty()) witness = where;
  }
  Check check() const {
    return make_check(name, witness.empty(), "mismatch on " + witness,
                      std::to_string(instances) + " instance(s)");
  }
};

Dense dense_G(const std::vector<int>& dims, const SparseOp& G, long p) {
  return oracle::place(dims, {{0, oracle::to_local(matrix_power(G, p))}});
}

}  // namespace

oracle::Dense dense_hamiltonian_inner(const InnerModelSpec& s, int k) {
  std::vector<int> dims{s.N};
  for (const auto& r : s.reps) dims.push_back(r.dim());
  const SparseOp G = s.G();
  const Dense Pk = oracle::coupling_P(dims, 0, k + 1, s.reps[static_cast<std::size_t>(k)]);
  const CycNum zk(s.z[static_cast<std::size_t>(k)]);
  Dense H = oracle::zeros(std::vector<int>(dims.begin() + 1, dims.end()));
  for (int p = 0; p < s.n; ++p) {
    const Dense Gp = dense_G(dims, G, p), Gmp = dense_G(dims, G, -p);
    for (int j = 0; j < s.L(); ++j) {
      if (j == k) continue;
      const Dense Pj = oracle::coupling_P(dims, 0, j + 1, s.reps[static_cast<std::size_t>(j)]);
      const CycNum den = zk - s.tau_pow(p) * CycNum(s.z[static_cast<std::size_t>(j)]);
      H = oracle::add(H, oracle::scale(oracle::partial_trace(oracle::mul(oracle::mul(oracle::mul(Pk, Gmp), Pj), Gp), {0}),
                                       den.inverse()));
    }
    if (p != 0)
      H = oracle::add(H, oracle::scale(oracle::partial_trace(oracle::mul(oracle::mul(oracle::mul(Pk, Gmp), Pk), Gp), {0}),
                                       (CycNum(2) * zk).inverse()));
  }
  return H;
}

oracle::Dense dense_hamiltonian_outer(const OuterModelSpec& s, int k) {
  std::vector<int> dims{s.N};
  for (const auto& r : s.reps) dims.push_back(r.dim());
  const Dense K = oracle::to_local(s.Kmat());
  const Dense Pk = oracle::coupling_P(dims, 0, k + 1, s.reps[static_cast<std::size_t>(k)]);
  const CycNum zk(s.z[static_cast<std::size_t>(k)]);
  Dense H = oracle::zeros(std::vector<int>(dims.begin() + 1, dims.end()));
  for (int j = 0; j < s.L(); ++j) {
    if (j == k) continue;
    const Dense Pj = oracle::coupling_P(dims, 0, j + 1, s.reps[static_cast<std::size_t>(j)]);
    const Dense Qj = oracle::coupling_Q(dims, 0, j + 1, s.reps[static_cast<std::size_t>(j)], K);
    const CycNum zj(s.z[static_cast<std::size_t>(j)]);
    H = oracle::add(H, oracle::scale(oracle::partial_trace(oracle::mul(Pk, Pj), {0}), (zk - zj).inverse()));
    H = oracle::add(H, oracle::scale(oracle::partial_trace(oracle::mul(Pk, Qj), {0}), CycNum(-1) / (zk + zj)));
  }
  const Dense Qk = oracle::coupling_Q(dims, 0, k + 1, s.reps[static_cast<std::size_t>(k)], K);
  return oracle::add(H, oracle::scale(oracle::partial_trace(oracle::mul(Pk, Qk), {0}), CycNum(-1) / (CycNum(2) * zk)));
}

std::vector<Check> oracle_equivalence_sweep(unsigned seed, std::size_t max_dim) {
  std::mt19937 rng(seed);
  const long m = 12;
  std::vector<SpaceLayout> layouts;
  for (const auto& [dims, aux] : std::vector<std::pair<std::vector<int>, int>>{{{2, 2}, 1},
                                                                               {{2, 2, 2}, 1},
                                                                               {{3, 3}, 1},
                                                                               {{2, 3, 2}, 1},
                                                                               {{3, 3, 3}, 1},
                                                                               {{2, 2, 2, 2}, 2},
                                                                               {{2, 2, 2, 2, 2}, 1},
                                                                               {{3, 3, 3, 3}, 1},
                                                                               {{9, 9}, 1}}) {
    SpaceLayout L(dims, aux);
    if (L.total() <= max_dim) layouts.push_back(L);
  }

  Tally mul{"oracle_mul"}, mul_s{"oracle_mul_serial"}, add{"oracle_add"}, scale{"oracle_scale"},
      comm{"oracle_commutator"}, ptr{"oracle_partial_trace"}, tsl{"oracle_transpose_slot"}, tr{"oracle_trace"},
      onslot{"oracle_on_slot"}, elem{"oracle_elementary"}, perm{"oracle_permutation"}, cP{"oracle_coupling_P"},
      cQ{"oracle_coupling_Q"}, inv{"oracle_inverse"}, hin{"oracle_hamiltonian_inner"},
      hout{"oracle_hamiltonian_outer"};

  for (const auto& L : layouts) {
    const std::string where = L.str();
    const int density = L.total() > 30 ? 4 : 25;
    const SparseOp A = random_op(L, rng, m, density), B = random_op(L, rng, m, density);
    const Dense dA = oracle::from_sparse(A), dB = oracle::from_sparse(B);
    const Dense dAB = oracle::mul(dA, dB);
    mul.record(oracle::equal(A * B, dAB), where);
    mul_s.record(oracle::equal(mul_serial(A, B), dAB), where);
    add.record(oracle::equal(A + B, oracle::add(dA, dB)), where);
    const CycNum c = CycNum(BigRational(-3, 7)) + CycNum::root(m, 5);
    scale.record(oracle::equal(A * c, oracle::scale(dA, c)), where);
    comm.record(oracle::equal(commutator(A, B), oracle::commutator(dA, dB)), where);
    tr.record(trace(A) == oracle::trace(dA), where);
    const std::vector<int>& dims = L.dims();
    for (int s = 0; s < L.slots(); ++s) {
      const std::string at = where + " slot " + std::to_string(s + 1);
      ptr.record(oracle::equal(partial_trace(A, {s}), oracle::partial_trace(dA, {s})), at);
      tsl.record(oracle::equal(transpose_slot(A, s), oracle::transpose_slot(dA, s)), at);
      const SparseOp X = random_op(SpaceLayout::single(L.dim(s)), rng, m, 50);
      onslot.record(oracle::equal(on_slot(L, s, X), oracle::place(dims, {{s, oracle::to_local(X)}})), at);
      const int i = static_cast<int>(rng() % static_cast<unsigned>(L.dim(s)));
      const int j = static_cast<int>(rng() % static_cast<unsigned>(L.dim(s)));
      elem.record(oracle::equal(elementary(L, s, i, j), oracle::elementary(dims, s, i, j)), at);
      const SparseOp Xi = random_invertible(L.dim(s), rng, m);
      inv.record(oracle::equal(*inverse(Xi), oracle::inverse(oracle::to_local(Xi))), at);
    }
    if (L.slots() > 2) {
      const int last = L.slots() - 1;
      ptr.record(oracle::equal(partial_trace(A, {0, last}), oracle::partial_trace(dA, {0, last})), where + " slots 1," +
                                                                                                    std::to_string(last + 1));
    }
    for (int x = 0; x < L.slots(); ++x)
      for (int y = x + 1; y < L.slots(); ++y) {
        if (L.dim(x) != L.dim(y)) continue;
        const std::string at = where + " slots " + std::to_string(x + 1) + "," + std::to_string(y + 1);
        perm.record(oracle::equal(permutation(L, x, y), oracle::permutation(dims, x, y)), at);
        if (L.dim(x) <= 3) {
          const RepMatrices f = RepMatrices::fundamental(L.dim(x));
          cP.record(oracle::equal(coupling_P(L, x, y, f), oracle::coupling_P(dims, x, y, f)), at);
          const SparseOp K = random_invertible(L.dim(x), rng, m);
          cQ.record(oracle::equal(coupling_Q(L, x, y, f, K),
                                  oracle::coupling_Q(dims, x, y, f, oracle::to_local(K))),
                    at);
        }
      }
  }
  // Non-fundamental and dual site representations.
  {
    const SpaceLayout L({2, 3, 2}, 1);
    const RepMatrices s1 = RepMatrices::sym2_gl2(), d2 = RepMatrices::dual(2);
    const SparseOp K = random_invertible(2, rng, m);
    cP.record(oracle::equal(coupling_P(L, 0, 1, s1), oracle::coupling_P(L.dims(), 0, 1, s1)), "spin-1 site");
    cP.record(oracle::equal(coupling_P(L, 0, 2, d2), oracle::coupling_P(L.dims(), 0, 2, d2)), "dual site");
    cQ.record(oracle::equal(coupling_Q(L, 0, 1, s1, K), oracle::coupling_Q(L.dims(), 0, 1, s1, oracle::to_local(K))),
              "spin-1 site");
  }

  auto inner = [](int n, int N, std::vector<int> mult, std::vector<BigRational> z) {
    InnerModelSpec s;
    s.n = n;
    s.N = N;
    s.multiplicities = std::move(mult);
    s.z = std::move(z);
    for (std::size_t i = 0; i < s.z.size(); ++i) s.reps.push_back(RepMatrices::fundamental(N));
    return s;
  };
  std::vector<InnerModelSpec> inners{inner(2, 2, {1, 1}, {1, 2, 3}), inner(3, 3, {1, 1, 1}, {1, 2}),
                                     inner(2, 3, {2, 1}, {1, 2})};
  {
    auto s = inner(2, 2, {1, 1}, {1, 2});
    s.reps[0] = RepMatrices::sym2_gl2();
    inners.push_back(s);
  }
  for (const auto& s : inners)
    for (int k = 0; k < s.L(); ++k)
      hin.record(oracle::equal(hamiltonian_inner(s, k), dense_hamiltonian_inner(s, k)),
                 "n=" + std::to_string(s.n) + " N=" + std::to_string(s.N) + " H" + std::to_string(k + 1));

  auto outer = [](int N, int eta, int p, int q, std::vector<BigRational> z) {
    OuterModelSpec s;
    s.N = N;
    s.eta = eta;
    s.p = p;
    s.q = q;
    s.z = std::move(z);
    for (std::size_t i = 0; i < s.z.size(); ++i) s.reps.push_back(RepMatrices::fundamental(N));
    return s;
  };
  for (const auto& s : {outer(2, -1, 0, 0, {1, 2, 3}), outer(3, 1, 2, 1, {1, 2})})
    for (int k = 0; k < s.L(); ++k)
      hout.record(oracle::equal(hamiltonian_outer(s, k), dense_hamiltonian_outer(s, k)),
                  "eta=" + std::to_string(s.eta) + " N=" + std::to_string(s.N) + " H" + std::to_string(k + 1));

  std::vector<Check> out;
  for (const Tally* t : {&mul, &mul_s, &add, &scale, &comm, &ptr, &tsl, &tr, &onslot, &elem, &perm, &cP, &cQ, &inv,
                         &hin, &hout})
    out.push_back(t->check());
  return out;
}

}  // namespace halfloop
