#include "halfloop/gaudin.hpp"

#include <numeric>
#include <sstream>

namespace halfloop {

namespace {

std::vector<int> site_map(int L, int first_target) {
  std::vector<int> m(static_cast<std::size_t>(L));
  std::iota(m.begin(), m.end(), first_target);
  return m;
}

// Map an operator on [aux, sites] into [a, b, sites] with aux -> a (which = 0) or b (which = 1).
std::vector<int> aux_to(int which, int L) {
  std::vector<int> m{which};
  auto s = site_map(L, 2);
  m.insert(m.end(), s.begin(), s.end());
  return m;
}

void check_z(const std::vector<BigRational>& z) {
  for (std::size_t a = 0; a < z.size(); ++a) {
    if (z[a] <= 0) throw SpecError("z values must be positive rationals (site " + std::to_string(a + 1) + ")");
    for (std::size_t b = 0; b < a; ++b)
      if (z[a] == z[b]) throw SpecError("z values must be pairwise distinct (sites " + std::to_string(b + 1) +
                                        ", " + std::to_string(a + 1) + ")");
  }
}

void check_reps(int N, const std::vector<RepMatrices>& reps, std::size_t L) {
  if (reps.size() != L) throw SpecError("one representation per site is required");
  for (std::size_t l = 0; l < L; ++l)
    if (reps[l].N() != N) throw SpecError("site " + std::to_string(l + 1) + " representation is not of gl_N");
}

std::string pair_name(const std::string& a, std::size_t i, const std::string& b, std::size_t j) {
  std::ostringstream os;
  os << "[" << a << i + 1 << "," << b << j + 1 << "]";
  return os.str();
}

// Entries X_{ij} of X = sum E_ij (x) X_ij on aux slot 0, in row-major order, nonzero only.
std::vector<SparseOp> aux_entries(const SparseOp& X) {
  const SpaceLayout& L = X.layout();
  std::vector<SparseOp> out;
  for (int i = 0; i < L.dim(0); ++i)
    for (int j = 0; j < L.dim(0); ++j) {
      SparseOp e = partial_trace(elementary(L, 0, j, i) * X, {0});
      if (!e.is_zero()) out.push_back(std::move(e));
    }
  return out;
}

Check closure_check(const std::vector<SparseOp>& gens, const std::string& name) {
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j) {
      if (!in_span(gens, commutator(gens[i], gens[j])))
        return make_check(name, false, pair_name("g", i, "g", j) + " leaves the span");
    }
  return make_check(name, true);
}

Check polesum_zero(const std::string& name, const PoleSum& diff, std::string note = {}) {
  return make_check(name, diff.is_zero(), diff.first_term(), std::move(note));
}

Check bifraction_zero(const std::string& name, const BiFraction& diff, std::string note = {}) {
  std::string witness;
  const bool ok = diff.is_zero(&witness);
  return make_check(name, ok, witness, std::move(note));
}

}  // namespace

// ---------------------------------------------------------------- specs

CycNum InnerModelSpec::tau() const { return tau_pow(1); }

CycNum InnerModelSpec::tau_pow(long p) const {
  const long m = field_order();
  return CycNum::root(m, (m / n) * p);
}

SparseOp InnerModelSpec::G() const { return grading_matrix(n, multiplicities, field_order()); }

void InnerModelSpec::validate() const {
  if (n < 1) throw SpecError("n must be at least 1");
  if (N < 1) throw SpecError("N must be at least 1");
  if (static_cast<int>(multiplicities.size()) != n) throw SpecError("need exactly n multiplicities");
  int sum = 0;
  for (int k : multiplicities) {
    if (k < 0) throw SpecError("multiplicities must be non-negative");
    sum += k;
  }
  if (sum != N) throw SpecError("multiplicities must sum to N");
  if (L() < 1) throw SpecError("at least one site is required");
  check_z(z);
  // Orbit separation: tau^p z_j == z_k only for p = 0, j = k.
  for (int j = 0; j < L(); ++j)
    for (int k = 0; k < L(); ++k)
      for (int p = 0; p < n; ++p) {
        if (p == 0 && j == k) continue;
        if (tau_pow(p) * CycNum(z[static_cast<std::size_t>(j)]) == CycNum(z[static_cast<std::size_t>(k)]))
          throw SpecError("z orbits collide under the rotation group");
      }
  check_reps(N, reps, z.size());
}

SparseOp canonical_K(int N, int eta, int p, int q) {
  SparseOp K(SpaceLayout::single(N));
  if (eta == 1) {
    if (p + q != N) throw SpecError("signature (p,q) must satisfy p + q = N");
    for (int i = 0; i < N; ++i) K.add_to(static_cast<std::size_t>(i), static_cast<std::size_t>(i), CycNum(i < p ? 1 : -1));
  } else {
    if (N % 2) throw SpecError("N must be even for eta = -1");
    for (int b = 0; b < N / 2; ++b) {
      K.add_to(static_cast<std::size_t>(2 * b), static_cast<std::size_t>(2 * b + 1), CycNum(1));
      K.add_to(static_cast<std::size_t>(2 * b + 1), static_cast<std::size_t>(2 * b), CycNum(-1));
    }
  }
  return K;
}

SparseOp OuterModelSpec::Kmat() const {
  if (K) return *K;
  if (eta == 1 && p == 0 && q == 0) return canonical_K(N, eta, N, 0);
  return canonical_K(N, eta, p, q);
}

void OuterModelSpec::validate() const {
  if (eta != 1 && eta != -1) throw SpecError("eta must be +1 or -1");
  if (N < 1) throw SpecError("N must be at least 1");
  if (eta == -1 && N % 2) throw SpecError("N must be even for eta = -1");
  const SparseOp k = Kmat();
  if (!(k.layout() == SpaceLayout::single(N))) throw SpecError("K must be N x N");
  if (!(transpose(k) == k * CycNum(eta))) throw SpecError("K must satisfy K^t = eta K");
  if (!inverse(k)) throw SpecError("K must be invertible");
  if (L() < 1) throw SpecError("at least one site is required");
  check_z(z);
  check_reps(N, reps, z.size());
}

// ---------------------------------------------------------------- series

SpaceLayout aux_layout(int N, const std::vector<RepMatrices>& reps, int num_aux) {
  std::vector<int> dims;
  for (const auto& r : reps) dims.push_back(r.dim());
  return SpaceLayout::with_aux(num_aux, N, dims);
}

PoleSum build_T(int N, const std::vector<BigRational>& z, const std::vector<RepMatrices>& reps) {
  const SpaceLayout layout = aux_layout(N, reps);
  PoleSum T(layout);
  for (std::size_t l = 0; l < z.size(); ++l)
    T.add(CycNum(z[l]), 1, coupling_P(layout, 0, static_cast<int>(l) + 1, reps[l]));
  return T;
}

PoleSum build_B(const InnerModelSpec& spec) {
  const PoleSum T = build_T(spec.N, spec.z, spec.reps);
  const SparseOp G = spec.G();
  PoleSum B(T.layout());
  for (int j = 0; j < spec.n; ++j) {
    const SparseOp Gj = on_slot(T.layout(), 0, matrix_power(G, j));
    const SparseOp Gmj = on_slot(T.layout(), 0, matrix_power(G, -j));
    B += (T.rescale(spec.tau_pow(j)) * spec.tau_pow(j)).left(Gj).right(Gmj);
  }
  return B;
}

SparseOp outer_twist(const SparseOp& x, const SparseOp& K, int aux_slot) {
  const SparseOp Ka = on_slot(x.layout(), aux_slot, K);
  const SparseOp Kinv = on_slot(x.layout(), aux_slot, *inverse(K));
  return Ka * transpose_slot(x, aux_slot) * Kinv;
}

PoleSum outer_twist(const PoleSum& x, const SparseOp& K) {
  return x.map_coeffs([&](const SparseOp& c) { return outer_twist(c, K); });
}

PoleSum build_S(const OuterModelSpec& spec) {
  const PoleSum T = build_T(spec.N, spec.z, spec.reps);
  return T + outer_twist(T.rescale(CycNum(-1)), spec.Kmat());
}

PoleSum trace_square(const PoleSum& x) { return (x * x).partial_trace({0}); }

// ---------------------------------------------------------------- Hamiltonians

SparseOp hamiltonian_inner(const InnerModelSpec& spec, int k) {
  const SpaceLayout layout = aux_layout(spec.N, spec.reps);
  const SparseOp G = spec.G();
  const SparseOp Pk = coupling_P(layout, 0, k + 1, spec.reps[static_cast<std::size_t>(k)]);
  const CycNum zk(spec.z[static_cast<std::size_t>(k)]);
  SparseOp H(layout.quantum());
  for (int p = 0; p < spec.n; ++p) {
    const SparseOp Gp = on_slot(layout, 0, matrix_power(G, p));
    const SparseOp Gmp = on_slot(layout, 0, matrix_power(G, -p));
    for (int j = 0; j < spec.L(); ++j) {
      if (j == k) continue;
      const SparseOp Pj = coupling_P(layout, 0, j + 1, spec.reps[static_cast<std::size_t>(j)]);
      const CycNum den = zk - spec.tau_pow(p) * CycNum(spec.z[static_cast<std::size_t>(j)]);
      H += partial_trace(Pk * Gmp * Pj * Gp, {0}) * den.inverse();
    }
    if (p != 0) H += partial_trace(Pk * Gmp * Pk * Gp, {0}) * (CycNum(2) * zk).inverse();
  }
  return H;
}

std::vector<SparseOp> hamiltonians_inner(const InnerModelSpec& spec) {
  std::vector<SparseOp> hs(static_cast<std::size_t>(spec.L()));
#pragma omp parallel for schedule(dynamic, 1)
  for (int k = 0; k < spec.L(); ++k) hs[static_cast<std::size_t>(k)] = hamiltonian_inner(spec, k);
  return hs;
}

SparseOp hamiltonian_inner_fundamental(const InnerModelSpec& spec, int k) {
  const SpaceLayout q = aux_layout(spec.N, spec.reps).quantum();
  const SparseOp G = spec.G();
  const CycNum zk(spec.z[static_cast<std::size_t>(k)]);
  SparseOp H(q);
  for (int p = 0; p < spec.n; ++p) {
    for (int j = 0; j < spec.L(); ++j) {
      if (j == k) continue;
      const SparseOp Gj = on_slot(q, j, matrix_power(G, p));
      const SparseOp Gjm = on_slot(q, j, matrix_power(G, -p));
      const CycNum den = zk - spec.tau_pow(p) * CycNum(spec.z[static_cast<std::size_t>(j)]);
      H += Gj * permutation(q, k, j) * Gjm * den.inverse();
    }
    if (p != 0) {
      const CycNum f = trace(matrix_power(G, p)) / (CycNum(2) * zk);
      H += on_slot(q, k, matrix_power(G, -p)) * f;
    }
  }
  return H;
}

namespace {

SparseOp outer_hamiltonian(const OuterModelSpec& spec, int k, const CycNum& sign) {
  const SpaceLayout layout = aux_layout(spec.N, spec.reps);
  const SparseOp K = spec.Kmat();
  const SparseOp Pk = coupling_P(layout, 0, k + 1, spec.reps[static_cast<std::size_t>(k)]);
  const CycNum zk(spec.z[static_cast<std::size_t>(k)]);
  SparseOp H(layout.quantum());
  for (int j = 0; j < spec.L(); ++j) {
    if (j == k) continue;
    const SparseOp Pj = coupling_P(layout, 0, j + 1, spec.reps[static_cast<std::size_t>(j)]);
    const SparseOp Qj = coupling_Q(layout, 0, j + 1, spec.reps[static_cast<std::size_t>(j)], K);
    const CycNum zj(spec.z[static_cast<std::size_t>(j)]);
    H += partial_trace(Pk * Pj, {0}) * (zk - zj).inverse();
    H += partial_trace(Pk * Qj, {0}) * (sign / (zk + zj));
  }
  const SparseOp Qk = coupling_Q(layout, 0, k + 1, spec.reps[static_cast<std::size_t>(k)], K);
  H += partial_trace(Pk * Qk, {0}) * (sign / (CycNum(2) * zk));
  return H;
}

}  // namespace

SparseOp hamiltonian_outer(const OuterModelSpec& spec, int k) { return outer_hamiltonian(spec, k, CycNum(-1)); }

SparseOp hamiltonian_outer_printed(const OuterModelSpec& spec, int k) {
  return outer_hamiltonian(spec, k, CycNum(1));
}

std::vector<SparseOp> hamiltonians_outer(const OuterModelSpec& spec) {
  std::vector<SparseOp> hs(static_cast<std::size_t>(spec.L()));
#pragma omp parallel for schedule(dynamic, 1)
  for (int k = 0; k < spec.L(); ++k) hs[static_cast<std::size_t>(k)] = hamiltonian_outer(spec, k);
  return hs;
}

std::vector<SparseOp> symmetry_generators_inner(const InnerModelSpec& spec) {
  return aux_entries(build_B(spec).series_coeff(0));
}

std::vector<SparseOp> symmetry_generators_outer(const OuterModelSpec& spec) {
  return aux_entries(build_S(spec).series_coeff(0));
}

// ---------------------------------------------------------------- verification

Check verify_commuting(const std::vector<SparseOp>& ops, const std::string& name, bool all_pairs) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  const bool sweep = all_pairs || ops.size() <= kPairSweepLimit;
  for (std::size_t i = 0; i < ops.size(); ++i)
    for (std::size_t j = i + 1; j < ops.size(); ++j)
      if (sweep || i == 0 || j == i + 1) pairs.emplace_back(i, j);
  std::vector<std::string> bad(pairs.size());
  const auto count = static_cast<std::int64_t>(pairs.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t t = 0; t < count; ++t) {
    const auto [i, j] = pairs[static_cast<std::size_t>(t)];
    const SparseOp c = commutator(ops[i], ops[j]);
    if (!c.is_zero()) bad[static_cast<std::size_t>(t)] = pair_name("H", i, "H", j) + " " + c.first_nonzero();
  }
  for (const auto& w : bad)
    if (!w.empty()) return make_check(name, false, w);
  return make_check(name, true, {}, std::to_string(pairs.size()) + " pairs");
}

Check verify_symmetry(const std::vector<SparseOp>& hams, const std::vector<SparseOp>& gens,
                      const std::string& name) {
  std::vector<std::string> bad(gens.size() * hams.size());
  const auto count = static_cast<std::int64_t>(bad.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t t = 0; t < count; ++t) {
    const std::size_t g = static_cast<std::size_t>(t) / hams.size();
    const std::size_t h = static_cast<std::size_t>(t) % hams.size();
    const SparseOp c = commutator(gens[g], hams[h]);
    if (!c.is_zero()) bad[static_cast<std::size_t>(t)] = pair_name("g", g, "H", h) + " " + c.first_nonzero();
  }
  for (const auto& w : bad)
    if (!w.empty()) return make_check(name, false, w);
  return make_check(name, true, {}, std::to_string(bad.size()) + " pairs");
}

std::vector<Check> residue_identity_inner(const InnerModelSpec& spec) {
  std::vector<Check> out;
  const PoleSum B = build_B(spec);
  const PoleSum bp = trace_square(B);
  const auto H = hamiltonians_inner(spec);
  const SpaceLayout layout = B.layout();
  const SparseOp G = spec.G();

  PoleSum expect(bp.layout()), literal(bp.layout());
  bool orbit_ok = true;
  std::string orbit_witness;
  for (int k = 0; k < spec.L(); ++k) {
    const SparseOp Pk = coupling_P(layout, 0, k + 1, spec.reps[static_cast<std::size_t>(k)]);
    const SparseOp PP = partial_trace(Pk * Pk, {0});
    for (int j = 0; j < spec.n; ++j) {
      const CycNum pole = spec.tau_pow(-j) * CycNum(spec.z[static_cast<std::size_t>(k)]);
      expect.add(pole, 1, H[static_cast<std::size_t>(k)] * (CycNum(2) * spec.tau_pow(j)));
      literal.add(pole, 1, H[static_cast<std::size_t>(k)] * spec.tau_pow(j));
      expect.add(pole, 2, PP);
      literal.add(pole, 2, PP);
      const SparseOp conj = on_slot(layout, 0, matrix_power(G, j)) * Pk * on_slot(layout, 0, matrix_power(G, -j));
      if (!(partial_trace(conj * conj, {0}) == PP) && orbit_ok) {
        orbit_ok = false;
        orbit_witness = "site " + std::to_string(k + 1) + ", j = " + std::to_string(j);
      }
    }
  }
  out.push_back(polesum_zero("residue_identity_inner", bp - expect,
                             "simple-pole residue 2 tau^j H_k; double poles tr_a P_k P_k"));
  Check lit = polesum_zero("residue_identity_inner_as_printed", bp - literal);
  lit.status = Status::info;
  lit.note = lit.witness.empty() ? "printed expansion holds"
                                 : "printed expansion lacks the factor 2 on the simple poles";
  out.push_back(lit);
  Check orbit = make_check("double_pole_orbit_coefficient", orbit_ok, orbit_witness,
                           "tr_a(G^j P G^-j)^2 = tr_a P P by cyclicity of the auxiliary trace");
  if (!orbit_ok) orbit.status = Status::info;
  out.push_back(orbit);

  bool fundamental = true;
  for (const auto& r : spec.reps) fundamental = fundamental && r.name() == "fundamental";
  if (fundamental) {
    std::string w;
    for (int k = 0; k < spec.L() && w.empty(); ++k) {
      const SparseOp d = H[static_cast<std::size_t>(k)] - hamiltonian_inner_fundamental(spec, k);
      if (!d.is_zero()) w = "H" + std::to_string(k + 1) + " " + d.first_nonzero();
    }
    out.push_back(make_check("hamiltonian_inner_fundamental_form", w.empty(), w));
  }
  return out;
}

std::vector<Check> residue_identity_outer(const OuterModelSpec& spec) {
  std::vector<Check> out;
  const PoleSum S = build_S(spec);
  const PoleSum sp = trace_square(S);
  const SpaceLayout layout = S.layout();
  const auto H = hamiltonians_outer(spec);
  PoleSum expect(sp.layout()), printed(sp.layout());
  for (int k = 0; k < spec.L(); ++k) {
    const CycNum zk(spec.z[static_cast<std::size_t>(k)]);
    const SparseOp Pk = coupling_P(layout, 0, k + 1, spec.reps[static_cast<std::size_t>(k)]);
    const SparseOp PP = partial_trace(Pk * Pk, {0});
    // 4 z_k / ((u - z_k)(u + z_k)) = 2/(u - z_k) - 2/(u + z_k)
    const SparseOp& Hk = H[static_cast<std::size_t>(k)];
    const SparseOp Hp = hamiltonian_outer_printed(spec, k);
    for (auto* target : {&expect, &printed}) {
      const SparseOp& h = target == &expect ? Hk : Hp;
      target->add(zk, 1, h * CycNum(2));
      target->add(-zk, 1, h * CycNum(-2));
      target->add(zk, 2, PP);
      target->add(-zk, 2, PP);
    }
  }
  out.push_back(polesum_zero("residue_identity_outer", sp - expect,
                             "H_k with the -Q boundary sign read off the residues"));
  Check lit = polesum_zero("residue_identity_outer_printed_sign", sp - printed);
  lit.status = Status::info;
  lit.note = lit.witness.empty() ? "printed sign pattern holds"
                                 : "printed +Q sign pattern does not match the residues of tr S(u)^2";
  out.push_back(lit);

  bool fundamental = true;
  for (const auto& r : spec.reps) fundamental = fundamental && r.name() == "fundamental";
  if (fundamental) {
    // sum (P_kj/(z_k-z_j) - Q_kj/(z_k+z_j)) - eta/(2 z_k), Q_kj = P_kj^{T_j}.
    const SpaceLayout q = layout.quantum();
    const SparseOp K = spec.Kmat();
    std::string w;
    for (int k = 0; k < spec.L() && w.empty(); ++k) {
      const CycNum zk(spec.z[static_cast<std::size_t>(k)]);
      SparseOp f = SparseOp::scalar(q, CycNum(-spec.eta) / (CycNum(2) * zk));
      for (int j = 0; j < spec.L(); ++j) {
        if (j == k) continue;
        const CycNum zj(spec.z[static_cast<std::size_t>(j)]);
        const SparseOp P = permutation(q, k, j);
        f += P * (zk - zj).inverse();
        f -= outer_twist(P, K, j) * (zk + zj).inverse();
      }
      const SparseOp d = H[static_cast<std::size_t>(k)] - f;
      if (!d.is_zero()) w = "H" + std::to_string(k + 1) + " " + d.first_nonzero();
    }
    out.push_back(make_check("hamiltonian_outer_fundamental_form", w.empty(), w));
  }
  return out;
}

std::vector<Check> centrality_checks_inner(const InnerModelSpec& spec) {
  const PoleSum b = build_B(spec).partial_trace({0});
  std::vector<SparseOp> central;
  for (const auto& [k, op] : b.terms()) central.push_back(op);
  const auto H = hamiltonians_inner(spec);
  const auto gens = symmetry_generators_inner(spec);
  return {verify_symmetry(H, central, "centrality_trB_vs_H"),
          verify_symmetry(gens, central, "centrality_trB_vs_generators")};
}

std::vector<Check> centrality_checks_outer(const OuterModelSpec& spec) {
  const PoleSum s = build_S(spec).partial_trace({0});
  std::vector<SparseOp> central;
  for (int alpha = 1; alpha <= 5; alpha += 2) central.push_back(s.series_coeff(alpha));
  const auto H = hamiltonians_outer(spec);
  const auto gens = symmetry_generators_outer(spec);
  return {verify_symmetry(H, central, "centrality_odd_trS_vs_H"),
          verify_symmetry(gens, central, "centrality_odd_trS_vs_generators")};
}

std::vector<Check> bracket_checks_inner(const InnerModelSpec& spec) {
  std::vector<Check> out;
  const int L = spec.L();
  const SpaceLayout L2 = aux_layout(spec.N, spec.reps, 2);
  const PoleSum T = build_T(spec.N, spec.z, spec.reps);
  const PoleSum B = build_B(spec);
  const SparseOp Pab = permutation(L2, 0, 1);
  const CycNum one(1), zero(0);
  auto Xa = [&](const PoleSum& X, Spectral var, const CycNum& s) {
    return BiFraction::from(X.embed(L2, aux_to(0, L)), var, s);
  };
  auto Xb = [&](const PoleSum& X, Spectral var, const CycNum& s) {
    return BiFraction::from(X.embed(L2, aux_to(1, L)), var, s);
  };

  {
    const BiFraction Ta = Xa(T, Spectral::u, one), Tb = Xb(T, Spectral::v, one);
    const BiFraction r = BiFraction::over(Pab, one, -one, zero);
    out.push_back(bifraction_zero("halfloop_relation", commutator(Ta, Tb) - commutator(Ta + Tb, r)));
  }
  const SparseOp G = spec.G();
  auto Ga = [&](long p) { return on_slot(L2, 0, matrix_power(G, p)); };
  auto Gb = [&](long p) { return on_slot(L2, 1, matrix_power(G, p)); };
  const BiFraction Bau = Xa(B, Spectral::u, one), Bbv = Xb(B, Spectral::v, one);
  {
    BiFraction rhs(L2);
    for (int k = 0; k < spec.n; ++k) {
      const BiFraction r = BiFraction::over(Ga(-k) * Pab * Ga(k), one, -spec.tau_pow(k), zero);
      rhs += commutator(Bau * spec.tau_pow(k) + Bbv, r);
    }
    out.push_back(bifraction_zero("B_bracket_relation", commutator(Bau, Bbv) - rhs));
  }
  {
    BiFraction rhs(L2);
    for (int k = 0; k < spec.n; ++k) {
      const CycNum t = spec.tau_pow(k);
      const BiFraction r = BiFraction::over(Ga(-k) * Pab * Ga(k), one, -t, zero);
      rhs += (Bbv + Bau * t - Xa(B, Spectral::v, t) * t - Xb(B, Spectral::u, spec.tau_pow(-k))) * r;
    }
    out.push_back(bifraction_zero("B_bracket_rewritten", commutator(Bau, Bbv) - rhs));
  }
  {
    std::string w;
    for (int k = 0; k < spec.n && w.empty(); ++k) {
      const SparseOp Gk = on_slot(B.layout(), 0, matrix_power(G, k));
      const SparseOp Gmk = on_slot(B.layout(), 0, matrix_power(G, -k));
      const PoleSum d = B - (B.rescale(spec.tau_pow(k)) * spec.tau_pow(k)).left(Gk).right(Gmk);
      if (!d.is_zero()) w = "k = " + std::to_string(k) + ": " + d.first_term();
    }
    out.push_back(make_check("B_twist_covariance", w.empty(), w));
  }
  (void)Gb;
  return out;
}

std::vector<Check> bracket_checks_outer(const OuterModelSpec& spec) {
  std::vector<Check> out;
  const int L = spec.L();
  const SpaceLayout L2 = aux_layout(spec.N, spec.reps, 2);
  const PoleSum S = build_S(spec);
  const SparseOp K = spec.Kmat();
  const SparseOp Pab = permutation(L2, 0, 1);
  const SparseOp Qab = outer_twist(Pab, K, 0);
  const CycNum one(1), zero(0);
  out.push_back(make_check("Q_ab_twist_either_space", Qab == outer_twist(Pab, K, 1)));
  out.push_back(make_check("PQ_eq_eta_Q", Pab * Qab == Qab * CycNum(spec.eta) && Qab * Pab == Qab * CycNum(spec.eta)));
  const BiFraction Sa = BiFraction::from(S.embed(L2, aux_to(0, L)), Spectral::u);
  const BiFraction Sb = BiFraction::from(S.embed(L2, aux_to(1, L)), Spectral::v);
  const BiFraction rP = BiFraction::over(Pab, one, -one, zero);
  const BiFraction rQ = BiFraction::over(Qab, one, one, zero);
  out.push_back(bifraction_zero("S_bracket_relation",
                                commutator(Sa, Sb) - commutator(Sa + Sb, rP) - commutator(Sa - Sb, rQ)));
  out.push_back(polesum_zero("S_reflection_symmetry", S - outer_twist(S.rescale(CycNum(-1)), K)));
  return out;
}

std::vector<Check> trace_square_checks_inner(const InnerModelSpec& spec) {
  std::vector<Check> out;
  const int L = spec.L();
  const PoleSum B = build_B(spec);
  const PoleSum bp = trace_square(B);
  const CycNum one(1), zero(0);
  out.push_back(bifraction_zero("bprime_commute",
                                commutator(BiFraction::from(bp, Spectral::u), BiFraction::from(bp, Spectral::v))));
  {
    const SparseOp B0 = B.series_coeff(0);
    const PoleSum lifted = bp.embed(B.layout(), site_map(L, 1));
    const PoleSum d = lifted.left(B0) - lifted.right(B0);
    out.push_back(polesum_zero("B0_commutes_with_bprime", d));
  }
  {
    const SpaceLayout L2 = aux_layout(spec.N, spec.reps, 2);
    const PoleSum Ba1 = B.embed(L2, aux_to(0, L));
    const PoleSum Bb1 = B.embed(L2, aux_to(1, L));
    auto Ba = [&](Spectral var, const CycNum& s) { return BiFraction::from(Ba1, var, s); };
    auto Bb = [&](Spectral var, const CycNum& s) { return BiFraction::from(Bb1, var, s); };
    const SparseOp G = spec.G();
    auto Ga = [&](long p) { return on_slot(L2, 0, matrix_power(G, p)); };
    auto Gb = [&](long p) { return on_slot(L2, 1, matrix_power(G, p)); };
    const SparseOp Pab = permutation(L2, 0, 1);
    auto t = [&](long p) { return spec.tau_pow(p); };
    const BiFraction Bau = Ba(Spectral::u, one), Bbv = Bb(Spectral::v, one);
    const BiFraction lhs = commutator(Bau, Bbv * Bbv);
    BiFraction rhs(L2);
    for (int k = 0; k < spec.n; ++k) {
      const BiFraction Bav_k = Ba(Spectral::v, t(k));
      const BiFraction Bbu_k = Bb(Spectral::u, t(-k));
      const BiFraction brace = Bbv * Bbv - Bbv * Bbu_k + (Bau * Bav_k) * t(2 * k) - (Bav_k * Bav_k) * t(2 * k) -
                               (Bav_k * Bbu_k) * t(k) + (Bau * Bbv) * t(k);
      rhs += brace * BiFraction::over(Ga(-k) * Pab * Ga(k), one, -t(k), zero);
    }
    for (int j = 0; j < spec.n; ++j)
      for (int k = 0; k < spec.n; ++k) {
        const BiFraction brace = Ba(Spectral::v, t(j)) * t(2 * j) - Ba(Spectral::u, t(j - k)) * t(2 * j) -
                                 Bb(Spectral::v, t(k - j)) * t(k) + Bbv * t(k) + Bau * t(j + k) -
                                 Ba(Spectral::v, t(j)) * t(j + k);
        const BiFraction den = BiFraction::over(Ga(k - j) * Gb(j - k), one, -t(k), zero) *
                               BiFraction::over(SparseOp::identity(L2), one, -t(j), zero);
        rhs -= brace * den;
      }
    out.push_back(bifraction_zero("trace_B_squared_expansion", lhs - rhs));
  }
  return out;
}

std::vector<Check> trace_square_checks_outer(const OuterModelSpec& spec) {
  std::vector<Check> out;
  const PoleSum S = build_S(spec);
  const PoleSum sp = trace_square(S);
  out.push_back(bifraction_zero("sprime_commute",
                                commutator(BiFraction::from(sp, Spectral::u), BiFraction::from(sp, Spectral::v))));
  {
    const SparseOp S0 = S.series_coeff(0);
    const PoleSum lifted = sp.embed(S.layout(), site_map(spec.L(), 1));
    out.push_back(polesum_zero("S0_commutes_with_sprime", lifted.left(S0) - lifted.right(S0)));
  }
  {
    const BiFraction Sx = BiFraction::from(S, Spectral::u);
    const BiFraction Sy = BiFraction::from(S, Spectral::v);
    out.push_back(bifraction_zero("trace_S2_S_vanishes", commutator(Sx * Sx, Sy).partial_trace({0})));
  }
  return out;
}

std::vector<Check> run_inner_suite(const InnerModelSpec& spec, bool all_pairs) {
  spec.validate();
  std::vector<Check> out;
  const auto H = hamiltonians_inner(spec);
  append_timed(out, [&] { return verify_commuting(H, "hamiltonians_commute", all_pairs); });
  const auto gens = symmetry_generators_inner(spec);
  int expected = 0;
  for (int k : spec.multiplicities) expected += k * k;
  out.push_back(make_check("generator_count", static_cast<int>(gens.size()) == expected,
                           "found " + std::to_string(gens.size()) + ", expected " + std::to_string(expected),
                           "sum N_k^2 = " + std::to_string(expected)));
  out.push_back(make_check("generator_rank", rank(gens) == gens.size(),
                           "rank " + std::to_string(rank(gens))));
  append_timed(out, [&] { return closure_check(gens, "generator_closure"); });
  append_timed(out, [&] { return verify_symmetry(H, gens, "generators_commute_with_hamiltonians"); });
  {
    const std::size_t r = rank(H);
    Check c = make_check("hamiltonians_linearly_independent", r == H.size(), "rank " + std::to_string(r),
                         "exact linear independence only; functional independence is not tested");
    if (spec.n == 1) {
      c.status = Status::info;
      c.note = "n = 1: the H_k sum to a constant, rank " + std::to_string(r);
    }
    out.push_back(c);
  }
  append_timed(out, [&] { return residue_identity_inner(spec); });
  append_timed(out, [&] { return centrality_checks_inner(spec); });
  append_timed(out, [&] { return bracket_checks_inner(spec); });
  append_timed(out, [&] { return trace_square_checks_inner(spec); });
  return out;
}

std::vector<Check> run_outer_suite(const OuterModelSpec& spec, bool all_pairs) {
  spec.validate();
  std::vector<Check> out;
  const auto H = hamiltonians_outer(spec);
  append_timed(out, [&] { return verify_commuting(H, "hamiltonians_commute", all_pairs); });
  {
    std::vector<SparseOp> printed;
    for (int k = 0; k < spec.L(); ++k) printed.push_back(hamiltonian_outer_printed(spec, k));
    Check c = verify_commuting(printed, "hamiltonians_printed_sign_commute", all_pairs);
    c.status = Status::info;
    c.note = c.witness.empty() ? "printed sign pattern commutes here" : "printed +Q sign pattern fails to commute";
    out.push_back(c);
  }
  const auto gens = symmetry_generators_outer(spec);
  const std::size_t expect = spec.eta == -1 ? static_cast<std::size_t>(spec.N * (spec.N + 1) / 2)
                                            : static_cast<std::size_t>(spec.N * (spec.N - 1) / 2);
  const std::size_t r = rank(gens);
  out.push_back(make_check("generator_span_dimension", r == expect,
                           "rank " + std::to_string(r) + ", expected " + std::to_string(expect),
                           std::string(spec.eta == -1 ? "sp" : "so") + " dimension " + std::to_string(expect)));
  append_timed(out, [&] { return closure_check(gens, "generator_closure"); });
  append_timed(out, [&] { return verify_symmetry(H, gens, "generators_commute_with_hamiltonians"); });
  {
    const std::size_t hr = rank(H);
    out.push_back(make_check("hamiltonians_linearly_independent", hr == H.size(), "rank " + std::to_string(hr),
                             "exact linear independence only; functional independence is not tested"));
  }
  append_timed(out, [&] { return residue_identity_outer(spec); });
  append_timed(out, [&] { return centrality_checks_outer(spec); });
  append_timed(out, [&] { return bracket_checks_outer(spec); });
  append_timed(out, [&] { return trace_square_checks_outer(spec); });
  return out;
}

}  // namespace halfloop
