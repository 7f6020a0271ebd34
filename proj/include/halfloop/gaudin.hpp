#pragma once

// Twisted Gaudin magnets: the generating series T(u), B(u), S(u) realized on
// sites, their Hamiltonians, symmetry generators and exact verification suites.
//
// Operators with an auxiliary space use the layout [aux, site 1, ..., site L];
// two-space identities use [aux a, aux b, site 1, ..., site L].

#include <optional>
#include <vector>

#include "halfloop/check.hpp"
#include "halfloop/polesum.hpp"
#include "halfloop/tensor_ops.hpp"

namespace halfloop {

struct SpecError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InnerModelSpec {
  int n = 1;
  int N = 2;
  std::vector<int> multiplicities;  // N_0 .. N_{n-1}
  std::vector<BigRational> z;
  std::vector<RepMatrices> reps;  // one per site

  int L() const { return static_cast<int>(z.size()); }
  long field_order() const { return lcm_long(n, 4); }
  CycNum tau() const;
  /// tau^p in the model field.
  CycNum tau_pow(long p) const;
  SparseOp G() const;
  void validate() const;
};

struct OuterModelSpec {
  int N = 2;
  int eta = -1;
  std::optional<SparseOp> K;  // default: the canonical form for eta and the signature
  int p = 0, q = 0;           // signature for eta = +1
  std::vector<BigRational> z;
  std::vector<RepMatrices> reps;

  int L() const { return static_cast<int>(z.size()); }
  long field_order() const { return 4; }
  SparseOp Kmat() const;
  void validate() const;
};

/// diag(1 x p, -1 x q) for eta = +1; identity (x) [[0,1],[-1,0]] for eta = -1.
SparseOp canonical_K(int N, int eta, int p, int q);

SpaceLayout aux_layout(int N, const std::vector<RepMatrices>& reps, int num_aux = 1);

PoleSum build_T(int N, const std::vector<BigRational>& z, const std::vector<RepMatrices>& reps);
PoleSum build_B(const InnerModelSpec& spec);
PoleSum build_S(const OuterModelSpec& spec);
/// X^T = K_a X^{t_a} K_a^{-1} on the auxiliary slot 0, coefficientwise.
PoleSum outer_twist(const PoleSum& x, const SparseOp& K);
SparseOp outer_twist(const SparseOp& x, const SparseOp& K, int aux_slot = 0);

/// tr_a X(u)^2 on the quantum space.
PoleSum trace_square(const PoleSum& x);

std::vector<SparseOp> hamiltonians_inner(const InnerModelSpec& spec);
SparseOp hamiltonian_inner(const InnerModelSpec& spec, int k);
/// Fundamental-representation closed form of H_k^(n), for cross-checks.
SparseOp hamiltonian_inner_fundamental(const InnerModelSpec& spec, int k);

std::vector<SparseOp> hamiltonians_outer(const OuterModelSpec& spec);
/// Residue-consistent form: sum (tr PP/(z_k-z_j) - tr PQ/(z_k+z_j)) - tr P_k Q_k/(2 z_k).
SparseOp hamiltonian_outer(const OuterModelSpec& spec, int k);
/// The sign pattern as printed (all plus), kept for the informational finding.
SparseOp hamiltonian_outer_printed(const OuterModelSpec& spec, int k);

/// Operators sitting in the surviving auxiliary entries of B^(0) / S^(0).
std::vector<SparseOp> symmetry_generators_inner(const InnerModelSpec& spec);
std::vector<SparseOp> symmetry_generators_outer(const OuterModelSpec& spec);

// ---- verification; every function returns its records in a fixed order

/// Above kPairSweepLimit operators, only pairs (1,k) and (k,k+1) are tested unless all_pairs.
inline constexpr std::size_t kPairSweepLimit = 6;
Check verify_commuting(const std::vector<SparseOp>& ops, const std::string& name = "commuting",
                       bool all_pairs = true);
Check verify_symmetry(const std::vector<SparseOp>& hams, const std::vector<SparseOp>& gens,
                      const std::string& name = "symmetry");

std::vector<Check> residue_identity_inner(const InnerModelSpec& spec);
std::vector<Check> residue_identity_outer(const OuterModelSpec& spec);
std::vector<Check> centrality_checks_inner(const InnerModelSpec& spec);
std::vector<Check> centrality_checks_outer(const OuterModelSpec& spec);
std::vector<Check> bracket_checks_inner(const InnerModelSpec& spec);
std::vector<Check> bracket_checks_outer(const OuterModelSpec& spec);
std::vector<Check> trace_square_checks_inner(const InnerModelSpec& spec);
std::vector<Check> trace_square_checks_outer(const OuterModelSpec& spec);

/// Every check for one model, in report order.
std::vector<Check> run_inner_suite(const InnerModelSpec& spec, bool all_pairs = true);
std::vector<Check> run_outer_suite(const OuterModelSpec& spec, bool all_pairs = true);

}  // namespace halfloop
