#pragma once

#include <cstddef>
#include <vector>

#include "halfloop/check.hpp"
#include "halfloop/gaudin.hpp"
#include "halfloop/oracle.hpp"

namespace halfloop {

/// H_k assembled entirely with the dense engine, same formulas as the sparse path.
oracle::Dense dense_hamiltonian_inner(const InnerModelSpec& spec, int k);
oracle::Dense dense_hamiltonian_outer(const OuterModelSpec& spec, int k);

/// Sparse against dense on random instances of every exact operator operation and on the
/// assembled Gaudin Hamiltonians, for layouts of total dimension at most max_dim.
std::vector<Check> oracle_equivalence_sweep(unsigned seed, std::size_t max_dim = 81);

}  // namespace halfloop
