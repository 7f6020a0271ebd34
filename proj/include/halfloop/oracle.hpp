#pragma once

// Dense brute-force reference engine. Deliberately naive: every operator is a
// full row-major matrix, tensor structure is built with Kronecker products and
// contractions loop over explicit digit tuples.

#include <vector>

#include "halfloop/tensor_ops.hpp"

namespace halfloop::oracle {

struct Dense {
  std::vector<int> dims;
  std::vector<CycNum> data;  // row-major, size total^2

  std::size_t total() const;
  CycNum& at(std::size_t r, std::size_t c) { return data[r * total() + c]; }
  const CycNum& at(std::size_t r, std::size_t c) const { return data[r * total() + c]; }
};

Dense zeros(const std::vector<int>& dims);
Dense identity(const std::vector<int>& dims);
Dense local(const std::vector<std::vector<CycNum>>& m);
Dense kron(const Dense& a, const Dense& b);
/// Kronecker product of one local matrix per slot.
Dense kron_all(const std::vector<Dense>& factors);
Dense add(const Dense& a, const Dense& b);
Dense scale(const Dense& a, const CycNum& c);
Dense mul(const Dense& a, const Dense& b);
Dense commutator(const Dense& a, const Dense& b);
Dense partial_trace(const Dense& a, const std::vector<int>& slots);
Dense transpose_slot(const Dense& a, int slot);
CycNum trace(const Dense& a);
Dense inverse(const Dense& a);

/// Kronecker product placing each given local matrix on its slot, identities elsewhere.
Dense place(const std::vector<int>& dims, const std::vector<std::pair<int, Dense>>& parts);
/// Dense copy of a single-slot sparse matrix.
Dense to_local(const SparseOp& op);

/// E_ij on one slot via Kronecker products of identities.
Dense elementary(const std::vector<int>& dims, int slot, int i, int j);
/// sum_ij E_ij (x) E_ji on slots x, y.
Dense permutation(const std::vector<int>& dims, int x, int y);
/// sum_ij E_ij (aux) (x) rho(e_ji) (site).
Dense coupling_P(const std::vector<int>& dims, int aux, int site, const RepMatrices& rep);
Dense coupling_Q(const std::vector<int>& dims, int aux, int site, const RepMatrices& rep, const Dense& K);

Dense from_sparse(const SparseOp& op);
bool equal(const SparseOp& sparse, const Dense& dense);

}  // namespace halfloop::oracle
