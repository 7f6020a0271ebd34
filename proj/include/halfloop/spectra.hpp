#pragma once

// Floating cross-check: diagonalize a random rational combination of commuting
// operators and measure how far each one is from diagonal in that eigenbasis.

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "halfloop/tensor_ops.hpp"

namespace halfloop {

inline constexpr std::size_t kSpectraDimensionCap = 4096;

Eigen::MatrixXcd to_complex(const SparseOp& op);

struct SpectraResult {
  bool ok = false;
  double residual = 0;  // max |off-diagonal| over all operators in the final basis
  int attempts = 0;
  std::vector<double> coefficients;                     // combination used last
  std::vector<std::vector<std::complex<double>>> spectra;  // per operator, sorted by (re, im)
};

/// Retries with fresh coefficients up to `retries` times when the residual misses tol.
SpectraResult simultaneous_spectra(const std::vector<SparseOp>& ops, double tol, unsigned seed, int retries = 3);

}  // namespace halfloop
