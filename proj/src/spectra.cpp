#include "halfloop/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace halfloop {

Eigen::MatrixXcd to_complex(const SparseOp& op) {
  const auto n = static_cast<Eigen::Index>(op.dim());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t r = 0; r < op.dim(); ++r)
    for (const auto& [c, v] : op.row(r)) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v.to_complex();
  return m;
}

SpectraResult simultaneous_spectra(const std::vector<SparseOp>& ops, double tol, unsigned seed, int retries) {
  SpectraResult res;
  if (ops.empty()) {
    res.ok = true;
    return res;
  }
  if (ops.front().dim() > kSpectraDimensionCap)
    throw std::invalid_argument("spectra: dimension " + std::to_string(ops.front().dim()) + " exceeds the cap " +
                                std::to_string(kSpectraDimensionCap));
  std::vector<Eigen::MatrixXcd> mats;
  for (const auto& op : ops) mats.push_back(to_complex(op));
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> num(-9, 9), den(1, 9);
  const auto n = mats.front().rows();
  for (int attempt = 0; attempt <= retries; ++attempt) {
    res.attempts = attempt + 1;
    res.coefficients.clear();
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n, n);
    for (const auto& H : mats) {
      int a = num(rng);
      if (a == 0) a = 1;
      const double c = static_cast<double>(a) / den(rng);
      res.coefficients.push_back(c);
      M += c * H;
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(M);
    if (es.info() != Eigen::Success) continue;
    const Eigen::MatrixXcd V = es.eigenvectors();
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(V);
    res.residual = 0;
    res.spectra.clear();
    for (const auto& H : mats) {
      const Eigen::MatrixXcd D = lu.solve(H * V);
      std::vector<std::complex<double>> ev;
      for (Eigen::Index r = 0; r < n; ++r) {
        ev.push_back(D(r, r));
        for (Eigen::Index c = 0; c < n; ++c)
          if (r != c) res.residual = std::max(res.residual, std::abs(D(r, c)));
      }
      std::sort(ev.begin(), ev.end(), [](const auto& x, const auto& y) {
        const double xr = std::round(x.real() * 1e9), yr = std::round(y.real() * 1e9);
        if (xr != yr) return xr < yr;
        return x.imag() < y.imag();
      });
      res.spectra.push_back(std::move(ev));
    }
    if (res.residual < tol) {
      res.ok = true;
      return res;
    }
  }
  return res;
}

}  // namespace halfloop
