#pragma once

#include <utility>

#include "halfloop/report.hpp"
#include "halfloop/spectra.hpp"

namespace halfloop {

struct VerifyOptions {
  bool all_pairs = false;
  int truncation = -1;  // dunkl only; -1 keeps the model's value
  unsigned seed = 1;
};

/// Runs the suite for the model's kind and assembles the report.
Report run_verify(const ModelFile& mf, const VerifyOptions& opt);

struct SpectraOptions {
  double tol = 1e-8;
  unsigned seed = 1;
};

/// Gaudin kinds only.
std::pair<Report, SpectraResult> run_spectra(const ModelFile& mf, const SpectraOptions& opt);

}  // namespace halfloop
