#pragma once

// Line-oriented model files:
//
//   format_version = 1
//   kind = inner-gaudin          # or outer-gaudin, dunkl
//   n = 2
//   N = 2
//   multiplicities = 1, 1
//   z = 1, 2, 3/2
//   rep.site.2 = spin1
//
// Scalars are p/q rationals or zeta(m,k) expressions combined with + - * / and
// parentheses. Errors carry "origin:line:col".

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "halfloop/dunkl.hpp"
#include "halfloop/gaudin.hpp"

namespace halfloop {

struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr int kModelFormatVersion = 1;

enum class ModelKind { inner_gaudin, outer_gaudin, dunkl };
const char* kind_name(ModelKind k);

struct ModelFile {
  std::string origin;
  int format_version = kModelFormatVersion;
  ModelKind kind = ModelKind::inner_gaudin;
  std::variant<InnerModelSpec, OuterModelSpec, DunklSpec> spec;
  /// Golden-file directory for dunkl models, resolved against the file's directory.
  std::optional<std::string> fixtures_dir;
  /// key/value pairs in file order, for the report echo.
  std::vector<std::pair<std::string, std::string>> entries;
};

ModelFile parse_model(const std::string& path);
/// base_dir resolves relative paths inside the file.
ModelFile parse_model_text(const std::string& text, const std::string& origin, const std::string& base_dir = ".");

/// Scalar literal: integers, p/q, i, zeta(m,k), + - * / and parentheses.
CycNum parse_scalar(const std::string& text);

/// gl_N representation by name (fundamental, dual, spin1) or inline
/// "inline d : M_11 | M_12 | ... | M_NN", each matrix as rows "a, b; c, d".
RepMatrices parse_rep(const std::string& text, int N);

}  // namespace halfloop
