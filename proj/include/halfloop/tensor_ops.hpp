#pragma once

// Sparse exact operators on tensor products of small spaces.
//
// Index encoding is mixed radix over the slots of a SpaceLayout, slot 0 most
// significant. Auxiliary slots come first, then the quantum sites in order, so
// "site 1 most significant" holds within the quantum part.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "halfloop/cyclotomic.hpp"

namespace halfloop {

struct LayoutMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

class SpaceLayout {
 public:
  SpaceLayout() = default;
  SpaceLayout(std::vector<int> dims, int num_aux);
  static SpaceLayout single(int dim) { return SpaceLayout({dim}, 0); }
  static SpaceLayout with_aux(int num_aux, int aux_dim, const std::vector<int>& site_dims);

  const std::vector<int>& dims() const { return dims_; }
  int dim(int slot) const { return dims_[static_cast<std::size_t>(slot)]; }
  int slots() const { return static_cast<int>(dims_.size()); }
  int num_aux() const { return num_aux_; }
  int num_sites() const { return slots() - num_aux_; }
  /// Slot of the 0-based site l.
  int site_slot(int l) const { return num_aux_ + l; }
  std::size_t total() const { return total_; }
  std::size_t stride(int slot) const { return strides_[static_cast<std::size_t>(slot)]; }
  int digit(std::size_t index, int slot) const {
    return static_cast<int>((index / stride(slot)) % static_cast<std::size_t>(dim(slot)));
  }
  std::vector<int> digits(std::size_t index) const;
  /// Layout with the listed slots removed (aux count adjusted).
  SpaceLayout without(const std::vector<int>& slots) const;
  SpaceLayout quantum() const;
  std::string str() const;

  friend bool operator==(const SpaceLayout& a, const SpaceLayout& b) {
    return a.dims_ == b.dims_ && a.num_aux_ == b.num_aux_;
  }

 private:
  std::vector<int> dims_;
  int num_aux_ = 0;
  std::vector<std::size_t> strides_;
  std::size_t total_ = 1;
};

class SparseOp {
 public:
  using Entry = std::pair<std::uint32_t, CycNum>;
  using Row = std::vector<Entry>;  // sorted by column, no zeros

  SparseOp() = default;
  explicit SparseOp(SpaceLayout layout);
  static SparseOp identity(const SpaceLayout& layout);
  static SparseOp scalar(const SpaceLayout& layout, const CycNum& c);
  /// Single-slot operator from a dense row-major matrix.
  static SparseOp from_dense(const std::vector<std::vector<CycNum>>& m);

  const SpaceLayout& layout() const { return layout_; }
  std::size_t dim() const { return layout_.total(); }
  const Row& row(std::size_t r) const { return rows_[r]; }
  CycNum at(std::size_t r, std::size_t c) const;
  void add_to(std::size_t r, std::size_t c, const CycNum& v);
  void set_row(std::size_t r, Row row);
  std::size_t nnz() const;
  bool is_zero() const;
  long field_order() const;

  SparseOp operator-() const;
  SparseOp& operator+=(const SparseOp& o);
  SparseOp& operator-=(const SparseOp& o);
  SparseOp& operator*=(const CycNum& c);
  friend SparseOp operator+(SparseOp a, const SparseOp& b) { return a += b; }
  friend SparseOp operator-(SparseOp a, const SparseOp& b) { return a -= b; }
  friend SparseOp operator*(SparseOp a, const CycNum& c) { return a *= c; }
  friend SparseOp operator*(const CycNum& c, SparseOp a) { return a *= c; }
  /// Row-parallel product (OpenMP); equal to mul_serial entry for entry.
  friend SparseOp operator*(const SparseOp& a, const SparseOp& b);
  friend bool operator==(const SparseOp& a, const SparseOp& b);

  /// Text of the first nonzero entry as "[r1,r2,...|c1,c2,...] = v" with 1-based digits.
  std::string first_nonzero() const;
  std::string str() const;

 private:
  SpaceLayout layout_;
  std::vector<Row> rows_;
};

SparseOp mul_serial(const SparseOp& a, const SparseOp& b);
SparseOp commutator(const SparseOp& a, const SparseOp& b);
CycNum trace(const SparseOp& a);
/// Place op (whose slot k maps to target slot slot_map[k]) into target, identity elsewhere.
SparseOp embed(const SparseOp& op, const SpaceLayout& target, const std::vector<int>& slot_map);
SparseOp on_slot(const SpaceLayout& layout, int slot, const SparseOp& local);
SparseOp elementary(const SpaceLayout& layout, int slot, int i, int j);
SparseOp permutation(const SpaceLayout& layout, int x, int y);
/// Trace over the listed slots.
SparseOp partial_trace(const SparseOp& op, const std::vector<int>& slots);
SparseOp transpose_slot(const SparseOp& op, int slot);
SparseOp transpose(const SparseOp& op);
/// diag(1..1, tau..tau, ...) with tau = zeta_m^(m/n).
SparseOp grading_matrix(int n, const std::vector<int>& multiplicities, long field_order);
/// Power of a single-slot operator; negative exponents need an invertible matrix.
SparseOp matrix_power(const SparseOp& local, long e);
std::optional<SparseOp> inverse(const SparseOp& op);

/// gl_N generators rho(e_ij) on one site, 0-based indices.
class RepMatrices {
 public:
  /// Validates [e_ij, e_kl] = delta_jk e_il - delta_il e_kj; throws otherwise.
  RepMatrices(int N, std::vector<SparseOp> rho, std::string name);
  static RepMatrices fundamental(int N);
  /// Symmetric square of the fundamental representation of gl_2 (spin 1).
  static RepMatrices sym2_gl2();
  /// Dual of the fundamental: rho(e_ij) = -E_ji.
  static RepMatrices dual(int N);

  int N() const { return N_; }
  int dim() const { return dim_; }
  const SparseOp& rho(int i, int j) const {
    return rho_[static_cast<std::size_t>(i * N_ + j)];
  }
  const std::string& name() const { return name_; }

 private:
  int N_;
  int dim_;
  std::vector<SparseOp> rho_;
  std::string name_;
};

/// sum_ij E_ij (aux) (x) rho(e_ji) (site).
SparseOp coupling_P(const SpaceLayout& layout, int aux_slot, int site_slot, const RepMatrices& rep);
/// K_a P^{t_a} K_a^{-1}, K a single-slot invertible matrix.
SparseOp coupling_Q(const SpaceLayout& layout, int aux_slot, int site_slot, const RepMatrices& rep,
                    const SparseOp& K);

/// Exact rank of operators viewed as vectors.
std::size_t rank(const std::vector<SparseOp>& ops);
bool in_span(const std::vector<SparseOp>& basis, const SparseOp& x);

}  // namespace halfloop
