#include "halfloop/tensor_ops.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

namespace halfloop {

// ---------------------------------------------------------------- layout

SpaceLayout::SpaceLayout(std::vector<int> dims, int num_aux)
    : dims_(std::move(dims)), num_aux_(num_aux) {
  if (num_aux_ < 0 || num_aux_ > static_cast<int>(dims_.size()))
    throw std::invalid_argument("SpaceLayout: bad aux count");
  strides_.assign(dims_.size(), 1);
  total_ = 1;
  for (int s = static_cast<int>(dims_.size()) - 1; s >= 0; --s) {
    if (dims_[static_cast<std::size_t>(s)] < 1) throw std::invalid_argument("SpaceLayout: dim < 1");
    strides_[static_cast<std::size_t>(s)] = total_;
    total_ *= static_cast<std::size_t>(dims_[static_cast<std::size_t>(s)]);
  }
  if (total_ > (std::size_t{1} << 31)) throw std::invalid_argument("SpaceLayout: too large");
}

SpaceLayout SpaceLayout::with_aux(int num_aux, int aux_dim, const std::vector<int>& site_dims) {
  std::vector<int> dims(static_cast<std::size_t>(num_aux), aux_dim);
  dims.insert(dims.end(), site_dims.begin(), site_dims.end());
  return SpaceLayout(std::move(dims), num_aux);
}

std::vector<int> SpaceLayout::digits(std::size_t index) const {
  std::vector<int> d(dims_.size());
  for (int s = 0; s < slots(); ++s) d[static_cast<std::size_t>(s)] = digit(index, s);
  return d;
}

SpaceLayout SpaceLayout::without(const std::vector<int>& slots) const {
  std::vector<int> dims;
  int aux = 0;
  for (int s = 0; s < this->slots(); ++s) {
    if (std::find(slots.begin(), slots.end(), s) != slots.end()) continue;
    dims.push_back(dim(s));
    if (s < num_aux_) ++aux;
  }
  return SpaceLayout(std::move(dims), aux);
}

SpaceLayout SpaceLayout::quantum() const {
  std::vector<int> aux(static_cast<std::size_t>(num_aux_));
  std::iota(aux.begin(), aux.end(), 0);
  return without(aux);
}

std::string SpaceLayout::str() const {
  std::ostringstream os;
  os << "[";
  for (int s = 0; s < slots(); ++s) {
    if (s) os << ",";
    os << (s < num_aux_ ? "a" : "") << dim(s);
  }
  os << "]";
  return os.str();
}

// ---------------------------------------------------------------- SparseOp

SparseOp::SparseOp(SpaceLayout layout) : layout_(std::move(layout)), rows_(layout_.total()) {}

SparseOp SparseOp::identity(const SpaceLayout& layout) { return scalar(layout, CycNum(1)); }

SparseOp SparseOp::scalar(const SpaceLayout& layout, const CycNum& c) {
  SparseOp op(layout);
  if (c.is_zero()) return op;
  for (std::size_t r = 0; r < op.dim(); ++r) op.rows_[r].emplace_back(static_cast<std::uint32_t>(r), c);
  return op;
}

SparseOp SparseOp::from_dense(const std::vector<std::vector<CycNum>>& m) {
  SparseOp op(SpaceLayout::single(static_cast<int>(m.size())));
  for (std::size_t r = 0; r < m.size(); ++r) {
    if (m[r].size() != m.size()) throw std::invalid_argument("from_dense: matrix not square");
    for (std::size_t c = 0; c < m.size(); ++c) {
      if (!m[r][c].is_zero()) op.rows_[r].emplace_back(static_cast<std::uint32_t>(c), m[r][c]);
    }
  }
  return op;
}

CycNum SparseOp::at(std::size_t r, std::size_t c) const {
  const Row& row = rows_[r];
  auto it = std::lower_bound(row.begin(), row.end(), c,
                             [](const Entry& e, std::size_t col) { return e.first < col; });
  return (it != row.end() && it->first == c) ? it->second : CycNum(0);
}

void SparseOp::add_to(std::size_t r, std::size_t c, const CycNum& v) {
  if (v.is_zero()) return;
  Row& row = rows_[r];
  auto it = std::lower_bound(row.begin(), row.end(), c,
                             [](const Entry& e, std::size_t col) { return e.first < col; });
  if (it != row.end() && it->first == c) {
    it->second += v;
    if (it->second.is_zero()) row.erase(it);
  } else {
    row.insert(it, Entry(static_cast<std::uint32_t>(c), v));
  }
}

void SparseOp::set_row(std::size_t r, Row row) { rows_[r] = std::move(row); }

std::size_t SparseOp::nnz() const {
  std::size_t n = 0;
  for (const auto& r : rows_) n += r.size();
  return n;
}

bool SparseOp::is_zero() const {
  return std::all_of(rows_.begin(), rows_.end(), [](const Row& r) { return r.empty(); });
}

long SparseOp::field_order() const {
  long m = 1;
  for (const auto& row : rows_)
    for (const auto& e : row) m = lcm_long(m, e.second.order());
  return m;
}

SparseOp SparseOp::operator-() const {
  SparseOp r = *this;
  for (auto& row : r.rows_)
    for (auto& e : row) e.second = -e.second;
  return r;
}

namespace {

void check_same(const SpaceLayout& a, const SpaceLayout& b) {
  if (!(a == b)) throw LayoutMismatch("layout mismatch: " + a.str() + " vs " + b.str());
}

SparseOp::Row merge_rows(const SparseOp::Row& a, const SparseOp::Row& b, bool subtract) {
  SparseOp::Row out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.emplace_back(b[j].first, subtract ? -b[j].second : b[j].second);
      ++j;
    } else {
      CycNum v = subtract ? a[i].second - b[j].second : a[i].second + b[j].second;
      if (!v.is_zero()) out.emplace_back(a[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  return out;
}

SparseOp::Row multiply_row(const SparseOp::Row& arow, const SparseOp& b) {
  std::map<std::uint32_t, CycNum> acc;
  for (const auto& [k, av] : arow) {
    for (const auto& [c, bv] : b.row(k)) {
      auto [it, inserted] = acc.try_emplace(c, av * bv);
      if (!inserted) it->second += av * bv;
    }
  }
  SparseOp::Row out;
  out.reserve(acc.size());
  for (auto& [c, v] : acc) {
    if (!v.is_zero()) out.emplace_back(c, std::move(v));
  }
  return out;
}

}  // namespace

SparseOp& SparseOp::operator+=(const SparseOp& o) {
  check_same(layout_, o.layout_);
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    if (!o.rows_[r].empty()) rows_[r] = merge_rows(rows_[r], o.rows_[r], false);
  }
  return *this;
}

SparseOp& SparseOp::operator-=(const SparseOp& o) {
  check_same(layout_, o.layout_);
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    if (!o.rows_[r].empty()) rows_[r] = merge_rows(rows_[r], o.rows_[r], true);
  }
  return *this;
}

SparseOp& SparseOp::operator*=(const CycNum& c) {
  if (c.is_zero()) {
    for (auto& row : rows_) row.clear();
    return *this;
  }
  if (c.is_one()) return *this;
  for (auto& row : rows_)
    for (auto& e : row) e.second *= c;
  return *this;
}

SparseOp operator*(const SparseOp& a, const SparseOp& b) {
  check_same(a.layout_, b.layout_);
  SparseOp out(a.layout_);
  const auto n = static_cast<std::int64_t>(a.dim());
#pragma omp parallel for schedule(dynamic, 8) if (n >= 64)
  for (std::int64_t r = 0; r < n; ++r) {
    out.rows_[static_cast<std::size_t>(r)] = multiply_row(a.rows_[static_cast<std::size_t>(r)], b);
  }
  return out;
}

SparseOp mul_serial(const SparseOp& a, const SparseOp& b) {
  check_same(a.layout(), b.layout());
  SparseOp out(a.layout());
  for (std::size_t r = 0; r < a.dim(); ++r) out.set_row(r, multiply_row(a.row(r), b));
  return out;
}

bool operator==(const SparseOp& a, const SparseOp& b) {
  return a.layout_ == b.layout_ && a.rows_ == b.rows_;
}

std::string SparseOp::first_nonzero() const {
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    if (rows_[r].empty()) continue;
    const auto& [c, v] = rows_[r].front();
    std::ostringstream os;
    os << "[";
    const auto rd = layout_.digits(r);
    const auto cd = layout_.digits(c);
    for (std::size_t s = 0; s < rd.size(); ++s) os << (s ? "," : "") << rd[s] + 1;
    os << "|";
    for (std::size_t s = 0; s < cd.size(); ++s) os << (s ? "," : "") << cd[s] + 1;
    os << "] = " << v.str();
    return os.str();
  }
  return "";
}

std::string SparseOp::str() const {
  std::ostringstream os;
  os << "op" << layout_.str() << "{";
  bool first = true;
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    for (const auto& [c, v] : rows_[r]) {
      os << (first ? "" : "; ") << r << "," << c << ": " << v.str();
      first = false;
    }
  }
  os << "}";
  return os.str();
}

// ---------------------------------------------------------------- free functions

SparseOp commutator(const SparseOp& a, const SparseOp& b) { return a * b - b * a; }

CycNum trace(const SparseOp& a) {
  CycNum t;
  for (std::size_t r = 0; r < a.dim(); ++r) t += a.at(r, r);
  return t;
}

SparseOp embed(const SparseOp& op, const SpaceLayout& target, const std::vector<int>& slot_map) {
  const SpaceLayout& src = op.layout();
  if (static_cast<int>(slot_map.size()) != src.slots())
    throw LayoutMismatch("embed: slot map size");
  std::vector<bool> used(static_cast<std::size_t>(target.slots()), false);
  for (int k = 0; k < src.slots(); ++k) {
    const int t = slot_map[static_cast<std::size_t>(k)];
    if (t < 0 || t >= target.slots() || used[static_cast<std::size_t>(t)] || target.dim(t) != src.dim(k))
      throw LayoutMismatch("embed: bad slot map");
    used[static_cast<std::size_t>(t)] = true;
  }
  // Split each target index into the part on mapped slots (source index) and the rest.
  auto source_index = [&](std::size_t idx) {
    std::size_t s = 0;
    for (int k = 0; k < src.slots(); ++k)
      s += static_cast<std::size_t>(target.digit(idx, slot_map[static_cast<std::size_t>(k)])) * src.stride(k);
    return s;
  };
  auto replace = [&](std::size_t idx, std::size_t sidx) {
    for (int k = 0; k < src.slots(); ++k) {
      const int t = slot_map[static_cast<std::size_t>(k)];
      idx -= static_cast<std::size_t>(target.digit(idx, t)) * target.stride(t);
      idx += static_cast<std::size_t>(src.digit(sidx, k)) * target.stride(t);
    }
    return idx;
  };
  SparseOp out(target);
  for (std::size_t r = 0; r < target.total(); ++r) {
    const auto& srow = op.row(source_index(r));
    SparseOp::Row row;
    row.reserve(srow.size());
    for (const auto& [c, v] : srow) row.emplace_back(static_cast<std::uint32_t>(replace(r, c)), v);
    std::sort(row.begin(), row.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    out.set_row(r, std::move(row));
  }
  return out;
}

SparseOp on_slot(const SpaceLayout& layout, int slot, const SparseOp& local) {
  return embed(local, layout, {slot});
}

SparseOp elementary(const SpaceLayout& layout, int slot, int i, int j) {
  const int d = layout.dim(slot);
  if (i < 0 || j < 0 || i >= d || j >= d) throw std::out_of_range("elementary: index out of range");
  SparseOp local(SpaceLayout::single(d));
  local.add_to(static_cast<std::size_t>(i), static_cast<std::size_t>(j), CycNum(1));
  return on_slot(layout, slot, local);
}

SparseOp permutation(const SpaceLayout& layout, int x, int y) {
  if (layout.dim(x) != layout.dim(y)) throw LayoutMismatch("permutation: dimension mismatch");
  SparseOp out(layout);
  for (std::size_t r = 0; r < layout.total(); ++r) {
    const int dx = layout.digit(r, x);
    const int dy = layout.digit(r, y);
    std::size_t c = r;
    c = c - static_cast<std::size_t>(dx) * layout.stride(x) + static_cast<std::size_t>(dy) * layout.stride(x);
    c = c - static_cast<std::size_t>(dy) * layout.stride(y) + static_cast<std::size_t>(dx) * layout.stride(y);
    out.add_to(r, c, CycNum(1));
  }
  return out;
}

SparseOp partial_trace(const SparseOp& op, const std::vector<int>& slots) {
  const SpaceLayout& L = op.layout();
  for (int s : slots) {
    if (s < 0 || s >= L.slots()) throw LayoutMismatch("partial_trace: slot out of range");
  }
  const SpaceLayout R = L.without(slots);
  std::vector<int> kept;
  for (int s = 0; s < L.slots(); ++s) {
    if (std::find(slots.begin(), slots.end(), s) == slots.end()) kept.push_back(s);
  }
  auto reduced = [&](std::size_t idx) {
    std::size_t out = 0;
    for (std::size_t k = 0; k < kept.size(); ++k)
      out += static_cast<std::size_t>(L.digit(idx, kept[k])) * R.stride(static_cast<int>(k));
    return out;
  };
  auto traced_part = [&](std::size_t idx) {
    std::size_t out = 0;
    for (int s : slots) out += static_cast<std::size_t>(L.digit(idx, s)) * L.stride(s);
    return out;
  };
  SparseOp out(R);
  for (std::size_t r = 0; r < L.total(); ++r) {
    const std::size_t tr = traced_part(r);
    const std::size_t rr = reduced(r);
    for (const auto& [c, v] : op.row(r)) {
      if (traced_part(c) == tr) out.add_to(rr, reduced(c), v);
    }
  }
  return out;
}

SparseOp transpose_slot(const SparseOp& op, int slot) {
  const SpaceLayout& L = op.layout();
  SparseOp out(L);
  const std::size_t st = L.stride(slot);
  for (std::size_t r = 0; r < L.total(); ++r) {
    const int dr = L.digit(r, slot);
    for (const auto& [c, v] : op.row(r)) {
      const int dc = L.digit(c, slot);
      const std::size_t nr = r - static_cast<std::size_t>(dr) * st + static_cast<std::size_t>(dc) * st;
      const std::size_t nc = c - static_cast<std::size_t>(dc) * st + static_cast<std::size_t>(dr) * st;
      out.add_to(nr, nc, v);
    }
  }
  return out;
}

SparseOp transpose(const SparseOp& op) {
  SparseOp out(op.layout());
  for (std::size_t r = 0; r < op.dim(); ++r)
    for (const auto& [c, v] : op.row(r)) out.add_to(c, r, v);
  return out;
}

SparseOp grading_matrix(int n, const std::vector<int>& multiplicities, long field_order) {
  if (n < 1 || static_cast<int>(multiplicities.size()) != n)
    throw std::invalid_argument("grading_matrix: need n multiplicities");
  if (field_order % n != 0) throw std::invalid_argument("grading_matrix: n must divide field order");
  int N = 0;
  for (int k : multiplicities) {
    if (k < 0) throw std::invalid_argument("grading_matrix: negative multiplicity");
    N += k;
  }
  if (N < 1) throw std::invalid_argument("grading_matrix: multiplicity sum mismatch");
  SparseOp G(SpaceLayout::single(N));
  std::size_t row = 0;
  for (int k = 0; k < n; ++k) {
    const CycNum t = CycNum::root(field_order, (field_order / n) * k);
    for (int c = 0; c < multiplicities[static_cast<std::size_t>(k)]; ++c, ++row) G.add_to(row, row, t);
  }
  return G;
}

SparseOp matrix_power(const SparseOp& local, long e) {
  SparseOp base = local;
  if (e < 0) {
    auto inv = inverse(local);
    if (!inv) throw DivisionByZero("matrix_power: singular matrix");
    base = *inv;
    e = -e;
  }
  SparseOp result = SparseOp::identity(local.layout());
  while (e > 0) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return result;
}

std::optional<SparseOp> inverse(const SparseOp& op) {
  const std::size_t d = op.dim();
  std::vector<std::vector<CycNum>> a(d, std::vector<CycNum>(2 * d));
  for (std::size_t r = 0; r < d; ++r) {
    for (const auto& [c, v] : op.row(r)) a[r][c] = v;
    a[r][d + r] = CycNum(1);
  }
  for (std::size_t col = 0; col < d; ++col) {
    std::size_t piv = col;
    while (piv < d && a[piv][col].is_zero()) ++piv;
    if (piv == d) return std::nullopt;
    std::swap(a[piv], a[col]);
    const CycNum inv = a[col][col].inverse();
    for (auto& x : a[col]) x *= inv;
    for (std::size_t r = 0; r < d; ++r) {
      if (r == col || a[r][col].is_zero()) continue;
      const CycNum f = a[r][col];
      for (std::size_t c = 0; c < 2 * d; ++c) {
        if (!a[col][c].is_zero()) a[r][c] -= f * a[col][c];
      }
    }
  }
  SparseOp out(op.layout());
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) out.add_to(r, c, a[r][d + c]);
  return out;
}

// ---------------------------------------------------------------- representations

RepMatrices::RepMatrices(int N, std::vector<SparseOp> rho, std::string name)
    : N_(N), rho_(std::move(rho)), name_(std::move(name)) {
  if (N_ < 1 || rho_.size() != static_cast<std::size_t>(N_ * N_))
    throw std::invalid_argument("RepMatrices: need N^2 matrices");
  dim_ = static_cast<int>(rho_.front().dim());
  for (const auto& m : rho_) {
    if (!(m.layout() == SpaceLayout::single(dim_)))
      throw std::invalid_argument("RepMatrices: matrices must be square of one size");
  }
  for (int i = 0; i < N_; ++i)
    for (int j = 0; j < N_; ++j)
      for (int k = 0; k < N_; ++k)
        for (int l = 0; l < N_; ++l) {
          SparseOp expect(SpaceLayout::single(dim_));
          if (j == k) expect += this->rho(i, l);
          if (i == l) expect -= this->rho(k, j);
          if (!(commutator(this->rho(i, j), this->rho(k, l)) == expect)) {
            std::ostringstream os;
            os << "representation '" << name_ << "' violates the gl_N relation at (i,j,k,l) = ("
               << i + 1 << "," << j + 1 << "," << k + 1 << "," << l + 1 << ")";
            throw std::invalid_argument(os.str());
          }
        }
}

RepMatrices RepMatrices::fundamental(int N) {
  std::vector<SparseOp> rho;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) rho.push_back(elementary(SpaceLayout::single(N), 0, i, j));
  return RepMatrices(N, std::move(rho), "fundamental");
}

RepMatrices RepMatrices::dual(int N) {
  std::vector<SparseOp> rho;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) rho.push_back(-elementary(SpaceLayout::single(N), 0, j, i));
  return RepMatrices(N, std::move(rho), "dual");
}

RepMatrices RepMatrices::sym2_gl2() {
  // Basis x^2, xy, y^2 with e_ij = x_i d/dx_j.
  const SpaceLayout one = SpaceLayout::single(3);
  auto m = [&](std::initializer_list<std::tuple<int, int, long>> entries) {
    SparseOp op(one);
    for (auto [r, c, v] : entries) op.add_to(static_cast<std::size_t>(r), static_cast<std::size_t>(c), CycNum(v));
    return op;
  };
  std::vector<SparseOp> rho{
      m({{0, 0, 2}, {1, 1, 1}}),  // e_11
      m({{0, 1, 1}, {1, 2, 2}}),  // e_12 = x d/dy
      m({{1, 0, 2}, {2, 1, 1}}),  // e_21 = y d/dx
      m({{1, 1, 1}, {2, 2, 2}}),  // e_22
  };
  return RepMatrices(2, std::move(rho), "sym2");
}

SparseOp coupling_P(const SpaceLayout& layout, int aux_slot, int site_slot, const RepMatrices& rep) {
  if (layout.dim(aux_slot) != rep.N() || layout.dim(site_slot) != rep.dim())
    throw LayoutMismatch("coupling_P: dimension mismatch");
  SparseOp out(layout);
  for (int i = 0; i < rep.N(); ++i)
    for (int j = 0; j < rep.N(); ++j) {
      if (rep.rho(j, i).is_zero()) continue;
      out += elementary(layout, aux_slot, i, j) * on_slot(layout, site_slot, rep.rho(j, i));
    }
  return out;
}

SparseOp coupling_Q(const SpaceLayout& layout, int aux_slot, int site_slot, const RepMatrices& rep,
                    const SparseOp& K) {
  auto Kinv = inverse(K);
  if (!Kinv) throw DivisionByZero("coupling_Q: singular K");
  const SparseOp Ka = on_slot(layout, aux_slot, K);
  const SparseOp Kia = on_slot(layout, aux_slot, *Kinv);
  return Ka * transpose_slot(coupling_P(layout, aux_slot, site_slot, rep), aux_slot) * Kia;
}

// ---------------------------------------------------------------- exact linear algebra

namespace {

using SparseVec = std::map<std::size_t, CycNum>;

SparseVec flatten(const SparseOp& op) {
  SparseVec v;
  for (std::size_t r = 0; r < op.dim(); ++r)
    for (const auto& [c, x] : op.row(r)) v.emplace(r * op.dim() + c, x);
  return v;
}

// Reduce v against an echelon basis keyed by pivot (each basis vector has pivot coefficient 1).
void reduce(SparseVec& v, const std::map<std::size_t, SparseVec>& basis) {
  auto it = v.begin();
  while (it != v.end()) {
    auto b = basis.find(it->first);
    if (b == basis.end()) {
      ++it;
      continue;
    }
    const CycNum f = it->second;
    const std::size_t key = it->first;
    for (const auto& [k, x] : b->second) {
      auto [slot, inserted] = v.try_emplace(k, -(f * x));
      if (!inserted) {
        slot->second -= f * x;
        if (slot->second.is_zero()) v.erase(slot);
      }
    }
    it = v.upper_bound(key);
  }
}

bool insert(SparseVec v, std::map<std::size_t, SparseVec>& basis) {
  reduce(v, basis);
  if (v.empty()) return false;
  const CycNum inv = v.begin()->second.inverse();
  for (auto& [k, x] : v) x *= inv;
  basis.emplace(v.begin()->first, std::move(v));
  return true;
}

}  // namespace

std::size_t rank(const std::vector<SparseOp>& ops) {
  std::map<std::size_t, SparseVec> basis;
  std::size_t r = 0;
  for (const auto& op : ops) r += insert(flatten(op), basis) ? 1 : 0;
  return r;
}

bool in_span(const std::vector<SparseOp>& basis_ops, const SparseOp& x) {
  std::map<std::size_t, SparseVec> basis;
  for (const auto& op : basis_ops) insert(flatten(op), basis);
  SparseVec v = flatten(x);
  reduce(v, basis);
  return v.empty();
}

}  // namespace halfloop
