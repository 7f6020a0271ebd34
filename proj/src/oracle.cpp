#include "halfloop/oracle.hpp"

#include <stdexcept>

namespace halfloop::oracle {

std::size_t Dense::total() const {
  std::size_t t = 1;
  for (int d : dims) t *= static_cast<std::size_t>(d);
  return t;
}

Dense zeros(const std::vector<int>& dims) {
  Dense d{dims, {}};
  d.data.assign(d.total() * d.total(), CycNum(0));
  return d;
}

Dense identity(const std::vector<int>& dims) {
  Dense d = zeros(dims);
  for (std::size_t r = 0; r < d.total(); ++r) d.at(r, r) = CycNum(1);
  return d;
}

Dense local(const std::vector<std::vector<CycNum>>& m) {
  Dense d = zeros({static_cast<int>(m.size())});
  for (std::size_t r = 0; r < m.size(); ++r)
    for (std::size_t c = 0; c < m.size(); ++c) d.at(r, c) = m[r][c];
  return d;
}

Dense kron(const Dense& a, const Dense& b) {
  std::vector<int> dims = a.dims;
  dims.insert(dims.end(), b.dims.begin(), b.dims.end());
  Dense out = zeros(dims);
  const std::size_t na = a.total(), nb = b.total();
  for (std::size_t r1 = 0; r1 < na; ++r1)
    for (std::size_t c1 = 0; c1 < na; ++c1) {
      if (a.at(r1, c1).is_zero()) continue;
      for (std::size_t r2 = 0; r2 < nb; ++r2)
        for (std::size_t c2 = 0; c2 < nb; ++c2) out.at(r1 * nb + r2, c1 * nb + c2) = a.at(r1, c1) * b.at(r2, c2);
    }
  return out;
}

Dense kron_all(const std::vector<Dense>& factors) {
  Dense out = identity({});
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

Dense add(const Dense& a, const Dense& b) {
  if (a.dims != b.dims) throw std::invalid_argument("oracle::add: dims");
  Dense out = a;
  for (std::size_t k = 0; k < out.data.size(); ++k) out.data[k] += b.data[k];
  return out;
}

Dense scale(const Dense& a, const CycNum& c) {
  Dense out = a;
  for (auto& x : out.data) x *= c;
  return out;
}

Dense mul(const Dense& a, const Dense& b) {
  if (a.dims != b.dims) throw std::invalid_argument("oracle::mul: dims");
  Dense out = zeros(a.dims);
  const std::size_t n = a.total();
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t k = 0; k < n; ++k) {
      if (a.at(r, k).is_zero()) continue;
      for (std::size_t c = 0; c < n; ++c) {
        if (!b.at(k, c).is_zero()) out.at(r, c) += a.at(r, k) * b.at(k, c);
      }
    }
  return out;
}

Dense commutator(const Dense& a, const Dense& b) { return add(mul(a, b), scale(mul(b, a), CycNum(-1))); }

namespace {

std::vector<int> to_digits(std::size_t idx, const std::vector<int>& dims) {
  std::vector<int> d(dims.size());
  for (std::size_t s = dims.size(); s-- > 0;) {
    d[s] = static_cast<int>(idx % static_cast<std::size_t>(dims[s]));
    idx /= static_cast<std::size_t>(dims[s]);
  }
  return d;
}

std::size_t from_digits(const std::vector<int>& d, const std::vector<int>& dims) {
  std::size_t idx = 0;
  for (std::size_t s = 0; s < dims.size(); ++s) idx = idx * static_cast<std::size_t>(dims[s]) + static_cast<std::size_t>(d[s]);
  return idx;
}

bool contains(const std::vector<int>& v, int x) {
  for (int y : v)
    if (y == x) return true;
  return false;
}

}  // namespace

Dense partial_trace(const Dense& a, const std::vector<int>& slots) {
  std::vector<int> kept_dims;
  for (int s = 0; s < static_cast<int>(a.dims.size()); ++s)
    if (!contains(slots, s)) kept_dims.push_back(a.dims[static_cast<std::size_t>(s)]);
  Dense out = zeros(kept_dims);
  const std::size_t n = a.total();
  for (std::size_t r = 0; r < n; ++r) {
    const auto rd = to_digits(r, a.dims);
    for (std::size_t c = 0; c < n; ++c) {
      const auto cd = to_digits(c, a.dims);
      bool diagonal = true;
      std::vector<int> kr, kc;
      for (std::size_t s = 0; s < a.dims.size(); ++s) {
        if (contains(slots, static_cast<int>(s))) {
          diagonal = diagonal && rd[s] == cd[s];
        } else {
          kr.push_back(rd[s]);
          kc.push_back(cd[s]);
        }
      }
      if (diagonal) out.at(from_digits(kr, kept_dims), from_digits(kc, kept_dims)) += a.at(r, c);
    }
  }
  return out;
}

Dense transpose_slot(const Dense& a, int slot) {
  Dense out = zeros(a.dims);
  const std::size_t n = a.total();
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      auto rd = to_digits(r, a.dims);
      auto cd = to_digits(c, a.dims);
      std::swap(rd[static_cast<std::size_t>(slot)], cd[static_cast<std::size_t>(slot)]);
      out.at(from_digits(rd, a.dims), from_digits(cd, a.dims)) = a.at(r, c);
    }
  return out;
}

CycNum trace(const Dense& a) {
  CycNum t;
  for (std::size_t r = 0; r < a.total(); ++r) t += a.at(r, r);
  return t;
}

Dense inverse(const Dense& a) {
  const std::size_t n = a.total();
  Dense m = a;
  Dense inv = identity(a.dims);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && m.at(piv, col).is_zero()) ++piv;
    if (piv == n) throw DivisionByZero("oracle::inverse: singular");
    for (std::size_t c = 0; c < n; ++c) {
      std::swap(m.at(piv, c), m.at(col, c));
      std::swap(inv.at(piv, c), inv.at(col, c));
    }
    const CycNum p = m.at(col, col).inverse();
    for (std::size_t c = 0; c < n; ++c) {
      m.at(col, c) *= p;
      inv.at(col, c) *= p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const CycNum f = m.at(r, col);
      if (f.is_zero()) continue;
      for (std::size_t c = 0; c < n; ++c) {
        m.at(r, c) -= f * m.at(col, c);
        inv.at(r, c) -= f * inv.at(col, c);
      }
    }
  }
  return inv;
}

Dense elementary(const std::vector<int>& dims, int slot, int i, int j) {
  std::vector<Dense> f;
  for (int s = 0; s < static_cast<int>(dims.size()); ++s) {
    if (s == slot) {
      Dense e = zeros({dims[static_cast<std::size_t>(s)]});
      e.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = CycNum(1);
      f.push_back(e);
    } else {
      f.push_back(identity({dims[static_cast<std::size_t>(s)]}));
    }
  }
  return kron_all(f);
}

Dense place(const std::vector<int>& dims, const std::vector<std::pair<int, Dense>>& parts) {
  std::vector<Dense> f;
  for (int s = 0; s < static_cast<int>(dims.size()); ++s) {
    Dense d = identity({dims[static_cast<std::size_t>(s)]});
    for (const auto& [slot, m] : parts)
      if (slot == s) d = m;
    f.push_back(d);
  }
  return kron_all(f);
}

Dense to_local(const SparseOp& op) {
  Dense d = zeros({static_cast<int>(op.dim())});
  for (std::size_t r = 0; r < op.dim(); ++r)
    for (std::size_t c = 0; c < op.dim(); ++c) d.at(r, c) = op.at(r, c);
  return d;
}

Dense permutation(const std::vector<int>& dims, int x, int y) {
  const int N = dims[static_cast<std::size_t>(x)];
  Dense out = zeros(dims);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) out = add(out, mul(elementary(dims, x, i, j), elementary(dims, y, j, i)));
  return out;
}

Dense coupling_P(const std::vector<int>& dims, int aux, int site, const RepMatrices& rep) {
  Dense out = zeros(dims);
  for (int i = 0; i < rep.N(); ++i)
    for (int j = 0; j < rep.N(); ++j) {
      Dense e = zeros({rep.N()});
      e.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = CycNum(1);
      out = add(out, place(dims, {{aux, e}, {site, to_local(rep.rho(j, i))}}));
    }
  return out;
}

Dense coupling_Q(const std::vector<int>& dims, int aux, int site, const RepMatrices& rep, const Dense& K) {
  const Dense Ka = place(dims, {{aux, K}});
  const Dense Kinv = place(dims, {{aux, inverse(K)}});
  return mul(mul(Ka, transpose_slot(coupling_P(dims, aux, site, rep), aux)), Kinv);
}

Dense from_sparse(const SparseOp& op) {
  Dense d = zeros(op.layout().dims());
  for (std::size_t r = 0; r < op.dim(); ++r)
    for (const auto& [c, v] : op.row(r)) d.at(r, c) = v;
  return d;
}

bool equal(const SparseOp& sparse, const Dense& dense) {
  if (sparse.layout().dims() != dense.dims) return false;
  const std::size_t n = dense.total();
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      if (!(sparse.at(r, c) == dense.at(r, c))) return false;
  return true;
}

}  // namespace halfloop::oracle
