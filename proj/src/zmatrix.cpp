#include "rsolv/zmatrix.hpp"

#include <algorithm>
#include <sstream>

namespace rsolv {

IntMatrix IntMatrix::identity(size_t n) {
  IntMatrix m(n, n);
  for (size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<Int>>& rows) {
  if (rows.empty()) return IntMatrix(0, 0);
  IntMatrix m(rows.size(), rows[0].size());
  for (size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols()) throw InputError("ragged row list");
    for (size_t c = 0; c < m.cols(); ++c) m.at(r, c) = rows[r][c];
  }
  return m;
}

std::vector<Int> IntMatrix::row(size_t r) const {
  std::vector<Int> out(cols_);
  for (size_t c = 0; c < cols_; ++c) out[c] = at(r, c);
  return out;
}

void IntMatrix::append_row(const std::vector<Int>& r) {
  if (rows_ == 0 && cols_ == 0) cols_ = r.size();
  if (r.size() != cols_) throw InputError("appended row has wrong width");
  e_.insert(e_.end(), r.begin(), r.end());
  ++rows_;
}

IntMatrix IntMatrix::mul(const IntMatrix& o) const {
  if (cols_ != o.rows_) throw InputError("matrix product shape mismatch");
  IntMatrix out(rows_, o.cols_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t k = 0; k < cols_; ++k) {
      const Int& a = at(i, k);
      if (a == 0) continue;
      for (size_t j = 0; j < o.cols_; ++j) out.at(i, j) += a * o.at(k, j);
    }
  return out;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix out(cols_, rows_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j) out.at(j, i) = at(i, j);
  return out;
}

bool IntMatrix::is_zero() const {
  for (const auto& x : e_)
    if (x != 0) return false;
  return true;
}

Int IntMatrix::det() const {
  if (rows_ != cols_) throw InputError("determinant of non-square matrix");
  size_t n = rows_;
  if (n == 0) return 1;
  IntMatrix a = *this;
  Int prev = 1;
  int sign = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (a.at(k, k) == 0) {
      size_t swap_row = k;
      for (size_t r = k + 1; r < n; ++r)
        if (a.at(r, k) != 0) { swap_row = r; break; }
      if (a.at(swap_row, k) == 0) return 0;
      for (size_t c = 0; c < n; ++c) std::swap(a.at(k, c), a.at(swap_row, c));
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i)
      for (size_t j = k + 1; j < n; ++j)
        a.at(i, j) = (a.at(i, j) * a.at(k, k) - a.at(i, k) * a.at(k, j)) / prev;
    prev = a.at(k, k);
  }
  return sign > 0 ? a.at(n - 1, n - 1) : Int(-a.at(n - 1, n - 1));
}

size_t IntMatrix::rank() const {
  HnfResult h = hermite_normal_form(*this);
  size_t r = 0;
  for (size_t i = 0; i < h.h.rows(); ++i) {
    bool nonzero = false;
    for (size_t j = 0; j < h.h.cols(); ++j) nonzero |= (h.h.at(i, j) != 0);
    if (nonzero) ++r;
  }
  return r;
}

HnfResult hermite_normal_form(const IntMatrix& m) {
  IntMatrix h = m;
  IntMatrix u = IntMatrix::identity(m.rows());
  const size_t rows = m.rows(), cols = m.cols();

  auto swap_rows = [&](size_t a, size_t b) {
    if (a == b) return;
    for (size_t c = 0; c < cols; ++c) std::swap(h.at(a, c), h.at(b, c));
    for (size_t c = 0; c < rows; ++c) std::swap(u.at(a, c), u.at(b, c));
  };
  auto sub_row = [&](size_t dst, size_t src, const Int& q) {
    if (q == 0) return;
    for (size_t c = 0; c < cols; ++c) h.at(dst, c) -= q * h.at(src, c);
    for (size_t c = 0; c < rows; ++c) u.at(dst, c) -= q * u.at(src, c);
  };
  auto negate_row = [&](size_t r) {
    for (size_t c = 0; c < cols; ++c) h.at(r, c) = -h.at(r, c);
    for (size_t c = 0; c < rows; ++c) u.at(r, c) = -u.at(r, c);
  };

  size_t pivot_row = 0;
  for (size_t col = 0; col < cols && pivot_row < rows; ++col) {
    // Euclidean elimination within this column, minimal |entry| as pivot.
    for (;;) {
      size_t best = rows;
      for (size_t r = pivot_row; r < rows; ++r) {
        if (h.at(r, col) == 0) continue;
        if (best == rows || iabs(h.at(r, col)) < iabs(h.at(best, col))) best = r;
      }
      if (best == rows) break;  // column clear below
      swap_rows(pivot_row, best);
      bool any_left = false;
      for (size_t r = pivot_row + 1; r < rows; ++r) {
        if (h.at(r, col) == 0) continue;
        sub_row(r, pivot_row, fdiv(h.at(r, col), h.at(pivot_row, col)));
        any_left |= (h.at(r, col) != 0);
      }
      if (!any_left) {
        if (h.at(pivot_row, col) < 0) negate_row(pivot_row);
        for (size_t r = 0; r < pivot_row; ++r)
          sub_row(r, pivot_row, fdiv(h.at(r, col), h.at(pivot_row, col)));
        ++pivot_row;
        break;
      }
    }
  }
  return {h, u};
}

namespace {

struct SnfWork {
  IntMatrix s, u, v;

  void swap_rows(size_t a, size_t b) {
    if (a == b) return;
    for (size_t c = 0; c < s.cols(); ++c) std::swap(s.at(a, c), s.at(b, c));
    for (size_t c = 0; c < u.cols(); ++c) std::swap(u.at(a, c), u.at(b, c));
  }
  void swap_cols(size_t a, size_t b) {
    if (a == b) return;
    for (size_t r = 0; r < s.rows(); ++r) std::swap(s.at(r, a), s.at(r, b));
    for (size_t r = 0; r < v.rows(); ++r) std::swap(v.at(r, a), v.at(r, b));
  }
  void sub_row(size_t dst, size_t src, const Int& q) {
    if (q == 0) return;
    for (size_t c = 0; c < s.cols(); ++c) s.at(dst, c) -= q * s.at(src, c);
    for (size_t c = 0; c < u.cols(); ++c) u.at(dst, c) -= q * u.at(src, c);
  }
  void sub_col(size_t dst, size_t src, const Int& q) {
    if (q == 0) return;
    for (size_t r = 0; r < s.rows(); ++r) s.at(r, dst) -= q * s.at(r, src);
    for (size_t r = 0; r < v.rows(); ++r) v.at(r, dst) -= q * v.at(r, src);
  }
  void negate_row(size_t r) {
    for (size_t c = 0; c < s.cols(); ++c) s.at(r, c) = -s.at(r, c);
    for (size_t c = 0; c < u.cols(); ++c) u.at(r, c) = -u.at(r, c);
  }
};

}  // namespace

SnfResult smith_normal_form(const IntMatrix& m) {
  SnfWork w{m, IntMatrix::identity(m.rows()), IntMatrix::identity(m.cols())};
  const size_t rows = m.rows(), cols = m.cols();
  size_t t = 0;
  while (t < rows && t < cols) {
    // Minimal-absolute-value pivot in the working submatrix, ties by (row, col).
    size_t pr = rows, pc = cols;
    for (size_t r = t; r < rows; ++r)
      for (size_t c = t; c < cols; ++c) {
        if (w.s.at(r, c) == 0) continue;
        if (pr == rows || iabs(w.s.at(r, c)) < iabs(w.s.at(pr, pc))) { pr = r; pc = c; }
      }
    if (pr == rows) break;  // submatrix is zero
    w.swap_rows(t, pr);
    w.swap_cols(t, pc);

    for (;;) {
      bool dirty = false;
      for (size_t r = t + 1; r < rows; ++r) {
        if (w.s.at(r, t) == 0) continue;
        w.sub_row(r, t, fdiv(w.s.at(r, t), w.s.at(t, t)));
        if (w.s.at(r, t) != 0) { w.swap_rows(t, r); dirty = true; }
      }
      for (size_t c = t + 1; c < cols; ++c) {
        if (w.s.at(t, c) == 0) continue;
        w.sub_col(c, t, fdiv(w.s.at(t, c), w.s.at(t, t)));
        if (w.s.at(t, c) != 0) { w.swap_cols(t, c); dirty = true; }
      }
      if (dirty) continue;
      // Row and column are clear; enforce divisibility of the remaining block.
      bool fixed = false;
      for (size_t r = t + 1; r < rows && !fixed; ++r)
        for (size_t c = t + 1; c < cols && !fixed; ++c)
          if (w.s.at(r, c) % w.s.at(t, t) != 0) {
            w.sub_row(t, r, Int(-1));  // add row r to row t
            fixed = true;
          }
      if (!fixed) break;
    }
    if (w.s.at(t, t) < 0) w.negate_row(t);
    ++t;
  }
  return {w.s, w.u, w.v};
}

IntMatrix left_kernel(const IntMatrix& m) {
  HnfResult h = hermite_normal_form(m);
  IntMatrix out(0, m.rows());
  for (size_t r = 0; r < h.h.rows(); ++r) {
    bool zero = true;
    for (size_t c = 0; c < h.h.cols(); ++c) zero &= (h.h.at(r, c) == 0);
    if (zero) out.append_row(h.u.row(r));
  }
  return out;
}

bool in_row_lattice(const IntMatrix& hnf_rows, const std::vector<Int>& v,
                    std::vector<Int>* residue) {
  std::vector<Int> x = v;
  for (size_t r = 0; r < hnf_rows.rows(); ++r) {
    size_t lead = hnf_rows.cols();
    for (size_t c = 0; c < hnf_rows.cols(); ++c)
      if (hnf_rows.at(r, c) != 0) { lead = c; break; }
    if (lead == hnf_rows.cols()) continue;
    Int q = fdiv(x[lead], hnf_rows.at(r, lead));
    if (q != 0)
      for (size_t c = lead; c < hnf_rows.cols(); ++c) x[c] -= q * hnf_rows.at(r, c);
  }
  bool zero = true;
  for (const auto& c : x) zero &= (c == 0);
  if (residue) *residue = std::move(x);
  return zero;
}

std::string AbelianGroup::str() const {
  if (trivial()) return "1";
  std::ostringstream os;
  bool first = true;
  for (const auto& d : torsion) {
    if (!first) os << " x ";
    first = false;
    os << "Z/" << d.str();
  }
  if (free_rank > 0) {
    if (!first) os << " x ";
    os << "Z";
    if (free_rank > 1) os << "^" << free_rank;
  }
  return os.str();
}

CokernelResult cokernel(const IntMatrix& m) {
  SnfResult snf = smith_normal_form(m);
  const size_t n = m.cols();
  size_t diag = std::min(m.rows(), n);

  std::vector<Int> d(n, Int(0));
  for (size_t i = 0; i < diag; ++i) d[i] = snf.s.at(i, i);

  CokernelResult out;
  std::vector<size_t> kept;  // coordinates that survive (d != 1)
  for (size_t i = 0; i < n; ++i) {
    if (d[i] == 1) continue;
    kept.push_back(i);
    if (d[i] >= 2)
      out.group.torsion.push_back(d[i]);
    else
      ++out.group.free_rank;
    out.moduli.push_back(d[i]);
  }
  // Torsion coordinates come first in `kept` because the d_i ascend.
  out.generator_images.assign(n, {});
  for (size_t g = 0; g < n; ++g) {
    std::vector<Int> img;
    img.reserve(kept.size());
    for (size_t k : kept) {
      Int c = snf.v.at(g, k);
      if (d[k] >= 2) c = fmod(c, d[k]);
      img.push_back(c);
    }
    out.generator_images[g] = std::move(img);
  }
  return out;
}

AbelianGroup abelian_direct_sum(const AbelianGroup& a, const AbelianGroup& b) {
  std::vector<Int> all = a.torsion;
  all.insert(all.end(), b.torsion.begin(), b.torsion.end());
  IntMatrix diag(all.size(), all.size());
  for (size_t i = 0; i < all.size(); ++i) diag.at(i, i) = all[i];
  CokernelResult ck = cokernel(diag);
  AbelianGroup out = ck.group;
  out.free_rank = a.free_rank + b.free_rank;
  return out;
}

SaturationSplit saturate_and_complement(const IntMatrix& m) {
  const size_t n = m.cols();
  SnfResult snf = smith_normal_form(m);
  // V is unimodular, so its HNF is the identity and the transform is V^-1.
  HnfResult inv = hermite_normal_form(snf.v);
  if (!(inv.h == IntMatrix::identity(n)))
    throw std::logic_error("saturate_and_complement: V not unimodular");
  const IntMatrix& vinv = inv.u;

  size_t rho = 0;
  Int index = 1;
  for (size_t i = 0; i < std::min(m.rows(), n); ++i)
    if (snf.s.at(i, i) != 0) { ++rho; index *= snf.s.at(i, i); }

  SaturationSplit out;
  out.saturation_basis = IntMatrix(0, n);
  out.complement_basis = IntMatrix(0, n);
  for (size_t i = 0; i < rho; ++i) out.saturation_basis.append_row(vinv.row(i));
  for (size_t i = rho; i < n; ++i) out.complement_basis.append_row(vinv.row(i));
  out.index = index;
  return out;
}

}  // namespace rsolv
