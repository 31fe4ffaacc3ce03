#pragma once

// Independent test oracles. These deliberately avoid the library's own
// algorithms: the SNF/HNF oracles do plain elementary-operation reduction
// with no transform bookkeeping and no pivot heuristics, the Heisenberg
// oracle is a 3x3 unitriangular matrix representation, and witt_rank is the
// closed-form rank of free-nilpotent lower-central layers.

#include <array>
#include <functional>
#include <vector>

#include "rsolv/basics.hpp"
#include "rsolv/zmatrix.hpp"

namespace oracles {

using rsolv::Int;
using Grid = std::vector<std::vector<Int>>;

inline Grid to_grid(const rsolv::IntMatrix& m) {
  Grid g(m.rows(), std::vector<Int>(m.cols()));
  for (size_t r = 0; r < m.rows(); ++r)
    for (size_t c = 0; c < m.cols(); ++c) g[r][c] = m.at(r, c);
  return g;
}

// Brute-force row-style HNF by literal elementary row operations: walk the
// columns, do schoolbook Euclid with whole-row subtractions, fix signs,
// reduce upwards. Quadratic and slow on purpose.
inline Grid hnf_oracle(Grid a) {
  const size_t rows = a.size();
  const size_t cols = rows ? a[0].size() : 0;
  size_t top = 0;
  for (size_t col = 0; col < cols && top < rows; ++col) {
    for (;;) {
      size_t nz = rows;
      for (size_t r = top; r < rows; ++r)
        if (a[r][col] != 0) { nz = r; break; }
      if (nz == rows) break;
      std::swap(a[top], a[nz]);
      bool more = false;
      for (size_t r = top + 1; r < rows; ++r) {
        while (a[r][col] != 0) {
          if (rsolv::iabs(a[r][col]) < rsolv::iabs(a[top][col])) std::swap(a[r], a[top]);
          Int q = a[r][col] / a[top][col];
          if (q == 0) q = a[r][col] * a[top][col] > 0 ? 1 : -1;
          for (size_t c = 0; c < cols; ++c) a[r][c] -= q * a[top][c];
        }
        (void)more;
      }
      bool clear = true;
      for (size_t r = top + 1; r < rows; ++r) clear &= (a[r][col] == 0);
      if (clear) {
        if (a[top][col] < 0)
          for (size_t c = 0; c < cols; ++c) a[top][c] = -a[top][c];
        for (size_t r = 0; r < top; ++r) {
          Int q = rsolv::fdiv(a[r][col], a[top][col]);
          for (size_t c = 0; c < cols; ++c) a[r][c] -= q * a[top][c];
        }
        ++top;
        break;
      }
    }
  }
  return a;
}

// Brute-force SNF invariant factors by literal elementary operations:
// repeatedly drag the smallest entry to the corner, clear its row and
// column, patch divisibility failures by row addition, recurse.
inline std::vector<Int> snf_invariants_oracle(Grid a) {
  std::vector<Int> inv;
  size_t rows = a.size();
  size_t cols = rows ? a[0].size() : 0;
  size_t t = 0;
  while (t < rows && t < cols) {
    size_t pr = rows, pc = cols;
    for (size_t r = t; r < rows; ++r)
      for (size_t c = t; c < cols; ++c)
        if (a[r][c] != 0 && (pr == rows || rsolv::iabs(a[r][c]) < rsolv::iabs(a[pr][pc]))) {
          pr = r;
          pc = c;
        }
    if (pr == rows) break;
    std::swap(a[t], a[pr]);
    for (size_t r = 0; r < rows; ++r) std::swap(a[r][t], a[r][pc]);
    bool again = false;
    for (size_t r = t + 1; r < rows; ++r)
      if (a[r][t] % a[t][t] != 0) {
        Int q = a[r][t] / a[t][t];
        for (size_t c = 0; c < cols; ++c) a[r][c] -= q * a[t][c];
        again = true;
      }
    if (again) continue;
    for (size_t c = t + 1; c < cols; ++c)
      if (a[t][c] % a[t][t] != 0) {
        Int q = a[t][c] / a[t][t];
        for (size_t r = 0; r < rows; ++r) a[r][c] -= q * a[r][t];
        again = true;
      }
    if (again) continue;
    for (size_t r = t + 1; r < rows; ++r) {
      Int q = a[r][t] / a[t][t];
      for (size_t c = 0; c < cols; ++c) a[r][c] -= q * a[t][c];
    }
    for (size_t c = t + 1; c < cols; ++c) {
      Int q = a[t][c] / a[t][t];
      for (size_t r = 0; r < rows; ++r) a[r][c] -= q * a[r][t];
    }
    bool fixed = false;
    for (size_t r = t + 1; r < rows && !fixed; ++r)
      for (size_t c = t + 1; c < cols && !fixed; ++c)
        if (a[r][c] % a[t][t] != 0) {
          for (size_t cc = 0; cc < cols; ++cc) a[t][cc] += a[r][cc];
          fixed = true;
        }
    if (fixed) continue;
    inv.push_back(a[t][t] < 0 ? Int(-a[t][t]) : a[t][t]);
    ++t;
  }
  return inv;  // includes 1s, excludes trailing zeros
}

// Determinantal-divisor route: d_1...d_k = gcd of all k x k minors. An
// entirely different derivation of the invariant factors, used as a
// second opinion on small matrices.
inline std::vector<Int> snf_invariants_minors(const Grid& a) {
  size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  size_t n = std::min(rows, cols);
  auto det_sub = [&](const std::vector<size_t>& rs, const std::vector<size_t>& cs) {
    size_t k = rs.size();
    Grid sub(k, std::vector<Int>(k));
    for (size_t i = 0; i < k; ++i)
      for (size_t j = 0; j < k; ++j) sub[i][j] = a[rs[i]][cs[j]];
    // Laplace expansion; k <= 6 here.
    std::function<Int(Grid&)> det = [&](Grid& m) -> Int {
      size_t s = m.size();
      if (s == 1) return m[0][0];
      Int total = 0;
      for (size_t c = 0; c < s; ++c) {
        if (m[0][c] == 0) continue;
        Grid minor(s - 1, std::vector<Int>(s - 1));
        for (size_t i = 1; i < s; ++i) {
          size_t jj = 0;
          for (size_t j = 0; j < s; ++j) {
            if (j == c) continue;
            minor[i - 1][jj++] = m[i][j];
          }
        }
        Int d = det(minor);
        total += (c % 2 == 0 ? d : Int(-d)) * m[0][c];
      }
      return total;
    };
    return det(sub);
  };

  auto combinations = [](size_t n_, size_t k_) {
    std::vector<std::vector<size_t>> out;
    std::vector<size_t> idx(k_);
    for (size_t i = 0; i < k_; ++i) idx[i] = i;
    for (;;) {
      out.push_back(idx);
      size_t i = k_;
      while (i-- > 0) {
        if (idx[i] != i + n_ - k_) {
          ++idx[i];
          for (size_t j = i + 1; j < k_; ++j) idx[j] = idx[j - 1] + 1;
          break;
        }
        if (i == 0) return out;
      }
      if (idx[0] == n_ - k_ + 1) break;
    }
    return out;
  };

  std::vector<Int> divisors;  // D_k
  for (size_t k = 1; k <= n; ++k) {
    Int g = 0;
    for (const auto& rs : combinations(rows, k))
      for (const auto& cs : combinations(cols, k)) g = rsolv::gcd(g, det_sub(rs, cs));
    if (g == 0) break;
    divisors.push_back(g);
  }
  std::vector<Int> inv;
  Int prev = 1;
  for (const auto& d : divisors) {
    inv.push_back(d / prev);
    prev = d;
  }
  return inv;
}

// Rank of the k-th lower-central layer of the free nilpotent group of the
// given rank (Witt's necklace formula).
inline long witt_rank(long rank, long k) {
  auto moebius = [](long m) -> long {
    long result = 1;
    for (long p = 2; p * p <= m; ++p) {
      if (m % p) continue;
      m /= p;
      if (m % p == 0) return 0;
      result = -result;
    }
    if (m > 1) result = -result;
    return result;
  };
  long total = 0;
  for (long d = 1; d <= k; ++d) {
    if (k % d) continue;
    long pw = 1;
    for (long i = 0; i < k / d; ++i) pw *= rank;
    total += moebius(d) * pw;
  }
  return total / k;
}

// Exact 3x3 integer matrices, the unitriangular representation oracle for
// the Heisenberg group.
struct Mat3 {
  std::array<std::array<Int, 3>, 3> m{};

  static Mat3 identity() {
    Mat3 r;
    for (int i = 0; i < 3; ++i) r.m[i][i] = 1;
    return r;
  }
  static Mat3 elementary(int i, int j, const Int& v) {
    Mat3 r = identity();
    r.m[i][j] = v;
    return r;
  }
  Mat3 mul(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k)
        for (int j = 0; j < 3; ++j) r.m[i][j] += m[i][k] * o.m[k][j];
    return r;
  }
  // Unitriangular inverse: I - N + N^2 for the strictly-upper part N.
  Mat3 inverse() const {
    Mat3 r = identity();
    r.m[0][1] = -m[0][1];
    r.m[1][2] = -m[1][2];
    r.m[0][2] = -m[0][2] + m[0][1] * m[1][2];
    return r;
  }
  Mat3 pow(Int k) const {
    Mat3 base = k < 0 ? inverse() : *this;
    Int n = k < 0 ? Int(-k) : k;
    Mat3 acc = identity();
    while (n > 0) {
      if (n % 2 == 1) acc = acc.mul(base);
      base = base.mul(base);
      n /= 2;
    }
    return acc;
  }
  bool operator==(const Mat3&) const = default;
};

}  // namespace oracles
