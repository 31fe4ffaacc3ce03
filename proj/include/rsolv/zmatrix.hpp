#pragma once

// Exact integer linear algebra: Hermite and Smith normal forms with
// transformation matrices, cokernels, and the lattice utilities behind
// subgroup echelonization and abelianization.

#include <utility>
#include <vector>

#include "rsolv/basics.hpp"

namespace rsolv {

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), e_(rows * cols, Int(0)) {}

  static IntMatrix identity(size_t n);
  static IntMatrix from_rows(const std::vector<std::vector<Int>>& rows);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  Int& at(size_t r, size_t c) { return e_[r * cols_ + c]; }
  const Int& at(size_t r, size_t c) const { return e_[r * cols_ + c]; }

  std::vector<Int> row(size_t r) const;
  void append_row(const std::vector<Int>& r);

  IntMatrix mul(const IntMatrix& o) const;
  IntMatrix transpose() const;
  bool is_zero() const;
  bool operator==(const IntMatrix&) const = default;

  // Exact determinant (fraction-free Bareiss elimination); square only.
  Int det() const;
  size_t rank() const;

 private:
  size_t rows_ = 0, cols_ = 0;
  std::vector<Int> e_;
};

// Row-style Hermite normal form: U unimodular with U*M = H, pivots positive,
// entries above each pivot reduced into [0, pivot), zero rows last.
// Pivot choice: minimal absolute value, ties by (row, col).
struct HnfResult {
  IntMatrix h, u;
};
HnfResult hermite_normal_form(const IntMatrix& m);

// Smith normal form: U*M*V = S diagonal, d1 | d2 | ..., di >= 0.
struct SnfResult {
  IntMatrix s, u, v;
};
SnfResult smith_normal_form(const IntMatrix& m);

// Basis of the left kernel { x : x * M = 0 }, as rows.
IntMatrix left_kernel(const IntMatrix& m);

// Is v in the row lattice of M? Optionally returns the residue after
// reduction by the HNF rows (zero iff member).
bool in_row_lattice(const IntMatrix& hnf_rows, const std::vector<Int>& v,
                    std::vector<Int>* residue = nullptr);

// A finitely generated abelian group in invariant-factor form.
struct AbelianGroup {
  std::vector<Int> torsion;  // each >= 2, d_i | d_{i+1}
  size_t free_rank = 0;

  bool trivial() const { return torsion.empty() && free_rank == 0; }
  bool infinite() const { return free_rank > 0; }
  bool operator==(const AbelianGroup&) const = default;
  std::string str() const;
};

// Z^cols / rowspace(M), together with the images of the standard basis
// vectors in the invariant-factor coordinates.
struct CokernelResult {
  AbelianGroup group;
  // One row per original generator; columns are the invariant-factor
  // coordinates (torsion coords first, reduced mod d, then free coords).
  std::vector<std::vector<Int>> generator_images;
  // Moduli per coordinate: torsion invariants then zeros for free coords.
  std::vector<Int> moduli;
};
CokernelResult cokernel(const IntMatrix& m);

// Invariant factors of the direct product of two groups given in
// invariant-factor form (SNF of the combined diagonal relation matrix).
AbelianGroup abelian_direct_sum(const AbelianGroup& a, const AbelianGroup& b);

// For a full-column-rank lattice L = rowspace(M) in Z^n: a basis of the
// saturation (L tensor Q) cap Z^n, a complement basis H with
// saturation + H = Z^n, and the index [saturation : L].
struct SaturationSplit {
  IntMatrix saturation_basis;  // r rows
  IntMatrix complement_basis;  // n - r rows
  Int index;                   // product of invariant factors of M
};
SaturationSplit saturate_and_complement(const IntMatrix& m);

}  // namespace rsolv
