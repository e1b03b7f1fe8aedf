#pragma once

// Integer linear algebra: Hermite and Smith normal forms, lattice spans,
// sublattice indices and Gale duals. Row-style conventions throughout:
// a lattice is the Z-span of the rows of a matrix and normal forms are
// obtained by unimodular row operations on the left.

#include "cragged/arith.hpp"

#include <optional>
#include <utility>

namespace cragged {

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static IntMatrix from_rows(const std::vector<IntVector>& rows, std::size_t cols) {
    IntMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      require_same_dim(cols, rows[i].size(), "IntMatrix::from_rows");
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  static IntMatrix from_columns(const std::vector<IntVector>& cols, std::size_t rows) {
    return from_rows(cols, rows).transposed();
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Integer& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Integer& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  IntVector row(std::size_t i) const {
    return IntVector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                     data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
  }

  IntVector column(std::size_t j) const {
    IntVector c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  std::vector<IntVector> row_vectors() const {
    std::vector<IntVector> out;
    out.reserve(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out.push_back(row(i));
    return out;
  }

  IntMatrix transposed() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const Integer& x) { return x == 0; });
  }

  // Elementary operations, used by the normal form routines.
  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }
  void negate_row(std::size_t r) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(r, j) = -(*this)(r, j);
  }
  /// row[dst] += factor * row[src]
  void add_row(std::size_t dst, std::size_t src, const Integer& factor) {
    if (factor == 0) return;
    for (std::size_t j = 0; j < cols_; ++j) (*this)(dst, j) += factor * (*this)(src, j);
  }
  /// col[dst] += factor * col[src]
  void add_col(std::size_t dst, std::size_t src, const Integer& factor) {
    if (factor == 0) return;
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, dst) += factor * (*this)(i, src);
  }
  /// (row a, row b) <- (s*a + t*b, u*a + v*b)
  void combine_rows(std::size_t a, std::size_t b, const Integer& s, const Integer& t,
                    const Integer& u, const Integer& v) {
    for (std::size_t j = 0; j < cols_; ++j) {
      Integer x = (*this)(a, j);
      Integer y = (*this)(b, j);
      (*this)(a, j) = s * x + t * y;
      (*this)(b, j) = u * x + v * y;
    }
  }

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols_ != b.rows_) {
      throw Error(ErrorKind::DimensionMismatch, "IntMatrix product: inner dimensions differ");
    }
    IntMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Integer& aik = a(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

/// Fraction-free (Bareiss) determinant.
inline Integer determinant(const IntMatrix& a) {
  if (a.rows() != a.cols()) throw Error(ErrorKind::DimensionMismatch, "determinant of non-square matrix");
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  IntMatrix m = a;
  Integer sign = 1;
  Integer prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && m(p, k) == 0) ++p;
      if (p == n) return 0;
      m.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
      }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

struct HermiteForm {
  IntMatrix H;
  IntMatrix U;                      // H = U * A, det(U) = +-1
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row
  std::size_t rank() const noexcept { return pivots.size(); }
};

inline void extended_gcd(const Integer& a, const Integer& b, Integer& g, Integer& s, Integer& t) {
  mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
}

/// Row-style HNF: nonzero rows first, strictly increasing pivot columns,
/// positive pivots, entries above each pivot reduced into [0, pivot).
inline HermiteForm hermite_normal_form(const IntMatrix& a) {
  HermiteForm out{a, IntMatrix::identity(a.rows()), {}};
  IntMatrix& h = out.H;
  IntMatrix& u = out.U;
  const std::size_t m = h.rows();
  std::size_t p = 0;
  for (std::size_t col = 0; col < h.cols() && p < m; ++col) {
    for (std::size_t i = p + 1; i < m; ++i) {
      if (h(i, col) == 0) continue;
      if (h(p, col) == 0) {
        h.swap_rows(p, i);
        u.swap_rows(p, i);
        continue;
      }
      Integer g, s, t;
      extended_gcd(h(p, col), h(i, col), g, s, t);
      Integer ap = h(p, col) / g;
      Integer bp = h(i, col) / g;
      h.combine_rows(p, i, s, t, -bp, ap);
      u.combine_rows(p, i, s, t, -bp, ap);
    }
    if (h(p, col) == 0) continue;
    if (h(p, col) < 0) {
      h.negate_row(p);
      u.negate_row(p);
    }
    for (std::size_t k = 0; k < p; ++k) {
      Integer q;
      mpz_fdiv_q(q.get_mpz_t(), h(k, col).get_mpz_t(), h(p, col).get_mpz_t());
      h.add_row(k, p, -q);
      u.add_row(k, p, -q);
    }
    out.pivots.push_back(col);
    ++p;
  }
  return out;
}

struct SmithForm {
  IntMatrix S;  // S = U * A * V, diagonal, d1 | d2 | ...
  IntMatrix U;
  IntMatrix V;
  std::vector<Integer> invariant_factors;  // nonzero diagonal entries
};

inline SmithForm smith_normal_form(const IntMatrix& a) {
  SmithForm out{a, IntMatrix::identity(a.rows()), IntMatrix::identity(a.cols()), {}};
  IntMatrix& s = out.S;
  IntMatrix& u = out.U;
  IntMatrix& v = out.V;
  const std::size_t m = s.rows();
  const std::size_t n = s.cols();
  for (std::size_t t = 0; t < std::min(m, n); ++t) {
    bool finished = false;
    while (true) {
      // Smallest nonzero entry of the trailing block becomes the pivot.
      std::size_t bi = m, bj = n;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j) {
          if (s(i, j) == 0) continue;
          if (bi == m || abs(s(i, j)) < abs(s(bi, bj))) {
            bi = i;
            bj = j;
          }
        }
      if (bi == m) {
        finished = true;
        break;
      }
      s.swap_rows(t, bi);
      u.swap_rows(t, bi);
      s.swap_cols(t, bj);
      v.swap_cols(t, bj);

      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        Integer q = s(i, t) / s(t, t);
        s.add_row(i, t, -q);
        u.add_row(i, t, -q);
        if (s(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        Integer q = s(t, j) / s(t, t);
        s.add_col(j, t, -q);
        v.add_col(j, t, -q);
        if (s(t, j) != 0) clean = false;
      }
      if (!clean) continue;

      bool divides = true;
      for (std::size_t i = t + 1; i < m && divides; ++i)
        for (std::size_t j = t + 1; j < n; ++j) {
          Integer r;
          mpz_tdiv_r(r.get_mpz_t(), s(i, j).get_mpz_t(), s(t, t).get_mpz_t());
          if (r != 0) {
            s.add_row(t, i, 1);
            u.add_row(t, i, 1);
            divides = false;
            break;
          }
        }
      if (divides) break;
    }
    if (finished) break;
    if (s(t, t) < 0) {
      s.negate_row(t);
      u.negate_row(t);
    }
    out.invariant_factors.push_back(s(t, t));
  }
  return out;
}

inline std::size_t rank(const IntMatrix& a) { return hermite_normal_form(a).rank(); }

inline std::size_t rank(const std::vector<IntVector>& vectors, std::size_t dim) {
  return rank(IntMatrix::from_rows(vectors, dim));
}

/// Rows form a basis of the Z-span of `vectors` (HNF, zero rows dropped).
inline IntMatrix span_basis(const std::vector<IntVector>& vectors, std::size_t dim) {
  auto hnf = hermite_normal_form(IntMatrix::from_rows(vectors, dim));
  IntMatrix basis(hnf.rank(), dim);
  for (std::size_t i = 0; i < hnf.rank(); ++i)
    for (std::size_t j = 0; j < dim; ++j) basis(i, j) = hnf.H(i, j);
  return basis;
}

/// Coordinates of `v` in the rows of an HNF basis, or nullopt when `v` is
/// not an integral combination of them.
inline std::optional<IntVector> coordinates_in_hnf_basis(const IntMatrix& basis, const IntVector& v) {
  require_same_dim(basis.cols(), v.size(), "coordinates_in_hnf_basis");
  IntVector residual = v;
  IntVector coords(basis.rows(), 0);
  std::size_t col = 0;
  for (std::size_t i = 0; i < basis.rows(); ++i) {
    while (col < basis.cols() && basis(i, col) == 0) ++col;
    if (col == basis.cols()) return std::nullopt;
    Integer r;
    mpz_tdiv_r(r.get_mpz_t(), residual[col].get_mpz_t(), basis(i, col).get_mpz_t());
    if (r != 0) return std::nullopt;
    coords[i] = residual[col] / basis(i, col);
    for (std::size_t j = 0; j < basis.cols(); ++j) residual[j] -= coords[i] * basis(i, j);
  }
  if (!is_zero(residual)) return std::nullopt;
  return coords;
}

struct LatticeIndex {
  enum class Kind { Index, NotContained, RankDrop };
  Kind kind = Kind::NotContained;
  Integer index = 0;  // meaningful for Kind::Index only

  bool is_basis() const { return kind == Kind::Index && index == 1; }
};

inline std::string_view to_string(LatticeIndex::Kind k) {
  switch (k) {
    case LatticeIndex::Kind::Index: return "Index";
    case LatticeIndex::Kind::NotContained: return "NotContained";
    case LatticeIndex::Kind::RankDrop: return "RankDrop";
  }
  return "";
}

/// Index of Z-span(sub) in Z-span(ambient), computed as the product of the
/// SNF invariant factors of the change-of-basis matrix.
inline LatticeIndex sublattice_index(const std::vector<IntVector>& sub,
                                     const std::vector<IntVector>& ambient, std::size_t dim) {
  IntMatrix amb = span_basis(ambient, dim);
  IntMatrix sb = span_basis(sub, dim);
  IntMatrix change(sb.rows(), amb.rows());
  for (std::size_t i = 0; i < sb.rows(); ++i) {
    auto c = coordinates_in_hnf_basis(amb, sb.row(i));
    if (!c) return {LatticeIndex::Kind::NotContained, 0};
    for (std::size_t j = 0; j < amb.rows(); ++j) change(i, j) = (*c)[j];
  }
  if (sb.rows() < amb.rows()) return {LatticeIndex::Kind::RankDrop, 0};
  Integer index = 1;
  for (const auto& d : smith_normal_form(change).invariant_factors) index *= d;
  return {LatticeIndex::Kind::Index, index};
}

/// Saturated integer basis (HNF rows) of {x : A x = 0}.
inline IntMatrix kernel_basis(const IntMatrix& a) {
  auto hnf = hermite_normal_form(a.transposed());
  std::vector<IntVector> rows;
  for (std::size_t i = hnf.rank(); i < hnf.U.rows(); ++i) rows.push_back(hnf.U.row(i));
  return span_basis(rows, a.cols());
}

/// One rational solution x of A x = b (free variables set to zero), or
/// nullopt when the system is inconsistent.
inline std::optional<RatVector> solve_rational(const std::vector<RatVector>& a, const RatVector& b,
                                               std::size_t unknowns) {
  const std::size_t m = a.size();
  std::vector<RatVector> aug(m, RatVector(unknowns + 1));
  for (std::size_t i = 0; i < m; ++i) {
    require_same_dim(unknowns, a[i].size(), "solve_rational");
    for (std::size_t j = 0; j < unknowns; ++j) aug[i][j] = a[i][j];
    aug[i][unknowns] = b[i];
  }
  std::vector<std::size_t> pivot_cols;
  std::size_t r = 0;
  for (std::size_t c = 0; c < unknowns && r < m; ++c) {
    std::size_t p = r;
    while (p < m && aug[p][c] == 0) ++p;
    if (p == m) continue;
    std::swap(aug[p], aug[r]);
    Rational inv = 1 / aug[r][c];
    for (auto& x : aug[r]) x *= inv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r || aug[i][c] == 0) continue;
      Rational f = aug[i][c];
      for (std::size_t j = c; j <= unknowns; ++j) aug[i][j] -= f * aug[r][j];
    }
    pivot_cols.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < m; ++i)
    if (aug[i][unknowns] != 0) return std::nullopt;
  RatVector x(unknowns, 0);
  for (std::size_t i = 0; i < r; ++i) x[pivot_cols[i]] = aug[i][unknowns];
  return x;
}

/// Presentation of coker(beta^T : Z^n -> Z^r), i.e. the Gale dual of the
/// columns b_1..b_r of `beta` (an n x r matrix).
struct CokernelPresentation {
  std::size_t free_rank = 0;
  std::vector<Integer> torsion_factors;  // each >= 2, each divides the next
  IntMatrix projection;                  // (r - n) x r, HNF, annihilates the image
  IntMatrix torsion_projection;          // one row per torsion factor, read mod d_i
};

inline CokernelPresentation gale_dual(const IntMatrix& beta) {
  const std::size_t n = beta.rows();
  const std::size_t r = beta.cols();
  if (rank(beta) != n) {
    throw Error(ErrorKind::NotFullRank, "gale_dual: beta columns do not span N_R");
  }
  IntMatrix dual = beta.transposed();  // r x n, the map M -> Z^r
  auto snf = smith_normal_form(dual);
  CokernelPresentation out;
  out.free_rank = r - n;
  std::vector<IntVector> free_rows;
  for (std::size_t i = n; i < r; ++i) free_rows.push_back(snf.U.row(i));
  out.projection = span_basis(free_rows, r);
  std::vector<IntVector> torsion_rows;
  for (std::size_t i = 0; i < n; ++i) {
    const Integer& d = snf.invariant_factors[i];
    if (d < 2) continue;
    out.torsion_factors.push_back(d);
    IntVector row = snf.U.row(i);
    for (auto& x : row) {
      Integer m;
      mpz_fdiv_r(m.get_mpz_t(), x.get_mpz_t(), d.get_mpz_t());
      x = m;
    }
    torsion_rows.push_back(row);
  }
  out.torsion_projection = IntMatrix::from_rows(torsion_rows, r);
  return out;
}

}  // namespace cragged
