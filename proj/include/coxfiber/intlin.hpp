#pragma once

// Exact integer linear algebra over arbitrary-precision integers:
// Smith/Hermite normal forms, kernels, integer solving, and finitely
// generated abelian groups presented by relation matrices.
//
// Conventions used throughout the library: vectors are columns, matrices
// act on the left, and the composition g∘f has matrix M_g·M_f.

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace coxfiber {

using Int = mpz_class;
using Vec = std::vector<Int>;

struct DimensionMismatch : std::invalid_argument {
  explicit DimensionMismatch(const std::string& what)
      : std::invalid_argument(what) {}
};

class IntMatrix {
 public:
  IntMatrix() : rows_(0), cols_(0) {}
  IntMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), entries_(rows * cols) {}

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  // Row-major initializer, e.g. from_rows({{2,4},{6,8}}).
  static IntMatrix from_rows(const std::vector<Vec>& rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.front().size();
    IntMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
      if (rows[i].size() != c)
        throw DimensionMismatch("ragged row list in from_rows");
      for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  static IntMatrix from_columns(const std::vector<Vec>& cols) {
    const std::size_t c = cols.size();
    const std::size_t r = c == 0 ? 0 : cols.front().size();
    IntMatrix m(r, c);
    for (std::size_t j = 0; j < c; ++j) {
      if (cols[j].size() != r)
        throw DimensionMismatch("ragged column list in from_columns");
      for (std::size_t i = 0; i < r; ++i) m(i, j) = cols[j][i];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Int& operator()(std::size_t i, std::size_t j) {
    return entries_[i * cols_ + j];
  }
  const Int& operator()(std::size_t i, std::size_t j) const {
    return entries_[i * cols_ + j];
  }

  Vec column(std::size_t j) const {
    Vec v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }

  Vec row(std::size_t i) const {
    Vec v(cols_);
    for (std::size_t j = 0; j < cols_; ++j) v[j] = (*this)(i, j);
    return v;
  }

  IntMatrix transpose() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool is_zero() const {
    for (const Int& e : entries_)
      if (e != 0) return false;
    return true;
  }

  bool operator==(const IntMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && entries_ == o.entries_;
  }

  IntMatrix operator*(const IntMatrix& o) const {
    if (cols_ != o.rows_)
      throw DimensionMismatch("matrix product dimension mismatch");
    IntMatrix p(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const Int& a = (*this)(i, k);
        if (a == 0) continue;
        for (std::size_t j = 0; j < o.cols_; ++j) p(i, j) += a * o(k, j);
      }
    return p;
  }

  Vec operator*(const Vec& v) const {
    if (cols_ != v.size())
      throw DimensionMismatch("matrix-vector dimension mismatch");
    Vec r(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * v[j];
    return r;
  }

  // Horizontal concatenation [this | o].
  IntMatrix hstack(const IntMatrix& o) const {
    if (rows_ != o.rows_) throw DimensionMismatch("hstack row mismatch");
    IntMatrix m(rows_, cols_ + o.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j);
      for (std::size_t j = 0; j < o.cols_; ++j) m(i, cols_ + j) = o(i, j);
    }
    return m;
  }

  IntMatrix submatrix_rows(std::size_t first, std::size_t count) const {
    IntMatrix m(count, cols_);
    for (std::size_t i = 0; i < count; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(first + i, j);
    return m;
  }

 private:
  std::size_t rows_, cols_;
  std::vector<Int> entries_;
};

inline Vec operator+(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw DimensionMismatch("vector sum");
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Vec operator-(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw DimensionMismatch("vector difference");
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline Vec operator-(const Vec& a) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
  return r;
}

inline bool is_zero(const Vec& v) {
  for (const Int& e : v)
    if (e != 0) return false;
  return true;
}

inline Vec unit_vector(std::size_t n, std::size_t i) {
  Vec e(n);
  e[i] = 1;
  return e;
}

// gcd of all entries, nonnegative; 0 for the zero vector.
inline Int content(const Vec& v) {
  Int g = 0;
  for (const Int& e : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), e.get_mpz_t());
  return g;
}

inline Vec primitive_part(const Vec& v) {
  Int g = content(v);
  if (g == 0 || g == 1) return v;
  Vec r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i] / g;
  return r;
}

// U·M·V = S with U, V unimodular and S diagonal, nonnegative,
// d_1 | d_2 | ... with trailing zeros.
struct SmithDecomposition {
  IntMatrix u, s, v;
  std::size_t rank = 0;

  std::vector<Int> diagonal() const {
    std::vector<Int> d;
    const std::size_t n = std::min(s.rows(), s.cols());
    for (std::size_t i = 0; i < n; ++i) d.push_back(s(i, i));
    return d;
  }
};

namespace detail {

inline void swap_rows(IntMatrix& m, std::size_t a, std::size_t b) {
  for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}

inline void swap_cols(IntMatrix& m, std::size_t a, std::size_t b) {
  for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m(i, a), m(i, b));
}

// row a -= q * row b
inline void row_axpy(IntMatrix& m, std::size_t a, std::size_t b,
                     const Int& q) {
  for (std::size_t j = 0; j < m.cols(); ++j) m(a, j) -= q * m(b, j);
}

inline void col_axpy(IntMatrix& m, std::size_t a, std::size_t b,
                     const Int& q) {
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, a) -= q * m(i, b);
}

inline void negate_row(IntMatrix& m, std::size_t a) {
  for (std::size_t j = 0; j < m.cols(); ++j) m(a, j) = -m(a, j);
}

inline void negate_col(IntMatrix& m, std::size_t a) {
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, a) = -m(i, a);
}

inline Int floor_div(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

}  // namespace detail

namespace detail {

}  // namespace detail

// At every stage the pivot is the minimal nonzero absolute value of the
// working block (ties broken by lowest (row, col)) and the stage only
// finishes once the pivot divides the whole remaining block, so the
// diagonal comes out in divisibility order directly and intermediate
// entries stay small at desk scale.
inline SmithDecomposition smith_normal_form(const IntMatrix& m) {
  using namespace detail;
  SmithDecomposition d;
  d.s = m;
  d.u = IntMatrix::identity(m.rows());
  d.v = IntMatrix::identity(m.cols());
  IntMatrix& s = d.s;
  const std::size_t n = std::min(m.rows(), m.cols());

  for (std::size_t t = 0; t < n; ++t) {
    while (true) {
      // move the minimal nonzero entry of the block to (t, t)
      bool found = false;
      std::size_t pi = t, pj = t;
      Int best;
      for (std::size_t i = t; i < s.rows(); ++i)
        for (std::size_t j = t; j < s.cols(); ++j) {
          if (s(i, j) == 0) continue;
          Int a = abs(s(i, j));
          if (!found || a < best) {
            found = true;
            best = a;
            pi = i;
            pj = j;
          }
        }
      if (!found) goto done;  // block is zero: all later stages too
      if (pi != t) {
        swap_rows(s, t, pi);
        swap_rows(d.u, t, pi);
      }
      if (pj != t) {
        swap_cols(s, t, pj);
        swap_cols(d.v, t, pj);
      }

      // reduce column t; a nonzero remainder is a strictly smaller pivot
      bool restart = false;
      for (std::size_t i = t + 1; i < s.rows() && !restart; ++i) {
        if (s(i, t) == 0) continue;
        Int q = floor_div(s(i, t), s(t, t));
        row_axpy(s, i, t, q);
        row_axpy(d.u, i, t, q);
        if (s(i, t) != 0) restart = true;
      }
      if (restart) continue;
      for (std::size_t j = t + 1; j < s.cols() && !restart; ++j) {
        if (s(t, j) == 0) continue;
        Int q = floor_div(s(t, j), s(t, t));
        col_axpy(s, j, t, q);
        col_axpy(d.v, j, t, q);
        if (s(t, j) != 0) restart = true;
      }
      if (restart) continue;

      // pivot must divide the interior; otherwise pull the offending
      // row into row t and keep reducing
      bool divides = true;
      for (std::size_t i = t + 1; i < s.rows() && divides; ++i)
        for (std::size_t j = t + 1; j < s.cols() && divides; ++j)
          if (s(i, j) % s(t, t) != 0) {
            row_axpy(s, t, i, Int(-1));  // row t += row i
            row_axpy(d.u, t, i, Int(-1));
            divides = false;
          }
      if (divides) break;
    }
    if (s(t, t) < 0) {
      negate_row(s, t);
      negate_row(d.u, t);
    }
  }
done:
  d.rank = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (s(i, i) != 0) ++d.rank;
  return d;
}

// Column-style Hermite normal form of the lattice spanned by the columns.
// Pivot rows strictly increase down the columns, pivots are positive, and
// entries of a pivot row in earlier columns are reduced into [0, pivot).
// Zero columns are dropped, so equal lattices yield equal matrices.
inline IntMatrix column_hnf(const IntMatrix& m) {
  using namespace detail;
  IntMatrix a = m;
  std::size_t r = 0;  // next pivot column
  for (std::size_t i = 0; i < a.rows() && r < a.cols(); ++i) {
    // reduce row i among columns >= r until one nonzero entry remains
    while (true) {
      bool found = false;
      std::size_t pj = r;
      Int best;
      for (std::size_t j = r; j < a.cols(); ++j) {
        if (a(i, j) == 0) continue;
        Int v = abs(a(i, j));
        if (!found || v < best) {
          found = true;
          best = v;
          pj = j;
        }
      }
      if (!found) break;
      if (pj != r) swap_cols(a, r, pj);
      bool done = true;
      for (std::size_t j = r + 1; j < a.cols(); ++j) {
        if (a(i, j) == 0) continue;
        Int q = floor_div(a(i, j), a(i, r));
        col_axpy(a, j, r, q);
        if (a(i, j) != 0) done = false;
      }
      if (done) break;
    }
    if (a(i, r) == 0) continue;
    if (a(i, r) < 0) negate_col(a, r);
    // reduce earlier columns at the pivot row
    for (std::size_t j = 0; j < r; ++j) {
      Int q = floor_div(a(i, j), a(i, r));
      if (q != 0) col_axpy(a, j, r, q);
    }
    ++r;
  }
  IntMatrix h(a.rows(), r);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < r; ++j) h(i, j) = a(i, j);
  return h;
}

// Basis of the saturated kernel lattice {x : M x = 0}, columns in HNF.
inline IntMatrix kernel_basis(const IntMatrix& m) {
  SmithDecomposition d = smith_normal_form(m);
  const std::size_t k = m.cols() - d.rank;
  IntMatrix ker(m.cols(), k);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = 0; i < m.cols(); ++i)
      ker(i, j) = d.v(i, d.rank + j);
  return column_hnf(ker);
}

// Canonical coset representative of x modulo the column lattice of hnf
// (a column_hnf output): at each pivot row p the entry is reduced into
// [0, pivot).
inline Vec reduce_mod_lattice(Vec x, const IntMatrix& hnf) {
  for (std::size_t j = 0; j < hnf.cols(); ++j) {
    std::size_t p = 0;
    while (p < hnf.rows() && hnf(p, j) == 0) ++p;
    if (p == hnf.rows()) continue;
    Int q = detail::floor_div(x[p], hnf(p, j));
    if (q == 0) continue;
    for (std::size_t i = 0; i < hnf.rows(); ++i) x[i] -= q * hnf(i, j);
  }
  return x;
}

// Some integer solution of M x = b, HNF-reduced modulo ker(M) so the
// output is deterministic; nullopt when b is outside the image lattice.
inline std::optional<Vec> solve_integer(const IntMatrix& m, const Vec& b) {
  if (b.size() != m.rows())
    throw DimensionMismatch("solve_integer: rhs length mismatch");
  SmithDecomposition d = smith_normal_form(m);
  Vec c = d.u * b;
  Vec y(m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Int di = (i < std::min(m.rows(), m.cols())) ? d.s(i, i) : Int(0);
    if (di == 0) {
      if (c[i] != 0) return std::nullopt;
    } else {
      if (c[i] % di != 0) return std::nullopt;
      if (i < m.cols()) y[i] = c[i] / di;
    }
  }
  Vec x = d.v * y;
  return reduce_mod_lattice(std::move(x), kernel_basis(m));
}

inline bool lattice_member(const IntMatrix& basis, const Vec& v) {
  return solve_integer(basis, v).has_value();
}

// Basis of the intersection of the column lattices A and B.
inline IntMatrix lattice_intersection(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows())
    throw DimensionMismatch("lattice_intersection: ambient rank mismatch");
  if (a.cols() == 0 || b.cols() == 0) return IntMatrix(a.rows(), 0);
  IntMatrix neg_b(b.rows(), b.cols());
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) neg_b(i, j) = -b(i, j);
  IntMatrix ker = kernel_basis(a.hstack(neg_b));
  IntMatrix coeff(a.cols(), ker.cols());
  for (std::size_t i = 0; i < a.cols(); ++i)
    for (std::size_t j = 0; j < ker.cols(); ++j) coeff(i, j) = ker(i, j);
  return column_hnf(a * coeff);
}

// Saturation of the column lattice: span_Q(B) ∩ Z^n.
inline IntMatrix saturate(const IntMatrix& basis) {
  if (basis.cols() == 0) return IntMatrix(basis.rows(), 0);
  IntMatrix orth = kernel_basis(basis.transpose());
  return kernel_basis(orth.transpose());
}

// Finitely generated abelian group Z^ambient / (column lattice of
// relations), with normal form Z^free_rank ⊕ Z/d_1 ⊕ ... ⊕ Z/d_s.
class FGAbelianGroup {
 public:
  static FGAbelianGroup cokernel(const IntMatrix& relations) {
    FGAbelianGroup g;
    g.ambient_rank_ = relations.rows();
    g.relations_ = relations;
    SmithDecomposition d = smith_normal_form(relations);
    std::vector<std::size_t> free_rows, torsion_rows;
    for (std::size_t i = 0; i < relations.rows(); ++i) {
      Int di = (i < std::min(relations.rows(), relations.cols()))
                   ? d.s(i, i)
                   : Int(0);
      if (di == 0)
        free_rows.push_back(i);
      else if (di > 1) {
        torsion_rows.push_back(i);
        g.invariant_factors_.push_back(di);
      }
    }
    g.free_rank_ = free_rows.size();
    g.projection_ =
        IntMatrix(free_rows.size() + torsion_rows.size(), g.ambient_rank_);
    std::size_t r = 0;
    for (std::size_t i : free_rows) {
      for (std::size_t j = 0; j < g.ambient_rank_; ++j)
        g.projection_(r, j) = d.u(i, j);
      ++r;
    }
    for (std::size_t i : torsion_rows) {
      for (std::size_t j = 0; j < g.ambient_rank_; ++j)
        g.projection_(r, j) = d.u(i, j);
      ++r;
    }
    return g;
  }

  static FGAbelianGroup free_group(std::size_t rank) {
    return cokernel(IntMatrix(rank, 0));
  }

  std::size_t ambient_rank() const { return ambient_rank_; }
  const IntMatrix& relations() const { return relations_; }
  const std::vector<Int>& invariant_factors() const {
    return invariant_factors_;
  }
  std::size_t free_rank() const { return free_rank_; }
  const IntMatrix& projection() const { return projection_; }
  std::size_t normal_form_rank() const {
    return free_rank_ + invariant_factors_.size();
  }

  bool is_trivial() const {
    return free_rank_ == 0 && invariant_factors_.empty();
  }

  Int torsion_order() const {
    Int p = 1;
    for (const Int& d : invariant_factors_) p *= d;
    return p;
  }

  // Normal-form coordinates of an ambient element; torsion coordinates
  // are reduced into [0, d_i).
  Vec normal_form(const Vec& ambient) const {
    if (ambient.size() != ambient_rank_)
      throw DimensionMismatch("normal_form: ambient length mismatch");
    Vec nf = projection_ * ambient;
    for (std::size_t i = 0; i < invariant_factors_.size(); ++i) {
      std::size_t r = free_rank_ + i;
      mpz_fdiv_r(nf[r].get_mpz_t(), nf[r].get_mpz_t(),
                 invariant_factors_[i].get_mpz_t());
    }
    return nf;
  }

  bool is_zero_class(const Vec& ambient) const {
    return is_zero(normal_form(ambient));
  }

  bool same_class(const Vec& a, const Vec& b) const {
    return normal_form(a) == normal_form(b);
  }

  // An ambient representative of a normal-form element.
  Vec lift(const Vec& nf) const {
    if (nf.size() != normal_form_rank())
      throw DimensionMismatch("lift: normal form length mismatch");
    auto x = solve_integer(projection_, nf);
    if (!x) throw std::logic_error("FGAbelianGroup::lift: projection not onto");
    return *x;
  }

  bool same_invariants(const FGAbelianGroup& o) const {
    return free_rank_ == o.free_rank_ &&
           invariant_factors_ == o.invariant_factors_;
  }

 private:
  std::size_t ambient_rank_ = 0;
  IntMatrix relations_;
  std::vector<Int> invariant_factors_;
  std::size_t free_rank_ = 0;
  IntMatrix projection_;
};

inline bool is_torsion_free(const FGAbelianGroup& g) {
  return g.invariant_factors().empty();
}

struct IllDefinedHom : std::invalid_argument {
  explicit IllDefinedHom(const std::string& what)
      : std::invalid_argument(what) {}
};

// Homomorphism between f.g. abelian groups, given by a matrix on ambient
// generators. Well-definedness (relations map into relations) is checked
// at construction.
class GroupHom {
 public:
  GroupHom(FGAbelianGroup source, FGAbelianGroup target, IntMatrix matrix)
      : source_(std::move(source)),
        target_(std::move(target)),
        matrix_(std::move(matrix)) {
    if (matrix_.rows() != target_.ambient_rank() ||
        matrix_.cols() != source_.ambient_rank())
      throw DimensionMismatch("GroupHom: matrix shape mismatch");
    for (std::size_t j = 0; j < source_.relations().cols(); ++j) {
      Vec img = matrix_ * source_.relations().column(j);
      if (!target_.is_zero_class(img))
        throw IllDefinedHom("GroupHom: relation " + std::to_string(j) +
                            " does not map to zero");
    }
  }

  const FGAbelianGroup& source() const { return source_; }
  const FGAbelianGroup& target() const { return target_; }
  const IntMatrix& matrix() const { return matrix_; }

  Vec apply_ambient(const Vec& ambient) const { return matrix_ * ambient; }

  // Image in target normal form of a source normal-form element.
  Vec apply(const Vec& source_nf) const {
    return target_.normal_form(matrix_ * source_.lift(source_nf));
  }

 private:
  FGAbelianGroup source_, target_;
  IntMatrix matrix_;
};

inline GroupHom compose(const GroupHom& g, const GroupHom& f) {
  return GroupHom(f.source(), g.target(), g.matrix() * f.matrix());
}

// Decided via SNF of [matrix | target relations]: onto iff the cokernel
// of the combined image is trivial.
inline bool hom_is_surjective(const GroupHom& h) {
  IntMatrix combined = h.matrix().hstack(h.target().relations());
  return FGAbelianGroup::cokernel(combined).is_trivial();
}

// Surjective homomorphisms between groups with equal invariants are
// isomorphisms (f.g. abelian groups are Hopfian).
inline bool hom_is_isomorphism(const GroupHom& h) {
  return h.source().same_invariants(h.target()) && hom_is_surjective(h);
}

struct SubgroupQuotient {
  FGAbelianGroup subgroup;   // abstract presentation on the given generators
  FGAbelianGroup quotient;   // G / <gens>, same ambient as G
  GroupHom quotient_map;     // identity on ambient generators
};

// Subgroup of G generated by the classes of the given ambient vectors,
// together with the quotient G/<gens> and its projection.
inline SubgroupQuotient subgroup_and_quotient(const FGAbelianGroup& g,
                                              const std::vector<Vec>& gens) {
  const std::size_t n = g.ambient_rank();
  for (const Vec& v : gens)
    if (v.size() != n)
      throw DimensionMismatch("subgroup_and_quotient: generator length");
  IntMatrix genmat = IntMatrix::from_columns(gens);
  if (gens.empty()) genmat = IntMatrix(n, 0);

  // relations of the subgroup: coefficient vectors landing in <relations>
  IntMatrix ker = kernel_basis(genmat.hstack(g.relations()));
  IntMatrix sub_rel(gens.size(), ker.cols());
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = 0; j < ker.cols(); ++j) sub_rel(i, j) = ker(i, j);
  FGAbelianGroup subgroup = FGAbelianGroup::cokernel(column_hnf(sub_rel));

  FGAbelianGroup quotient =
      FGAbelianGroup::cokernel(g.relations().hstack(genmat));
  GroupHom qmap(g, quotient, IntMatrix::identity(n));
  return SubgroupQuotient{std::move(subgroup), std::move(quotient),
                          std::move(qmap)};
}

}  // namespace coxfiber
