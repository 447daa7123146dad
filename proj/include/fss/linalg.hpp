#pragma once

#include <optional>
#include <span>
#include <vector>

#include "fss/scalar.hpp"

namespace fss {

using Vec = std::vector<Scalar>;

Vec operator+(const Vec& a, const Vec& b);
Vec operator-(const Vec& a, const Vec& b);
Vec scale(const Scalar& c, const Vec& v);
Vec conj(const Vec& v);
bool is_zero(const Vec& v);

// Dense matrix of Scalars. Vectors are column vectors; apply() computes M*v.
struct Matrix {
  int rows = 0, cols = 0;
  std::vector<Scalar> a;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

  static Matrix identity(int n);
  static Matrix zero(int r, int c) { return Matrix(r, c); }
  // Rows given as vectors.
  static Matrix from_rows(int cols, std::span<const Vec> rows);
  static Matrix from_cols(int rows, std::span<const Vec> cols);

  Scalar& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
  const Scalar& at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }

  Vec row(int r) const;
  Vec col(int c) const;
  Matrix transpose() const;
  Matrix conj_transpose() const;
  bool is_zero() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;
};

Matrix mul(const Matrix& a, const Matrix& b);
Vec apply(const Matrix& m, const Vec& v);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);

struct RowReduceResult {
  int rank = 0;
  Matrix rref;       // reduced row-echelon form
  Matrix transform;  // transform * input == rref
  std::vector<int> pivots;
};

// Exact Gauss-Jordan elimination. Deterministic: pivots are the first
// nonzero entries scanning down each column.
RowReduceResult row_reduce(const Matrix& m);

int rank(const Matrix& m);

// Solves m*x = b; std::nullopt when inconsistent. Free variables are set to 0,
// so the solution is the canonical one determined by the rref pivots.
std::optional<Vec> solve(const Matrix& m, const Vec& b);

// A linear subspace of Q(i)^ambient, stored as a canonical RREF row basis so
// that equal subspaces compare equal structurally.
struct Subspace {
  int ambient = 0;
  Matrix basis;  // rows are basis vectors in RREF, rank == basis.rows

  static Subspace zero(int ambient);
  static Subspace full(int ambient);
  static Subspace span(int ambient, std::span<const Vec> vectors);
  static Subspace row_span(const Matrix& rows);

  int dim() const { return basis.rows; }
  bool contains(const Vec& v) const;
  bool contains(const Subspace& other) const;
  std::vector<Vec> vectors() const;

  friend bool operator==(const Subspace&, const Subspace&) = default;
};

Subspace kernel_basis(const Matrix& m);

Subspace sum(const Subspace& a, const Subspace& b);
Subspace intersect(const Subspace& a, const Subspace& b);
// {v : f*v in w}
Subspace preimage(const Matrix& f, const Subspace& w);
// Image of the subspace under f.
Subspace image(const Matrix& f, const Subspace& v);
Subspace column_space(const Matrix& f);

struct QuotientBasis {
  int dim = 0;
  std::vector<Vec> reps;  // coset representatives extending a basis of w
};

// Representatives for v/w; requires w subseteq v. Representatives are chosen
// greedily from v's echelon basis rows, so the choice is deterministic.
QuotientBasis quotient_basis(const Subspace& v, const Subspace& w);

// Coordinates of v modulo `modulo` with respect to representatives `reps`:
// solves v = reps*c + m with m in modulo and returns c. std::nullopt when v
// does not lie in span(reps) + modulo.
std::optional<Vec> express(const std::vector<Vec>& reps, const Subspace& modulo,
                           const Vec& v);

// Precomputed variant for repeated expression against a fixed frame.
struct Expressor {
  Matrix stacked;  // columns: reps then modulo basis
  int nreps = 0;
  RowReduceResult rr;

  Expressor() = default;
  Expressor(const std::vector<Vec>& reps, const Subspace& modulo, int ambient);
  std::optional<Vec> operator()(const Vec& v) const;
};

}  // namespace fss
