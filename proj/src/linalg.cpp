#include "fss/linalg.hpp"

#include <algorithm>

namespace fss {

Vec operator+(const Vec& a, const Vec& b) {
  ensure(a.size() == b.size(), "vector size mismatch in +");
  Vec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Vec operator-(const Vec& a, const Vec& b) {
  ensure(a.size() == b.size(), "vector size mismatch in -");
  Vec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Vec scale(const Scalar& c, const Vec& v) {
  Vec r(v.size());
  for (size_t i = 0; i < v.size(); ++i) r[i] = c * v[i];
  return r;
}

Vec conj(const Vec& v) {
  Vec r(v.size());
  for (size_t i = 0; i < v.size(); ++i) r[i] = v[i].conj();
  return r;
}

bool is_zero(const Vec& v) {
  for (const auto& x : v)
    if (!x.is_zero()) return false;
  return true;
}

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = Scalar(1);
  return m;
}

Matrix Matrix::from_rows(int cols, std::span<const Vec> rows) {
  Matrix m(static_cast<int>(rows.size()), cols);
  for (int r = 0; r < m.rows; ++r) {
    ensure(static_cast<int>(rows[r].size()) == cols, "row length mismatch");
    for (int c = 0; c < cols; ++c) m.at(r, c) = rows[r][c];
  }
  return m;
}

Matrix Matrix::from_cols(int rows, std::span<const Vec> cols) {
  Matrix m(rows, static_cast<int>(cols.size()));
  for (int c = 0; c < m.cols; ++c) {
    ensure(static_cast<int>(cols[c].size()) == rows, "column length mismatch");
    for (int r = 0; r < rows; ++r) m.at(r, c) = cols[c][r];
  }
  return m;
}

Vec Matrix::row(int r) const {
  Vec v(cols);
  for (int c = 0; c < cols; ++c) v[c] = at(r, c);
  return v;
}

Vec Matrix::col(int c) const {
  Vec v(rows);
  for (int r = 0; r < rows; ++r) v[r] = at(r, c);
  return v;
}

Matrix Matrix::transpose() const {
  Matrix t(cols, rows);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) t.at(c, r) = at(r, c);
  return t;
}

Matrix Matrix::conj_transpose() const {
  Matrix t(cols, rows);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) t.at(c, r) = at(r, c).conj();
  return t;
}

bool Matrix::is_zero() const {
  for (const auto& x : a)
    if (!x.is_zero()) return false;
  return true;
}

Matrix mul(const Matrix& a, const Matrix& b) {
  ensure(a.cols == b.rows, "matrix product shape mismatch");
  Matrix r(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int k = 0; k < a.cols; ++k) {
      const Scalar& x = a.at(i, k);
      if (x.is_zero()) continue;
      for (int j = 0; j < b.cols; ++j) {
        const Scalar& y = b.at(k, j);
        if (!y.is_zero()) r.at(i, j) += x * y;
      }
    }
  return r;
}

Vec apply(const Matrix& m, const Vec& v) {
  ensure(m.cols == static_cast<int>(v.size()), "matrix apply shape mismatch");
  Vec r(m.rows);
  for (int j = 0; j < m.cols; ++j) {
    if (v[j].is_zero()) continue;
    for (int i = 0; i < m.rows; ++i) {
      const Scalar& y = m.at(i, j);
      if (!y.is_zero()) r[i] += y * v[j];
    }
  }
  return r;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  ensure(a.rows == b.rows && a.cols == b.cols, "matrix sum shape mismatch");
  Matrix r = a;
  for (size_t i = 0; i < r.a.size(); ++i) r.a[i] += b.a[i];
  return r;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  ensure(a.rows == b.rows && a.cols == b.cols, "matrix diff shape mismatch");
  Matrix r = a;
  for (size_t i = 0; i < r.a.size(); ++i) r.a[i] -= b.a[i];
  return r;
}

RowReduceResult row_reduce(const Matrix& m) {
  RowReduceResult out;
  out.rref = m;
  out.transform = Matrix::identity(m.rows);
  Matrix& A = out.rref;
  Matrix& T = out.transform;
  int lead = 0;
  for (int col = 0; col < m.cols && lead < m.rows; ++col) {
    int piv = -1;
    for (int r = lead; r < m.rows; ++r) {
      if (!A.at(r, col).is_zero()) {
        piv = r;
        break;
      }
    }
    if (piv < 0) continue;
    if (piv != lead) {
      for (int c = 0; c < A.cols; ++c) std::swap(A.at(piv, c), A.at(lead, c));
      for (int c = 0; c < T.cols; ++c) std::swap(T.at(piv, c), T.at(lead, c));
    }
    Scalar inv = A.at(lead, col).inverse();
    for (int c = col; c < A.cols; ++c) A.at(lead, c) *= inv;
    for (int c = 0; c < T.cols; ++c) T.at(lead, c) *= inv;
    for (int r = 0; r < m.rows; ++r) {
      if (r == lead) continue;
      Scalar f = A.at(r, col);
      if (f.is_zero()) continue;
      for (int c = col; c < A.cols; ++c) A.at(r, c) -= f * A.at(lead, c);
      for (int c = 0; c < T.cols; ++c) T.at(r, c) -= f * T.at(lead, c);
    }
    out.pivots.push_back(col);
    ++lead;
  }
  out.rank = lead;
  return out;
}

int rank(const Matrix& m) { return row_reduce(m).rank; }

std::optional<Vec> solve(const Matrix& m, const Vec& b) {
  ensure(m.rows == static_cast<int>(b.size()), "solve: rhs size mismatch");
  Matrix aug(m.rows, m.cols + 1);
  for (int r = 0; r < m.rows; ++r) {
    for (int c = 0; c < m.cols; ++c) aug.at(r, c) = m.at(r, c);
    aug.at(r, m.cols) = b[r];
  }
  RowReduceResult rr = row_reduce(aug);
  Vec x(m.cols);
  for (size_t k = 0; k < rr.pivots.size(); ++k) {
    if (rr.pivots[k] == m.cols) return std::nullopt;  // pivot in rhs column
    x[rr.pivots[k]] = rr.rref.at(static_cast<int>(k), m.cols);
  }
  return x;
}

Subspace Subspace::zero(int ambient) {
  Subspace s;
  s.ambient = ambient;
  s.basis = Matrix(0, ambient);
  return s;
}

Subspace Subspace::full(int ambient) {
  Subspace s;
  s.ambient = ambient;
  s.basis = Matrix::identity(ambient);
  return s;
}

Subspace Subspace::row_span(const Matrix& rows) {
  RowReduceResult rr = row_reduce(rows);
  Subspace s;
  s.ambient = rows.cols;
  s.basis = Matrix(rr.rank, rows.cols);
  for (int r = 0; r < rr.rank; ++r)
    for (int c = 0; c < rows.cols; ++c) s.basis.at(r, c) = rr.rref.at(r, c);
  return s;
}

Subspace Subspace::span(int ambient, std::span<const Vec> vectors) {
  return row_span(Matrix::from_rows(ambient, vectors));
}

bool Subspace::contains(const Vec& v) const {
  ensure(static_cast<int>(v.size()) == ambient, "contains: ambient mismatch");
  // Reduce v against the echelon rows.
  Vec w = v;
  for (int r = 0; r < basis.rows; ++r) {
    int piv = -1;
    for (int c = 0; c < ambient; ++c) {
      if (!basis.at(r, c).is_zero()) {
        piv = c;
        break;
      }
    }
    if (piv < 0) continue;
    if (w[piv].is_zero()) continue;
    Scalar f = w[piv];  // pivot entries are 1
    for (int c = piv; c < ambient; ++c) w[c] -= f * basis.at(r, c);
  }
  return fss::is_zero(w);
}

bool Subspace::contains(const Subspace& other) const {
  for (int r = 0; r < other.basis.rows; ++r)
    if (!contains(other.basis.row(r))) return false;
  return true;
}

std::vector<Vec> Subspace::vectors() const {
  std::vector<Vec> out;
  out.reserve(basis.rows);
  for (int r = 0; r < basis.rows; ++r) out.push_back(basis.row(r));
  return out;
}

Subspace kernel_basis(const Matrix& m) {
  RowReduceResult rr = row_reduce(m);
  std::vector<bool> is_pivot(m.cols, false);
  for (int p : rr.pivots) is_pivot[p] = true;
  std::vector<Vec> vecs;
  for (int c = 0; c < m.cols; ++c) {
    if (is_pivot[c]) continue;
    Vec v(m.cols);
    v[c] = Scalar(1);
    for (size_t k = 0; k < rr.pivots.size(); ++k)
      v[rr.pivots[k]] = -rr.rref.at(static_cast<int>(k), c);
    vecs.push_back(std::move(v));
  }
  return Subspace::span(m.cols, vecs);
}

Subspace sum(const Subspace& a, const Subspace& b) {
  require(a.ambient == b.ambient, "subspace sum: ambient mismatch");
  Matrix stacked(a.basis.rows + b.basis.rows, a.ambient);
  for (int r = 0; r < a.basis.rows; ++r)
    for (int c = 0; c < a.ambient; ++c) stacked.at(r, c) = a.basis.at(r, c);
  for (int r = 0; r < b.basis.rows; ++r)
    for (int c = 0; c < a.ambient; ++c) stacked.at(a.basis.rows + r, c) = b.basis.at(r, c);
  return Subspace::row_span(stacked);
}

Subspace intersect(const Subspace& a, const Subspace& b) {
  require(a.ambient == b.ambient, "subspace intersect: ambient mismatch");
  // x in a cap b  <=>  x = a^T s = b^T t; kernel of [a^T | -b^T].
  int na = a.basis.rows, nb = b.basis.rows;
  if (na == 0 || nb == 0) return Subspace::zero(a.ambient);
  Matrix sys(a.ambient, na + nb);
  for (int r = 0; r < a.ambient; ++r) {
    for (int c = 0; c < na; ++c) sys.at(r, c) = a.basis.at(c, r);
    for (int c = 0; c < nb; ++c) sys.at(r, na + c) = -b.basis.at(c, r);
  }
  Subspace ker = kernel_basis(sys);
  std::vector<Vec> vecs;
  for (int r = 0; r < ker.basis.rows; ++r) {
    Vec coef = ker.basis.row(r);
    Vec x(a.ambient);
    for (int c = 0; c < na; ++c)
      if (!coef[c].is_zero())
        for (int j = 0; j < a.ambient; ++j) x[j] += coef[c] * a.basis.at(c, j);
    vecs.push_back(std::move(x));
  }
  return Subspace::span(a.ambient, vecs);
}

Subspace preimage(const Matrix& f, const Subspace& w) {
  require(f.rows == w.ambient, "preimage: target ambient mismatch");
  // {y : Cy = 0} = span(w) where C's rows span ker of w's basis-row matrix.
  Subspace cok = kernel_basis(w.basis);
  if (cok.dim() == 0) return Subspace::full(f.cols);  // w is everything
  return kernel_basis(mul(cok.basis, f));
}

Subspace image(const Matrix& f, const Subspace& v) {
  require(f.cols == v.ambient, "image: source ambient mismatch");
  std::vector<Vec> vecs;
  for (int r = 0; r < v.basis.rows; ++r) vecs.push_back(apply(f, v.basis.row(r)));
  return Subspace::span(f.rows, vecs);
}

Subspace column_space(const Matrix& f) {
  std::vector<Vec> vecs;
  for (int c = 0; c < f.cols; ++c) vecs.push_back(f.col(c));
  return Subspace::span(f.rows, vecs);
}

QuotientBasis quotient_basis(const Subspace& v, const Subspace& w) {
  require(v.ambient == w.ambient, "quotient: ambient mismatch");
  require(v.contains(w), "quotient: denominator is not contained in numerator");
  QuotientBasis out;
  Subspace acc = w;
  for (int r = 0; r < v.basis.rows; ++r) {
    Vec cand = v.basis.row(r);
    if (acc.contains(cand)) continue;
    out.reps.push_back(cand);
    acc = sum(acc, Subspace::span(v.ambient, std::span<const Vec>(&cand, 1)));
  }
  out.dim = v.dim() - w.dim();
  ensure(static_cast<int>(out.reps.size()) == out.dim, "quotient dim bookkeeping");
  return out;
}

Expressor::Expressor(const std::vector<Vec>& reps, const Subspace& modulo, int ambient)
    : nreps(static_cast<int>(reps.size())) {
  stacked = Matrix(ambient, nreps + modulo.dim());
  for (int c = 0; c < nreps; ++c) {
    ensure(static_cast<int>(reps[c].size()) == ambient, "express: rep size");
    for (int r = 0; r < ambient; ++r) stacked.at(r, c) = reps[c][r];
  }
  for (int c = 0; c < modulo.dim(); ++c)
    for (int r = 0; r < ambient; ++r) stacked.at(r, nreps + c) = modulo.basis.at(c, r);
}

std::optional<Vec> Expressor::operator()(const Vec& v) const {
  auto x = solve(stacked, v);
  if (!x) return std::nullopt;
  Vec c(x->begin(), x->begin() + nreps);
  return c;
}

std::optional<Vec> express(const std::vector<Vec>& reps, const Subspace& modulo,
                           const Vec& v) {
  Expressor ex(reps, modulo, static_cast<int>(v.size()));
  return ex(v);
}

}  // namespace fss
