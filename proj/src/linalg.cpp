#include "centrep/linalg.hpp"

#include <stdexcept>

namespace centrep {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.a[i][i] = 1;
  return m;
}

Vec Matrix::apply(const Vec& x) const {
  if (x.size() != cols) throw std::invalid_argument("Matrix::apply: dimension mismatch");
  Vec y(rows, Rational(0));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      if (!centrep::is_zero(a[i][j]) && !centrep::is_zero(x[j])) y[i] += a[i][j] * x[j];
  return y;
}

Matrix Matrix::mul(const Matrix& other) const {
  if (cols != other.rows) throw std::invalid_argument("Matrix::mul: dimension mismatch");
  Matrix r(rows, other.cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t k = 0; k < cols; ++k)
      if (!centrep::is_zero(a[i][k]))
        for (std::size_t j = 0; j < other.cols; ++j)
          if (!centrep::is_zero(other.a[k][j])) r.a[i][j] += a[i][k] * other.a[k][j];
  return r;
}

Matrix Matrix::transpose() const {
  Matrix t(cols, rows);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) t.a[j][i] = a[i][j];
  return t;
}

bool Matrix::is_zero() const {
  for (const auto& row : a)
    for (const auto& x : row)
      if (!centrep::is_zero(x)) return false;
  return true;
}

std::vector<std::size_t> rref(Matrix& m) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols && row < m.rows; ++col) {
    std::size_t sel = row;
    while (sel < m.rows && is_zero(m.a[sel][col])) ++sel;
    if (sel == m.rows) continue;
    std::swap(m.a[sel], m.a[row]);
    const Rational inv = 1 / m.a[row][col];
    for (std::size_t j = col; j < m.cols; ++j) m.a[row][j] *= inv;
    for (std::size_t i = 0; i < m.rows; ++i) {
      if (i == row || is_zero(m.a[i][col])) continue;
      const Rational f = m.a[i][col];
      for (std::size_t j = col; j < m.cols; ++j) m.a[i][j] -= f * m.a[row][j];
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

std::size_t rank(Matrix m) { return rref(m).size(); }

Subspace kernel(const Matrix& m) {
  Matrix r = m;
  const auto pivots = rref(r);
  std::vector<bool> is_pivot(m.cols, false);
  for (auto p : pivots) is_pivot[p] = true;

  Subspace s;
  s.ambient_dim = m.cols;
  for (std::size_t free_col = 0; free_col < m.cols; ++free_col) {
    if (is_pivot[free_col]) continue;
    Vec v(m.cols, Rational(0));
    v[free_col] = 1;
    for (std::size_t pr = 0; pr < pivots.size(); ++pr) v[pivots[pr]] = -r.a[pr][free_col];
    s.basis.push_back(std::move(v));
  }
  // Free-column construction already yields a reduced echelon basis after
  // sorting by leading index; re-reduce to get the canonical representative.
  return span_of(s.basis, m.cols);
}

std::optional<Vec> solve(const Matrix& m, const Vec& b) {
  if (b.size() != m.rows) throw std::invalid_argument("solve: length(b) != rows");
  Matrix aug(m.rows, m.cols + 1);
  for (std::size_t i = 0; i < m.rows; ++i) {
    for (std::size_t j = 0; j < m.cols; ++j) aug.a[i][j] = m.a[i][j];
    aug.a[i][m.cols] = b[i];
  }
  const auto pivots = rref(aug);
  for (auto p : pivots)
    if (p == m.cols) return std::nullopt;  // inconsistent
  Vec x(m.cols, Rational(0));
  for (std::size_t pr = 0; pr < pivots.size(); ++pr) x[pivots[pr]] = aug.a[pr][m.cols];
  return x;
}

bool Subspace::contains(const Vec& v) const {
  if (v.size() != ambient_dim) throw std::invalid_argument("Subspace::contains: dimension mismatch");
  Vec w = v;
  for (const auto& row : basis) {
    std::size_t lead = 0;
    while (lead < ambient_dim && is_zero(row[lead])) ++lead;
    if (lead == ambient_dim) continue;
    if (!is_zero(w[lead])) {
      const Rational f = w[lead] / row[lead];
      for (std::size_t j = 0; j < ambient_dim; ++j) w[j] -= f * row[j];
    }
  }
  return vec_is_zero(w);
}

bool member(const Subspace& s, const Vec& v) { return s.contains(v); }

Subspace span_of(const std::vector<Vec>& vectors, std::size_t ambient_dim) {
  Matrix m(vectors.size(), ambient_dim);
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].size() != ambient_dim)
      throw std::invalid_argument("span_of: dimension mismatch");
    m.a[i] = vectors[i];
  }
  const auto pivots = rref(m);
  Subspace s;
  s.ambient_dim = ambient_dim;
  for (std::size_t i = 0; i < pivots.size(); ++i) s.basis.push_back(m.a[i]);
  return s;
}

Subspace image(const Matrix& m) {
  std::vector<Vec> cols;
  for (std::size_t j = 0; j < m.cols; ++j) {
    Vec c(m.rows);
    for (std::size_t i = 0; i < m.rows; ++i) c[i] = m.a[i][j];
    cols.push_back(std::move(c));
  }
  return span_of(cols, m.rows);
}

Vec vec_zero(std::size_t n) { return Vec(n, Rational(0)); }

Vec vec_add(const Vec& x, const Vec& y) {
  if (x.size() != y.size()) throw std::invalid_argument("vec_add: dimension mismatch");
  Vec z = x;
  for (std::size_t i = 0; i < y.size(); ++i) z[i] += y[i];
  return z;
}

Vec vec_sub(const Vec& x, const Vec& y) {
  if (x.size() != y.size()) throw std::invalid_argument("vec_sub: dimension mismatch");
  Vec z = x;
  for (std::size_t i = 0; i < y.size(); ++i) z[i] -= y[i];
  return z;
}

Vec vec_scale(const Rational& c, const Vec& x) {
  Vec z = x;
  for (auto& e : z) e *= c;
  return z;
}

bool vec_is_zero(const Vec& x) {
  for (const auto& e : x)
    if (!is_zero(e)) return false;
  return true;
}

}  // namespace centrep
