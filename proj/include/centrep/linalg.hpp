#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "centrep/rational.hpp"

namespace centrep {

/// Dense matrix over Q. Row-major; all arithmetic exact.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Vec> a;  // rows × cols

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r, Vec(c, Rational(0))) {}

  static Matrix identity(std::size_t n);

  Rational& at(std::size_t i, std::size_t j) { return a[i][j]; }
  const Rational& at(std::size_t i, std::size_t j) const { return a[i][j]; }

  Vec apply(const Vec& x) const;
  Matrix mul(const Matrix& other) const;
  Matrix transpose() const;
  bool is_zero() const;

  bool operator==(const Matrix&) const = default;
};

/// A subspace of Q^n, stored as a reduced-echelon basis so that equal
/// subspaces compare equal structurally.
struct Subspace {
  std::size_t ambient_dim = 0;
  std::vector<Vec> basis;  // linearly independent rows in RREF

  std::size_t dim() const { return basis.size(); }
  bool contains(const Vec& v) const;

  bool operator==(const Subspace&) const = default;
};

/// In-place Gauss–Jordan. Returns the pivot column of each pivot row.
std::vector<std::size_t> rref(Matrix& m);

std::size_t rank(Matrix m);

/// Null space of M, reduced-echelon basis; dim = cols - rank.
Subspace kernel(const Matrix& m);

/// Some x with Mx = b (free variables zero, leftmost-pivot order), or nullopt.
std::optional<Vec> solve(const Matrix& m, const Vec& b);

bool member(const Subspace& s, const Vec& v);

/// Canonical subspace spanned by the given vectors.
Subspace span_of(const std::vector<Vec>& vectors, std::size_t ambient_dim);

/// Column space of M.
Subspace image(const Matrix& m);

// Small vector helpers used throughout.
Vec vec_zero(std::size_t n);
Vec vec_add(const Vec& x, const Vec& y);
Vec vec_sub(const Vec& x, const Vec& y);
Vec vec_scale(const Rational& c, const Vec& x);
bool vec_is_zero(const Vec& x);

}  // namespace centrep
