#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "centrep/linalg.hpp"
#include "centrep/rational.hpp"

namespace centrep {

/// Sparse element of ΛV over Q. Basis monomials are keyed by bitmask over
/// {1..n}: bit i-1 set means e_i is a factor. No zero coefficients are stored.
class Multivector {
 public:
  using Mask = std::uint32_t;

  Multivector() = default;
  explicit Multivector(std::size_t ambient_dim) : n_(ambient_dim) {}

  static Multivector scalar(std::size_t ambient_dim, const Rational& c);
  /// e_i as a multivector (1-based index).
  static Multivector basis_vector(std::size_t ambient_dim, std::size_t i);
  static Multivector from_vector(const Vec& v);

  std::size_t ambient_dim() const { return n_; }
  const std::map<Mask, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// Adds c·e_mask (merging with an existing term, dropping zeros).
  void add_term(Mask mask, const Rational& c);
  Rational coeff(Mask mask) const;

  /// -1 when mixed-grade, otherwise the common grade (0 for the zero element).
  int grade() const;
  bool is_homogeneous(std::size_t k) const;

  Multivector operator+(const Multivector& o) const;
  Multivector operator-(const Multivector& o) const;
  Multivector operator-() const;
  Multivector scaled(const Rational& c) const;

  bool operator==(const Multivector&) const = default;

 private:
  std::size_t n_ = 0;
  std::map<Mask, Rational> terms_;
};

/// Exact matrix of a nilpotent map θ: V → V together with its nilpotency index.
struct NilpotentOperator {
  Matrix matrix;              // n × n, θ e_i = Σ_j matrix[j][i] e_j
  std::size_t nilpotency_index = 0;

  /// Throws std::invalid_argument when m is not square or not nilpotent.
  static NilpotentOperator from_matrix(const Matrix& m);

  std::size_t dim() const { return matrix.rows; }
  Vec apply(const Vec& v) const { return matrix.apply(v); }
  /// θ^k v.
  Vec apply_power(const Vec& v, std::size_t k) const;
};

Multivector wedge(const Multivector& a, const Multivector& b);
Multivector power(const Multivector& omega, std::size_t k);

/// The unique derivation of ΛV extending θ.
Multivector apply_derivation(const NilpotentOperator& theta, const Multivector& w);
Multivector apply_derivation(const Matrix& theta, const Multivector& w);
Multivector apply_derivation_power(const NilpotentOperator& theta, const Multivector& w, std::size_t k);

/// Interior product i_k by the k-th basis vector of the predual (1-based).
Multivector contract(std::size_t k, const Multivector& w);
/// Interior product by a general vector z = Σ z_i e_i.
Multivector contract(const Vec& z, const Multivector& w);

Multivector grade_project(const Multivector& w, std::size_t k);

/// Monomial basis of Λ^k Q^n as bitmasks in increasing order.
std::vector<Multivector::Mask> grade_basis(std::size_t n, std::size_t k);

/// Coordinates of the grade-k part of w in grade_basis(n, k).
Vec grade_coords(const Multivector& w, std::size_t k);
Multivector from_grade_coords(std::size_t n, std::size_t k, const Vec& coords);

/// Matrix of w ↦ w ∧ omega (omega homogeneous of grade g): Λ^k → Λ^{k+g}.
Matrix wedge_matrix(const Multivector& omega, std::size_t k);
/// Matrix of the derivation θ on Λ^k (grade-preserving).
Matrix derivation_matrix(const Matrix& theta, std::size_t n, std::size_t k);

}  // namespace centrep
