#include "centrep/instance.hpp"

#include <stdexcept>

#include "centrep/errors.hpp"

namespace centrep {

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

long SplitMix64::next_in(long lo, long hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<long>(next() % span);
}

Rational SplitMix64::next_rational(long bound) {
  const long num = next_in(-bound, bound);
  const long den = next_in(1, bound);
  return rat(num, den);
}

namespace {

std::optional<Matrix> inverse(const Matrix& m) {
  if (m.rows != m.cols) return std::nullopt;
  const std::size_t n = m.rows;
  Matrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug.a[i][j] = m.a[i][j];
    aug.a[i][n + i] = 1;
  }
  const auto pivots = rref(aug);
  if (pivots.size() != n || pivots.back() >= n) return std::nullopt;
  Matrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv.a[i][j] = aug.a[i][n + j];
  return inv;
}

/// θ sending e_{from} ↦ image, all unlisted generators ↦ 0 (1-based).
Matrix theta_of(std::size_t n,
                const std::vector<std::pair<std::size_t, Vec>>& images) {
  Matrix t(n, n);
  for (const auto& [from, img] : images)
    for (std::size_t k = 0; k < n; ++k) t.a[k][from - 1] = img[k];
  return t;
}

Vec e(std::size_t n, std::size_t i) {
  Vec v = vec_zero(n);
  v[i - 1] = 1;
  return v;
}

Multivector wedge_e(std::size_t n, std::size_t i, std::size_t j) {
  return wedge(Multivector::basis_vector(n, i), Multivector::basis_vector(n, j));
}

bool hypotheses_hold(const NilpotentOperator& theta, const Multivector& omega) {
  return !omega.is_zero() && omega.is_homogeneous(2) &&
         apply_derivation(theta, omega).is_zero() && !omega_in_im_theta(theta, omega);
}

}  // namespace

Instance random_instance(const InstanceSpec& spec) {
  if (spec.dim_i < 2) throw std::invalid_argument("random_instance: dim_i must be ≥ 2");
  if (spec.coefficient_bound < 1)
    throw std::invalid_argument("random_instance: coefficient_bound must be ≥ 1");
  if (spec.target_case) return targeted_instance(*spec.target_case);
  const std::size_t n = spec.dim_i;
  SplitMix64 rng(spec.seed);
  for (int attempt = 0; attempt < 200; ++attempt) {
    Matrix nil(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (rng.next_in(0, 2) != 0) nil.a[i][j] = rng.next_rational(spec.coefficient_bound);
    Matrix q(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) q.a[i][j] = rng.next_rational(spec.coefficient_bound);
    const auto q_inv = inverse(q);
    if (!q_inv) continue;
    const NilpotentOperator theta =
        NilpotentOperator::from_matrix(q.mul(nil).mul(*q_inv));

    const Subspace ker2 = kernel(derivation_matrix(theta.matrix, n, 2));
    if (ker2.dim() == 0) continue;
    bool found = false;
    Multivector omega(n);
    for (int draw = 0; draw < 20 && !found; ++draw) {
      Vec coords = vec_zero(ker2.dim());
      for (std::size_t i = 0; i < ker2.dim(); ++i)
        coords[i] = rng.next_rational(spec.coefficient_bound);
      Vec flat = vec_zero(ker2.ambient_dim);
      for (std::size_t i = 0; i < ker2.dim(); ++i)
        flat = vec_add(flat, vec_scale(coords[i], ker2.basis[i]));
      omega = from_grade_coords(n, 2, flat);
      found = hypotheses_hold(theta, omega);
    }
    if (!found) continue;
    Vec epsilon(n);
    for (std::size_t i = 0; i < n; ++i) epsilon[i] = rng.next_rational(spec.coefficient_bound);
    Instance inst{theta, epsilon, omega, spec.seed};
    return inst;
  }
  throw std::runtime_error("random_instance: resample budget exhausted");
}

Instance targeted_instance(CaseTag tag) {
  Instance inst;
  switch (tag) {
    case CaseTag::TrivialEpsZero: {
      const std::size_t n = 2;
      inst.theta = NilpotentOperator::from_matrix(Matrix(n, n));
      inst.omega = wedge_e(n, 1, 2);
      inst.epsilon = vec_zero(n);
      break;
    }
    case CaseTag::EpsInS: {
      const std::size_t n = 2;
      inst.theta = NilpotentOperator::from_matrix(Matrix(n, n));
      inst.omega = wedge_e(n, 1, 2);
      inst.epsilon = e(n, 1);
      break;
    }
    case CaseTag::EasyN: {
      const std::size_t n = 3;
      inst.theta = NilpotentOperator::from_matrix(Matrix(n, n));
      inst.omega = wedge_e(n, 1, 2);
      inst.epsilon = e(n, 3);  // θε = 0 ∈ S_P
      break;
    }
    case CaseTag::EvenM: {
      // e1..e5 = z1, z2, u, v, a1; θ: a1 ↦ z2 ↦ z1; Ω = z2∧z1 + u∧v.
      const std::size_t n = 5;
      inst.theta = NilpotentOperator::from_matrix(
          theta_of(n, {{5, e(n, 2)}, {2, e(n, 1)}}));
      inst.omega = wedge_e(n, 2, 1) + wedge_e(n, 3, 4);
      inst.epsilon = e(n, 5);
      break;
    }
    case CaseTag::OddMThetaW: {
      // e1..e7 = z1..z4, u, v, a1; θ: a1 ↦ z4 ↦ z3 ↦ z2 ↦ z1;
      // Ω = z4∧z1 − z3∧z2 + u∧v. ξ = θ³ε = z2, a top with θz2 ≠ 0.
      const std::size_t n = 7;
      inst.theta = NilpotentOperator::from_matrix(
          theta_of(n, {{7, e(n, 4)}, {4, e(n, 3)}, {3, e(n, 2)}, {2, e(n, 1)}}));
      inst.omega = wedge_e(n, 4, 1) - wedge_e(n, 3, 2) + wedge_e(n, 5, 6);
      inst.epsilon = e(n, 7);
      break;
    }
    case CaseTag::OddMZTop: {
      // e1..e6 = z1, z2, w1, w2, a1, a2; θ: a2 ↦ a1 ↦ z2 + w2, z2 ↦ z1,
      // w2 ↦ w1; Ω = z2∧z1 + w2∧w1. ξ = θ³ε = z1 + w1 (two θ-closed tops).
      const std::size_t n = 6;
      inst.theta = NilpotentOperator::from_matrix(
          theta_of(n, {{6, e(n, 5)},
                       {5, vec_add(e(n, 2), e(n, 4))},
                       {2, e(n, 1)},
                       {4, e(n, 3)}}));
      inst.omega = wedge_e(n, 2, 1) + wedge_e(n, 4, 3);
      inst.epsilon = e(n, 6);
      break;
    }
    case CaseTag::Terminal23: {
      // e1..e6 = u, v, z1, z2, a1, a2; θ: a2 ↦ a1 ↦ z2 + u, z2 ↦ z1;
      // Ω = z2∧z1 + u∧v. q = 1, m₁ = 1, l₁ = 0.
      const std::size_t n = 6;
      inst.theta = NilpotentOperator::from_matrix(
          theta_of(n, {{6, e(n, 5)}, {5, vec_add(e(n, 4), e(n, 1))}, {4, e(n, 3)}}));
      inst.omega = wedge_e(n, 4, 3) + wedge_e(n, 1, 2);
      inst.epsilon = e(n, 6);
      break;
    }
  }
  if (!hypotheses_hold(inst.theta, inst.omega))
    throw InternalError("targeted_instance: template violates the hypotheses");
  const WitnessCertificate cert = construct_witness(inst.epsilon, inst.omega, inst.theta);
  if (cert.case_tag != tag)
    throw InternalError("targeted_instance: dispatch landed on " +
                        case_tag_name(cert.case_tag) + ", expected " + case_tag_name(tag));
  return inst;
}

}  // namespace centrep
