#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "centrep/multivector.hpp"

using namespace centrep;

namespace {

Multivector e(std::size_t n, std::size_t i) { return Multivector::basis_vector(n, i); }

Multivector e(std::size_t n, std::size_t i, std::size_t j) {
  return wedge(e(n, i), e(n, j));
}

Multivector pseudo_random_mv(std::size_t n, std::size_t grade, unsigned seed) {
  Multivector w(n);
  unsigned s = seed;
  for (const auto mask : grade_basis(n, grade)) {
    s = s * 1103515245u + 12345u;
    const long c = static_cast<long>((s >> 16) % 5) - 2;
    if (c != 0) w.add_term(mask, rat(c));
  }
  return w;
}

Matrix shift_matrix(std::size_t n, std::initializer_list<std::pair<int, int>> arrows) {
  Matrix m(n, n);
  for (auto [from, to] : arrows) m.a[to - 1][from - 1] = 1;
  return m;
}

}  // namespace

TEST_CASE("wedge basics") {
  const std::size_t n = 4;
  CHECK(wedge(e(n, 1), e(n, 1)).is_zero());
  CHECK(wedge(e(n, 2), e(n, 1)) == -e(n, 1, 2));
  const Multivector omega = e(n, 1, 2) + e(n, 3, 4);
  CHECK(wedge(omega, omega) == wedge(e(n, 1, 2), e(n, 3, 4)).scaled(rat(2)));
}

TEST_CASE("power") {
  const std::size_t n = 4;
  CHECK(power(e(n, 1, 2), 2).is_zero());
  const Multivector omega = e(n, 1, 2) + e(n, 3, 4);
  CHECK(power(omega, 2) == wedge(e(n, 1, 2), e(n, 3, 4)).scaled(rat(2)));
  CHECK(power(omega, 3).is_zero());
  CHECK(power(omega, 0) == Multivector::scalar(n, rat(1)));
}

TEST_CASE("graded commutativity") {
  for (unsigned seed = 0; seed < 10; ++seed) {
    const std::size_t n = 6;
    for (std::size_t ga = 1; ga <= 3; ++ga)
      for (std::size_t gb = 1; gb <= 3; ++gb) {
        const Multivector a = pseudo_random_mv(n, ga, seed);
        const Multivector b = pseudo_random_mv(n, gb, seed + 17);
        const Multivector lhs = wedge(a, b);
        const Multivector rhs = wedge(b, a).scaled((ga * gb) % 2 == 0 ? rat(1) : rat(-1));
        CHECK(lhs == rhs);
      }
  }
}

TEST_CASE("derivation extension") {
  const std::size_t n = 3;
  const auto theta = NilpotentOperator::from_matrix(shift_matrix(n, {{2, 1}}));
  CHECK(apply_derivation(theta, e(n, 2, 3)) == e(n, 1, 3));
  CHECK(apply_derivation(theta, wedge(e(n, 2), e(n, 1))).is_zero());
}

TEST_CASE("derivation kills a canonical omega") {
  // θ(z2) = z1 on z1, z2, u, v; Ω = z2∧z1 + u∧v.
  const std::size_t n = 4;
  const auto theta = NilpotentOperator::from_matrix(shift_matrix(n, {{2, 1}}));
  const Multivector omega = wedge(e(n, 2), e(n, 1)) + e(n, 3, 4);
  CHECK(apply_derivation(theta, omega).is_zero());
}

TEST_CASE("Leibniz rule") {
  const std::size_t n = 5;
  const auto theta = NilpotentOperator::from_matrix(shift_matrix(n, {{2, 1}, {3, 2}, {5, 4}}));
  for (unsigned seed = 0; seed < 10; ++seed) {
    const Multivector a = pseudo_random_mv(n, 2, seed);
    const Multivector b = pseudo_random_mv(n, 1, seed + 31);
    const Multivector lhs = apply_derivation(theta, wedge(a, b));
    const Multivector rhs =
        wedge(apply_derivation(theta, a), b) + wedge(a, apply_derivation(theta, b));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("iterated derivation annihilates") {
  const std::size_t n = 4;
  const auto theta = NilpotentOperator::from_matrix(shift_matrix(n, {{2, 1}, {3, 2}, {4, 3}}));
  for (unsigned seed = 0; seed < 5; ++seed) {
    Multivector w = pseudo_random_mv(n, 2, seed);
    for (std::size_t i = 0; i < theta.nilpotency_index * n; ++i)
      w = apply_derivation(theta, w);
    CHECK(w.is_zero());
  }
}

TEST_CASE("contraction") {
  const std::size_t n = 3;
  CHECK(contract(1, e(n, 1)) == Multivector::scalar(n, rat(1)));
  CHECK(contract(2, e(n, 1, 3)).is_zero());
  CHECK(contract(3, e(n, 1, 3)) == -e(n, 1));
}

TEST_CASE("contraction is an antiderivation and squares to zero") {
  const std::size_t n = 5;
  for (unsigned seed = 0; seed < 10; ++seed) {
    const Multivector a = pseudo_random_mv(n, 2, seed);
    const Multivector b = pseudo_random_mv(n, 2, seed + 7);
    for (std::size_t k = 1; k <= n; ++k) {
      const Multivector lhs = contract(k, wedge(a, b));
      const Multivector rhs = wedge(contract(k, a), b) + wedge(a, contract(k, b));
      CHECK(lhs == rhs);
      CHECK(contract(k, contract(k, wedge(a, b))).is_zero());
    }
  }
}

TEST_CASE("grade projection") {
  const std::size_t n = 3;
  const Multivector mixed = Multivector::scalar(n, rat(1)) + e(n, 1, 2);
  CHECK(grade_project(mixed, 2) == e(n, 1, 2));
  CHECK(grade_project(mixed, 1).is_zero());
  CHECK(grade_project(e(n, 1) + wedge(e(n, 1, 2), e(n, 3)), 3) ==
        wedge(e(n, 1, 2), e(n, 3)));
  CHECK(mixed.grade() == -1);
  CHECK(e(n, 1, 2).grade() == 2);
}

TEST_CASE("grade coordinates round-trip") {
  const std::size_t n = 5;
  for (std::size_t k = 0; k <= n; ++k) {
    const Multivector w = pseudo_random_mv(n, k, 3);
    CHECK(from_grade_coords(n, k, grade_coords(w, k)) == w);
  }
}

TEST_CASE("operator matrices match direct application") {
  const std::size_t n = 4;
  const Multivector omega = e(n, 1, 2) + e(n, 3, 4);
  const auto theta = NilpotentOperator::from_matrix(shift_matrix(n, {{2, 1}, {4, 3}}));
  for (std::size_t k = 0; k <= 2; ++k) {
    const Matrix wm = wedge_matrix(omega, k);
    const Matrix dm = derivation_matrix(theta.matrix, n, k);
    const Multivector w = pseudo_random_mv(n, k, 11);
    CHECK(wm.apply(grade_coords(w, k)) == grade_coords(wedge(w, omega), k + 2));
    CHECK(dm.apply(grade_coords(w, k)) == grade_coords(apply_derivation(theta, w), k));
  }
}

TEST_CASE("nilpotent operator construction") {
  CHECK_THROWS_AS(NilpotentOperator::from_matrix(Matrix::identity(2)), std::invalid_argument);
  const auto theta = NilpotentOperator::from_matrix(shift_matrix(3, {{2, 1}, {3, 2}}));
  CHECK(theta.nilpotency_index == 3);
  Vec x(3, Rational(0));
  x[2] = 1;
  CHECK(theta.apply_power(x, 2)[0] == rat(1));
  CHECK(vec_is_zero(theta.apply_power(x, 3)));
}

TEST_CASE("ambient dimension mismatch is rejected") {
  CHECK_THROWS_AS(wedge(e(2, 1), e(3, 1)), std::invalid_argument);
}
