#include "centrep/multivector.hpp"

#include <bit>
#include <stdexcept>

namespace centrep {

namespace {

void check_same_dim(const Multivector& a, const Multivector& b, const char* what) {
  if (a.ambient_dim() != b.ambient_dim())
    throw std::invalid_argument(std::string(what) + ": ambient dimension mismatch");
}

/// Sign of sorting the concatenation e_A · e_B, masks disjoint.
int merge_sign(Multivector::Mask a, Multivector::Mask b) {
  int inversions = 0;
  while (b) {
    const int bit = std::countr_zero(b);
    inversions += std::popcount(a >> (bit + 1));
    b &= b - 1;
  }
  return (inversions & 1) ? -1 : 1;
}

}  // namespace

Multivector Multivector::scalar(std::size_t ambient_dim, const Rational& c) {
  Multivector m(ambient_dim);
  m.add_term(0, c);
  return m;
}

Multivector Multivector::basis_vector(std::size_t ambient_dim, std::size_t i) {
  if (i < 1 || i > ambient_dim)
    throw std::out_of_range("basis_vector: index out of range");
  Multivector m(ambient_dim);
  m.add_term(Mask(1) << (i - 1), Rational(1));
  return m;
}

Multivector Multivector::from_vector(const Vec& v) {
  Multivector m(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!centrep::is_zero(v[i])) m.add_term(Mask(1) << i, v[i]);
  return m;
}

void Multivector::add_term(Mask mask, const Rational& c) {
  if (centrep::is_zero(c)) return;
  auto it = terms_.find(mask);
  if (it == terms_.end()) {
    terms_.emplace(mask, c);
  } else {
    it->second += c;
    if (centrep::is_zero(it->second)) terms_.erase(it);
  }
}

Rational Multivector::coeff(Mask mask) const {
  auto it = terms_.find(mask);
  return it == terms_.end() ? Rational(0) : it->second;
}

int Multivector::grade() const {
  if (terms_.empty()) return 0;
  int g = std::popcount(terms_.begin()->first);
  for (const auto& [mask, c] : terms_)
    if (std::popcount(mask) != g) return -1;
  return g;
}

bool Multivector::is_homogeneous(std::size_t k) const {
  for (const auto& [mask, c] : terms_)
    if (std::popcount(mask) != static_cast<int>(k)) return false;
  return true;
}

Multivector Multivector::operator+(const Multivector& o) const {
  check_same_dim(*this, o, "Multivector::operator+");
  Multivector r = *this;
  for (const auto& [mask, c] : o.terms_) r.add_term(mask, c);
  return r;
}

Multivector Multivector::operator-(const Multivector& o) const {
  check_same_dim(*this, o, "Multivector::operator-");
  Multivector r = *this;
  for (const auto& [mask, c] : o.terms_) r.add_term(mask, -c);
  return r;
}

Multivector Multivector::operator-() const { return scaled(Rational(-1)); }

Multivector Multivector::scaled(const Rational& c) const {
  Multivector r(n_);
  if (centrep::is_zero(c)) return r;
  for (const auto& [mask, x] : terms_) r.terms_.emplace(mask, c * x);
  return r;
}

NilpotentOperator NilpotentOperator::from_matrix(const Matrix& m) {
  if (m.rows != m.cols) throw std::invalid_argument("NilpotentOperator: matrix not square");
  Matrix p = m;
  std::size_t k = 1;
  while (!p.is_zero()) {
    if (k > m.rows) throw std::invalid_argument("NilpotentOperator: matrix is not nilpotent");
    p = p.mul(m);
    ++k;
  }
  return NilpotentOperator{m, k};
}

Vec NilpotentOperator::apply_power(const Vec& v, std::size_t k) const {
  Vec w = v;
  for (std::size_t i = 0; i < k; ++i) w = matrix.apply(w);
  return w;
}

Multivector wedge(const Multivector& a, const Multivector& b) {
  check_same_dim(a, b, "wedge");
  Multivector r(a.ambient_dim());
  for (const auto& [ma, ca] : a.terms()) {
    for (const auto& [mb, cb] : b.terms()) {
      if (ma & mb) continue;
      r.add_term(ma | mb, ca * cb * merge_sign(ma, mb));
    }
  }
  return r;
}

Multivector power(const Multivector& omega, std::size_t k) {
  Multivector r = Multivector::scalar(omega.ambient_dim(), Rational(1));
  for (std::size_t i = 0; i < k; ++i) r = wedge(r, omega);
  return r;
}

Multivector apply_derivation(const Matrix& theta, const Multivector& w) {
  if (theta.rows != w.ambient_dim() || theta.cols != w.ambient_dim())
    throw std::invalid_argument("apply_derivation: dimension mismatch");
  const std::size_t n = w.ambient_dim();
  Multivector r(n);
  for (const auto& [mask, c] : w.terms()) {
    Multivector::Mask rest = mask;
    while (rest) {
      const int i = std::countr_zero(rest);  // 0-based factor index
      rest &= rest - 1;
      const Multivector::Mask without = mask ^ (Multivector::Mask(1) << i);
      const int pos_i = std::popcount(mask & ((Multivector::Mask(1) << i) - 1));
      for (std::size_t j = 0; j < n; ++j) {
        const Rational& t = theta.a[j][i];
        if (is_zero(t)) continue;
        const Multivector::Mask jbit = Multivector::Mask(1) << j;
        if (without & jbit) continue;  // repeated factor
        const int pos_j = std::popcount(without & (jbit - 1));
        const int sign = ((pos_i + pos_j) & 1) ? -1 : 1;
        r.add_term(without | jbit, c * t * sign);
      }
    }
  }
  return r;
}

Multivector apply_derivation(const NilpotentOperator& theta, const Multivector& w) {
  return apply_derivation(theta.matrix, w);
}

Multivector apply_derivation_power(const NilpotentOperator& theta, const Multivector& w,
                                   std::size_t k) {
  Multivector r = w;
  for (std::size_t i = 0; i < k; ++i) r = apply_derivation(theta.matrix, r);
  return r;
}

Multivector contract(std::size_t k, const Multivector& w) {
  if (k < 1 || k > w.ambient_dim()) throw std::out_of_range("contract: index out of range");
  const Multivector::Mask bit = Multivector::Mask(1) << (k - 1);
  Multivector r(w.ambient_dim());
  for (const auto& [mask, c] : w.terms()) {
    if (!(mask & bit)) continue;
    const int pos = std::popcount(mask & (bit - 1));
    r.add_term(mask ^ bit, (pos & 1) ? -c : c);
  }
  return r;
}

Multivector contract(const Vec& z, const Multivector& w) {
  if (z.size() != w.ambient_dim())
    throw std::invalid_argument("contract: dimension mismatch");
  Multivector r(w.ambient_dim());
  for (std::size_t i = 0; i < z.size(); ++i)
    if (!is_zero(z[i])) r = r + contract(i + 1, w).scaled(z[i]);
  return r;
}

Multivector grade_project(const Multivector& w, std::size_t k) {
  Multivector r(w.ambient_dim());
  for (const auto& [mask, c] : w.terms())
    if (std::popcount(mask) == static_cast<int>(k)) r.add_term(mask, c);
  return r;
}

std::vector<Multivector::Mask> grade_basis(std::size_t n, std::size_t k) {
  std::vector<Multivector::Mask> basis;
  const Multivector::Mask limit = Multivector::Mask(1) << n;
  for (Multivector::Mask m = 0; m < limit; ++m)
    if (std::popcount(m) == static_cast<int>(k)) basis.push_back(m);
  return basis;
}

Vec grade_coords(const Multivector& w, std::size_t k) {
  const auto basis = grade_basis(w.ambient_dim(), k);
  Vec v(basis.size(), Rational(0));
  for (std::size_t i = 0; i < basis.size(); ++i) v[i] = w.coeff(basis[i]);
  return v;
}

Multivector from_grade_coords(std::size_t n, std::size_t k, const Vec& coords) {
  const auto basis = grade_basis(n, k);
  if (coords.size() != basis.size())
    throw std::invalid_argument("from_grade_coords: dimension mismatch");
  Multivector w(n);
  for (std::size_t i = 0; i < basis.size(); ++i) w.add_term(basis[i], coords[i]);
  return w;
}

Matrix wedge_matrix(const Multivector& omega, std::size_t k) {
  const std::size_t n = omega.ambient_dim();
  const int g = omega.grade();
  if (g < 0) throw std::invalid_argument("wedge_matrix: omega must be homogeneous");
  const auto dom = grade_basis(n, k);
  const auto cod = grade_basis(n, k + g);
  Matrix m(cod.size(), dom.size());
  for (std::size_t j = 0; j < dom.size(); ++j) {
    Multivector e(n);
    e.add_term(dom[j], Rational(1));
    const Vec col = grade_coords(wedge(e, omega), k + g);
    for (std::size_t i = 0; i < cod.size(); ++i) m.a[i][j] = col[i];
  }
  return m;
}

Matrix derivation_matrix(const Matrix& theta, std::size_t n, std::size_t k) {
  const auto dom = grade_basis(n, k);
  Matrix m(dom.size(), dom.size());
  for (std::size_t j = 0; j < dom.size(); ++j) {
    Multivector e(n);
    e.add_term(dom[j], Rational(1));
    const Vec col = grade_coords(apply_derivation(theta, e), k);
    for (std::size_t i = 0; i < dom.size(); ++i) m.a[i][j] = col[i];
  }
  return m;
}

}  // namespace centrep
