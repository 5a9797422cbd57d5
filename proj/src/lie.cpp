#include "centrep/lie.hpp"

#include <sstream>
#include <stdexcept>

#include "centrep/errors.hpp"

namespace centrep {

namespace {

Multivector mono(std::size_t n, Multivector::Mask mask) {
  Multivector m(n);
  m.add_term(mask, Rational(1));
  return m;
}

std::string triple_str(std::size_t i, std::size_t j, std::size_t k) {
  std::ostringstream os;
  os << "(" << i + 1 << "," << j + 1 << "," << k + 1 << ")";
  return os.str();
}

}  // namespace

void LieAlgebra::set_bracket(std::size_t i, std::size_t j, const Vec& value) {
  if (i >= j || j >= dim) throw std::invalid_argument("set_bracket: need i < j < dim");
  if (value.size() != dim) throw std::invalid_argument("set_bracket: value size mismatch");
  if (vec_is_zero(value))
    brackets.erase({i, j});
  else
    brackets[{i, j}] = value;
}

Vec LieAlgebra::bracket_basis(std::size_t i, std::size_t j) const {
  if (i == j) return vec_zero(dim);
  const bool flip = i > j;
  if (flip) std::swap(i, j);
  auto it = brackets.find({i, j});
  if (it == brackets.end()) return vec_zero(dim);
  return flip ? vec_scale(Rational(-1), it->second) : it->second;
}

Vec LieAlgebra::bracket(const Vec& x, const Vec& y) const {
  if (x.size() != dim || y.size() != dim)
    throw std::invalid_argument("bracket: vector size mismatch");
  Vec out = vec_zero(dim);
  for (const auto& [ij, c] : brackets) {
    const auto& [i, j] = ij;
    const Rational f = x[i] * y[j] - x[j] * y[i];
    if (!is_zero(f)) out = vec_add(out, vec_scale(f, c));
  }
  return out;
}

std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> check_jacobi(const LieAlgebra& l) {
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> bad;
  for (std::size_t i = 0; i < l.dim; ++i)
    for (std::size_t j = i + 1; j < l.dim; ++j)
      for (std::size_t k = j + 1; k < l.dim; ++k) {
        // Jacobiator [[i,j],k] + [[j,k],i] + [[k,i],j]
        Vec ei = vec_zero(l.dim), ej = vec_zero(l.dim), ek = vec_zero(l.dim);
        ei[i] = 1;
        ej[j] = 1;
        ek[k] = 1;
        Vec total = l.bracket(l.bracket_basis(i, j), ek);
        total = vec_add(total, l.bracket(l.bracket_basis(j, k), ei));
        total = vec_add(total, l.bracket(l.bracket_basis(k, i), ej));
        if (!vec_is_zero(total)) bad.emplace_back(i, j, k);
      }
  return bad;
}

Subspace center(const LieAlgebra& l) {
  // x central iff ad(e_i) x = 0 for all i; stack the ad matrices.
  Matrix sys(l.dim * l.dim, l.dim);
  for (std::size_t i = 0; i < l.dim; ++i)
    for (std::size_t j = 0; j < l.dim; ++j) {
      const Vec b = l.bracket_basis(i, j);  // [e_i, e_j], column j of ad(e_i)
      for (std::size_t k = 0; k < l.dim; ++k) sys.a[i * l.dim + k][j] = b[k];
    }
  return kernel(sys);
}

std::vector<Subspace> lower_central_series(const LieAlgebra& l) {
  std::vector<Subspace> series;
  Subspace cur;
  cur.ambient_dim = l.dim;
  cur.basis.clear();
  {
    std::vector<Vec> full;
    for (std::size_t i = 0; i < l.dim; ++i) {
      Vec e = vec_zero(l.dim);
      e[i] = 1;
      full.push_back(e);
    }
    cur = span_of(full, l.dim);
  }
  series.push_back(cur);
  while (true) {
    std::vector<Vec> gens;
    for (std::size_t i = 0; i < l.dim; ++i) {
      Vec ei = vec_zero(l.dim);
      ei[i] = 1;
      for (const auto& b : cur.basis) gens.push_back(l.bracket(ei, b));
    }
    const Subspace next = span_of(gens, l.dim);
    if (next == cur) break;
    series.push_back(next);
    cur = next;
    if (cur.dim() == 0) break;
  }
  return series;
}

bool is_nilpotent(const LieAlgebra& l) { return lower_central_series(l).back().dim() == 0; }

Multivector ce_d(const LieAlgebra& l, const Multivector& w) {
  const std::size_t n = l.dim;
  if (w.ambient_dim() != n) throw std::invalid_argument("ce_d: ambient dimension mismatch");
  // d on generators: d(e_k*) = -Σ_{i<j} c^k_{ij} e_i* ∧ e_j*.
  std::vector<Multivector> d1(n, Multivector(n));
  for (const auto& [ij, c] : l.brackets) {
    const auto& [i, j] = ij;
    const Multivector::Mask mask =
        (Multivector::Mask(1) << i) | (Multivector::Mask(1) << j);
    for (std::size_t k = 0; k < n; ++k)
      if (!is_zero(c[k])) d1[k].add_term(mask, -c[k]);
  }
  Multivector out(n);
  for (const auto& [mask, coeff] : w.terms()) {
    std::size_t t = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!(mask & (Multivector::Mask(1) << i))) continue;
      // antiderivation: sign (-1)^t, the grade-2 image commutes past prefixes
      const Multivector rest = mono(n, mask & ~(Multivector::Mask(1) << i));
      const Multivector term = wedge(d1[i], rest);
      out = out + term.scaled(t % 2 == 0 ? coeff : -coeff);
      ++t;
    }
  }
  return out;
}

CEComplex ce_complex(const LieAlgebra& l) {
  const std::size_t n = l.dim;
  CEComplex c;
  c.n = n;
  c.d.resize(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const auto basis = grade_basis(n, k);
    const std::size_t out_dim = k + 1 <= n ? grade_basis(n, k + 1).size() : 0;
    Matrix m(out_dim, basis.size());
    for (std::size_t col = 0; col < basis.size(); ++col) {
      const Vec img = grade_coords(ce_d(l, mono(n, basis[col])), k + 1);
      for (std::size_t row = 0; row < out_dim; ++row) m.a[row][col] = img[row];
    }
    c.d[k] = std::move(m);
  }
  for (std::size_t k = 0; k + 1 <= n; ++k)
    if (!c.d[k + 1].mul(c.d[k]).is_zero())
      throw InternalError("ce_complex: d² ≠ 0 at degree " + std::to_string(k));
  return c;
}

Cohomology cohomology(const LieAlgebra& l) {
  const CEComplex c = ce_complex(l);
  const std::size_t n = l.dim;
  Cohomology h;
  h.betti.resize(n + 1);
  h.representatives.resize(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const Subspace cocycles = kernel(c.d[k]);
    const Subspace boundaries = k == 0 ? Subspace{cocycles.ambient_dim, {}} : image(c.d[k - 1]);
    h.betti[k] = cocycles.dim() - boundaries.dim();
    std::vector<Vec> span = boundaries.basis;
    Subspace working = boundaries;
    for (const auto& v : cocycles.basis) {
      if (member(working, v)) continue;
      h.representatives[k].push_back(from_grade_coords(n, k, v));
      span.push_back(v);
      working = span_of(span, cocycles.ambient_dim);
    }
    if (h.representatives[k].size() != h.betti[k])
      throw InternalError("cohomology: representative count mismatch");
  }
  return h;
}

CentralActionReport central_action(const LieAlgebra& l) {
  const CEComplex c = ce_complex(l);
  const std::size_t n = l.dim;
  CentralActionReport rep;
  const Subspace z_space = center(l);
  for (const auto& z : z_space.basis) {
    for (std::size_t k = 1; k <= n; ++k) {
      const Subspace cocycles = kernel(c.d[k]);
      for (const auto& av : cocycles.basis) {
        const Multivector a = from_grade_coords(n, k, av);
        const Multivector iz = contract(z, a);
        if (iz.is_zero()) continue;
        bool exact;
        if (k == 1) {
          exact = false;  // nonzero scalar, B⁰ = 0
        } else {
          exact = solve(c.d[k - 2], grade_coords(iz, k - 1)).has_value();
        }
        if (!exact) {
          rep.nontrivial = true;
          rep.z = z;
          rep.degree = k;
          rep.cocycle = a;
          rep.contraction = iz;
          return rep;
        }
      }
    }
  }
  return rep;
}

LieAlgebra derivation_extension(const LieAlgebra& l, const Matrix& d_op) {
  const std::size_t n = l.dim;
  if (d_op.rows != n || d_op.cols != n)
    throw std::invalid_argument("derivation_extension: matrix size mismatch");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      Vec ei = vec_zero(n), ej = vec_zero(n);
      ei[i] = 1;
      ej[j] = 1;
      const Vec lhs = d_op.apply(l.bracket_basis(i, j));
      const Vec rhs = vec_add(l.bracket(d_op.apply(ei), ej), l.bracket(ei, d_op.apply(ej)));
      if (lhs != rhs)
        throw std::invalid_argument("derivation_extension: D is not a derivation at " +
                                    triple_str(i, j, j));
    }
  try {
    NilpotentOperator::from_matrix(d_op);
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("derivation_extension: D is not nilpotent");
  }
  LieAlgebra out;
  out.dim = n + 1;
  for (const auto& [ij, c] : l.brackets) {
    Vec v = c;
    v.push_back(Rational(0));
    out.set_bracket(ij.first, ij.second, v);
  }
  for (std::size_t i = 0; i < n; ++i) {
    // [e_i, u] = -D e_i
    Vec v = vec_zero(n + 1);
    for (std::size_t k = 0; k < n; ++k) v[k] = -d_op.a[k][i];
    out.set_bracket(i, n, v);
  }
  if (!check_jacobi(out).empty())
    throw InternalError("derivation_extension: output fails Jacobi");
  return out;
}

LieAlgebra central_extension(const LieAlgebra& l, const Multivector& omega2) {
  const std::size_t n = l.dim;
  if (omega2.ambient_dim() != n)
    throw std::invalid_argument("central_extension: ambient dimension mismatch");
  if (!omega2.is_zero() && !omega2.is_homogeneous(2))
    throw std::invalid_argument("central_extension: Ω₂ must have grade 2");
  if (!ce_d(l, omega2).is_zero())
    throw std::invalid_argument("central_extension: Ω₂ is not closed");
  LieAlgebra out;
  out.dim = n + 1;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      Vec v = l.bracket_basis(i, j);
      v.push_back(omega2.coeff((Multivector::Mask(1) << i) | (Multivector::Mask(1) << j)));
      if (!vec_is_zero(v)) out.set_bracket(i, j, v);
    }
  if (!check_jacobi(out).empty())
    throw InternalError("central_extension: output fails Jacobi despite dΩ₂ = 0");
  return out;
}

Multivector embed(const Multivector& w, std::size_t new_dim) {
  if (new_dim < w.ambient_dim())
    throw std::invalid_argument("embed: target dimension too small");
  Multivector out(new_dim);
  for (const auto& [mask, c] : w.terms()) out.add_term(mask, c);
  return out;
}

LieAlgebra build_instance_algebra(const NilpotentOperator& theta, const Vec& epsilon,
                                  const Multivector& omega) {
  const std::size_t n = theta.dim();
  if (epsilon.size() != n || omega.ambient_dim() != n)
    throw std::invalid_argument("build_instance_algebra: dimension mismatch");
  if (!omega.is_zero() && !omega.is_homogeneous(2))
    throw std::invalid_argument("build_instance_algebra: Ω must have grade 2");
  if (!apply_derivation(theta, omega).is_zero())
    throw HypothesisError("build_instance_algebra: θΩ ≠ 0");

  // W = I ⊕ Qu, I abelian, chosen so that dφ = u* ∧ θφ for φ ∈ I*:
  // [e_k, u] = Σ_m T_{km} e_m where θ e_m* = Σ_k T_{km} e_k*.
  LieAlgebra w;
  w.dim = n + 1;
  for (std::size_t k = 0; k < n; ++k) {
    Vec v = vec_zero(n + 1);
    for (std::size_t m = 0; m < n; ++m) v[m] = theta.matrix.a[k][m];
    w.set_bracket(k, n, v);
  }

  // Central extension with dz* = u*∧ε + Ω, i.e. Ω₂ = -(u*∧ε + Ω).
  const Multivector u_star = Multivector::basis_vector(n + 1, n + 1);
  const Multivector omega2 =
      (wedge(u_star, embed(Multivector::from_vector(epsilon), n + 1)) + embed(omega, n + 1))
          .scaled(Rational(-1));
  LieAlgebra out = central_extension(w, omega2);
  out.u_index = n;
  out.z_index = n + 1;
  return out;
}

bool exactness_oracle(const LieAlgebra& l, const Multivector& form) {
  if (!ce_d(l, form).is_zero())
    throw std::invalid_argument("exactness_oracle: form is not closed");
  if (form.is_zero()) return true;
  const CEComplex c = ce_complex(l);
  for (std::size_t k = 0; k <= l.dim; ++k) {
    const Multivector piece = grade_project(form, k);
    if (piece.is_zero()) continue;
    if (k == 0) return false;  // nonzero constants are never exact
    if (!solve(c.d[k - 1], grade_coords(piece, k)).has_value()) return false;
  }
  return true;
}

OmegaAssembly assemble_witness_form(const LieAlgebra& l, const Multivector& alpha,
                                    const Multivector& beta, const Multivector& gamma) {
  if (!l.u_index || !l.z_index)
    throw std::invalid_argument("assemble_witness_form: algebra lacks distinguished u, z");
  const std::size_t big = l.dim;
  const std::size_t n = big - 2;  // dim I
  if (n > 12) throw std::invalid_argument("assemble_witness_form: dimension too large");
  const Multivector u_star = Multivector::basis_vector(big, *l.u_index + 1);
  const Multivector z_star = Multivector::basis_vector(big, *l.z_index + 1);
  const Multivector base =
      wedge(z_star, wedge(u_star, embed(alpha, big)) + embed(beta, big)) + embed(gamma, big);

  const std::size_t small_masks = std::size_t(1) << n;
  const std::size_t big_masks = std::size_t(1) << big;
  auto fill_column = [&](Matrix& sys, std::size_t col, const Multivector& img) {
    for (const auto& [mask, c] : img.terms()) sys.a[mask][col] = c;
  };
  Vec rhs(big_masks, Rational(0));
  const Multivector d_base = ce_d(l, base);
  for (const auto& [mask, c] : d_base.terms()) rhs[mask] = -c;

  // First try δ alone; augment γ only when needed.
  for (int pass = 0; pass < 2; ++pass) {
    const std::size_t cols = pass == 0 ? small_masks : 2 * small_masks;
    Matrix sys(big_masks, cols);
    for (std::size_t m = 0; m < small_masks; ++m) {
      const Multivector em = mono(big, static_cast<Multivector::Mask>(m));
      fill_column(sys, m, ce_d(l, wedge(u_star, em)));
      if (pass == 1) fill_column(sys, small_masks + m, ce_d(l, em));
    }
    const auto sol = solve(sys, rhs);
    if (!sol) continue;
    OmegaAssembly out;
    out.delta = Multivector(n);
    Multivector gamma_c(big);
    Multivector delta_big(big);
    for (std::size_t m = 0; m < small_masks; ++m) {
      out.delta.add_term(static_cast<Multivector::Mask>(m), (*sol)[m]);
      delta_big.add_term(static_cast<Multivector::Mask>(m), (*sol)[m]);
      if (pass == 1)
        gamma_c.add_term(static_cast<Multivector::Mask>(m), (*sol)[small_masks + m]);
    }
    out.augmented_gamma = pass == 1 && !gamma_c.is_zero();
    out.gamma = embed(gamma, big) + gamma_c;
    out.omega_form = wedge(z_star, wedge(u_star, embed(alpha, big)) + embed(beta, big)) +
                     wedge(u_star, delta_big) + out.gamma;
    if (!ce_d(l, out.omega_form).is_zero())
      throw InternalError("assemble_witness_form: assembled form is not closed");
    return out;
  }
  throw InternalError("assemble_witness_form: closedness system unsolvable");
}

}  // namespace centrep
