#include "centrep/structure.hpp"

#include <sstream>

#include "centrep/errors.hpp"

namespace centrep {

namespace {

Matrix inverse(const Matrix& m) {
  if (m.rows != m.cols) throw std::invalid_argument("inverse: matrix not square");
  const std::size_t n = m.rows;
  Matrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug.a[i][j] = m.a[i][j];
    aug.a[i][n + i] = 1;
  }
  const auto pivots = rref(aug);
  if (pivots.size() != n || pivots.back() >= n)
    throw std::invalid_argument("inverse: matrix is singular");
  Matrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv.a[i][j] = aug.a[i][n + j];
  return inv;
}

Rational bilinear(const Matrix& form, const Vec& x, const Vec& y) {
  Rational acc(0);
  for (std::size_t i = 0; i < form.rows; ++i) {
    if (is_zero(x[i])) continue;
    for (std::size_t j = 0; j < form.cols; ++j)
      if (!is_zero(form.a[i][j]) && !is_zero(y[j])) acc += x[i] * form.a[i][j] * y[j];
  }
  return acc;
}

/// n = k² · m with m free of square factors below 10⁴ (best effort beyond).
void split_square(const mpz_class& n, mpz_class& k, mpz_class& m) {
  k = 1;
  m = n;
  for (unsigned long p = 2; p <= 10000; ++p) {
    mpz_class p2 = mpz_class(p) * p;
    if (p2 > m) break;
    while (mpz_divisible_p(m.get_mpz_t(), p2.get_mpz_t())) {
      m /= p2;
      k *= p;
    }
  }
  if (mpz_perfect_square_p(m.get_mpz_t())) {
    mpz_class s;
    mpz_sqrt(s.get_mpz_t(), m.get_mpz_t());
    k *= s;
    m = 1;
  }
}

std::string describe(const Multivector& w) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [mask, c] : w.terms()) {
    if (!first) os << " + ";
    first = false;
    os << rat_to_string(c) << "*e[";
    for (std::size_t i = 0; i < w.ambient_dim(); ++i)
      if (mask & (Multivector::Mask(1) << i)) os << (i + 1) << ",";
    os << "]";
  }
  if (first) os << "0";
  return os.str();
}

}  // namespace

std::size_t omega_rank(const Multivector& omega) {
  if (omega.is_zero()) throw std::invalid_argument("omega_rank: Ω = 0");
  if (!omega.is_homogeneous(2)) throw std::invalid_argument("omega_rank: Ω not of grade 2");
  std::size_t r = 0;
  Multivector pw = omega;
  while (!pw.is_zero()) {
    ++r;
    pw = wedge(pw, omega);
  }
  return r;
}

Subspace support(const Multivector& omega) {
  const std::size_t r = omega_rank(omega);
  return kernel(wedge_matrix(power(omega, r), 1));
}

std::vector<Vec> CanonicalDecomposition::all_vectors() const {
  std::vector<Vec> out;
  for (const auto& b : uv_blocks) {
    for (const auto& x : b.u) out.push_back(x);
    for (const auto& x : b.v) out.push_back(x);
  }
  for (const auto& b : z_blocks)
    for (const auto& x : b.z) out.push_back(x);
  return out;
}

Multivector CanonicalDecomposition::reconstruct_omega() const {
  Multivector om(ambient_dim);
  for (const auto& b : uv_blocks) {
    const std::size_t len = 2 * b.l + 1;
    for (std::size_t i = 1; i <= len; ++i) {
      const Multivector t =
          wedge(Multivector::from_vector(b.u[len - i]), Multivector::from_vector(b.v[i - 1]));
      om = om + (i % 2 == 1 ? t : -t);
    }
  }
  for (const auto& b : z_blocks) {
    for (std::size_t j = 1; j <= b.m; ++j) {
      const Multivector t =
          wedge(Multivector::from_vector(b.z[2 * b.m - j]), Multivector::from_vector(b.z[j - 1]));
      om = om + t.scaled(j % 2 == 1 ? b.c : -b.c);
    }
  }
  return om;
}

std::optional<std::string> CanonicalDecomposition::check_invariants(
    const NilpotentOperator& theta, const Multivector& omega) const {
  if (p() + q() == 0) return "decomposition has no blocks";
  for (std::size_t a = 0; a < uv_blocks.size(); ++a) {
    const auto& b = uv_blocks[a];
    if (b.u.size() != 2 * b.l + 1 || b.v.size() != 2 * b.l + 1)
      return "UV block " + std::to_string(a + 1) + " has wrong chain length";
    for (const auto* chain : {&b.u, &b.v}) {
      if (!vec_is_zero(theta.apply((*chain)[0]))) return "chain bottom not annihilated by θ";
      for (std::size_t i = 1; i < chain->size(); ++i)
        if (theta.apply((*chain)[i]) != (*chain)[i - 1]) return "broken θ chain in UV block";
    }
  }
  for (std::size_t bidx = 0; bidx < z_blocks.size(); ++bidx) {
    const auto& b = z_blocks[bidx];
    if (b.m < 1 || b.z.size() != 2 * b.m)
      return "Z block " + std::to_string(bidx + 1) + " has wrong chain length";
    if (is_zero(b.c)) return "Z block coefficient is zero";
    if (!vec_is_zero(theta.apply(b.z[0]))) return "chain bottom not annihilated by θ";
    for (std::size_t j = 1; j < b.z.size(); ++j)
      if (theta.apply(b.z[j]) != b.z[j - 1]) return "broken θ chain in Z block";
  }
  const auto vecs = all_vectors();
  const Subspace spanned = span_of(vecs, ambient_dim);
  if (spanned.dim() != vecs.size()) return "adapted vectors are linearly dependent";
  if (!(spanned == support)) return "adapted vectors do not span S";
  if (!(reconstruct_omega() == omega)) return "Ω reconstruction mismatch";
  return std::nullopt;
}

CanonicalDecomposition canonical_decomposition(const NilpotentOperator& theta,
                                               const Multivector& omega) {
  const std::size_t n = omega.ambient_dim();
  if (theta.dim() != n)
    throw std::invalid_argument("canonical_decomposition: dimension mismatch");
  if (omega.is_zero() || !omega.is_homogeneous(2))
    throw std::invalid_argument("canonical_decomposition: Ω must be nonzero of grade 2");
  const Multivector t_omega = apply_derivation(theta, omega);
  if (!t_omega.is_zero())
    throw HypothesisError("canonical_decomposition: θΩ ≠ 0, θΩ = " + describe(t_omega));

  const std::size_t r = omega_rank(omega);
  const Subspace S = support(omega);
  const std::size_t sd = S.dim();
  if (sd != 2 * r) throw InternalError("support dimension is not 2r");

  // Leading indices of the RREF basis: S-coordinates of w ∈ S are just the
  // entries of w at the pivot positions.
  std::vector<std::size_t> pivots(sd);
  for (std::size_t i = 0; i < sd; ++i) {
    std::size_t lead = 0;
    while (lead < n && is_zero(S.basis[i][lead])) ++lead;
    pivots[i] = lead;
  }
  auto to_s_coords = [&](const Vec& w) {
    Vec c(sd);
    for (std::size_t i = 0; i < sd; ++i) c[i] = w[pivots[i]];
    Vec rebuilt = vec_zero(n);
    for (std::size_t i = 0; i < sd; ++i) rebuilt = vec_add(rebuilt, vec_scale(c[i], S.basis[i]));
    if (!(rebuilt == w)) throw InternalError("vector expected in S is not in S");
    return c;
  };
  auto to_v_coords = [&](const Vec& c) {
    Vec w = vec_zero(n);
    for (std::size_t i = 0; i < sd; ++i) w = vec_add(w, vec_scale(c[i], S.basis[i]));
    return w;
  };

  // θ|S in S-coordinates (S is θ-invariant because θΩ = 0).
  Matrix A(sd, sd);
  for (std::size_t j = 0; j < sd; ++j) {
    const Vec col = to_s_coords(theta.apply(S.basis[j]));
    for (std::size_t i = 0; i < sd; ++i) A.a[i][j] = col[i];
  }

  // Ω in S-coordinates: Ω = Σ_{i<j} W_ij s_i ∧ s_j.
  std::vector<std::pair<std::size_t, std::size_t>> idx_pairs;
  for (std::size_t i = 0; i < sd; ++i)
    for (std::size_t j = i + 1; j < sd; ++j) idx_pairs.emplace_back(i, j);
  const auto lam2 = grade_basis(n, 2);
  Matrix pair_mat(lam2.size(), idx_pairs.size());
  for (std::size_t col = 0; col < idx_pairs.size(); ++col) {
    const auto [i, j] = idx_pairs[col];
    const Vec wv = grade_coords(
        wedge(Multivector::from_vector(S.basis[i]), Multivector::from_vector(S.basis[j])), 2);
    for (std::size_t row = 0; row < lam2.size(); ++row) pair_mat.a[row][col] = wv[row];
  }
  const auto omega_coeffs = solve(pair_mat, grade_coords(omega, 2));
  if (!omega_coeffs) throw InternalError("Ω is not an element of Λ²S");
  Matrix W(sd, sd);
  for (std::size_t col = 0; col < idx_pairs.size(); ++col) {
    const auto [i, j] = idx_pairs[col];
    W.a[i][j] = (*omega_coeffs)[col];
    W.a[j][i] = -(*omega_coeffs)[col];
  }
  // Ω nondegenerate on S, so W is invertible. The constructed adapted basis Q
  // satisfies W = Q Ŵ Qᵀ with Ŵ the canonical block pattern, equivalently
  // Qᵀ W⁻¹ Q = Ŵ⁻¹, so all pairings below are taken in the form B = W⁻¹.
  const Matrix B = inverse(W);

  CanonicalDecomposition dec;
  dec.ambient_dim = n;
  dec.support = S;

  // Current B-nondegenerate A-invariant complement, peeled block by block.
  std::vector<Vec> cur;
  {
    const Matrix id = Matrix::identity(sd);
    for (std::size_t i = 0; i < sd; ++i) cur.push_back(id.a[i]);
  }

  while (!cur.empty()) {
    // Nilpotency index K of A on span(cur).
    std::size_t K = 0;
    {
      std::vector<Vec> imgs = cur;
      while (true) {
        bool all_zero = true;
        for (const auto& w : imgs)
          if (!vec_is_zero(w)) all_zero = false;
        if (all_zero) break;
        ++K;
        for (auto& w : imgs) w = A.apply(w);
      }
    }
    if (K == 0) throw InternalError("zero-height space in peeling loop");

    std::vector<Matrix> Apow;  // A^0 .. A^K
    Apow.push_back(Matrix::identity(sd));
    for (std::size_t t = 1; t <= K; ++t) Apow.push_back(Apow.back().mul(A));

    auto pairing = [&](std::size_t t, const Vec& x, const Vec& y) {
      return bilinear(B, Apow[t].apply(x), y);
    };

    std::vector<Vec> block;  // adapted vectors of the block, in S-coords

    if (K % 2 == 0) {
      // Even chain: self-paired Z block of length 2m = K.
      Vec x;
      bool found = false;
      for (std::size_t i = 0; i < cur.size() && !found; ++i)
        if (!is_zero(pairing(K - 1, cur[i], cur[i]))) {
          x = cur[i];
          found = true;
        }
      for (std::size_t i = 0; i < cur.size() && !found; ++i)
        for (std::size_t j = i + 1; j < cur.size() && !found; ++j)
          if (!is_zero(pairing(K - 1, cur[i], cur[j]))) {
            x = vec_add(cur[i], cur[j]);
            found = true;
          }
      if (!found) throw InternalError("no anisotropic generator for even chain length");

      // Kill the self-pairings B(A^t x, x) for odd t < K-1 by corrections
      // x += a·A^d x; offset-d corrections cannot disturb already-fixed values.
      const Rational pivot = pairing(K - 1, x, x);
      for (std::size_t d = 2; d + 1 < K; d += 2) {
        const std::size_t t = K - 1 - d;
        const Rational g = pairing(t, x, x);
        if (!is_zero(g)) x = vec_add(x, vec_scale(-g / (2 * pivot), Apow[d].apply(x)));
      }
      for (std::size_t t = 0; t + 1 < K; ++t)
        if (!is_zero(pairing(t, x, x)))
          throw InternalError("even-chain self-pairing correction failed");

      ZBlock zb;
      zb.m = K / 2;
      for (std::size_t j = 1; j <= K; ++j) zb.z.push_back(Apow[K - j].apply(x));
      Rational g = pairing(K - 1, x, x);
      // c = 1/g, then scale the chain so c becomes sign(g)·(squarefree part);
      // over Q only the square class of c is invariant, ±1 when it allows.
      mpz_class k2, m2;
      split_square(abs(g.get_num() * g.get_den()), k2, m2);
      const Rational s = Rational(g.get_den()) / Rational(k2 * m2);
      for (auto& zv : zb.z) zv = vec_scale(s, zv);
      zb.c = Rational(sgn(g)) * Rational(m2);
      // sanity: c·s² = 1/g restated as g·c·s² = 1
      if (g * zb.c * s * s != 1) throw InternalError("Z-chain normalization failed");
      for (const auto& zv : zb.z) block.push_back(zv);
      dec.z_blocks.push_back(std::move(zb));
    } else {
      // Odd chain length: two chains pairing as a (U, V) block, l = (K-1)/2.
      Vec x, y;
      bool found = false;
      for (std::size_t i = 0; i < cur.size() && !found; ++i)
        for (std::size_t j = i + 1; j < cur.size() && !found; ++j)
          if (!is_zero(pairing(K - 1, cur[i], cur[j]))) {
            x = cur[i];
            y = cur[j];
            found = true;
          }
      if (!found) throw InternalError("no dual generator pair for odd chain length");

      // Make both chains isotropic and the cross-pairings canonical. At step
      // d the only nonzero pivot is h(K-1); corrections at offset d never
      // disturb values already fixed at larger t, and the quadratic terms
      // vanish, so each equation is linear. Each correction is applied by
      // probing with coefficient 1 and scaling.
      auto fix = [&](Vec& target, const Vec& direction, const Rational& bad,
                     auto&& measure) {
        const Vec probe = vec_add(target, direction);
        const Rational delta = measure(probe) - bad;
        if (is_zero(delta)) throw InternalError("degenerate correction pivot in chain pairing");
        target = vec_add(target, vec_scale(-bad / delta, direction));
      };
      for (std::size_t d = 1; d <= K - 1; ++d) {
        const std::size_t t = K - 1 - d;
        if (t % 2 == 1) {
          const Rational gx = pairing(t, x, x);
          if (!is_zero(gx))
            fix(x, Apow[d].apply(y), gx, [&](const Vec& w) { return pairing(t, w, w); });
          const Rational gy = pairing(t, y, y);
          if (!is_zero(gy))
            fix(y, Apow[d].apply(x), gy, [&](const Vec& w) { return pairing(t, w, w); });
        }
        const Rational ht = pairing(t, x, y);
        if (!is_zero(ht))
          fix(y, Apow[d].apply(y), ht, [&](const Vec& w) { return pairing(t, x, w); });
      }
      for (std::size_t t = 0; t < K; ++t) {
        if (!is_zero(pairing(t, x, x)) || !is_zero(pairing(t, y, y)))
          throw InternalError("odd-chain isotropy correction failed");
        if (t + 1 < K && !is_zero(pairing(t, x, y)))
          throw InternalError("odd-chain cross-pairing correction failed");
      }
      const Rational h = pairing(K - 1, x, y);
      if (is_zero(h)) throw InternalError("vanishing top pairing after corrections");
      y = vec_scale(Rational(-1) / h, y);  // target B(A^{K-1}x, y) = (-1)^K = -1

      UVBlock uvb;
      uvb.l = (K - 1) / 2;
      for (std::size_t i = 1; i <= K; ++i) uvb.u.push_back(Apow[K - i].apply(x));
      for (std::size_t i = 1; i <= K; ++i) uvb.v.push_back(Apow[K - i].apply(y));
      for (const auto& w : uvb.u) block.push_back(w);
      for (const auto& w : uvb.v) block.push_back(w);
      dec.uv_blocks.push_back(std::move(uvb));
    }

    // Pass to the B-orthogonal complement of the block inside span(cur).
    Matrix constraints(block.size(), cur.size());
    for (std::size_t i = 0; i < block.size(); ++i)
      for (std::size_t j = 0; j < cur.size(); ++j)
        constraints.a[i][j] = bilinear(B, block[i], cur[j]);
    const Subspace ker = kernel(constraints);
    if (ker.dim() != cur.size() - block.size())
      throw InternalError("B-orthogonal complement has unexpected dimension");
    std::vector<Vec> next;
    for (const auto& t : ker.basis) {
      Vec w = vec_zero(sd);
      for (std::size_t j = 0; j < cur.size(); ++j) w = vec_add(w, vec_scale(t[j], cur[j]));
      next.push_back(std::move(w));
    }
    const Subspace canon = span_of(next, sd);
    cur.assign(canon.basis.begin(), canon.basis.end());
  }

  // Back to V-coordinates.
  for (auto& b : dec.uv_blocks) {
    for (auto& w : b.u) w = to_v_coords(w);
    for (auto& w : b.v) w = to_v_coords(w);
  }
  for (auto& b : dec.z_blocks)
    for (auto& w : b.z) w = to_v_coords(w);

  if (auto why = dec.check_invariants(theta, omega))
    throw InternalError("canonical decomposition invariant failed: " + *why);
  return dec;
}

Multivector beta_p(const CanonicalDecomposition& d, const PSelector& p) {
  if (p.pairs.size() != d.p())
    throw std::invalid_argument("beta_p: selector size does not match block count");
  Multivector beta = Multivector::scalar(d.ambient_dim, Rational(1));
  for (std::size_t a = 0; a < d.uv_blocks.size(); ++a) {
    const auto& b = d.uv_blocks[a];
    const auto& [ra, sa] = p.pairs[a];
    if (is_zero(ra) && is_zero(sa))
      throw std::invalid_argument("beta_p: zero selector pair");
    const Vec top = vec_add(vec_scale(ra, b.u[b.l]), vec_scale(sa, b.v[b.l]));
    beta = wedge(beta, Multivector::from_vector(top));
    for (std::size_t i = 0; i < b.l; ++i) beta = wedge(beta, Multivector::from_vector(b.u[i]));
    for (std::size_t i = 0; i < b.l; ++i) beta = wedge(beta, Multivector::from_vector(b.v[i]));
  }
  for (const auto& b : d.z_blocks)
    for (std::size_t j = 0; j < b.m; ++j) beta = wedge(beta, Multivector::from_vector(b.z[j]));
  return beta;
}

Vec adapted_coordinates(const CanonicalDecomposition& d, const Vec& xi) {
  const auto vecs = d.all_vectors();
  Matrix m(d.ambient_dim, vecs.size());
  for (std::size_t j = 0; j < vecs.size(); ++j)
    for (std::size_t i = 0; i < d.ambient_dim; ++i) m.a[i][j] = vecs[j][i];
  const auto c = solve(m, xi);
  if (!c) throw std::invalid_argument("adapted_coordinates: vector not in S");
  return *c;
}

std::optional<PSelector> sp_member(const CanonicalDecomposition& d, const Vec& xi) {
  const Vec c = adapted_coordinates(d, xi);
  PSelector p;
  std::size_t off = 0;
  for (const auto& b : d.uv_blocks) {
    const std::size_t len = 2 * b.l + 1;
    // u_1..u_len at off, v_1..v_len at off+len. Levels above l+1 must vanish.
    for (std::size_t i = b.l + 1; i < len; ++i)
      if (!is_zero(c[off + i]) || !is_zero(c[off + len + i])) return std::nullopt;
    const Rational ca = c[off + b.l];
    const Rational da = c[off + len + b.l];
    if (is_zero(ca) && is_zero(da))
      p.pairs.emplace_back(Rational(1), Rational(0));
    else
      p.pairs.emplace_back(ca, da);
    off += 2 * len;
  }
  for (const auto& b : d.z_blocks) {
    for (std::size_t j = b.m; j < 2 * b.m; ++j)
      if (!is_zero(c[off + j])) return std::nullopt;
    off += 2 * b.m;
  }
  return p;
}

Multivector omega_in_adapted_basis(const CanonicalDecomposition& d) {
  const std::size_t sd = 2 * d.rank();
  Multivector om(sd);
  std::size_t off = 0;
  for (const auto& b : d.uv_blocks) {
    const std::size_t len = 2 * b.l + 1;
    for (std::size_t i = 1; i <= len; ++i) {
      const Multivector t = wedge(Multivector::basis_vector(sd, off + (len - i) + 1),
                                  Multivector::basis_vector(sd, off + len + i));
      om = om + (i % 2 == 1 ? t : -t);
    }
    off += 2 * len;
  }
  for (const auto& b : d.z_blocks) {
    for (std::size_t j = 1; j <= b.m; ++j) {
      const Multivector t = wedge(Multivector::basis_vector(sd, off + (2 * b.m - j) + 1),
                                  Multivector::basis_vector(sd, off + j));
      om = om + t.scaled(j % 2 == 1 ? b.c : -b.c);
    }
    off += 2 * b.m;
  }
  return om;
}

Matrix lefschetz_map(const CanonicalDecomposition& d, std::size_t k) {
  const std::size_t r = d.rank();
  if (k > r) throw std::invalid_argument("lefschetz_map: k out of range");
  const Multivector om = omega_in_adapted_basis(d);
  return wedge_matrix(power(om, k), r - k);
}

Multivector substitute(const Multivector& w, const std::vector<Vec>& vectors,
                       std::size_t ambient_dim) {
  Multivector out(ambient_dim);
  for (const auto& [mask, c] : w.terms()) {
    Multivector t = Multivector::scalar(ambient_dim, c);
    for (std::size_t i = 0; i < w.ambient_dim(); ++i)
      if (mask & (Multivector::Mask(1) << i)) {
        if (i >= vectors.size()) throw std::invalid_argument("substitute: missing image vector");
        t = wedge(t, Multivector::from_vector(vectors[i]));
      }
    out = out + t;
  }
  return out;
}

}  // namespace centrep
