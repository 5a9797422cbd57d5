#include "centrep/witness.hpp"

#include <map>
#include <set>
#include <sstream>

#include "centrep/errors.hpp"

namespace centrep {

namespace {

const char* kTagNames[] = {
    "trivial-eps-zero", "eps-in-S", "easy-N", "even-M",
    "odd-M-theta-w",    "odd-M-z-top", "terminal-2-3",
};

Multivector mv(const Vec& v) { return Multivector::from_vector(v); }

/// target = t·gen for a scalar t, or nullopt.
std::optional<Rational> proportionality(const Multivector& target, const Multivector& gen) {
  if (gen.is_zero())
    return target.is_zero() ? std::optional<Rational>(Rational(0)) : std::nullopt;
  const auto& [mask, c] = *gen.terms().begin();
  const Rational t = target.coeff(mask) / c;
  if (gen.scaled(t) == target) return t;
  return std::nullopt;
}

/// The ordered factor vectors of β_P: per UV block the top combination then
/// u_1..u_l, v_1..v_l; per Z block z_1..z_m. Mirrors beta_p exactly.
std::vector<Vec> beta_factors(const CanonicalDecomposition& d, const PSelector& p) {
  std::vector<Vec> factors;
  for (std::size_t a = 0; a < d.uv_blocks.size(); ++a) {
    const auto& b = d.uv_blocks[a];
    const auto& [ra, sa] = p.pairs[a];
    factors.push_back(vec_add(vec_scale(ra, b.u[b.l]), vec_scale(sa, b.v[b.l])));
    for (std::size_t i = 0; i < b.l; ++i) factors.push_back(b.u[i]);
    for (std::size_t i = 0; i < b.l; ++i) factors.push_back(b.v[i]);
  }
  for (const auto& b : d.z_blocks)
    for (std::size_t j = 0; j < b.m; ++j) factors.push_back(b.z[j]);
  return factors;
}

/// Wedge of the factor list in order, with omissions and in-place swaps.
Multivector product_of(const std::vector<Vec>& factors, std::size_t ambient_dim,
                       const std::set<std::size_t>& skip,
                       const std::map<std::size_t, Vec>& replace = {}) {
  Multivector prod = Multivector::scalar(ambient_dim, Rational(1));
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (skip.count(i)) continue;
    auto it = replace.find(i);
    prod = wedge(prod, mv(it == replace.end() ? factors[i] : it->second));
  }
  return prod;
}

/// Index of a top factor within beta_factors order.
std::size_t uv_top_factor_index(const CanonicalDecomposition& d, std::size_t a) {
  std::size_t off = 0;
  for (std::size_t i = 0; i < a; ++i) off += 2 * d.uv_blocks[i].l + 1;
  return off;
}
std::size_t z_top_factor_index(const CanonicalDecomposition& d, std::size_t b) {
  std::size_t off = 0;
  for (const auto& blk : d.uv_blocks) off += 2 * blk.l + 1;
  for (std::size_t i = 0; i < b; ++i) off += d.z_blocks[i].m;
  return off + d.z_blocks[b].m - 1;
}

struct SplitCoords {
  Vec top, bottom;
  std::vector<Rational> uv_top;  // ξ_T coefficient along r_a u_{l+1} + s_a v_{l+1}
  std::vector<Rational> z_top;   // ξ_T coefficient along z^b_{m_b}
};

SplitCoords split_coords(const CanonicalDecomposition& d, const PSelector& p, const Vec& xi) {
  if (p.pairs.size() != d.p())
    throw std::invalid_argument("split_top_bottom: selector size mismatch");
  const Vec c = adapted_coordinates(d, xi);
  SplitCoords out;
  out.top = vec_zero(d.ambient_dim);
  out.bottom = vec_zero(d.ambient_dim);
  std::size_t off = 0;
  for (std::size_t a = 0; a < d.uv_blocks.size(); ++a) {
    const auto& b = d.uv_blocks[a];
    const std::size_t len = 2 * b.l + 1;
    const auto& [ra, sa] = p.pairs[a];
    for (std::size_t i = b.l + 1; i < len; ++i)
      if (!is_zero(c[off + i]) || !is_zero(c[off + len + i]))
        throw std::invalid_argument("split_top_bottom: ξ ∉ S_P (coordinate above top level)");
    const Rational ca = c[off + b.l], da = c[off + len + b.l];
    if (ca * sa != da * ra)
      throw std::invalid_argument("split_top_bottom: ξ ∉ S_P (level l+1 pair not parallel to P)");
    const Rational t = !is_zero(ra) ? ca / ra : da / sa;
    out.uv_top.push_back(t);
    const Vec w = vec_add(vec_scale(ra, b.u[b.l]), vec_scale(sa, b.v[b.l]));
    out.top = vec_add(out.top, vec_scale(t, w));
    for (std::size_t i = 0; i < b.l; ++i) {
      out.bottom = vec_add(out.bottom, vec_scale(c[off + i], b.u[i]));
      out.bottom = vec_add(out.bottom, vec_scale(c[off + len + i], b.v[i]));
    }
    off += 2 * len;
  }
  for (const auto& b : d.z_blocks) {
    for (std::size_t j = b.m; j < 2 * b.m; ++j)
      if (!is_zero(c[off + j]))
        throw std::invalid_argument("split_top_bottom: ξ ∉ S_P (coordinate above z_m)");
    out.z_top.push_back(c[off + b.m - 1]);
    out.top = vec_add(out.top, vec_scale(c[off + b.m - 1], b.z[b.m - 1]));
    for (std::size_t j = 0; j + 1 < b.m; ++j)
      out.bottom = vec_add(out.bottom, vec_scale(c[off + j], b.z[j]));
    off += 2 * b.m;
  }
  return out;
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

std::string case_tag_name(CaseTag tag) { return kTagNames[static_cast<int>(tag)]; }

std::optional<CaseTag> case_tag_parse(const std::string& name) {
  for (int i = 0; i < 7; ++i)
    if (name == kTagNames[i]) return static_cast<CaseTag>(i);
  return std::nullopt;
}

std::variant<EasyCase, StepData> find_steps(const Vec& epsilon, const NilpotentOperator& theta,
                                            const CanonicalDecomposition& d) {
  if (vec_is_zero(epsilon)) throw std::invalid_argument("find_steps: ε = 0");
  if (member(d.support, epsilon)) throw std::invalid_argument("find_steps: ε ∈ S");
  const std::size_t limit = theta.nilpotency_index + 1;
  std::size_t n_step = 0;
  Vec cur = epsilon;
  for (std::size_t k = 1; k <= limit; ++k) {
    cur = theta.apply(cur);
    if (member(d.support, cur)) {
      n_step = k;
      break;
    }
  }
  if (n_step == 0) throw InternalError("find_steps: θ^k ε never entered S");

  if (auto p = sp_member(d, cur)) return EasyCase{n_step, *p};

  Vec xi = cur;
  for (std::size_t k = n_step + 1; k <= limit; ++k) {
    xi = theta.apply(xi);
    if (auto p = sp_member(d, xi)) {
      if (vec_is_zero(xi))
        throw InternalError("find_steps: ξ = 0 (contradicts the minimality of M)");
      StepData s;
      s.N = n_step;
      s.M = k;
      s.P = *p;
      s.xi = xi;
      auto [top, bottom] = split_top_bottom(d, *p, xi);
      if (vec_is_zero(top)) throw InternalError("find_steps: ξ_top = 0");
      s.xi_top = std::move(top);
      s.xi_bottom = std::move(bottom);
      return s;
    }
  }
  throw InternalError("find_steps: no M found before θ annihilated ε");
}

std::pair<Vec, Vec> split_top_bottom(const CanonicalDecomposition& d, const PSelector& p,
                                     const Vec& xi) {
  const SplitCoords s = split_coords(d, p, xi);
  return {s.top, s.bottom};
}

bool omega_in_im_theta(const NilpotentOperator& theta, const Multivector& omega) {
  return solve(derivation_matrix(theta.matrix, omega.ambient_dim(), 2), grade_coords(omega, 2))
      .has_value();
}

std::optional<std::pair<Multivector, Multivector>> solve_condition_d(
    const Multivector& beta, const Vec& epsilon, const Multivector& omega,
    const NilpotentOperator& theta) {
  const std::size_t n = omega.ambient_dim();
  if (n > 12) throw std::invalid_argument("solve_condition_d: dimension too large");
  const std::size_t full = std::size_t(1) << n;
  // Unknown coefficients: α over all masks, then γ over all masks.
  Matrix sys(full, 2 * full);
  for (std::size_t m = 0; m < full; ++m) {
    Multivector e(n);
    e.add_term(static_cast<Multivector::Mask>(m), Rational(1));
    const Multivector col_a = wedge(omega, e);
    for (const auto& [mask, c] : col_a.terms()) sys.a[mask][m] = c;
    const Multivector col_g = apply_derivation(theta, e);
    for (const auto& [mask, c] : col_g.terms()) sys.a[mask][full + m] = -c;
  }
  Vec rhs(full, Rational(0));
  const Multivector eb = wedge(mv(epsilon), beta);
  for (const auto& [mask, c] : eb.terms()) rhs[mask] = -c;
  const auto sol = solve(sys, rhs);
  if (!sol) return std::nullopt;
  Multivector alpha(n), gamma(n);
  for (std::size_t m = 0; m < full; ++m) {
    alpha.add_term(static_cast<Multivector::Mask>(m), (*sol)[m]);
    gamma.add_term(static_cast<Multivector::Mask>(m), (*sol)[full + m]);
  }
  return std::make_pair(alpha, gamma);
}

std::pair<Multivector, Multivector> find_lambda_nu(const Multivector& sigma, const Vec& phi,
                                                   std::size_t p) {
  const std::size_t n = 2 * p;
  if (p < 1) throw std::invalid_argument("find_lambda_nu: p must be ≥ 1");
  if (sigma.ambient_dim() != n || phi.size() != n)
    throw std::invalid_argument("find_lambda_nu: dimension mismatch");

  Multivector eta(n);
  const Multivector phi_mv = mv(phi);
  if (p == 1) {
    eta = sigma;
  } else if (vec_is_zero(phi)) {
    // μ_Σ : Λ^{p+1} → Λ^{p+3} has a nontrivial kernel by dimension count.
    const Subspace ker = kernel(wedge_matrix(sigma, p + 1));
    if (ker.dim() == 0) throw InternalError("find_lambda_nu: expected kernel is trivial");
    eta = from_grade_coords(n, p + 1, ker.basis[0]);
  } else {
    // η = φζ with Σζ ∈ φΛ^{p+1} and ζ ∉ φΛ^{p-1}.
    const Matrix mu_sigma = wedge_matrix(sigma, p);         // Λ^p → Λ^{p+2}
    const Matrix mu_phi_up = wedge_matrix(phi_mv, p + 1);   // Λ^{p+1} → Λ^{p+2}
    Matrix joint(mu_sigma.rows, mu_sigma.cols + mu_phi_up.cols);
    for (std::size_t i = 0; i < joint.rows; ++i) {
      for (std::size_t j = 0; j < mu_sigma.cols; ++j) joint.a[i][j] = mu_sigma.a[i][j];
      for (std::size_t j = 0; j < mu_phi_up.cols; ++j)
        joint.a[i][mu_sigma.cols + j] = -mu_phi_up.a[i][j];
    }
    const Subspace ker = kernel(joint);
    const Subspace phi_low = image(wedge_matrix(phi_mv, p - 1));  // φΛ^{p-1} ⊂ Λ^p
    bool found = false;
    for (const auto& kv : ker.basis) {
      Vec zeta(kv.begin(), kv.begin() + mu_sigma.cols);
      if (vec_is_zero(zeta) || member(phi_low, zeta)) continue;
      eta = wedge(phi_mv, from_grade_coords(n, p, zeta));
      if (!eta.is_zero()) {
        found = true;
        break;
      }
    }
    if (!found) throw InternalError("find_lambda_nu: no admissible ζ (dimension surplus failed)");
  }

  if (eta.is_zero() || !wedge(sigma, eta).is_zero() || !wedge(phi_mv, eta).is_zero())
    throw InternalError("find_lambda_nu: η fails Ση = φη = 0");

  // λ = μ_Σ^{-1} η, using that μ_Σ: Λ^{p-1} → Λ^{p+1} is an isomorphism.
  const auto lam_coords = solve(wedge_matrix(sigma, p - 1), grade_coords(eta, p + 1));
  if (!lam_coords) throw InternalError("find_lambda_nu: μ_Σ not surjective onto η");
  const Multivector lambda = from_grade_coords(n, p - 1, *lam_coords);
  if (lambda.is_zero() || !wedge(power(sigma, 2), lambda).is_zero() ||
      !wedge(sigma, wedge(phi_mv, lambda)).is_zero())
    throw InternalError("find_lambda_nu: λ fails Σ²λ = Σφλ = 0");
  const Multivector nu = wedge(phi_mv, lambda).scaled(Rational(-2));
  return {lambda, nu};
}

CheckReport verify_certificate(const WitnessCertificate& cert, const Vec& epsilon,
                               const Multivector& omega, const NilpotentOperator& theta) {
  CheckReport rep;
  std::ostringstream detail;
  const std::size_t n = omega.ambient_dim();

  const Multivector ob = wedge(omega, cert.beta);
  rep.checks.a = ob.is_zero();
  if (!rep.checks.a) detail << "(A) Ωβ = " << describe(ob) << "\n";

  // (B): β ∈ im μ_Ω iff every graded piece is, since μ_Ω is graded of degree 2.
  bool in_image = true;
  for (std::size_t k = 0; k <= n && in_image; ++k) {
    const Multivector bk = grade_project(cert.beta, k);
    if (bk.is_zero()) continue;
    if (k < 2) {
      in_image = false;
      break;
    }
    in_image = solve(wedge_matrix(omega, k - 2), grade_coords(bk, k)).has_value();
  }
  rep.checks.b = !in_image;
  if (!rep.checks.b) detail << "(B) β lies in im μ_Ω\n";

  const Multivector tb = apply_derivation(theta, cert.beta);
  rep.checks.c = tb.is_zero();
  if (!rep.checks.c) detail << "(C) θβ = " << describe(tb) << "\n";

  const Multivector lhs = wedge(mv(epsilon), cert.beta) + wedge(omega, cert.alpha);
  const Multivector rhs = apply_derivation(theta, cert.gamma);
  rep.checks.d = lhs == rhs;
  if (!rep.checks.d) detail << "(D) residual εβ + Ωα - θγ = " << describe(lhs - rhs) << "\n";

  rep.detail = detail.str();
  return rep;
}

namespace {

/// γ = t·gamma_gen with θ(t·gamma_gen) = target, or fall back to the generic
/// linear solve (flagged).
void resolve_gamma(WitnessCertificate& cert, const Multivector& target,
                   const Multivector& gamma_gen, const Vec& epsilon, const Multivector& omega,
                   const NilpotentOperator& theta) {
  const Multivector g = apply_derivation(theta, gamma_gen);
  if (auto t = proportionality(target, g)) {
    cert.gamma = gamma_gen.scaled(*t);
    return;
  }
  cert.used_fallback = true;
  if (auto sol = solve_condition_d(cert.beta, epsilon, omega, theta)) {
    cert.alpha = sol->first;
    cert.gamma = sol->second;
  }
}

}  // namespace

WitnessCertificate construct_witness(const Vec& epsilon, const Multivector& omega,
                                     const NilpotentOperator& theta) {
  const std::size_t n = omega.ambient_dim();
  if (theta.dim() != n || epsilon.size() != n)
    throw std::invalid_argument("construct_witness: dimension mismatch");
  if (omega.is_zero() || !omega.is_homogeneous(2))
    throw HypothesisError("construct_witness: Ω must be nonzero of grade 2");
  const Multivector t_omega = apply_derivation(theta, omega);
  if (!t_omega.is_zero())
    throw HypothesisError("construct_witness: θΩ ≠ 0, θΩ = " + describe(t_omega));
  if (omega_in_im_theta(theta, omega))
    throw HypothesisError("construct_witness: Ω ∈ im θ");

  const CanonicalDecomposition dec = canonical_decomposition(theta, omega);
  WitnessCertificate cert;
  cert.alpha = Multivector(n);
  cert.gamma = Multivector(n);

  PSelector all_ones;
  for (std::size_t a = 0; a < dec.p(); ++a) all_ones.pairs.emplace_back(Rational(1), Rational(0));

  if (vec_is_zero(epsilon)) {
    cert.case_tag = CaseTag::TrivialEpsZero;
    cert.P = all_ones;
    cert.beta = beta_p(dec, all_ones);
  } else if (member(dec.support, epsilon)) {
    cert.case_tag = CaseTag::EpsInS;
    cert.P = all_ones;
    cert.beta = beta_p(dec, all_ones);
    // εβ_P ∈ im μ_Ω by the Lefschetz isomorphism; take γ = 0, Ωα = -εβ.
    const Multivector eb = wedge(mv(epsilon), cert.beta);
    const std::size_t r = dec.rank();
    if (!eb.is_zero()) {
      const auto a_coords = solve(wedge_matrix(omega, r - 1), grade_coords(eb, r + 1));
      if (!a_coords) throw InternalError("eps-in-S: εβ_P not in im μ_Ω");
      cert.alpha = from_grade_coords(n, r - 1, *a_coords).scaled(Rational(-1));
    }
  } else {
    const auto steps = find_steps(epsilon, theta, dec);
    if (std::holds_alternative<EasyCase>(steps)) {
      const auto& easy = std::get<EasyCase>(steps);
      cert.case_tag = CaseTag::EasyN;
      cert.N = easy.N;
      cert.P = easy.P;
      Multivector chain = Multivector::scalar(n, Rational(1));
      for (std::size_t i = 0; i < easy.N; ++i)
        chain = wedge(chain, mv(theta.apply_power(epsilon, i)));
      cert.beta = wedge(chain, beta_p(dec, easy.P));
    } else {
      const auto& sd = std::get<StepData>(steps);
      cert.N = sd.N;
      cert.M = sd.M;
      cert.P = sd.P;
      const auto factors = beta_factors(dec, sd.P);
      const SplitCoords sc = split_coords(dec, sd.P, sd.xi);
      const Multivector beta = beta_p(dec, sd.P);
      auto theta_eps = [&](std::size_t k) { return mv(theta.apply_power(epsilon, k)); };

      // Eligible top vectors in deterministic block order: UV blocks first.
      struct Top {
        std::size_t factor_idx;
        Rational coeff;
        bool theta_nonzero;
        bool is_z;
        std::size_t block;
      };
      std::vector<Top> tops;
      for (std::size_t a = 0; a < dec.p(); ++a)
        tops.push_back({uv_top_factor_index(dec, a), sc.uv_top[a], dec.uv_blocks[a].l > 0,
                        false, a});
      for (std::size_t b = 0; b < dec.q(); ++b)
        tops.push_back({z_top_factor_index(dec, b), sc.z_top[b], dec.z_blocks[b].m > 1,
                        true, b});

      if (sd.M % 2 == 0) {
        // Case 1: M even. β = β_P, γ from the telescoping sum times σ.
        cert.case_tag = CaseTag::EvenM;
        cert.beta = beta;
        const Top* w = nullptr;
        for (const auto& t : tops)
          if (!is_zero(t.coeff)) {
            w = &t;
            break;
          }
        if (!w) throw InternalError("even-M: ξ_top has no nonzero top coefficient");
        const Multivector sigma = product_of(factors, n, {w->factor_idx});
        Multivector delta(n);
        for (std::size_t i = 0; i < sd.M / 2; ++i) {
          const Multivector term = wedge(theta_eps(i), theta_eps(sd.M - 1 - i));
          delta = delta + (i % 2 == 0 ? term : -term);
        }
        resolve_gamma(cert, wedge(mv(epsilon), beta), wedge(delta, sigma), epsilon, omega, theta);
      } else {
        const Top* w = nullptr;
        for (const auto& t : tops)
          if (!is_zero(t.coeff) && t.theta_nonzero) {
            w = &t;
            break;
          }
        const std::size_t K = (sd.M - 1) / 2;
        if (w) {
          // Case 2.1: some top with θw ≠ 0 appears in ξ_T.
          cert.case_tag = CaseTag::OddMThetaW;
          cert.beta = beta;
          std::set<std::size_t> skip{w->factor_idx};
          if (w->is_z) {
            // drop z_m and z_{m-1}
            skip.insert(w->factor_idx - 1);
          } else {
            // drop the combination and u_l (r ≠ 0) or v_l (r = 0)
            const auto& blk = dec.uv_blocks[w->block];
            const auto& [ra, sa] = sd.P.pairs[w->block];
            const std::size_t base = uv_top_factor_index(dec, w->block);
            skip.insert(!is_zero(ra) ? base + blk.l : base + blk.l + blk.l);
          }
          const Multivector sigma = product_of(factors, n, skip);
          Multivector rho = wedge(theta_eps(sd.M), theta_eps(K + 1));
          Multivector delta(n);
          for (std::size_t i = 0; i <= K; ++i) {
            const Multivector term =
                wedge(theta_eps(i), apply_derivation_power(theta, rho, K - i));
            delta = delta + (i % 2 == 0 ? term : -term);
          }
          resolve_gamma(cert, wedge(mv(epsilon), beta), wedge(delta, sigma), epsilon, omega,
                        theta);
        } else {
          // All tops appearing in ξ_T are θ-closed: Case 2.2 or 2.3.
          for (std::size_t a = 0; a < dec.p(); ++a)
            if (!is_zero(sc.uv_top[a]))
              throw InternalError("odd M: ξ_T has a θ-closed UV top (contradicts ξ ∈ θS)");
          bool all_l_zero = true;
          for (const auto& b : dec.uv_blocks)
            if (b.l > 0) all_l_zero = false;
          const bool terminal =
              dec.q() == 1 && dec.z_blocks[0].m == 1 && all_l_zero;
          if (!terminal) {
            // Case 2.2. Relabelled block 1 = first m_b = 1 block in ξ_T.
            cert.case_tag = CaseTag::OddMZTop;
            cert.beta = beta;
            std::size_t b1 = dec.q();
            for (std::size_t b = 0; b < dec.q(); ++b)
              if (dec.z_blocks[b].m == 1 && !is_zero(sc.z_top[b])) {
                b1 = b;
                break;
              }
            if (b1 == dec.q())
              throw InternalError("odd-M-z-top: no m_b = 1 block carries ξ_T");
            const std::set<std::size_t> skip{z_top_factor_index(dec, b1)};
            const Multivector sigma = product_of(factors, n, skip);
            std::map<std::size_t, Vec> replace;
            if (dec.q() > 1) {
              std::size_t b2 = b1 == 0 ? 1 : 0;
              replace[z_top_factor_index(dec, b2)] = dec.z_blocks[b2].z[dec.z_blocks[b2].m];
            } else {
              std::size_t a2 = dec.p();
              for (std::size_t a = 0; a < dec.p(); ++a)
                if (dec.uv_blocks[a].l > 0) {
                  a2 = a;
                  break;
                }
              if (a2 == dec.p()) throw InternalError("odd-M-z-top: no promotable block for τ");
              const auto& blk = dec.uv_blocks[a2];
              const auto& [ra, sa] = sd.P.pairs[a2];
              replace[uv_top_factor_index(dec, a2)] =
                  vec_add(vec_scale(ra, blk.u[blk.l + 1]), vec_scale(sa, blk.v[blk.l + 1]));
            }
            const Multivector tau = product_of(factors, n, skip, replace);
            Multivector delta(n), rho(n);
            for (std::size_t i = 0; i < K; ++i) {
              const Multivector term =
                  wedge(theta_eps(i), theta_eps(sd.M - 1 - i)).scaled(Rational(K - i));
              delta = delta + (i % 2 == 0 ? term : -term);
            }
            for (std::size_t i = 0; i <= K; ++i) {
              const Multivector term = wedge(theta_eps(i), theta_eps(sd.M - i));
              rho = rho + (i % 2 == 0 ? term : -term);
            }
            resolve_gamma(cert, wedge(mv(epsilon), beta),
                          wedge(delta, sigma) + wedge(rho, tau), epsilon, omega, theta);
          } else {
            // Case 2.3: q = 1, m_1 = 1, all l_a = 0.
            cert.case_tag = CaseTag::Terminal23;
            if (dec.p() == 0)
              throw InternalError("terminal-2-3: p = 0, yet Ω ∉ im θ was verified");
            const auto& zb = dec.z_blocks[0];
            const Rational c = zb.c;
            const Vec& z1 = zb.z[0];
            const Vec& z2 = zb.z[1];

            // ξ = t·z_1; normalize ε up to the scalar t.
            const Vec xi_coords = adapted_coordinates(dec, sd.xi);
            Rational t_scale(0);
            {
              const std::size_t z_off = 2 * dec.p();  // all l_a = 0
              for (std::size_t i = 0; i < xi_coords.size(); ++i) {
                if (i == z_off) {
                  t_scale = xi_coords[i];
                } else if (!is_zero(xi_coords[i])) {
                  throw InternalError("terminal-2-3: ξ is not a multiple of z_1");
                }
              }
            }
            if (is_zero(t_scale)) throw InternalError("terminal-2-3: ξ = 0");
            const Vec eps_n = vec_scale(1 / t_scale, epsilon);

            // θ^{M-1}ε = z_2 + c̃ z_1 + φ with φ ∈ S'.
            const Vec prev = theta.apply_power(eps_n, sd.M - 1);
            const Vec prev_coords = adapted_coordinates(dec, prev);
            const std::size_t p_cnt = dec.p();
            if (prev_coords[2 * p_cnt + 1] != 1)
              throw InternalError("terminal-2-3: z_2 coefficient of θ^{M-1}ε is not 1");
            Vec phi_abs(2 * p_cnt, Rational(0));
            std::vector<Vec> uv_vecs;
            for (std::size_t a = 0; a < p_cnt; ++a) {
              phi_abs[2 * a] = prev_coords[2 * a];          // u^a coefficient
              phi_abs[2 * a + 1] = prev_coords[2 * a + 1];  // v^a coefficient
              uv_vecs.push_back(dec.uv_blocks[a].u[0]);
              uv_vecs.push_back(dec.uv_blocks[a].v[0]);
            }
            Multivector sigma_abs(2 * p_cnt);
            for (std::size_t a = 0; a < p_cnt; ++a)
              sigma_abs = sigma_abs + wedge(Multivector::basis_vector(2 * p_cnt, 2 * a + 1),
                                            Multivector::basis_vector(2 * p_cnt, 2 * a + 2));
            const auto [lambda_abs, nu_abs] = find_lambda_nu(sigma_abs, phi_abs, p_cnt);
            const Multivector lambda = substitute(lambda_abs, uv_vecs, n);
            const Multivector nu = substitute(nu_abs, uv_vecs, n).scaled(c);
            const Multivector sigma_v = substitute(sigma_abs, uv_vecs, n);
            const Multivector z2z1 = wedge(mv(z2), mv(z1));

            cert.beta = wedge(z2z1.scaled(c) - sigma_v, lambda) + wedge(mv(z1), nu);
            cert.alpha = wedge(mv(epsilon), lambda);  // = t·(ε_n λ)

            auto theta_eps_n = [&](std::size_t k) { return mv(theta.apply_power(eps_n, k)); };
            const Multivector rho = wedge(theta_eps_n(sd.M), theta_eps_n(K));
            Multivector delta(n);
            for (std::size_t i = 0; i < K; ++i) {
              const Multivector term =
                  wedge(apply_derivation_power(theta, rho, K - 1 - i), theta_eps_n(i));
              delta = delta + (i % 2 == 0 ? -term : term);  // sign (-1)^{i+1}
            }
            // Condition (D) target for the normalized ε, then rescale γ.
            const Multivector target =
                wedge(mv(eps_n), cert.beta) + wedge(omega, wedge(mv(eps_n), lambda));
            const Multivector gen = wedge(delta, lambda);
            const Multivector g = apply_derivation(theta, gen);
            if (auto tt = proportionality(target, g)) {
              cert.gamma = gen.scaled(*tt * t_scale);
            } else {
              cert.used_fallback = true;
              if (auto sol = solve_condition_d(cert.beta, epsilon, omega, theta)) {
                cert.alpha = sol->first;
                cert.gamma = sol->second;
              }
            }
          }
        }
      }
    }
  }

  cert.checks = verify_certificate(cert, epsilon, omega, theta).checks;
  return cert;
}

}  // namespace centrep
