#pragma once

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "centrep/linalg.hpp"
#include "centrep/multivector.hpp"

namespace centrep {

/// Lie algebra over Q by structure constants. Antisymmetry is built into the
/// storage (only i < j is kept); the Jacobi identity is checked, not assumed.
struct LieAlgebra {
  std::size_t dim = 0;
  /// (i, j) -> coefficients of [e_{i+1}, e_{j+1}], keys 0-based with i < j.
  /// Zero brackets need not be stored.
  std::map<std::pair<std::size_t, std::size_t>, Vec> brackets;
  std::vector<std::string> labels;
  /// Distinguished basis indices (0-based) set by build_instance_algebra.
  std::optional<std::size_t> u_index, z_index;

  void set_bracket(std::size_t i, std::size_t j, const Vec& value);
  /// Structure constants of [e_{i+1}, e_{j+1}] for arbitrary i, j.
  Vec bracket_basis(std::size_t i, std::size_t j) const;
  Vec bracket(const Vec& x, const Vec& y) const;
};

/// All basis triples (i, j, k) violating the Jacobi identity; empty = pass.
std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> check_jacobi(const LieAlgebra& l);

Subspace center(const LieAlgebra& l);

/// L ⊇ [L,L] ⊇ [L,[L,L]] ⊇ ... until stable. Nilpotent iff the last term is 0.
std::vector<Subspace> lower_central_series(const LieAlgebra& l);
bool is_nilpotent(const LieAlgebra& l);

/// Chevalley–Eilenberg differential with the convention dφ(x,y) = -φ([x,y]),
/// extended to ΛL* as an antiderivation of degree +1.
Multivector ce_d(const LieAlgebra& l, const Multivector& w);

struct CEComplex {
  std::size_t n = 0;
  std::vector<Matrix> d;  // d[k]: Λ^k L* → Λ^{k+1} L*, k = 0..n

  const Matrix& differential(std::size_t k) const { return d[k]; }
};

/// Builds all d_k and verifies d² = 0 (throws InternalError on failure, which
/// would mean the Jacobi check and the complex disagree).
CEComplex ce_complex(const LieAlgebra& l);

struct Cohomology {
  std::vector<std::size_t> betti;  // b_0 .. b_n
  /// Deterministic representatives per degree: echelon completion of
  /// im d_{k-1} inside ker d_k.
  std::vector<std::vector<Multivector>> representatives;
};

Cohomology cohomology(const LieAlgebra& l);

struct CentralActionReport {
  bool nontrivial = false;
  Vec z;                    // central element (coordinates in L)
  std::size_t degree = 0;   // degree k of the cocycle a
  Multivector cocycle;      // a with [i_z a] ≠ 0
  Multivector contraction;  // i_z a
};

/// First witness in deterministic order (center basis, then degree, then
/// echelon cocycle basis) of a central z and cocycle a with [i_z a] ≠ 0.
CentralActionReport central_action(const LieAlgebra& l);

/// L ⊕ Qu with [u, x] = Dx. D must be a nilpotent derivation of L.
LieAlgebra derivation_extension(const LieAlgebra& l, const Matrix& d_op);

/// L ⊕ Qz, z central, [x, y] += Ω₂(x, y)·z. Ω₂ must be CE-closed on L.
LieAlgebra central_extension(const LieAlgebra& l, const Multivector& omega2);

/// The algebra of the reduction: W = I ⊕ Qu with d φ = u*∧θφ on I*, then the
/// central extension making dz* = u*∧ε + Ω. Indices of u, z are recorded.
LieAlgebra build_instance_algebra(const NilpotentOperator& theta, const Vec& epsilon,
                                  const Multivector& omega);

/// True iff form = dx for some x. Mixed grades allowed (the image of d is
/// graded). Throws std::invalid_argument when form is not closed.
bool exactness_oracle(const LieAlgebra& l, const Multivector& form);

/// Same mask coefficients viewed in a larger ambient dimension.
Multivector embed(const Multivector& w, std::size_t new_dim);

struct OmegaAssembly {
  Multivector omega_form;  // z*(u*α + β) + u*δ + γ, closed
  Multivector delta;
  Multivector gamma;
  bool augmented_gamma = false;  // certificate γ needed correction
};

/// Assembles the closed witness form on L = build_instance_algebra(θ, ε, Ω)
/// from a certificate (α, β, γ) over I*. δ (and, if needed, a correction to γ)
/// comes from solving the closedness equation.
OmegaAssembly assemble_witness_form(const LieAlgebra& l, const Multivector& alpha,
                                    const Multivector& beta, const Multivector& gamma);

}  // namespace centrep
