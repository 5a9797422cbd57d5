#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "centrep/linalg.hpp"
#include "centrep/multivector.hpp"

namespace centrep {

/// A pair (U^a, V^a) of θ-chains of odd length 2l+1, symplectically dual to
/// each other and isotropic individually.
struct UVBlock {
  std::size_t l = 0;
  std::vector<Vec> u;  // u_1 .. u_{2l+1}, θu_i = u_{i-1}, θu_1 = 0
  std::vector<Vec> v;  // v_1 .. v_{2l+1}

  bool operator==(const UVBlock&) const = default;
};

/// A single self-paired θ-chain of even length 2m with pairing coefficient c.
/// Over Q the coefficient cannot always be scaled to ±1 (only its square class
/// is an invariant), so c is an arbitrary nonzero rational, normalized to ±1
/// whenever the square class allows.
struct ZBlock {
  std::size_t m = 1;
  std::vector<Vec> z;  // z_1 .. z_{2m}
  Rational c;

  bool operator==(const ZBlock&) const = default;
};

struct CanonicalDecomposition {
  std::size_t ambient_dim = 0;
  std::vector<UVBlock> uv_blocks;
  std::vector<ZBlock> z_blocks;
  Subspace support;  // S

  std::size_t p() const { return uv_blocks.size(); }
  std::size_t q() const { return z_blocks.size(); }
  std::size_t rank() const { return support.dim() / 2; }

  /// All adapted basis vectors in block order: per UV block u_1..u_{2l+1}
  /// then v_1..v_{2l+1}, then per Z block z_1..z_{2m}.
  std::vector<Vec> all_vectors() const;

  Multivector reconstruct_omega() const;

  /// Checks chain relations, joint independence, span = S, and exact Ω
  /// reconstruction. Returns an explanation of the first failure.
  std::optional<std::string> check_invariants(const NilpotentOperator& theta,
                                              const Multivector& omega) const;
};

/// One nonzero coefficient pair (r_a, s_a) per UV block.
struct PSelector {
  std::vector<std::pair<Rational, Rational>> pairs;

  bool operator==(const PSelector&) const = default;
};

/// Max k with Ω^k ≠ 0. Throws on Ω = 0 or inhomogeneous input.
std::size_t omega_rank(const Multivector& omega);

/// Support S = { x ∈ V : x ∧ Ω^r = 0 }.
Subspace support(const Multivector& omega);

/// Adapted symplectic Jordan decomposition of (θ|S, Ω). Preconditions:
/// θ nilpotent, Ω ≠ 0 of grade 2, θΩ = 0. Invariants are re-checked on the
/// result; an InternalError means the pairing algorithm itself failed.
CanonicalDecomposition canonical_decomposition(const NilpotentOperator& theta,
                                               const Multivector& omega);

/// The decomposable grade-r form β_P.
Multivector beta_p(const CanonicalDecomposition& d, const PSelector& p);

/// A selector P with ξ ∈ S_P, if one exists. ξ must lie in S.
std::optional<PSelector> sp_member(const CanonicalDecomposition& d, const Vec& xi);

/// Coordinates of ξ ∈ S in the adapted basis (all_vectors() order).
Vec adapted_coordinates(const CanonicalDecomposition& d, const Vec& xi);

/// Matrix of μ_Ω^k : Λ^{r-k}S → Λ^{r+k}S in the adapted monomial basis.
Matrix lefschetz_map(const CanonicalDecomposition& d, std::size_t k);

/// Canonical Ω of the decomposition expressed in the adapted basis of S,
/// i.e. as an element of Λ²(Q^{2r}).
Multivector omega_in_adapted_basis(const CanonicalDecomposition& d);

/// Substitution ΛQ^k → ΛV sending the i-th generator to vectors[i].
Multivector substitute(const Multivector& w, const std::vector<Vec>& vectors,
                       std::size_t ambient_dim);

}  // namespace centrep
