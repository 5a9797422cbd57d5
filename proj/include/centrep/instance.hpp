#pragma once

#include <cstdint>
#include <optional>

#include "centrep/multivector.hpp"
#include "centrep/witness.hpp"

namespace centrep {

struct InstanceSpec {
  std::size_t dim_i = 2;
  std::uint64_t seed = 0;
  std::optional<CaseTag> target_case;
  /// Max |numerator| and denominator of sampled rationals.
  long coefficient_bound = 5;
};

struct Instance {
  NilpotentOperator theta;
  Vec epsilon;
  Multivector omega;
  std::optional<std::uint64_t> seed;

  std::size_t dim() const { return theta.dim(); }
};

/// SplitMix64. The generator's identity is part of the file-format contract:
/// the same spec must yield byte-identical instances across implementations.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  /// Uniform in [lo, hi].
  long next_in(long lo, long hi);
  Rational next_rational(long bound);

 private:
  std::uint64_t state_;
};

/// Deterministic per spec. θ = Q N Q⁻¹ with N strictly upper triangular;
/// Ω sampled from ker(θ on Λ²) and resampled while Ω = 0 or Ω ∈ im θ.
/// Throws std::runtime_error when the resample budget is exhausted.
Instance random_instance(const InstanceSpec& spec);

/// Fixed template whose construct_witness dispatch lands on the tag
/// (verified; InternalError on mismatch).
Instance targeted_instance(CaseTag tag);

}  // namespace centrep
