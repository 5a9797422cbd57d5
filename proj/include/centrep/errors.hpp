#pragma once

#include <stdexcept>
#include <string>

namespace centrep {

/// A violated theorem hypothesis (θ not nilpotent, θΩ ≠ 0, Ω ∈ im θ, ...).
/// The CLI maps these to exit code 3.
class HypothesisError : public std::runtime_error {
 public:
  explicit HypothesisError(const std::string& what) : std::runtime_error(what) {}
};

/// A fact guaranteed by the underlying theory failed to hold at runtime.
/// Never caught internally: aborting with diagnostics beats silently continuing.
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace centrep
