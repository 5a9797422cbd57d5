#pragma once

#include <string>

#include "json.hpp"

#include "centrep/instance.hpp"
#include "centrep/lie.hpp"
#include "centrep/structure.hpp"
#include "centrep/witness.hpp"

namespace centrep {

inline constexpr const char* kSpecVersion = "1";

// Malformed input raises std::invalid_argument (or nlohmann::json::exception
// from the parser itself); the CLI maps both to exit code 2.

nlohmann::json multivector_to_json(const Multivector& w);
Multivector multivector_from_json(const nlohmann::json& j, std::size_t ambient_dim);

nlohmann::json instance_to_json(const Instance& inst);
Instance instance_from_json(const nlohmann::json& j);

nlohmann::json algebra_to_json(const LieAlgebra& l);
LieAlgebra algebra_from_json(const nlohmann::json& j);

nlohmann::json certificate_to_json(const WitnessCertificate& cert, std::size_t ambient_dim,
                                   const std::string& instance_hash);

nlohmann::json decomposition_to_json(const CanonicalDecomposition& d);

/// FNV-1a over the canonical serialized form.
std::string instance_hash(const Instance& inst);

}  // namespace centrep
