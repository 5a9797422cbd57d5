#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "centrep/errors.hpp"
#include "centrep/instance.hpp"
#include "centrep/json_io.hpp"
#include "centrep/witness.hpp"

using namespace centrep;

TEST_CASE("splitmix stream is deterministic") {
  SplitMix64 a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  SplitMix64 c(43);
  CHECK(SplitMix64(42).next() != c.next());
}

TEST_CASE("bounded draws stay in range") {
  SplitMix64 rng(7);
  for (int i = 0; i < 200; ++i) {
    const long v = rng.next_in(-5, 5);
    CHECK(v >= -5);
    CHECK(v <= 5);
  }
}

TEST_CASE("random instances satisfy the hypotheses") {
  for (unsigned seed = 1; seed <= 20; ++seed) {
    InstanceSpec spec;
    spec.dim_i = 2 + seed % 6;
    spec.seed = seed;
    const Instance inst = random_instance(spec);
    CHECK(inst.dim() == spec.dim_i);
    CHECK_FALSE(inst.omega.is_zero());
    CHECK(inst.omega.grade() == 2);
    CHECK(apply_derivation(inst.theta, inst.omega).is_zero());
    CHECK_FALSE(omega_in_im_theta(inst.theta, inst.omega));
  }
}

TEST_CASE("same seed gives byte-identical serialization") {
  InstanceSpec spec;
  spec.dim_i = 5;
  spec.seed = 12345;
  const Instance a = random_instance(spec);
  const Instance b = random_instance(spec);
  CHECK(instance_to_json(a).dump() == instance_to_json(b).dump());
  spec.seed = 12346;
  const Instance c = random_instance(spec);
  CHECK(instance_to_json(a).dump() != instance_to_json(c).dump());
}

TEST_CASE("every targeted template lands on its case") {
  for (int i = 0; i < 7; ++i) {
    const auto tag = static_cast<CaseTag>(i);
    const Instance inst = targeted_instance(tag);
    const auto cert = construct_witness(inst.epsilon, inst.omega, inst.theta);
    CHECK(cert.case_tag == tag);
    CHECK(cert.checks.all());
  }
}

TEST_CASE("spec validation") {
  InstanceSpec spec;
  spec.dim_i = 1;
  CHECK_THROWS_AS(random_instance(spec), std::invalid_argument);
  spec.dim_i = 4;
  spec.coefficient_bound = 0;
  CHECK_THROWS_AS(random_instance(spec), std::invalid_argument);
}

TEST_CASE("targeting via the spec matches the template") {
  InstanceSpec spec;
  spec.dim_i = 6;
  spec.seed = 9;
  spec.target_case = CaseTag::Terminal23;
  const Instance a = random_instance(spec);
  const Instance b = targeted_instance(CaseTag::Terminal23);
  CHECK(instance_to_json(a).dump() == instance_to_json(b).dump());
}
