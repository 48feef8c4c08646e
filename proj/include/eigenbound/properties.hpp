#pragma once

// Seeded randomized checks of the bounds against the dense oracle.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace eigenbound {

struct PropertyTrial {
  std::size_t index = 0;
  std::string physics;
  std::string shape;  // "quad" or "tri"
  std::size_t n = 0;
  std::size_t order = 0;
  bool bracketing = true;
  bool scaling = true;
  bool perfect = true;
  double min_lower_margin = 0.0;
  double min_upper_margin = 0.0;
};

struct PropertySuiteResult {
  std::uint64_t seed = 0;
  std::vector<PropertyTrial> trials;
  bool pass = true;
};

/// `count` random element-constant SPD pencils on random meshes with
/// n <= 8 (alternating diffusion and elasticity). Each trial checks
/// bracketing, scaling equivariance of the bounds and the perfect
/// preconditioner A = A~.
PropertySuiteResult run_property_suite(std::uint64_t seed, std::size_t count = 50);

struct SmallAgreementResult {
  std::size_t pencils = 0;
  double max_deviation = 0.0;  // relative to max(1, |lambda|)
  bool pass = true;
};

/// gen_eig_small against gen_eig_dense on random SPD pencils of order 1..6.
SmallAgreementResult run_small_agreement(std::uint64_t seed, std::size_t count = 1000);

nlohmann::ordered_json to_json(const PropertySuiteResult& r);
nlohmann::ordered_json to_json(const SmallAgreementResult& r);

}  // namespace eigenbound
