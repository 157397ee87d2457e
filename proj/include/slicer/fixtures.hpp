#pragma once

// Bundled Slice A scenario: a private mobile core split into a control-plane
// service (Core-CP) and a data-plane service (Core-DP), onboarded and
// instantiated on the three-tenant testbed.

#include <string_view>

#include "slicer/lifecycle.hpp"

namespace slicer::fixtures {

// Verbatim copies of the files under fixtures/.
std::string_view core_cp_template();
std::string_view core_dp_template();
std::string_view bad_env_template();
std::string_view slice_a_profile();
std::string_view slice_a_template();

inline constexpr const char* kCustomer = "company-x";
inline constexpr const char* kProvider = "grey-operator";
inline constexpr const char* kVsp = "bcom-vepc";
inline constexpr const char* kCoreCpVf = "core-cp-vf";
inline constexpr const char* kCoreDpVf = "core-dp-vf";
inline constexpr const char* kCoreCp = "core-cp";
inline constexpr const char* kCoreDp = "core-dp";
inline constexpr const char* kSliceA = "slice-a";

struct SliceAOutcome {
  PlacementPlan plan;
  LifecycleRecord slice;
};

// Runs the whole design-time workflow, each step under its proper role:
// register parties, onboard and certify both VFs, create/test/approve/
// distribute both services, compose the slice, plan it and instantiate it.
SliceAOutcome run_slice_a(Engine& engine, const PlacementPolicy& policy = {});

// Everything up to, but excluding, placement and instantiation.
void design_slice_a(Engine& engine);

}  // namespace slicer::fixtures
