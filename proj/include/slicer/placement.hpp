#pragma once

// Capability matching between what a slice's services require and what the
// tenants of an infrastructure offer.
//
// A service is the unit of placement: all of its VFs land on one tenant.
// Across services the planner minimizes the end-to-end latency of the chain,
// i.e. the sum of tenant-to-tenant latencies between consecutive services.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "slicer/infra.hpp"
#include "slicer/model.hpp"

namespace slicer {

struct CapabilityRequirement {
  EntityId service;
  ResourceDemand demand;
  Isolation isolation = Isolation::shared;
  double latency_budget = 0.0;
  std::optional<std::string> affinity;  // site tag

  friend bool operator==(const CapabilityRequirement&, const CapabilityRequirement&) = default;
};

struct CapabilityOffer {
  EntityId tenant;
  EntityId host;
  ResourceDemand free;
  HostIsolation host_isolation = HostIsolation::shared;
  std::string site;
  bool occupied = false;   // tenant has live allocations
  bool exclusive = false;  // one of them was placed with dedicated isolation

  friend bool operator==(const CapabilityOffer&, const CapabilityOffer&) = default;
};

struct Assignment {
  EntityId service;
  EntityId tenant;

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

struct PlacementPlan {
  EntityId slice;
  std::vector<Assignment> assignments;  // slice order
  double e2e_latency = 0.0;
  bool feasible = false;
  std::string reason;                  // why infeasible
  std::vector<std::string> warnings;   // per-service budget overruns

  const EntityId* tenant_of(const EntityId& service) const;
  friend bool operator==(const PlacementPlan&, const PlacementPlan&) = default;
};

enum class Objective { min_latency };
enum class Solver { exhaustive, greedy };

struct PlacementPolicy {
  Objective objective = Objective::min_latency;
  // greedy always runs greedy; exhaustive runs exact search while
  // services x tenants <= exhaustive_threshold and greedy beyond it.
  Solver solver = Solver::exhaustive;
  std::size_t exhaustive_threshold = 64;

  void validate() const;
};

std::vector<CapabilityRequirement> required_capabilities(
    const NetworkSlice& slice, const SliceTemplate& slice_template,
    const std::map<EntityId, ResourceDemand>& footprints);

std::vector<CapabilityOffer> offered_capabilities(const Infrastructure& infra);

PlacementPlan plan_placement(const NetworkSlice& slice,
                             const std::vector<CapabilityRequirement>& requirements,
                             const std::vector<CapabilityOffer>& offers,
                             const Infrastructure& infra, const PlacementPolicy& policy = {});

// Which solver plan_placement would run.
Solver effective_solver(std::size_t services, std::size_t tenants, const PlacementPolicy& policy);

enum class ViolationKind {
  PlanInfeasible,
  SliceMismatch,
  MissingAssignment,
  DuplicateAssignment,
  SplitService,
  UnknownService,
  UnknownTenant,
  CumulativeOverflow,
  IsolationBreach,
  AffinityMismatch,
  Unreachable,
  LatencyExceeded,
  LatencyMismatch,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  EntityId service;
  EntityId tenant;
  std::string message;
};

struct PlanVerdict {
  bool ok = true;
  std::vector<Violation> violations;

  bool has(ViolationKind kind) const;
};

// Re-checks every constraint of a plan from scratch, without the solver.
PlanVerdict verify_plan(const NetworkSlice& slice, const PlacementPlan& plan,
                        const std::vector<CapabilityRequirement>& requirements,
                        const std::vector<CapabilityOffer>& offers, const Infrastructure& infra);

}  // namespace slicer
