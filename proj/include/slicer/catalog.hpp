#pragma once

// Design-time catalog: every model entity, the frozen template texts they
// were onboarded from, lifecycle records and live service deployments.

#include <map>
#include <string>
#include <vector>

#include "slicer/audit.hpp"
#include "slicer/model.hpp"
#include "slicer/placement.hpp"

namespace slicer {

inline constexpr int kCatalogSchemaVersion = 1;

// Where an instantiated service runs.
struct ServiceDeployment {
  EntityId tenant;
  std::vector<EntityId> allocations;
  // Slice whose instantiation created it; empty for a standalone instantiation.
  EntityId slice;

  friend bool operator==(const ServiceDeployment&, const ServiceDeployment&) = default;
};

struct Catalog {
  int version = kCatalogSchemaVersion;
  std::map<EntityId, Customer> customers;
  std::map<EntityId, SliceProvider> providers;
  std::map<EntityId, VendorSoftwareProduct> vsps;
  std::map<EntityId, NetworkFunction> functions;
  std::map<EntityId, NetworkService> services;
  std::map<EntityId, NetworkSlice> slices;
  std::map<EntityId, SliceTemplate> slice_templates;
  std::map<std::string, std::string> template_blobs;  // sha256 hex -> text
  std::map<EntityId, LifecycleRecord> records;
  std::map<EntityId, ServiceDeployment> deployments;
  std::map<EntityId, PlacementPlan> slice_plans;  // committed plans of active slices

  // Referential integrity, blob hashes and every entity's own invariants.
  void validate() const;

  const LifecycleRecord& record(const EntityId& id) const;

  friend bool operator==(const Catalog&, const Catalog&) = default;
};

// Lowercase hex SHA-256 of `text`.
std::string content_hash(std::string_view text);

}  // namespace slicer
