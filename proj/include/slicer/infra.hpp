#pragma once

// Simulated multi-tenant cloud: hosts, tenants with quotas, physical links.

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "slicer/model.hpp"

namespace slicer {

enum class HostIsolation { shared, dedicated };

struct Host {
  EntityId id;
  std::string name;
  ResourceDemand capacity;
  std::string site;
  HostIsolation isolation_class = HostIsolation::shared;

  friend bool operator==(const Host&, const Host&) = default;
};

struct Tenant {
  EntityId id;
  std::string name;
  EntityId owner;
  EntityId host;
  ResourceDemand quota;
  ResourceDemand used;

  ResourceDemand free() const { return quota - used; }
  friend bool operator==(const Tenant&, const Tenant&) = default;
};

struct PhysicalLink {
  EntityId id;
  std::pair<EntityId, EntityId> endpoints;
  double latency = 1.0;      // ms
  double bandwidth = 1000.0;  // Mbit/s, tracked only

  friend bool operator==(const PhysicalLink&, const PhysicalLink&) = default;
};

struct Allocation {
  EntityId id;
  EntityId tenant;
  EntityId service;
  ResourceDemand demand;
  // Isolation the owning service was placed with; dedicated allocations keep
  // every other service off the tenant.
  Isolation isolation = Isolation::shared;

  friend bool operator==(const Allocation&, const Allocation&) = default;
};

class Infrastructure {
 public:
  void add_host(Host host);
  void add_tenant(Tenant tenant);
  void add_link(PhysicalLink link);

  Allocation allocate(const EntityId& tenant, const EntityId& service,
                      const ResourceDemand& demand, Isolation isolation = Isolation::shared);
  void release(const EntityId& allocation);

  // Shortest-path latency between the tenants' hosts; 0 on the same host.
  double tenant_latency(const EntityId& a, const EntityId& b) const;
  double host_latency(const EntityId& a, const EntityId& b) const;

  const Tenant& tenant(const EntityId& id) const;
  const Host& host(const EntityId& id) const;
  bool has_tenant(const EntityId& id) const { return tenants_.contains(id); }

  const std::map<EntityId, Host>& hosts() const { return hosts_; }
  const std::map<EntityId, Tenant>& tenants() const { return tenants_; }
  const std::map<EntityId, PhysicalLink>& links() const { return links_; }
  const std::map<EntityId, Allocation>& allocations() const { return allocations_; }
  std::uint64_t next_allocation_no() const { return next_allocation_; }

  std::vector<const Tenant*> tenants_on_host(const EntityId& host) const;
  std::vector<const Allocation*> allocations_on_tenant(const EntityId& tenant) const;

  // Per-tenant used vectors.
  std::map<EntityId, ResourceDemand> usage() const;
  ResourceDemand total_used() const;

  // Full integrity check: references, quotas, conservation.
  void validate() const;

  // Used by the inventory loader to restore live allocations verbatim.
  void restore_allocation(Allocation allocation);
  void set_next_allocation_no(std::uint64_t n) { next_allocation_ = n; }

  friend bool operator==(const Infrastructure&, const Infrastructure&) = default;

 private:
  std::map<EntityId, Host> hosts_;
  std::map<EntityId, Tenant> tenants_;
  std::map<EntityId, PhysicalLink> links_;
  std::map<EntityId, Allocation> allocations_;
  std::uint64_t next_allocation_ = 1;
};

struct TestbedOptions {
  bool with_links = true;
  double orchestrator_cp_latency = 1.0;  // ms
  double orchestrator_dp_latency = 1.0;
  double cp_dp_latency = 1.0;
};

inline constexpr const char* kOrchestratorTenant = "tenant-onap";
inline constexpr const char* kControlPlaneTenant = "tenant-cp";
inline constexpr const char* kDataPlaneTenant = "tenant-dp";

// Three private tenants (orchestrator, control plane, data plane), one host
// each. The control- and data-plane tenants each hold exactly one of the
// Slice A core services; the orchestrator tenant holds neither.
Infrastructure build_testbed(const TestbedOptions& options = {});

}  // namespace slicer
