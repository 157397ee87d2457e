#pragma once

// Slicing ontology: customers, providers, vendor products, functions,
// services, slices, profiles, templates and SLAs.
//
// Every type is a plain value. validate() enforces the type's invariants and
// throws slicer::Error; the factory operations below call it on everything
// they build, and the catalog calls it on everything it loads.

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "slicer/error.hpp"

namespace slicer {

using EntityId = std::string;

struct ResourceDemand {
  std::int64_t vcpu = 0;
  std::int64_t ram = 0;      // MiB
  std::int64_t storage = 0;  // GiB
  std::int64_t ports = 0;

  friend bool operator==(const ResourceDemand&, const ResourceDemand&) = default;

  ResourceDemand& operator+=(const ResourceDemand& o);
  ResourceDemand& operator-=(const ResourceDemand& o);
  friend ResourceDemand operator+(ResourceDemand a, const ResourceDemand& b) { return a += b; }
  friend ResourceDemand operator-(ResourceDemand a, const ResourceDemand& b) { return a -= b; }

  // Componentwise a <= b.
  bool fits_within(const ResourceDemand& limit) const;
  bool non_negative() const;
  void validate() const;
};

ResourceDemand componentwise_max(const ResourceDemand& a, const ResourceDemand& b);
std::string to_string(const ResourceDemand& d);

struct Customer {
  EntityId id;
  std::string name;
  std::string description;
  std::string category;

  friend bool operator==(const Customer&, const Customer&) = default;
  void validate() const;
};

struct SliceProvider {
  EntityId id;
  std::string name;
  std::set<std::string> administrative_domains;

  friend bool operator==(const SliceProvider&, const SliceProvider&) = default;
  void validate() const;
};

struct SemVer {
  int major = 0;
  int minor = 0;
  int patch = 0;

  friend auto operator<=>(const SemVer&, const SemVer&) = default;
  static SemVer parse(const std::string& text);
};

std::string to_string(const SemVer& v);

struct VendorSoftwareProduct {
  EntityId id;
  std::string vendor_name;
  std::string product_name;
  SemVer version;
  std::set<EntityId> owned_resources;

  friend bool operator==(const VendorSoftwareProduct&, const VendorSoftwareProduct&) = default;
  void validate() const;
};

enum class FunctionKind { virtual_function, physical_function };

struct FunctionComponent {
  std::string name;
  ResourceDemand compute_demand;
  std::vector<std::string> ports;

  friend bool operator==(const FunctionComponent&, const FunctionComponent&) = default;
};

struct ConnectionPoint {
  std::string name;
  EntityId owner_function;
  std::optional<std::string> attached_link;

  friend bool operator==(const ConnectionPoint&, const ConnectionPoint&) = default;
};

struct VirtualLink {
  std::string name;
  std::vector<ConnectionPoint> endpoints;

  friend bool operator==(const VirtualLink&, const VirtualLink&) = default;
};

struct NetworkFunction {
  EntityId id;
  FunctionKind kind = FunctionKind::virtual_function;
  std::vector<FunctionComponent> components;
  std::optional<std::string> template_ref;  // content hash of the template blob

  friend bool operator==(const NetworkFunction&, const NetworkFunction&) = default;
  void validate() const;
};

struct NetworkService {
  EntityId id;
  std::string name;
  std::vector<EntityId> functions;
  std::vector<VirtualLink> virtual_links;

  friend bool operator==(const NetworkService&, const NetworkService&) = default;
  void validate() const;
};

enum class Isolation { shared, dedicated_tenant, dedicated_host };

struct ServiceProfile {
  double end_to_end_latency = 10.0;  // ms
  double guaranteed_data_rate = 100.0;  // Mbit/s
  double service_availability = 0.99;
  Isolation degree_of_isolation = Isolation::shared;
  std::string coverage_area;
  int priority = 0;
  double user_density = 0.0;  // users/km2, informational
  double ue_speed = 0.0;      // km/h, informational
  std::string charging_model;

  friend bool operator==(const ServiceProfile&, const ServiceProfile&) = default;
  void validate() const;
};

// Non-fatal observations about a valid profile.
std::vector<std::string> profile_warnings(const ServiceProfile& profile);

struct Sla {
  EntityId slice_id;
  double committed_latency = 0.0;
  double committed_availability = 0.0;
  double committed_data_rate = 0.0;
  std::string penalties;

  friend bool operator==(const Sla&, const Sla&) = default;
};

struct NetworkSlice {
  EntityId id;
  std::string name;
  EntityId customer;
  EntityId provider;
  std::vector<EntityId> services;
  ServiceProfile profile;
  std::optional<Sla> sla;
  bool chain_order = true;

  friend bool operator==(const NetworkSlice&, const NetworkSlice&) = default;
  void validate() const;
};

struct ServiceRequirement {
  double latency_budget = 0.0;  // ms
  double reliability = 0.0;
  double data_rate = 0.0;  // Mbit/s
  ResourceDemand demand;

  friend bool operator==(const ServiceRequirement&, const ServiceRequirement&) = default;
};

struct SliceTemplate {
  EntityId slice_id;
  std::map<EntityId, ServiceRequirement> per_service_requirements;
  std::map<EntityId, std::vector<std::string>> template_refs;

  friend bool operator==(const SliceTemplate&, const SliceTemplate&) = default;
  // Checks the template against the slice it describes.
  void validate(const NetworkSlice& slice) const;
};

// Slack allowed when comparing composed latencies and availabilities with
// profile bounds; absorbs rounding of budgets split across a chain.
inline constexpr double kSlaTolerance = 1e-9;

NetworkSlice compose_slice(EntityId id, std::string name, EntityId customer, EntityId provider,
                           const std::vector<NetworkService>& services,
                           const ServiceProfile& profile, bool chain_order = true);

Sla derive_service_sla(const ServiceProfile& profile, const SliceTemplate& slice_template,
                       const EntityId& service);

// Series (chain_order) or parallel composition of per-service SLAs, in the
// order given. No profile check.
Sla compose_slas(const std::vector<Sla>& parts, bool chain_order);

Sla aggregate_sla(const NetworkSlice& slice, const std::map<EntityId, Sla>& service_slas);

// Returns a copy of `slice` carrying `sla` after checking it against the profile.
NetworkSlice with_sla(const NetworkSlice& slice, const Sla& sla);

// Even split of the profile across the slice's services: latency budgets sum
// to the profile latency, reliabilities compose to at least the profile
// availability.
SliceTemplate default_slice_template(const NetworkSlice& slice,
                                     const std::map<EntityId, ResourceDemand>& demands);

}  // namespace slicer
