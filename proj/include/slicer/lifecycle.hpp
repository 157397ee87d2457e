#pragma once

// Role-gated design-time workflow for VFs, services and whole slices.
//
// The engine owns the catalog, the infrastructure and the audit log and
// serializes every mutation behind one mutex. Each operation checks its role
// gate first, then its preconditions, then writes its audit event(s) and only
// then commits. Denied and failed attempts are audited too but change no
// catalog or infrastructure state.
//
//   VF:       draft -> certified
//   service:  designed -> tested -> approved -> distributed -> instantiated -> terminated
//   slice:    drafted -> ready -> active -> terminated
//             (ready -> partially_instantiated only in best-effort mode)

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "slicer/audit.hpp"
#include "slicer/catalog.hpp"
#include "slicer/infra.hpp"
#include "slicer/placement.hpp"
#include "slicer/store.hpp"
#include "slicer/template.hpp"

namespace slicer {

struct Actor {
  Role role = Role::superuser;
  std::string id;
};

enum class ServiceAction { test, approve, distribute };

// Operations an actor may be gated on.
enum class Permission {
  register_entity,
  onboard_vf,
  certify_vf,
  create_service,
  test_service,
  approve_service,
  distribute_service,
  create_slice,
  instantiate,
  teardown,
};

// Superuser holds every permission; everyone else holds exactly one row.
bool is_permitted(Role role, Permission permission);

class TemplateRejectedError : public Error {
 public:
  explicit TemplateRejectedError(ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

class PlanInvalidError : public Error {
 public:
  explicit PlanInvalidError(PlanVerdict verdict);
  const PlanVerdict& verdict() const { return verdict_; }

 private:
  PlanVerdict verdict_;
};

// Raised after every allocation made by the failed call has been released.
class PartialFailureError : public Error {
 public:
  PartialFailureError(EntityId service, const std::string& reason);
  const EntityId& service() const { return service_; }

 private:
  EntityId service_;
};

// Decides whether instantiating `service` (position `index` in the slice) on
// `tenant` should fail; returns the failure reason if so.
using FaultInjector = std::function<std::optional<std::string>(
    const EntityId& service, const EntityId& tenant, std::size_t index)>;

struct EngineOptions {
  RuleSet rules;
  // false: a failed slice instantiation keeps what succeeded and leaves the
  // slice partially_instantiated.
  bool atomic_slice_instantiation = true;
  std::function<std::int64_t()> clock;  // monotonic ns; steady_clock when empty
  FaultInjector fault_injector;
};

struct SliceRequest {
  std::optional<EntityId> id;
  std::string name;
  EntityId customer;
  EntityId provider;
  std::vector<EntityId> services;
  ServiceProfile profile;
  bool chain_order = true;
  // Even split of the profile when absent.
  std::optional<SliceTemplate> slice_template;
};

class Engine {
 public:
  Engine(Catalog catalog, Infrastructure infra, AuditLog log, EngineOptions options = {});

  void register_customer(const Actor& actor, const Customer& customer);
  void register_provider(const Actor& actor, const SliceProvider& provider);
  void register_vsp(const Actor& actor, const VendorSoftwareProduct& vsp);

  LifecycleRecord onboard_vf(const Actor& actor, const EntityId& vsp,
                             const std::string& template_text,
                             std::optional<EntityId> vf_id = std::nullopt);
  LifecycleRecord certify_vf(const Actor& actor, const EntityId& vf);

  LifecycleRecord create_service(const Actor& actor, const std::string& name,
                                 const std::vector<EntityId>& vfs,
                                 std::optional<EntityId> service_id = std::nullopt,
                                 std::vector<VirtualLink> links = {});
  LifecycleRecord advance_service(const Actor& actor, const EntityId& service, ServiceAction action);
  LifecycleRecord instantiate_service(const Actor& actor, const EntityId& service,
                                      const EntityId& tenant);

  LifecycleRecord create_slice(const Actor& actor, const SliceRequest& request);

  // Requirements and offers the planner and verifier work from right now.
  std::vector<CapabilityRequirement> slice_requirements(const EntityId& slice) const;
  PlacementPlan plan_slice(const EntityId& slice, const PlacementPolicy& policy = {}) const;

  LifecycleRecord instantiate_slice(const Actor& actor, const EntityId& slice,
                                    const PlacementPlan& plan);
  LifecycleRecord teardown_slice(const Actor& actor, const EntityId& slice);

  // Sum of the footprints of the service's VFs.
  ResourceDemand service_footprint(const EntityId& service) const;

  const Catalog& catalog() const { return catalog_; }
  const Infrastructure& infra() const { return infra_; }
  const AuditLog& audit() const { return log_; }
  const EngineOptions& options() const { return options_; }
  void set_fault_injector(FaultInjector injector);

  struct Snapshot {
    Catalog catalog;
    Infrastructure infra;
    std::vector<AuditEvent> events;
  };
  // Consistent copy taken under the engine lock.
  Snapshot snapshot() const;

 private:
  AuditEvent make_event(const Actor& actor, std::string_view action, const EntityId& subject,
                        Outcome outcome, std::string detail = {}) const;
  void record_event(const AuditEvent& event);
  void gate(const Actor& actor, Permission permission, std::string_view action,
            const EntityId& subject);
  template <class F>
  auto audited(const Actor& actor, std::string_view action, const EntityId& subject, F&& body);

  LifecycleRecord& record(const EntityId& id);
  EntityId fresh_id(const std::string& prefix) const;
  void promote_ready_slices(const Actor& actor, const EntityId& service);
  void release_deployment(const EntityId& service);
  ResourceDemand vf_footprint(const EntityId& vf) const;

  mutable std::recursive_mutex mutex_;
  Catalog catalog_;
  Infrastructure infra_;
  AuditLog log_;
  EngineOptions options_;
};

}  // namespace slicer
