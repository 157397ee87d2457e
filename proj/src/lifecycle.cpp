#include "slicer/lifecycle.hpp"

#include <algorithm>
#include <chrono>
#include <set>

namespace slicer {

bool is_permitted(Role role, Permission permission) {
  if (role == Role::superuser) return true;
  switch (permission) {
    case Permission::register_entity:
    case Permission::onboard_vf:
    case Permission::create_service:
    case Permission::create_slice:
      return role == Role::designer;
    case Permission::certify_vf:
    case Permission::test_service:
      return role == Role::tester;
    case Permission::approve_service:
      return role == Role::governor;
    case Permission::distribute_service:
    case Permission::instantiate:
    case Permission::teardown:
      return role == Role::operator_;
  }
  return false;
}

namespace {

std::string describe(const ValidationReport& report) {
  std::string out = std::to_string(report.error_count()) + " error finding(s)";
  for (const auto& f : report.findings) {
    if (f.severity != Severity::error) continue;
    out += "; [" + std::string(to_string(f.rule)) + "] " + f.message;
  }
  return out;
}

std::string describe(const PlanVerdict& verdict) {
  std::string out;
  for (const auto& v : verdict.violations) {
    out += (out.empty() ? "" : "; ") + std::string(to_string(v.kind)) + ": " + v.message;
  }
  return out;
}

}  // namespace

TemplateRejectedError::TemplateRejectedError(ValidationReport report)
    : Error(Errc::TemplateRejected, describe(report)), report_(std::move(report)) {}

PlanInvalidError::PlanInvalidError(PlanVerdict verdict)
    : Error(Errc::PlanInvalid, describe(verdict)), verdict_(std::move(verdict)) {}

PartialFailureError::PartialFailureError(EntityId service, const std::string& reason)
    : Error(Errc::PartialFailure, "service '" + service + "' failed (" + reason +
                                      "); earlier allocations were released"),
      service_(std::move(service)) {}

Engine::Engine(Catalog catalog, Infrastructure infra, AuditLog log, EngineOptions options)
    : catalog_(std::move(catalog)),
      infra_(std::move(infra)),
      log_(std::move(log)),
      options_(std::move(options)) {
  options_.rules.validate();
  catalog_.validate();
  infra_.validate();
}

void Engine::set_fault_injector(FaultInjector injector) {
  std::lock_guard lock(mutex_);
  options_.fault_injector = std::move(injector);
}

Engine::Snapshot Engine::snapshot() const {
  std::lock_guard lock(mutex_);
  return {catalog_, infra_, log_.events()};
}

AuditEvent Engine::make_event(const Actor& actor, std::string_view action, const EntityId& subject,
                              Outcome outcome, std::string detail) const {
  AuditEvent e;
  e.sequence_no = log_.last_sequence() + 1;
  e.actor = actor.role;
  e.actor_id = actor.id.empty() ? std::string(to_string(actor.role)) : actor.id;
  e.action = std::string(action);
  e.subject = subject;
  e.timestamp = options_.clock ? options_.clock()
                               : std::chrono::duration_cast<std::chrono::nanoseconds>(
                                     std::chrono::steady_clock::now().time_since_epoch())
                                     .count();
  e.outcome = outcome;
  e.detail = std::move(detail);
  return e;
}

void Engine::record_event(const AuditEvent& event) {
  log_.append(event);
  if (auto it = catalog_.records.find(event.subject); it != catalog_.records.end()) {
    it->second.history.push_back(event.sequence_no);
  }
}

void Engine::gate(const Actor& actor, Permission permission, std::string_view action,
                  const EntityId& subject) {
  if (is_permitted(actor.role, permission)) return;
  const std::string why =
      "role '" + std::string(to_string(actor.role)) + "' may not " + std::string(action);
  record_event(make_event(actor, action, subject, Outcome::denied, why));
  throw Error(Errc::RoleDenied, why);
}

template <class F>
auto Engine::audited(const Actor& actor, std::string_view action, const EntityId& subject,
                     F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    const auto code = e.code();
    if (code != Errc::RoleDenied && code != Errc::IoFailure && code != Errc::SequenceGap) {
      record_event(make_event(actor, action, subject, Outcome::failed, e.what()));
    }
    throw;
  }
}

LifecycleRecord& Engine::record(const EntityId& id) {
  auto it = catalog_.records.find(id);
  if (it == catalog_.records.end()) throw Error(Errc::NotFound, "unknown artifact '" + id + "'");
  return it->second;
}

EntityId Engine::fresh_id(const std::string& prefix) const {
  for (std::size_t n = catalog_.records.size() + 1;; ++n) {
    EntityId id = prefix + "-" + std::to_string(n);
    if (!catalog_.records.contains(id)) return id;
  }
}

ResourceDemand Engine::vf_footprint(const EntityId& vf) const {
  const auto& f = catalog_.functions.at(vf);
  if (!f.template_ref) {
    ResourceDemand d;
    for (const auto& c : f.components) d += c.compute_demand;
    return d;
  }
  return resource_footprint(parse_template(catalog_.template_blobs.at(*f.template_ref)));
}

ResourceDemand Engine::service_footprint(const EntityId& service) const {
  std::lock_guard lock(mutex_);
  auto it = catalog_.services.find(service);
  if (it == catalog_.services.end()) throw Error(Errc::NotFound, "unknown service '" + service + "'");
  ResourceDemand total;
  for (const auto& vf : it->second.functions) total += vf_footprint(vf);
  return total;
}

void Engine::register_customer(const Actor& actor, const Customer& customer) {
  std::lock_guard lock(mutex_);
  audited(actor, action::register_customer, customer.id, [&] {
    gate(actor, Permission::register_entity, action::register_customer, customer.id);
    customer.validate();
    if (catalog_.customers.contains(customer.id)) {
      throw Error(Errc::Duplicate, "customer '" + customer.id + "' exists");
    }
    record_event(make_event(actor, action::register_customer, customer.id, Outcome::ok));
    catalog_.customers.emplace(customer.id, customer);
  });
}

void Engine::register_provider(const Actor& actor, const SliceProvider& provider) {
  std::lock_guard lock(mutex_);
  audited(actor, action::register_provider, provider.id, [&] {
    gate(actor, Permission::register_entity, action::register_provider, provider.id);
    provider.validate();
    if (catalog_.providers.contains(provider.id)) {
      throw Error(Errc::Duplicate, "provider '" + provider.id + "' exists");
    }
    record_event(make_event(actor, action::register_provider, provider.id, Outcome::ok));
    catalog_.providers.emplace(provider.id, provider);
  });
}

void Engine::register_vsp(const Actor& actor, const VendorSoftwareProduct& vsp) {
  std::lock_guard lock(mutex_);
  audited(actor, action::register_vsp, vsp.id, [&] {
    gate(actor, Permission::register_entity, action::register_vsp, vsp.id);
    vsp.validate();
    if (catalog_.vsps.contains(vsp.id)) throw Error(Errc::Duplicate, "vsp '" + vsp.id + "' exists");
    for (const auto& [_, other] : catalog_.vsps) {
      if (other.vendor_name == vsp.vendor_name && other.product_name == vsp.product_name &&
          other.version == vsp.version) {
        throw Error(Errc::Duplicate, "product " + vsp.vendor_name + "/" + vsp.product_name + " " +
                                         to_string(vsp.version) + " is registered as '" +
                                         other.id + "'");
      }
    }
    if (!vsp.owned_resources.empty()) {
      throw Error(Errc::InvalidArgument, "functions are attached to a vsp by onboarding");
    }
    record_event(make_event(actor, action::register_vsp, vsp.id, Outcome::ok));
    catalog_.vsps.emplace(vsp.id, vsp);
  });
}

LifecycleRecord Engine::onboard_vf(const Actor& actor, const EntityId& vsp,
                                   const std::string& template_text,
                                   std::optional<EntityId> vf_id) {
  std::lock_guard lock(mutex_);
  const EntityId id = vf_id.value_or(fresh_id("vf"));
  return audited(actor, action::onboard_vf, id, [&] {
    gate(actor, Permission::onboard_vf, action::onboard_vf, id);
    if (catalog_.records.contains(id)) throw Error(Errc::Duplicate, "artifact '" + id + "' exists");
    if (!catalog_.vsps.contains(vsp)) throw Error(Errc::NotFound, "unknown vsp '" + vsp + "'");

    const TemplateDocument doc = parse_template(template_text);
    ValidationReport report = lint(doc, options_.rules);
    if (!report.accepted()) throw TemplateRejectedError(std::move(report));

    NetworkFunction fn;
    fn.id = id;
    fn.kind = FunctionKind::virtual_function;
    fn.components = function_components(doc);
    resource_footprint(doc);
    fn.template_ref = content_hash(template_text);
    fn.validate();

    const AuditEvent ev = make_event(actor, action::onboard_vf, id, Outcome::ok, doc.name);
    record_event(ev);
    catalog_.template_blobs.emplace(*fn.template_ref, template_text);
    catalog_.functions.emplace(id, std::move(fn));
    catalog_.vsps.at(vsp).owned_resources.insert(id);
    auto [it, _] = catalog_.records.emplace(
        id, LifecycleRecord{id, RecordKind::vf, VfState::draft, {ev.sequence_no}});
    return it->second;
  });
}

LifecycleRecord Engine::certify_vf(const Actor& actor, const EntityId& vf) {
  std::lock_guard lock(mutex_);
  return audited(actor, action::certify_vf, vf, [&] {
    gate(actor, Permission::certify_vf, action::certify_vf, vf);
    LifecycleRecord& rec = record(vf);
    if (rec.kind != RecordKind::vf) throw Error(Errc::NotFound, "'" + vf + "' is not a VF");
    if (std::get<VfState>(rec.state) != VfState::draft) {
      throw Error(Errc::InvalidTransition, "VF '" + vf + "' is already certified");
    }
    record_event(make_event(actor, action::certify_vf, vf, Outcome::ok));
    rec.state = VfState::certified;
    return rec;
  });
}

LifecycleRecord Engine::create_service(const Actor& actor, const std::string& name,
                                       const std::vector<EntityId>& vfs,
                                       std::optional<EntityId> service_id,
                                       std::vector<VirtualLink> links) {
  std::lock_guard lock(mutex_);
  const EntityId id = service_id.value_or(fresh_id("svc"));
  return audited(actor, action::create_service, id, [&] {
    gate(actor, Permission::create_service, action::create_service, id);
    if (catalog_.records.contains(id)) throw Error(Errc::Duplicate, "artifact '" + id + "' exists");
    if (vfs.empty()) throw Error(Errc::EmptyService, "service '" + id + "' has no VFs");
    for (const auto& vf : vfs) {
      auto it = catalog_.records.find(vf);
      if (it == catalog_.records.end() || it->second.kind != RecordKind::vf) {
        throw Error(Errc::NotFound, "unknown VF '" + vf + "'");
      }
      if (std::get<VfState>(it->second.state) != VfState::certified) {
        throw Error(Errc::UncertifiedVf, "VF '" + vf + "' is not certified");
      }
    }
    NetworkService svc{id, name, vfs, std::move(links)};
    svc.validate();

    const AuditEvent ev = make_event(actor, action::create_service, id, Outcome::ok, name);
    record_event(ev);
    catalog_.services.emplace(id, std::move(svc));
    auto [it, _] = catalog_.records.emplace(
        id, LifecycleRecord{id, RecordKind::service, ServiceState::designed, {ev.sequence_no}});
    return it->second;
  });
}

LifecycleRecord Engine::advance_service(const Actor& actor, const EntityId& service,
                                        ServiceAction step) {
  std::lock_guard lock(mutex_);
  struct Step {
    std::string_view name;
    Permission permission;
    ServiceState from;
    ServiceState to;
  };
  const Step s = [&] {
    switch (step) {
      case ServiceAction::test:
        return Step{action::test_service, Permission::test_service, ServiceState::designed,
                    ServiceState::tested};
      case ServiceAction::approve:
        return Step{action::approve_service, Permission::approve_service, ServiceState::tested,
                    ServiceState::approved};
      case ServiceAction::distribute:
        break;
    }
    return Step{action::distribute_service, Permission::distribute_service, ServiceState::approved,
                ServiceState::distributed};
  }();

  return audited(actor, s.name, service, [&] {
    gate(actor, s.permission, s.name, service);
    LifecycleRecord& rec = record(service);
    if (rec.kind != RecordKind::service) {
      throw Error(Errc::NotFound, "'" + service + "' is not a service");
    }
    const auto current = std::get<ServiceState>(rec.state);
    if (current != s.from) {
      throw Error(Errc::InvalidTransition,
                  std::string(s.name) + " needs a " + std::string(to_string(s.from)) +
                      " service; '" + service + "' is " + std::string(to_string(current)));
    }
    record_event(make_event(actor, s.name, service, Outcome::ok));
    rec.state = s.to;
    if (s.to == ServiceState::distributed) promote_ready_slices(actor, service);
    return catalog_.records.at(service);
  });
}

void Engine::promote_ready_slices(const Actor& actor, const EntityId& service) {
  for (auto& [id, sl] : catalog_.slices) {
    LifecycleRecord& rec = catalog_.records.at(id);
    if (std::get<SliceState>(rec.state) != SliceState::drafted) continue;
    const auto& members = sl.services;
    if (!service.empty() && std::find(members.begin(), members.end(), service) == members.end()) {
      continue;
    }
    const bool all_distributed = std::all_of(members.begin(), members.end(), [&](const EntityId& m) {
      return std::get<ServiceState>(catalog_.records.at(m).state) == ServiceState::distributed;
    });
    if (!all_distributed) continue;
    record_event(make_event(actor, action::slice_ready, id, Outcome::ok));
    rec.state = SliceState::ready;
  }
}

LifecycleRecord Engine::instantiate_service(const Actor& actor, const EntityId& service,
                                            const EntityId& tenant) {
  std::lock_guard lock(mutex_);
  return audited(actor, action::instantiate_service, service, [&] {
    gate(actor, Permission::instantiate, action::instantiate_service, service);
    LifecycleRecord& rec = record(service);
    if (rec.kind != RecordKind::service) {
      throw Error(Errc::NotFound, "'" + service + "' is not a service");
    }
    if (std::get<ServiceState>(rec.state) != ServiceState::distributed) {
      throw Error(Errc::InvalidTransition, "service '" + service + "' is " +
                                               state_name(rec.state) + ", not distributed");
    }
    const Tenant& t = infra_.tenant(tenant);
    const ResourceDemand total = service_footprint(service);
    if (!(t.used + total).fits_within(t.quota)) {
      throw Error(Errc::InsufficientCapacity, "tenant '" + tenant + "' cannot take " +
                                                  to_string(total) + " (free " +
                                                  to_string(t.free()) + ")");
    }
    record_event(make_event(actor, action::instantiate_service, service, Outcome::ok, tenant));
    ServiceDeployment dep{tenant, {}, {}};
    for (const auto& vf : catalog_.services.at(service).functions) {
      dep.allocations.push_back(infra_.allocate(tenant, service, vf_footprint(vf)).id);
    }
    catalog_.deployments[service] = std::move(dep);
    rec.state = ServiceState::instantiated;
    return rec;
  });
}

LifecycleRecord Engine::create_slice(const Actor& actor, const SliceRequest& request) {
  std::lock_guard lock(mutex_);
  const EntityId id = request.id.value_or(fresh_id("slice"));
  return audited(actor, action::create_slice, id, [&] {
    gate(actor, Permission::create_slice, action::create_slice, id);
    if (catalog_.records.contains(id)) throw Error(Errc::Duplicate, "artifact '" + id + "' exists");
    if (!catalog_.customers.contains(request.customer)) {
      throw Error(Errc::NotFound, "unknown customer '" + request.customer + "'");
    }
    if (!catalog_.providers.contains(request.provider)) {
      throw Error(Errc::NotFound, "unknown provider '" + request.provider + "'");
    }
    std::vector<NetworkService> members;
    std::map<EntityId, ResourceDemand> footprints;
    for (const auto& s : request.services) {
      auto it = catalog_.services.find(s);
      if (it == catalog_.services.end()) throw Error(Errc::NotFound, "unknown service '" + s + "'");
      members.push_back(it->second);
      footprints[s] = service_footprint(s);
    }
    NetworkSlice slice = compose_slice(id, request.name, request.customer, request.provider,
                                       members, request.profile, request.chain_order);

    SliceTemplate st = request.slice_template.value_or(default_slice_template(slice, footprints));
    if (st.slice_id.empty()) st.slice_id = id;
    for (const auto& s : slice.services) {
      if (st.template_refs.contains(s)) continue;
      auto& refs = st.template_refs[s];
      for (const auto& vf : catalog_.services.at(s).functions) {
        if (const auto& ref = catalog_.functions.at(vf).template_ref) refs.push_back(*ref);
      }
    }
    st.validate(slice);

    std::map<EntityId, Sla> slas;
    for (const auto& s : slice.services) slas[s] = derive_service_sla(slice.profile, st, s);
    slice = with_sla(slice, aggregate_sla(slice, slas));

    const AuditEvent ev = make_event(actor, action::create_slice, id, Outcome::ok, request.name);
    record_event(ev);
    catalog_.slices.emplace(id, std::move(slice));
    catalog_.slice_templates.emplace(id, std::move(st));
    catalog_.records.emplace(
        id, LifecycleRecord{id, RecordKind::slice, SliceState::drafted, {ev.sequence_no}});
    promote_ready_slices(actor, {});
    return catalog_.records.at(id);
  });
}

std::vector<CapabilityRequirement> Engine::slice_requirements(const EntityId& slice) const {
  std::lock_guard lock(mutex_);
  auto it = catalog_.slices.find(slice);
  if (it == catalog_.slices.end()) throw Error(Errc::NotFound, "unknown slice '" + slice + "'");
  std::map<EntityId, ResourceDemand> footprints;
  for (const auto& s : it->second.services) footprints[s] = service_footprint(s);
  return required_capabilities(it->second, catalog_.slice_templates.at(slice), footprints);
}

PlacementPlan Engine::plan_slice(const EntityId& slice, const PlacementPolicy& policy) const {
  std::lock_guard lock(mutex_);
  const auto reqs = slice_requirements(slice);
  return plan_placement(catalog_.slices.at(slice), reqs, offered_capabilities(infra_), infra_, policy);
}

void Engine::release_deployment(const EntityId& service) {
  auto it = catalog_.deployments.find(service);
  if (it == catalog_.deployments.end()) return;
  for (const auto& a : it->second.allocations) infra_.release(a);
  catalog_.deployments.erase(it);
}

LifecycleRecord Engine::instantiate_slice(const Actor& actor, const EntityId& slice,
                                          const PlacementPlan& plan) {
  std::lock_guard lock(mutex_);
  return audited(actor, action::instantiate_slice, slice, [&] {
    gate(actor, Permission::instantiate, action::instantiate_slice, slice);
    LifecycleRecord& rec = record(slice);
    if (rec.kind != RecordKind::slice) throw Error(Errc::NotFound, "'" + slice + "' is not a slice");
    if (std::get<SliceState>(rec.state) != SliceState::ready) {
      throw Error(Errc::InvalidTransition,
                  "slice '" + slice + "' is " + state_name(rec.state) + ", not ready");
    }
    const NetworkSlice& sl = catalog_.slices.at(slice);
    for (const auto& s : sl.services) {
      if (std::get<ServiceState>(catalog_.records.at(s).state) != ServiceState::distributed) {
        throw Error(Errc::InvalidTransition, "member service '" + s + "' is not distributed");
      }
    }
    PlanVerdict verdict =
        verify_plan(sl, plan, slice_requirements(slice), offered_capabilities(infra_), infra_);
    if (!verdict.ok) throw PlanInvalidError(std::move(verdict));

    const Isolation isolation = sl.profile.degree_of_isolation;
    std::vector<std::pair<EntityId, ServiceDeployment>> done;
    auto roll_back = [&] {
      for (auto it = done.rbegin(); it != done.rend(); ++it) {
        for (const auto& a : it->second.allocations) infra_.release(a);
      }
      done.clear();
    };

    std::optional<std::pair<EntityId, std::string>> failure;
    for (std::size_t i = 0; i < sl.services.size() && !failure; ++i) {
      const EntityId& svc = sl.services[i];
      const EntityId tenant = *plan.tenant_of(svc);
      if (options_.fault_injector) {
        if (auto reason = options_.fault_injector(svc, tenant, i)) {
          failure.emplace(svc, *reason);
          break;
        }
      }
      ServiceDeployment dep{tenant, {}, slice};
      try {
        for (const auto& vf : catalog_.services.at(svc).functions) {
          dep.allocations.push_back(infra_.allocate(tenant, svc, vf_footprint(vf), isolation).id);
        }
      } catch (const Error& e) {
        for (const auto& a : dep.allocations) infra_.release(a);
        failure.emplace(svc, e.what());
        break;
      }
      done.emplace_back(svc, std::move(dep));
    }

    if (failure && (options_.atomic_slice_instantiation || done.empty())) {
      roll_back();
      throw PartialFailureError(failure->first, failure->second);
    }

    // Commit in lockstep with the log so the two never disagree.
    std::size_t committed = 0;
    try {
      for (auto& [svc, dep] : done) {
        record_event(make_event(actor, action::instantiate_service, svc, Outcome::ok, dep.tenant));
        catalog_.records.at(svc).state = ServiceState::instantiated;
        catalog_.deployments[svc] = std::move(dep);
        ++committed;
      }
      if (failure) {
        record_event(make_event(actor, action::instantiate_service, failure->first,
                                Outcome::failed, failure->second));
        record_event(make_event(actor, action::instantiate_slice_partial, slice, Outcome::ok,
                                "failed at '" + failure->first + "'"));
        rec.state = SliceState::partially_instantiated;
      } else {
        record_event(make_event(actor, action::instantiate_slice, slice, Outcome::ok));
        rec.state = SliceState::active;
      }
      catalog_.slice_plans[slice] = plan;
    } catch (...) {
      done.erase(done.begin(), done.begin() + static_cast<std::ptrdiff_t>(committed));
      roll_back();
      throw;
    }
    return rec;
  });
}

LifecycleRecord Engine::teardown_slice(const Actor& actor, const EntityId& slice) {
  std::lock_guard lock(mutex_);
  return audited(actor, action::teardown_slice, slice, [&] {
    gate(actor, Permission::teardown, action::teardown_slice, slice);
    LifecycleRecord& rec = record(slice);
    if (rec.kind != RecordKind::slice) throw Error(Errc::NotFound, "'" + slice + "' is not a slice");
    const auto state = std::get<SliceState>(rec.state);
    if (state != SliceState::active && state != SliceState::partially_instantiated) {
      throw Error(Errc::InvalidTransition,
                  "slice '" + slice + "' is " + state_name(rec.state) + "; nothing to tear down");
    }
    for (const auto& svc : catalog_.slices.at(slice).services) {
      LifecycleRecord& srec = catalog_.records.at(svc);
      if (std::get<ServiceState>(srec.state) != ServiceState::instantiated) continue;
      auto dep = catalog_.deployments.find(svc);
      if (dep == catalog_.deployments.end() || dep->second.slice != slice) continue;
      record_event(make_event(actor, action::terminate_service, svc, Outcome::ok));
      release_deployment(svc);
      srec.state = ServiceState::terminated;
    }
    record_event(make_event(actor, action::teardown_slice, slice, Outcome::ok));
    rec.state = SliceState::terminated;
    catalog_.slice_plans.erase(slice);
    return rec;
  });
}

}  // namespace slicer
