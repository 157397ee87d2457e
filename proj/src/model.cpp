#include "slicer/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace slicer {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::NotFound: return "NotFound";
    case Errc::Duplicate: return "Duplicate";
    case Errc::EmptySlice: return "EmptySlice";
    case Errc::InvalidProfile: return "InvalidProfile";
    case Errc::UnknownService: return "UnknownService";
    case Errc::MissingServiceSla: return "MissingServiceSla";
    case Errc::SlaViolatesProfile: return "SlaViolatesProfile";
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::DanglingReference: return "DanglingReference";
    case Errc::MissingSizing: return "MissingSizing";
    case Errc::RoleDenied: return "RoleDenied";
    case Errc::TemplateRejected: return "TemplateRejected";
    case Errc::InvalidTransition: return "InvalidTransition";
    case Errc::UncertifiedVf: return "UncertifiedVf";
    case Errc::EmptyService: return "EmptyService";
    case Errc::PlanInvalid: return "PlanInvalid";
    case Errc::PartialFailure: return "PartialFailure";
    case Errc::InsufficientCapacity: return "InsufficientCapacity";
    case Errc::UnknownAllocation: return "UnknownAllocation";
    case Errc::Unreachable: return "Unreachable";
    case Errc::MissingFootprint: return "MissingFootprint";
    case Errc::IoFailure: return "IoFailure";
    case Errc::SchemaMismatch: return "SchemaMismatch";
    case Errc::SequenceGap: return "SequenceGap";
  }
  return "Unknown";
}

ResourceDemand& ResourceDemand::operator+=(const ResourceDemand& o) {
  vcpu += o.vcpu;
  ram += o.ram;
  storage += o.storage;
  ports += o.ports;
  return *this;
}

ResourceDemand& ResourceDemand::operator-=(const ResourceDemand& o) {
  vcpu -= o.vcpu;
  ram -= o.ram;
  storage -= o.storage;
  ports -= o.ports;
  return *this;
}

bool ResourceDemand::fits_within(const ResourceDemand& limit) const {
  return vcpu <= limit.vcpu && ram <= limit.ram && storage <= limit.storage &&
         ports <= limit.ports;
}

bool ResourceDemand::non_negative() const {
  return vcpu >= 0 && ram >= 0 && storage >= 0 && ports >= 0;
}

void ResourceDemand::validate() const {
  if (!non_negative()) {
    throw Error(Errc::InvalidArgument, "negative resource demand " + to_string(*this));
  }
}

ResourceDemand componentwise_max(const ResourceDemand& a, const ResourceDemand& b) {
  return {std::max(a.vcpu, b.vcpu), std::max(a.ram, b.ram), std::max(a.storage, b.storage),
          std::max(a.ports, b.ports)};
}

std::string to_string(const ResourceDemand& d) {
  std::ostringstream os;
  os << "{vcpu=" << d.vcpu << ", ram=" << d.ram << "MiB, storage=" << d.storage
     << "GiB, ports=" << d.ports << "}";
  return os.str();
}

void Customer::validate() const {
  if (id.empty()) throw Error(Errc::InvalidArgument, "customer id is empty");
  if (name.empty()) throw Error(Errc::InvalidArgument, "customer '" + id + "' has no name");
}

void SliceProvider::validate() const {
  if (id.empty()) throw Error(Errc::InvalidArgument, "provider id is empty");
  if (administrative_domains.empty()) {
    throw Error(Errc::InvalidArgument,
                "provider '" + id + "' needs at least one administrative domain");
  }
}

SemVer SemVer::parse(const std::string& text) {
  SemVer v;
  char dot1 = 0;
  char dot2 = 0;
  std::istringstream is(text);
  if (!(is >> v.major >> dot1 >> v.minor >> dot2 >> v.patch) || dot1 != '.' || dot2 != '.' ||
      is.peek() != std::char_traits<char>::eof() || v.major < 0 || v.minor < 0 || v.patch < 0) {
    throw Error(Errc::InvalidArgument, "not a semantic version: '" + text + "'");
  }
  return v;
}

std::string to_string(const SemVer& v) {
  return std::to_string(v.major) + "." + std::to_string(v.minor) + "." + std::to_string(v.patch);
}

void VendorSoftwareProduct::validate() const {
  if (id.empty()) throw Error(Errc::InvalidArgument, "vendor software product id is empty");
  if (vendor_name.empty() || product_name.empty()) {
    throw Error(Errc::InvalidArgument, "vendor software product '" + id + "' lacks a name");
  }
  if (version.major < 0 || version.minor < 0 || version.patch < 0) {
    throw Error(Errc::InvalidArgument, "negative version in '" + id + "'");
  }
}

void NetworkFunction::validate() const {
  if (id.empty()) throw Error(Errc::InvalidArgument, "network function id is empty");
  if (components.empty()) {
    throw Error(Errc::InvalidArgument, "network function '" + id + "' has no components");
  }
  std::set<std::string> names;
  for (const auto& c : components) {
    if (!names.insert(c.name).second) {
      throw Error(Errc::InvalidArgument,
                  "duplicate component '" + c.name + "' in function '" + id + "'");
    }
    c.compute_demand.validate();
  }
  const bool has_template = template_ref.has_value() && !template_ref->empty();
  if (kind == FunctionKind::virtual_function && !has_template) {
    throw Error(Errc::InvalidArgument, "virtual function '" + id + "' has no template");
  }
  if (kind == FunctionKind::physical_function && template_ref.has_value()) {
    throw Error(Errc::InvalidArgument, "physical function '" + id + "' must not have a template");
  }
}

void NetworkService::validate() const {
  if (id.empty()) throw Error(Errc::InvalidArgument, "network service id is empty");
  if (functions.empty()) {
    throw Error(Errc::EmptyService, "network service '" + id + "' has no functions");
  }
  const std::set<EntityId> members(functions.begin(), functions.end());
  std::set<std::pair<EntityId, std::string>> attached;
  for (const auto& link : virtual_links) {
    if (link.endpoints.size() < 2) {
      throw Error(Errc::InvalidArgument, "virtual link '" + link.name + "' needs two endpoints");
    }
    for (const auto& cp : link.endpoints) {
      if (!members.contains(cp.owner_function)) {
        throw Error(Errc::InvalidArgument, "virtual link '" + link.name + "' endpoint '" +
                                               cp.name + "' belongs to foreign function '" +
                                               cp.owner_function + "'");
      }
      if (!attached.emplace(cp.owner_function, cp.name).second) {
        throw Error(Errc::InvalidArgument, "connection point '" + cp.owner_function + ":" +
                                               cp.name + "' is attached to more than one link");
      }
    }
  }
}

void ServiceProfile::validate() const {
  if (!(end_to_end_latency > 0.0)) {
    throw Error(Errc::InvalidProfile, "end-to-end latency must be positive");
  }
  if (!(guaranteed_data_rate > 0.0)) {
    throw Error(Errc::InvalidProfile, "guaranteed data rate must be positive");
  }
  if (!(service_availability > 0.0 && service_availability <= 1.0)) {
    throw Error(Errc::InvalidProfile, "service availability must lie in (0, 1]");
  }
  if (priority < 0) throw Error(Errc::InvalidProfile, "priority must be non-negative");
}

std::vector<std::string> profile_warnings(const ServiceProfile& profile) {
  std::vector<std::string> out;
  if (profile.service_availability == 1.0) {
    out.emplace_back("service availability of exactly 1.0 cannot be realized");
  }
  return out;
}

namespace {

void check_sla_against_profile(const Sla& sla, const ServiceProfile& profile) {
  if (sla.committed_latency > profile.end_to_end_latency + kSlaTolerance) {
    throw Error(Errc::SlaViolatesProfile,
                "committed latency " + std::to_string(sla.committed_latency) +
                    " ms exceeds profile limit " + std::to_string(profile.end_to_end_latency) +
                    " ms");
  }
  if (sla.committed_availability < profile.service_availability - kSlaTolerance) {
    throw Error(Errc::SlaViolatesProfile,
                "committed availability " + std::to_string(sla.committed_availability) +
                    " below profile " + std::to_string(profile.service_availability));
  }
  if (sla.committed_data_rate < profile.guaranteed_data_rate - kSlaTolerance) {
    throw Error(Errc::SlaViolatesProfile,
                "committed data rate " + std::to_string(sla.committed_data_rate) +
                    " Mbit/s below profile " + std::to_string(profile.guaranteed_data_rate));
  }
}

}  // namespace

void NetworkSlice::validate() const {
  if (id.empty()) throw Error(Errc::InvalidArgument, "slice id is empty");
  if (services.empty()) throw Error(Errc::EmptySlice, "slice '" + id + "' has no services");
  profile.validate();
  if (sla) {
    if (sla->slice_id != id) {
      throw Error(Errc::InvalidArgument, "SLA belongs to slice '" + sla->slice_id + "'");
    }
    check_sla_against_profile(*sla, profile);
  }
}

void SliceTemplate::validate(const NetworkSlice& slice) const {
  if (slice_id != slice.id) {
    throw Error(Errc::InvalidArgument, "template describes slice '" + slice_id + "', not '" +
                                           slice.id + "'");
  }
  double budget_sum = 0.0;
  for (const auto& svc : slice.services) {
    auto it = per_service_requirements.find(svc);
    if (it == per_service_requirements.end()) {
      throw Error(Errc::UnknownService, "no requirements for service '" + svc + "'");
    }
    const auto& req = it->second;
    if (!(req.latency_budget > 0.0)) {
      throw Error(Errc::InvalidArgument, "latency budget of '" + svc + "' must be positive");
    }
    if (!(req.reliability > 0.0 && req.reliability <= 1.0)) {
      throw Error(Errc::InvalidArgument, "reliability of '" + svc + "' must lie in (0, 1]");
    }
    if (req.data_rate < 0.0) {
      throw Error(Errc::InvalidArgument, "data rate of '" + svc + "' is negative");
    }
    req.demand.validate();
    budget_sum += req.latency_budget;
  }
  if (slice.chain_order && budget_sum > slice.profile.end_to_end_latency + kSlaTolerance) {
    throw Error(Errc::SlaViolatesProfile,
                "latency budgets sum to " + std::to_string(budget_sum) +
                    " ms, above the profile's " +
                    std::to_string(slice.profile.end_to_end_latency) + " ms");
  }
}

NetworkSlice compose_slice(EntityId id, std::string name, EntityId customer, EntityId provider,
                           const std::vector<NetworkService>& services,
                           const ServiceProfile& profile, bool chain_order) {
  if (services.empty()) throw Error(Errc::EmptySlice, "a slice needs at least one service");
  profile.validate();
  NetworkSlice slice;
  slice.id = std::move(id);
  slice.name = std::move(name);
  slice.customer = std::move(customer);
  slice.provider = std::move(provider);
  slice.profile = profile;
  slice.chain_order = chain_order;
  std::set<EntityId> seen;
  for (const auto& svc : services) {
    svc.validate();
    if (!seen.insert(svc.id).second) {
      throw Error(Errc::Duplicate, "service '" + svc.id + "' listed twice");
    }
    slice.services.push_back(svc.id);
  }
  slice.validate();
  return slice;
}

Sla derive_service_sla(const ServiceProfile& profile, const SliceTemplate& slice_template,
                       const EntityId& service) {
  auto it = slice_template.per_service_requirements.find(service);
  if (it == slice_template.per_service_requirements.end()) {
    throw Error(Errc::UnknownService, "service '" + service + "' is not in the slice template");
  }
  const auto& req = it->second;
  Sla sla;
  sla.slice_id = slice_template.slice_id;
  sla.committed_latency = req.latency_budget;
  sla.committed_availability = req.reliability;
  sla.committed_data_rate = req.data_rate;
  sla.penalties = profile.charging_model;
  return sla;
}

Sla compose_slas(const std::vector<Sla>& parts, bool chain_order) {
  if (parts.empty()) throw Error(Errc::MissingServiceSla, "nothing to compose");
  Sla out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const auto& p = parts[i];
    out.committed_latency = chain_order ? out.committed_latency + p.committed_latency
                                        : std::max(out.committed_latency, p.committed_latency);
    out.committed_availability *= p.committed_availability;
    out.committed_data_rate = std::min(out.committed_data_rate, p.committed_data_rate);
  }
  return out;
}

Sla aggregate_sla(const NetworkSlice& slice, const std::map<EntityId, Sla>& service_slas) {
  std::vector<Sla> parts;
  parts.reserve(slice.services.size());
  for (const auto& svc : slice.services) {
    auto it = service_slas.find(svc);
    if (it == service_slas.end()) {
      throw Error(Errc::MissingServiceSla, "no SLA for service '" + svc + "'");
    }
    parts.push_back(it->second);
  }
  Sla out = compose_slas(parts, slice.chain_order);
  out.slice_id = slice.id;
  out.penalties = slice.profile.charging_model;
  check_sla_against_profile(out, slice.profile);
  return out;
}

NetworkSlice with_sla(const NetworkSlice& slice, const Sla& sla) {
  NetworkSlice out = slice;
  out.sla = sla;
  out.validate();
  return out;
}

SliceTemplate default_slice_template(const NetworkSlice& slice,
                                     const std::map<EntityId, ResourceDemand>& demands) {
  SliceTemplate t;
  t.slice_id = slice.id;
  const auto n = static_cast<double>(slice.services.size());
  const auto& p = slice.profile;
  for (const auto& svc : slice.services) {
    ServiceRequirement req;
    req.latency_budget = slice.chain_order ? p.end_to_end_latency / n : p.end_to_end_latency;
    // (1 - u/n)^n >= 1 - u, so the chain product never falls below the profile.
    req.reliability = 1.0 - (1.0 - p.service_availability) / n;
    req.data_rate = p.guaranteed_data_rate;
    if (auto it = demands.find(svc); it != demands.end()) req.demand = it->second;
    t.per_service_requirements.emplace(svc, req);
  }
  return t;
}

}  // namespace slicer
