#include "slicer/store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

namespace slicer {

using json = nlohmann::json;

NLOHMANN_JSON_SERIALIZE_ENUM(FunctionKind, {{FunctionKind::virtual_function, "virtual"},
                                            {FunctionKind::physical_function, "physical"}})
NLOHMANN_JSON_SERIALIZE_ENUM(Isolation, {{Isolation::shared, "shared"},
                                         {Isolation::dedicated_tenant, "dedicated_tenant"},
                                         {Isolation::dedicated_host, "dedicated_host"}})
NLOHMANN_JSON_SERIALIZE_ENUM(HostIsolation, {{HostIsolation::shared, "shared"},
                                             {HostIsolation::dedicated, "dedicated"}})
NLOHMANN_JSON_SERIALIZE_ENUM(RecordKind, {{RecordKind::vf, "vf"},
                                          {RecordKind::service, "service"},
                                          {RecordKind::slice, "slice"}})

namespace {

// Enum fields read through here so unknown strings fail loudly instead of
// silently mapping to the first enumerator.
template <class E>
E enum_field(const json& j, const char* key, std::initializer_list<E> allowed) {
  const json& v = j.at(key);
  for (E e : allowed) {
    if (json(e) == v) return e;
  }
  throw Error(Errc::IoFailure, std::string("bad value for '") + key + "': " + v.dump());
}

}  // namespace

void to_json(json& j, const ResourceDemand& d) {
  j = json{{"vcpu", d.vcpu}, {"ram", d.ram}, {"storage", d.storage}, {"ports", d.ports}};
}
void from_json(const json& j, ResourceDemand& d) {
  d.vcpu = j.at("vcpu").get<std::int64_t>();
  d.ram = j.at("ram").get<std::int64_t>();
  d.storage = j.at("storage").get<std::int64_t>();
  d.ports = j.at("ports").get<std::int64_t>();
}

void to_json(json& j, const Customer& c) {
  j = json{{"id", c.id}, {"name", c.name}, {"description", c.description}, {"category", c.category}};
}
void from_json(const json& j, Customer& c) {
  c.id = j.at("id");
  c.name = j.at("name");
  c.description = j.value("description", "");
  c.category = j.value("category", "");
}

void to_json(json& j, const SliceProvider& p) {
  j = json{{"id", p.id}, {"name", p.name}, {"administrative_domains", p.administrative_domains}};
}
void from_json(const json& j, SliceProvider& p) {
  p.id = j.at("id");
  p.name = j.at("name");
  p.administrative_domains = j.at("administrative_domains").get<std::set<std::string>>();
}

void to_json(json& j, const VendorSoftwareProduct& v) {
  j = json{{"id", v.id},
           {"vendor_name", v.vendor_name},
           {"product_name", v.product_name},
           {"version", to_string(v.version)},
           {"owned_resources", v.owned_resources}};
}
void from_json(const json& j, VendorSoftwareProduct& v) {
  v.id = j.at("id");
  v.vendor_name = j.at("vendor_name");
  v.product_name = j.at("product_name");
  v.version = SemVer::parse(j.at("version").get<std::string>());
  v.owned_resources = j.at("owned_resources").get<std::set<EntityId>>();
}

void to_json(json& j, const FunctionComponent& c) {
  j = json{{"name", c.name}, {"compute_demand", c.compute_demand}, {"ports", c.ports}};
}
void from_json(const json& j, FunctionComponent& c) {
  c.name = j.at("name");
  c.compute_demand = j.at("compute_demand");
  c.ports = j.at("ports").get<std::vector<std::string>>();
}

void to_json(json& j, const ConnectionPoint& cp) {
  j = json{{"name", cp.name}, {"owner_function", cp.owner_function}};
  if (cp.attached_link) j["attached_link"] = *cp.attached_link;
}
void from_json(const json& j, ConnectionPoint& cp) {
  cp.name = j.at("name");
  cp.owner_function = j.at("owner_function");
  if (j.contains("attached_link")) cp.attached_link = j.at("attached_link").get<std::string>();
}

void to_json(json& j, const VirtualLink& l) {
  j = json{{"name", l.name}, {"endpoints", l.endpoints}};
}
void from_json(const json& j, VirtualLink& l) {
  l.name = j.at("name");
  l.endpoints = j.at("endpoints").get<std::vector<ConnectionPoint>>();
}

void to_json(json& j, const NetworkFunction& f) {
  j = json{{"id", f.id}, {"kind", f.kind}, {"components", f.components}};
  if (f.template_ref) j["template_ref"] = *f.template_ref;
}
void from_json(const json& j, NetworkFunction& f) {
  f.id = j.at("id");
  f.kind = enum_field(j, "kind", {FunctionKind::virtual_function, FunctionKind::physical_function});
  f.components = j.at("components").get<std::vector<FunctionComponent>>();
  if (j.contains("template_ref")) f.template_ref = j.at("template_ref").get<std::string>();
}

void to_json(json& j, const NetworkService& s) {
  j = json{{"id", s.id}, {"name", s.name}, {"functions", s.functions}, {"virtual_links", s.virtual_links}};
}
void from_json(const json& j, NetworkService& s) {
  s.id = j.at("id");
  s.name = j.at("name");
  s.functions = j.at("functions").get<std::vector<EntityId>>();
  s.virtual_links = j.value("virtual_links", std::vector<VirtualLink>{});
}

void to_json(json& j, const ServiceProfile& p) {
  j = json{{"end_to_end_latency", p.end_to_end_latency},
           {"guaranteed_data_rate", p.guaranteed_data_rate},
           {"service_availability", p.service_availability},
           {"degree_of_isolation", p.degree_of_isolation},
           {"coverage_area", p.coverage_area},
           {"priority", p.priority},
           {"user_density", p.user_density},
           {"ue_speed", p.ue_speed},
           {"charging_model", p.charging_model}};
}
void from_json(const json& j, ServiceProfile& p) {
  p.end_to_end_latency = j.at("end_to_end_latency");
  p.guaranteed_data_rate = j.at("guaranteed_data_rate");
  p.service_availability = j.at("service_availability");
  p.degree_of_isolation =
      enum_field(j, "degree_of_isolation",
                 {Isolation::shared, Isolation::dedicated_tenant, Isolation::dedicated_host});
  p.coverage_area = j.value("coverage_area", "");
  p.priority = j.value("priority", 0);
  p.user_density = j.value("user_density", 0.0);
  p.ue_speed = j.value("ue_speed", 0.0);
  p.charging_model = j.value("charging_model", "");
}

void to_json(json& j, const Sla& s) {
  j = json{{"slice_id", s.slice_id},
           {"committed_latency", s.committed_latency},
           {"committed_availability", s.committed_availability},
           {"committed_data_rate", s.committed_data_rate},
           {"penalties", s.penalties}};
}
void from_json(const json& j, Sla& s) {
  s.slice_id = j.at("slice_id");
  s.committed_latency = j.at("committed_latency");
  s.committed_availability = j.at("committed_availability");
  s.committed_data_rate = j.at("committed_data_rate");
  s.penalties = j.value("penalties", "");
}

void to_json(json& j, const NetworkSlice& s) {
  j = json{{"id", s.id},           {"name", s.name},         {"customer", s.customer},
           {"provider", s.provider}, {"services", s.services}, {"profile", s.profile},
           {"chain_order", s.chain_order}};
  if (s.sla) j["sla"] = *s.sla;
}
void from_json(const json& j, NetworkSlice& s) {
  s.id = j.at("id");
  s.name = j.at("name");
  s.customer = j.at("customer");
  s.provider = j.at("provider");
  s.services = j.at("services").get<std::vector<EntityId>>();
  s.profile = j.at("profile");
  s.chain_order = j.value("chain_order", true);
  if (j.contains("sla")) s.sla = j.at("sla").get<Sla>();
}

void to_json(json& j, const ServiceRequirement& r) {
  j = json{{"latency_budget", r.latency_budget},
           {"reliability", r.reliability},
           {"data_rate", r.data_rate},
           {"demand", r.demand}};
}
void from_json(const json& j, ServiceRequirement& r) {
  r.latency_budget = j.at("latency_budget");
  r.reliability = j.at("reliability");
  r.data_rate = j.at("data_rate");
  r.demand = j.value("demand", ResourceDemand{});
}

void to_json(json& j, const SliceTemplate& t) {
  j = json{{"slice_id", t.slice_id},
           {"per_service_requirements", t.per_service_requirements},
           {"template_refs", t.template_refs}};
}
void from_json(const json& j, SliceTemplate& t) {
  t.slice_id = j.at("slice_id");
  t.per_service_requirements =
      j.at("per_service_requirements").get<std::map<EntityId, ServiceRequirement>>();
  t.template_refs =
      j.value("template_refs", std::map<EntityId, std::vector<std::string>>{});
}

namespace {

json state_to_json(const LifecycleState& s) { return state_name(s); }

LifecycleState state_from_json(RecordKind kind, const std::string& name) {
  switch (kind) {
    case RecordKind::vf:
      for (auto s : {VfState::draft, VfState::certified}) {
        if (to_string(s) == name) return s;
      }
      break;
    case RecordKind::service:
      for (auto s : {ServiceState::designed, ServiceState::tested, ServiceState::approved,
                     ServiceState::distributed, ServiceState::instantiated,
                     ServiceState::terminated}) {
        if (to_string(s) == name) return s;
      }
      break;
    case RecordKind::slice:
      for (auto s : {SliceState::drafted, SliceState::ready, SliceState::partially_instantiated,
                     SliceState::active, SliceState::terminated}) {
        if (to_string(s) == name) return s;
      }
      break;
  }
  throw Error(Errc::IoFailure, "unknown " + std::string(to_string(kind)) + " state '" + name + "'");
}

}  // namespace

void to_json(json& j, const LifecycleRecord& r) {
  j = json{{"subject", r.subject}, {"kind", r.kind}, {"state", state_to_json(r.state)},
           {"history", r.history}};
}
void from_json(const json& j, LifecycleRecord& r) {
  r.subject = j.at("subject");
  r.kind = enum_field(j, "kind", {RecordKind::vf, RecordKind::service, RecordKind::slice});
  r.state = state_from_json(r.kind, j.at("state").get<std::string>());
  r.history = j.at("history").get<std::vector<std::uint64_t>>();
}

void to_json(json& j, const ServiceDeployment& d) {
  j = json{{"tenant", d.tenant}, {"allocations", d.allocations}};
  if (!d.slice.empty()) j["slice"] = d.slice;
}
void from_json(const json& j, ServiceDeployment& d) {
  d.tenant = j.at("tenant");
  d.allocations = j.at("allocations").get<std::vector<EntityId>>();
  d.slice = j.value("slice", EntityId{});
}

void to_json(json& j, const Assignment& a) { j = json{{"service", a.service}, {"tenant", a.tenant}}; }
void from_json(const json& j, Assignment& a) {
  a.service = j.at("service");
  a.tenant = j.at("tenant");
}

void to_json(json& j, const PlacementPlan& p) {
  j = json{{"slice", p.slice},
           {"assignments", p.assignments},
           {"e2e_latency", p.e2e_latency},
           {"feasible", p.feasible}};
  if (!p.reason.empty()) j["reason"] = p.reason;
  if (!p.warnings.empty()) j["warnings"] = p.warnings;
}
void from_json(const json& j, PlacementPlan& p) {
  p.slice = j.at("slice");
  p.assignments = j.at("assignments").get<std::vector<Assignment>>();
  p.e2e_latency = j.at("e2e_latency");
  p.feasible = j.value("feasible", true);
  p.reason = j.value("reason", "");
  p.warnings = j.value("warnings", std::vector<std::string>{});
}

void to_json(json& j, const Host& h) {
  j = json{{"id", h.id},       {"name", h.name}, {"capacity", h.capacity},
           {"site", h.site}, {"isolation_class", h.isolation_class}};
}
void from_json(const json& j, Host& h) {
  h.id = j.at("id");
  h.name = j.value("name", "");
  h.capacity = j.at("capacity");
  h.site = j.value("site", "");
  h.isolation_class = j.contains("isolation_class")
                          ? enum_field(j, "isolation_class",
                                       {HostIsolation::shared, HostIsolation::dedicated})
                          : HostIsolation::shared;
}

void to_json(json& j, const Tenant& t) {
  j = json{{"id", t.id},   {"name", t.name},   {"owner", t.owner},
           {"host", t.host}, {"quota", t.quota}, {"used", t.used}};
}
void from_json(const json& j, Tenant& t) {
  t.id = j.at("id");
  t.name = j.value("name", "");
  t.owner = j.value("owner", "");
  t.host = j.at("host");
  t.quota = j.at("quota");
  t.used = j.value("used", ResourceDemand{});
}

void to_json(json& j, const PhysicalLink& l) {
  j = json{{"id", l.id},
           {"endpoints", {l.endpoints.first, l.endpoints.second}},
           {"latency", l.latency},
           {"bandwidth", l.bandwidth}};
}
void from_json(const json& j, PhysicalLink& l) {
  l.id = j.at("id");
  const auto& ep = j.at("endpoints");
  if (!ep.is_array() || ep.size() != 2) {
    throw Error(Errc::IoFailure, "link '" + l.id + "' needs exactly two endpoints");
  }
  l.endpoints = {ep[0].get<std::string>(), ep[1].get<std::string>()};
  l.latency = j.at("latency");
  l.bandwidth = j.value("bandwidth", 1000.0);
}

void to_json(json& j, const Allocation& a) {
  j = json{{"id", a.id},
           {"tenant", a.tenant},
           {"service", a.service},
           {"demand", a.demand},
           {"isolation", a.isolation}};
}
void from_json(const json& j, Allocation& a) {
  a.id = j.at("id");
  a.tenant = j.at("tenant");
  a.service = j.at("service");
  a.demand = j.at("demand");
  a.isolation = j.contains("isolation")
                    ? enum_field(j, "isolation",
                                 {Isolation::shared, Isolation::dedicated_tenant,
                                  Isolation::dedicated_host})
                    : Isolation::shared;
}

namespace {

// Library errors from nlohmann surface as IoFailure with the offending detail.
template <class F>
auto decoding(const std::string& what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw Error(Errc::IoFailure, "malformed " + what + ": " + e.what());
  }
}

}  // namespace

json to_json_document(const Catalog& c) {
  return json{{"version", c.version},
              {"customers", c.customers},
              {"providers", c.providers},
              {"vsps", c.vsps},
              {"functions", c.functions},
              {"services", c.services},
              {"slices", c.slices},
              {"slice_templates", c.slice_templates},
              {"template_blobs", c.template_blobs},
              {"records", c.records},
              {"deployments", c.deployments},
              {"slice_plans", c.slice_plans}};
}

Catalog catalog_from_json(const json& doc) {
  return decoding("catalog", [&] {
    Catalog c;
    c.version = doc.at("version").get<int>();
    if (c.version != kCatalogSchemaVersion) {
      throw Error(Errc::SchemaMismatch, "catalog schema version " + std::to_string(c.version) +
                                            ", expected " + std::to_string(kCatalogSchemaVersion));
    }
    c.customers = doc.at("customers").get<std::map<EntityId, Customer>>();
    c.providers = doc.at("providers").get<std::map<EntityId, SliceProvider>>();
    c.vsps = doc.at("vsps").get<std::map<EntityId, VendorSoftwareProduct>>();
    c.functions = doc.at("functions").get<std::map<EntityId, NetworkFunction>>();
    c.services = doc.at("services").get<std::map<EntityId, NetworkService>>();
    c.slices = doc.at("slices").get<std::map<EntityId, NetworkSlice>>();
    c.slice_templates = doc.at("slice_templates").get<std::map<EntityId, SliceTemplate>>();
    c.template_blobs = doc.at("template_blobs").get<std::map<std::string, std::string>>();
    c.records = doc.at("records").get<std::map<EntityId, LifecycleRecord>>();
    c.deployments = doc.at("deployments").get<std::map<EntityId, ServiceDeployment>>();
    c.slice_plans = doc.at("slice_plans").get<std::map<EntityId, PlacementPlan>>();
    c.validate();
    return c;
  });
}

json to_json_document(const Infrastructure& infra) {
  json hosts = json::array();
  for (const auto& [_, h] : infra.hosts()) hosts.push_back(h);
  json tenants = json::array();
  for (const auto& [_, t] : infra.tenants()) tenants.push_back(t);
  json links = json::array();
  for (const auto& [_, l] : infra.links()) links.push_back(l);
  json allocations = json::array();
  for (const auto& [_, a] : infra.allocations()) allocations.push_back(a);
  return json{{"version", kInventorySchemaVersion},
              {"hosts", hosts},
              {"tenants", tenants},
              {"links", links},
              {"allocations", allocations},
              {"next_allocation", infra.next_allocation_no()}};
}

Infrastructure inventory_from_json(const json& doc) {
  return decoding("inventory", [&] {
    const int version = doc.value("version", kInventorySchemaVersion);
    if (version != kInventorySchemaVersion) {
      throw Error(Errc::SchemaMismatch, "inventory schema version " + std::to_string(version));
    }
    Infrastructure infra;
    for (const auto& h : doc.at("hosts")) infra.add_host(h.get<Host>());
    for (const auto& t : doc.at("tenants")) infra.add_tenant(t.get<Tenant>());
    for (const auto& l : doc.value("links", json::array())) infra.add_link(l.get<PhysicalLink>());
    for (const auto& a : doc.value("allocations", json::array())) {
      infra.restore_allocation(a.get<Allocation>());
    }
    infra.set_next_allocation_no(doc.value("next_allocation", std::uint64_t{1}));
    infra.validate();
    return infra;
  });
}

json to_json_document(const PlacementPlan& plan) { return plan; }

PlacementPlan plan_from_json(const json& doc) {
  return decoding("plan", [&] { return doc.get<PlacementPlan>(); });
}

json to_json_document(const SliceTemplate& t) { return t; }

SliceTemplate slice_template_from_json(const json& doc) {
  return decoding("slice template", [&] { return doc.get<SliceTemplate>(); });
}

json to_json_document(const ServiceProfile& p) { return p; }

ServiceProfile profile_from_json(const json& doc) {
  return decoding("service profile", [&] { return doc.get<ServiceProfile>(); });
}

json to_json_document(const ValidationReport& report) {
  json findings = json::array();
  for (const auto& f : report.findings) {
    findings.push_back({{"rule_id", to_string(f.rule)},
                        {"severity", f.severity == Severity::error ? "error" : "warning"},
                        {"location", f.location},
                        {"message", f.message}});
  }
  return json{{"verdict", report.accepted() ? "accepted" : "rejected"}, {"findings", findings}};
}

json to_json_document(const PlanVerdict& verdict) {
  json violations = json::array();
  for (const auto& v : verdict.violations) {
    violations.push_back({{"kind", to_string(v.kind)},
                          {"service", v.service},
                          {"tenant", v.tenant},
                          {"message", v.message}});
  }
  return json{{"ok", verdict.ok}, {"violations", violations}};
}

json to_json_document(const LifecycleRecord& record) { return record; }

std::string to_line(const AuditEvent& e) {
  nlohmann::ordered_json j;
  j["seq"] = e.sequence_no;
  j["actor"] = to_string(e.actor);
  j["actor_id"] = e.actor_id;
  j["action"] = e.action;
  j["subject"] = e.subject;
  j["ts"] = e.timestamp;
  j["outcome"] = to_string(e.outcome);
  j["detail"] = e.detail;
  return j.dump();
}

AuditEvent event_from_line(const std::string& line) {
  return decoding("audit event", [&] {
    const json j = json::parse(line);
    AuditEvent e;
    e.sequence_no = j.at("seq").get<std::uint64_t>();
    e.actor = parse_role(j.at("actor").get<std::string>());
    e.actor_id = j.at("actor_id");
    e.action = j.at("action");
    e.subject = j.at("subject");
    e.timestamp = j.at("ts").get<std::int64_t>();
    const auto outcome = j.at("outcome").get<std::string>();
    if (outcome == "ok") {
      e.outcome = Outcome::ok;
    } else if (outcome == "denied") {
      e.outcome = Outcome::denied;
    } else if (outcome == "failed") {
      e.outcome = Outcome::failed;
    } else {
      throw Error(Errc::IoFailure, "unknown audit outcome '" + outcome + "'");
    }
    e.detail = j.value("detail", "");
    return e;
  });
}

namespace {

[[noreturn]] void io_fail(const std::string& what, const fs::path& path) {
  throw Error(Errc::IoFailure, what + " '" + path.string() + "': " + std::strerror(errno));
}

void write_all(int fd, const char* data, std::size_t size, const fs::path& path) {
  while (size > 0) {
    const ssize_t n = ::write(fd, data, size);
    if (n < 0) {
      if (errno == EINTR) continue;
      io_fail("cannot write", path);
    }
    data += n;
    size -= static_cast<std::size_t>(n);
  }
}

void sync_directory(const fs::path& dir) {
  const int fd = ::open(dir.empty() ? "." : dir.c_str(), O_RDONLY | O_DIRECTORY);
  if (fd < 0) return;
  ::fsync(fd);
  ::close(fd);
}

}  // namespace

void write_file_atomic(const fs::path& path, const std::string& content, const SaveOptions& options) {
  fs::path tmp = path;
  tmp += ".tmp";
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) io_fail("cannot create", tmp);
  const std::size_t n = options.crash_after_bytes ? std::min(*options.crash_after_bytes, content.size())
                                                  : content.size();
  try {
    write_all(fd, content.data(), n, tmp);
  } catch (...) {
    ::close(fd);
    throw;
  }
  if (options.crash_after_bytes) {
    ::close(fd);
    throw Error(Errc::IoFailure, "simulated crash while saving '" + path.string() + "'");
  }
  if (::fsync(fd) != 0) {
    ::close(fd);
    io_fail("cannot sync", tmp);
  }
  ::close(fd);
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error(Errc::IoFailure, "cannot rename onto '" + path.string() + "': " + ec.message());
  sync_directory(path.parent_path());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoFailure, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

json parse_document(const fs::path& path) {
  const std::string text = read_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(Errc::IoFailure, "cannot parse '" + path.string() + "' at byte " +
                                     std::to_string(e.byte) + " of " +
                                     std::to_string(text.size()) + ": " + e.what());
  }
}

}  // namespace

void save_catalog(const Catalog& catalog, const fs::path& path, const SaveOptions& options) {
  write_file_atomic(path, to_json_document(catalog).dump(2) + "\n", options);
}

Catalog load_catalog(const fs::path& path) { return catalog_from_json(parse_document(path)); }

void save_inventory(const Infrastructure& infra, const fs::path& path, const SaveOptions& options) {
  write_file_atomic(path, to_json_document(infra).dump(2) + "\n", options);
}

Infrastructure load_inventory(const fs::path& path) {
  return inventory_from_json(parse_document(path));
}

void save_plan(const PlacementPlan& plan, const fs::path& path) {
  write_file_atomic(path, to_json_document(plan).dump(2) + "\n");
}

PlacementPlan load_plan(const fs::path& path) { return plan_from_json(parse_document(path)); }

AuditLog AuditLog::open(const fs::path& path) {
  AuditLog log;
  if (fs::exists(path)) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::IoFailure, "cannot open '" + path.string() + "'");
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      AuditEvent e;
      try {
        e = event_from_line(line);
      } catch (const Error& err) {
        throw Error(Errc::IoFailure, path.string() + ":" + std::to_string(line_no) + ": " + err.what());
      }
      log.append(e);
    }
  }
  log.path_ = path;
  return log;
}

void AuditLog::append(const AuditEvent& event) {
  if (event.sequence_no != last_sequence() + 1) {
    throw Error(Errc::SequenceGap, "event " + std::to_string(event.sequence_no) + " follows " +
                                       std::to_string(last_sequence()));
  }
  if (path_) {
    const std::string line = to_line(event) + "\n";
    const int fd = ::open(path_->c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
    if (fd < 0) io_fail("cannot open", *path_);
    try {
      write_all(fd, line.data(), line.size(), *path_);
    } catch (...) {
      ::close(fd);
      throw;
    }
    if (::fsync(fd) != 0) {
      ::close(fd);
      io_fail("cannot sync", *path_);
    }
    ::close(fd);
  }
  events_.push_back(event);
}

void append_event(AuditLog& log, const AuditEvent& event) { log.append(event); }

}  // namespace slicer
