#include "oracles.hpp"

#include <codecvt>
#include <limits>
#include <locale>
#include <map>
#include <set>

namespace oracle {

using namespace slicer;

namespace {

std::size_t code_points(const std::string& s) {
  std::wstring_convert<std::codecvt_utf8<char32_t>, char32_t> conv;
  return conv.from_bytes(s).size();
}

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

std::size_t env_count(const nlohmann::ordered_json& environment, bool count_names) {
  std::size_t n = 0;
  for (const auto& [k, v] : environment.items()) {
    n += code_points(v.get<std::string>()) + 2;
    if (count_names) n += code_points(k) + 2;
  }
  return n;
}

SlaTriple chain(const std::vector<SlaTriple>& parts) {
  SlaTriple out{0.0, 1.0, kInf};
  for (const auto& p : parts) {
    out.latency = out.latency + p.latency;
    out.availability = out.availability * p.availability;
    if (p.data_rate < out.data_rate) out.data_rate = p.data_rate;
  }
  return out;
}

SlaTriple parallel(const std::vector<SlaTriple>& parts) {
  SlaTriple out = chain(parts);
  out.latency = 0.0;
  for (const auto& p : parts) {
    if (p.latency > out.latency) out.latency = p.latency;
  }
  return out;
}

std::vector<std::vector<double>> host_distances(const Infrastructure& infra,
                                                std::vector<std::string>& host_ids) {
  host_ids.clear();
  std::map<std::string, std::size_t> index;
  for (const auto& [id, _] : infra.hosts()) {
    index[id] = host_ids.size();
    host_ids.push_back(id);
  }
  const std::size_t n = host_ids.size();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, kInf));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0.0;
  for (const auto& [_, l] : infra.links()) {
    const std::size_t a = index.at(l.endpoints.first);
    const std::size_t b = index.at(l.endpoints.second);
    if (l.latency < d[a][b]) d[a][b] = d[b][a] = l.latency;
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
      }
    }
  }
  return d;
}

namespace {

struct Checker {
  const Instance& inst;
  std::vector<std::string> host_ids;
  std::vector<std::vector<double>> dist;
  std::map<std::string, std::size_t> host_index;
  std::map<std::string, std::size_t> tenants_per_host;

  explicit Checker(const Instance& i) : inst(i) {
    dist = host_distances(i.infra, host_ids);
    for (std::size_t k = 0; k < host_ids.size(); ++k) host_index[host_ids[k]] = k;
    for (const auto& [_, t] : i.infra.tenants()) ++tenants_per_host[t.host];
  }

  const CapabilityRequirement& req(const std::string& svc) const {
    for (const auto& r : inst.requirements) {
      if (r.service == svc) return r;
    }
    throw std::logic_error("no requirement");
  }

  // Latency of the chain, or nullopt if the tuple breaks any constraint.
  std::optional<double> evaluate(const std::vector<const CapabilityOffer*>& tuple) const {
    const auto& services = inst.slice.services;
    std::map<std::string, ResourceDemand> load;
    std::map<std::string, int> count;
    std::map<std::string, bool> isolated;
    for (std::size_t s = 0; s < services.size(); ++s) {
      const CapabilityRequirement& r = req(services[s]);
      const CapabilityOffer& o = *tuple[s];
      if (o.exclusive) return std::nullopt;
      if (r.affinity && *r.affinity != o.site) return std::nullopt;
      if (r.isolation != Isolation::shared) {
        if (o.occupied) return std::nullopt;
        isolated[o.tenant] = true;
      }
      if (r.isolation == Isolation::dedicated_host) {
        if (o.host_isolation != HostIsolation::dedicated) return std::nullopt;
        if (tenants_per_host.at(o.host) != 1) return std::nullopt;
      }
      load[o.tenant] += r.demand;
      ++count[o.tenant];
    }
    for (const auto& [tenant, n] : count) {
      if (n > 1 && isolated[tenant]) return std::nullopt;
    }
    for (std::size_t s = 0; s < services.size(); ++s) {
      const auto& d = load[tuple[s]->tenant];
      const auto& f = tuple[s]->free;
      if (d.vcpu > f.vcpu || d.ram > f.ram || d.storage > f.storage || d.ports > f.ports) {
        return std::nullopt;
      }
    }
    double total = 0.0;
    for (std::size_t s = 1; s < services.size(); ++s) {
      const double hop =
          dist[host_index.at(tuple[s - 1]->host)][host_index.at(tuple[s]->host)];
      if (hop == kInf) return std::nullopt;
      total += hop;
    }
    if (total > inst.slice.profile.end_to_end_latency) return std::nullopt;
    return total;
  }
};

}  // namespace

std::optional<double> brute_force_optimum(const Instance& inst) {
  Checker c(inst);
  const std::size_t n = inst.slice.services.size();
  const std::size_t m = inst.offers.size();
  if (m == 0) return std::nullopt;
  std::vector<std::size_t> odo(n, 0);
  std::optional<double> best;
  while (true) {
    std::vector<const CapabilityOffer*> tuple;
    for (auto k : odo) tuple.push_back(&inst.offers[k]);
    if (auto v = c.evaluate(tuple); v && (!best || *v < *best)) best = v;
    std::size_t pos = 0;
    while (pos < n && ++odo[pos] == m) odo[pos++] = 0;
    if (pos == n) break;
  }
  return best;
}

bool plan_feasible(const Instance& inst, const PlacementPlan& plan) {
  if (!plan.feasible) return false;
  if (plan.assignments.size() != inst.slice.services.size()) return false;
  Checker c(inst);
  std::vector<const CapabilityOffer*> tuple;
  for (std::size_t s = 0; s < plan.assignments.size(); ++s) {
    if (plan.assignments[s].service != inst.slice.services[s]) return false;
    const CapabilityOffer* found = nullptr;
    for (const auto& o : inst.offers) {
      if (o.tenant == plan.assignments[s].tenant) found = &o;
    }
    if (!found) return false;
    tuple.push_back(found);
  }
  auto v = c.evaluate(tuple);
  return v && *v == plan.e2e_latency;
}

NetworkSlice make_slice(const std::string& id, int services, double limit, Isolation isolation) {
  NetworkSlice s;
  s.id = id;
  s.name = id;
  s.customer = "cust";
  s.provider = "prov";
  for (int i = 0; i < services; ++i) s.services.push_back("s" + std::to_string(i));
  s.profile.end_to_end_latency = limit;
  s.profile.degree_of_isolation = isolation;
  return s;
}

Instance random_instance(std::mt19937_64& rng, const InstanceShape& shape) {
  auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  Instance inst;
  const int hosts = uniform(1, shape.max_hosts);
  const int tenants = uniform(1, shape.max_tenants);
  const ResourceDemand host_cap{128, 131072, 1000, 128};
  for (int h = 0; h < hosts; ++h) {
    inst.infra.add_host({"h" + std::to_string(h), "h" + std::to_string(h), host_cap,
                         uniform(0, 1) ? "north" : "south",
                         uniform(0, 2) == 0 ? HostIsolation::dedicated : HostIsolation::shared});
  }
  for (int t = 0; t < tenants; ++t) {
    const std::string host = "h" + std::to_string(uniform(0, hosts - 1));
    const ResourceDemand quota{uniform(2, 12), 1024L * uniform(2, 12), 10L * uniform(2, 12),
                               uniform(2, 12)};
    inst.infra.add_tenant({"t" + std::to_string(t), "t" + std::to_string(t), "owner", host,
                           quota, {}});
  }
  for (int a = 0; a < hosts; ++a) {
    for (int b = a + 1; b < hosts; ++b) {
      if (uniform(0, 2) == 0) continue;
      inst.infra.add_link({"l" + std::to_string(a) + "-" + std::to_string(b),
                           {"h" + std::to_string(a), "h" + std::to_string(b)},
                           static_cast<double>(uniform(1, shape.max_link_latency)), 1000.0});
    }
  }
  for (const auto& [id, t] : inst.infra.tenants()) {
    if (uniform(0, 3) != 0) continue;
    const Isolation iso = uniform(0, 3) == 0 ? Isolation::dedicated_tenant : Isolation::shared;
    inst.infra.allocate(id, "existing-" + id, {1, 512, 5, 1}, iso);
  }

  const int services = uniform(1, shape.max_services);
  const int iso_pick = uniform(0, 5);
  const Isolation isolation = iso_pick == 0   ? Isolation::dedicated_tenant
                              : iso_pick == 1 ? Isolation::dedicated_host
                                              : Isolation::shared;
  inst.slice = make_slice("slice-r", services, uniform(1, 4 * shape.max_link_latency), isolation);
  for (const auto& svc : inst.slice.services) {
    CapabilityRequirement r;
    r.service = svc;
    r.demand = {uniform(1, 5), 512L * uniform(1, 6), 5L * uniform(1, 6), uniform(1, 4)};
    r.isolation = isolation;
    r.latency_budget = uniform(0, shape.max_link_latency);
    if (uniform(0, 4) == 0) r.affinity = uniform(0, 1) ? "north" : "south";
    inst.requirements.push_back(r);
  }
  inst.offers = offered_capabilities(inst.infra);
  return inst;
}

}  // namespace oracle
