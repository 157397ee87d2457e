#include "slicer/infra.hpp"

#include <limits>
#include <queue>
#include <set>

namespace slicer {

void Infrastructure::add_host(Host host) {
  if (host.id.empty()) throw Error(Errc::InvalidArgument, "host id is empty");
  host.capacity.validate();
  if (hosts_.contains(host.id)) throw Error(Errc::Duplicate, "host '" + host.id + "' exists");
  const auto id = host.id;
  hosts_.emplace(id, std::move(host));
}

void Infrastructure::add_tenant(Tenant tenant) {
  if (tenant.id.empty()) throw Error(Errc::InvalidArgument, "tenant id is empty");
  if (tenants_.contains(tenant.id)) {
    throw Error(Errc::Duplicate, "tenant '" + tenant.id + "' exists");
  }
  auto h = hosts_.find(tenant.host);
  if (h == hosts_.end()) {
    throw Error(Errc::NotFound, "tenant '" + tenant.id + "' sits on unknown host '" +
                                    tenant.host + "'");
  }
  tenant.quota.validate();
  tenant.used.validate();
  if (!tenant.used.fits_within(tenant.quota)) {
    throw Error(Errc::InvalidArgument, "tenant '" + tenant.id + "' uses more than its quota");
  }
  ResourceDemand committed = tenant.quota;
  for (const Tenant* t : tenants_on_host(tenant.host)) committed += t->quota;
  if (!committed.fits_within(h->second.capacity)) {
    throw Error(Errc::InsufficientCapacity,
                "quotas on host '" + tenant.host + "' would exceed its capacity");
  }
  const auto id = tenant.id;
  tenants_.emplace(id, std::move(tenant));
}

void Infrastructure::add_link(PhysicalLink link) {
  if (link.id.empty()) throw Error(Errc::InvalidArgument, "link id is empty");
  if (links_.contains(link.id)) throw Error(Errc::Duplicate, "link '" + link.id + "' exists");
  const auto& [a, b] = link.endpoints;
  if (a == b) throw Error(Errc::InvalidArgument, "link '" + link.id + "' is a self-loop");
  if (!hosts_.contains(a) || !hosts_.contains(b)) {
    throw Error(Errc::NotFound, "link '" + link.id + "' joins unknown hosts");
  }
  if (!(link.latency > 0.0) || !(link.bandwidth > 0.0)) {
    throw Error(Errc::InvalidArgument, "link '" + link.id + "' needs positive latency and bandwidth");
  }
  const auto id = link.id;
  links_.emplace(id, std::move(link));
}

Allocation Infrastructure::allocate(const EntityId& tenant, const EntityId& service,
                                    const ResourceDemand& demand, Isolation isolation) {
  auto it = tenants_.find(tenant);
  if (it == tenants_.end()) throw Error(Errc::NotFound, "unknown tenant '" + tenant + "'");
  demand.validate();
  Tenant& t = it->second;
  if (!(t.used + demand).fits_within(t.quota)) {
    throw Error(Errc::InsufficientCapacity,
                "tenant '" + tenant + "' cannot take " + to_string(demand) + " (free " +
                    to_string(t.free()) + ")");
  }
  Allocation a{"alloc-" + std::to_string(next_allocation_), tenant, service, demand, isolation};
  ++next_allocation_;
  t.used += demand;
  allocations_.emplace(a.id, a);
  return a;
}

void Infrastructure::release(const EntityId& allocation) {
  auto it = allocations_.find(allocation);
  if (it == allocations_.end()) {
    throw Error(Errc::UnknownAllocation, "no live allocation '" + allocation + "'");
  }
  tenants_.at(it->second.tenant).used -= it->second.demand;
  allocations_.erase(it);
}

double Infrastructure::host_latency(const EntityId& a, const EntityId& b) const {
  if (!hosts_.contains(a) || !hosts_.contains(b)) {
    throw Error(Errc::NotFound, "unknown host in latency query");
  }
  if (a == b) return 0.0;

  std::map<EntityId, std::vector<std::pair<EntityId, double>>> adj;
  for (const auto& [_, l] : links_) {
    adj[l.endpoints.first].emplace_back(l.endpoints.second, l.latency);
    adj[l.endpoints.second].emplace_back(l.endpoints.first, l.latency);
  }

  using Entry = std::pair<double, EntityId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> frontier;
  std::map<EntityId, double> dist;
  dist[a] = 0.0;
  frontier.emplace(0.0, a);
  while (!frontier.empty()) {
    auto [d, node] = frontier.top();
    frontier.pop();
    if (d > dist[node]) continue;
    if (node == b) return d;
    for (const auto& [next, w] : adj[node]) {
      const double nd = d + w;
      auto found = dist.find(next);
      if (found == dist.end() || nd < found->second) {
        dist[next] = nd;
        frontier.emplace(nd, next);
      }
    }
  }
  throw Error(Errc::Unreachable, "no path between hosts '" + a + "' and '" + b + "'");
}

double Infrastructure::tenant_latency(const EntityId& a, const EntityId& b) const {
  return host_latency(tenant(a).host, tenant(b).host);
}

const Tenant& Infrastructure::tenant(const EntityId& id) const {
  auto it = tenants_.find(id);
  if (it == tenants_.end()) throw Error(Errc::NotFound, "unknown tenant '" + id + "'");
  return it->second;
}

const Host& Infrastructure::host(const EntityId& id) const {
  auto it = hosts_.find(id);
  if (it == hosts_.end()) throw Error(Errc::NotFound, "unknown host '" + id + "'");
  return it->second;
}

std::vector<const Tenant*> Infrastructure::tenants_on_host(const EntityId& host) const {
  std::vector<const Tenant*> out;
  for (const auto& [_, t] : tenants_) {
    if (t.host == host) out.push_back(&t);
  }
  return out;
}

std::vector<const Allocation*> Infrastructure::allocations_on_tenant(const EntityId& tenant) const {
  std::vector<const Allocation*> out;
  for (const auto& [_, a] : allocations_) {
    if (a.tenant == tenant) out.push_back(&a);
  }
  return out;
}

std::map<EntityId, ResourceDemand> Infrastructure::usage() const {
  std::map<EntityId, ResourceDemand> out;
  for (const auto& [id, t] : tenants_) out.emplace(id, t.used);
  return out;
}

ResourceDemand Infrastructure::total_used() const {
  ResourceDemand total;
  for (const auto& [_, t] : tenants_) total += t.used;
  return total;
}

void Infrastructure::validate() const {
  std::map<EntityId, ResourceDemand> quota_per_host;
  std::map<EntityId, ResourceDemand> live;
  for (const auto& [id, a] : allocations_) {
    if (id != a.id) throw Error(Errc::InvalidArgument, "allocation key mismatch '" + id + "'");
    if (!tenants_.contains(a.tenant)) {
      throw Error(Errc::NotFound, "allocation '" + id + "' on unknown tenant '" + a.tenant + "'");
    }
    live[a.tenant] += a.demand;
  }
  for (const auto& [id, t] : tenants_) {
    if (!hosts_.contains(t.host)) {
      throw Error(Errc::NotFound, "tenant '" + id + "' on unknown host '" + t.host + "'");
    }
    if (!t.used.fits_within(t.quota) || !t.used.non_negative()) {
      throw Error(Errc::InvalidArgument, "tenant '" + id + "' usage outside its quota");
    }
    if (t.used != live[id]) {
      throw Error(Errc::InvalidArgument,
                  "tenant '" + id + "' usage does not match its live allocations");
    }
    quota_per_host[t.host] += t.quota;
  }
  for (const auto& [hid, q] : quota_per_host) {
    if (!q.fits_within(hosts_.at(hid).capacity)) {
      throw Error(Errc::InvalidArgument, "quotas on host '" + hid + "' exceed its capacity");
    }
  }
  for (const auto& [id, l] : links_) {
    if (!hosts_.contains(l.endpoints.first) || !hosts_.contains(l.endpoints.second) ||
        l.endpoints.first == l.endpoints.second) {
      throw Error(Errc::InvalidArgument, "link '" + id + "' has bad endpoints");
    }
  }
}

void Infrastructure::restore_allocation(Allocation allocation) {
  if (!tenants_.contains(allocation.tenant)) {
    throw Error(Errc::NotFound, "allocation on unknown tenant '" + allocation.tenant + "'");
  }
  if (allocations_.contains(allocation.id)) {
    throw Error(Errc::Duplicate, "allocation '" + allocation.id + "' exists");
  }
  const auto id = allocation.id;
  allocations_.emplace(id, std::move(allocation));
}

Infrastructure build_testbed(const TestbedOptions& options) {
  Infrastructure infra;
  const ResourceDemand host_capacity{16, 32768, 500, 32};
  infra.add_host({"host-onap", "orchestration host", host_capacity, "site-a", HostIsolation::shared});
  infra.add_host({"host-cp", "control-plane host", host_capacity, "site-a", HostIsolation::dedicated});
  infra.add_host({"host-dp", "data-plane host", host_capacity, "site-a", HostIsolation::dedicated});

  infra.add_tenant({kOrchestratorTenant, "onap", "grey-operator", "host-onap", {2, 4096, 40, 2}, {}});
  infra.add_tenant({kControlPlaneTenant, "core-cp", "grey-operator", "host-cp", {6, 12288, 60, 8}, {}});
  infra.add_tenant({kDataPlaneTenant, "core-dp", "grey-operator", "host-dp", {6, 12288, 60, 8}, {}});

  if (options.with_links) {
    infra.add_link({"link-onap-cp", {"host-onap", "host-cp"}, options.orchestrator_cp_latency, 10000.0});
    infra.add_link({"link-onap-dp", {"host-onap", "host-dp"}, options.orchestrator_dp_latency, 10000.0});
    infra.add_link({"link-cp-dp", {"host-cp", "host-dp"}, options.cp_dp_latency, 10000.0});
  }
  return infra;
}

}  // namespace slicer
