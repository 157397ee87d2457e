#include "slicer/placement.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <sstream>

namespace slicer {

const EntityId* PlacementPlan::tenant_of(const EntityId& service) const {
  for (const auto& a : assignments) {
    if (a.service == service) return &a.tenant;
  }
  return nullptr;
}

void PlacementPolicy::validate() const {
  if (exhaustive_threshold == 0) {
    throw Error(Errc::InvalidArgument, "exhaustive_threshold must be positive");
  }
}

std::vector<CapabilityRequirement> required_capabilities(
    const NetworkSlice& slice, const SliceTemplate& slice_template,
    const std::map<EntityId, ResourceDemand>& footprints) {
  std::vector<CapabilityRequirement> out;
  out.reserve(slice.services.size());
  for (const auto& svc : slice.services) {
    auto req = slice_template.per_service_requirements.find(svc);
    if (req == slice_template.per_service_requirements.end()) {
      throw Error(Errc::UnknownService, "slice template has no entry for '" + svc + "'");
    }
    auto fp = footprints.find(svc);
    if (fp == footprints.end()) {
      throw Error(Errc::MissingFootprint, "no footprint for service '" + svc + "'");
    }
    CapabilityRequirement r;
    r.service = svc;
    r.demand = componentwise_max(req->second.demand, fp->second);
    r.isolation = slice.profile.degree_of_isolation;
    r.latency_budget = req->second.latency_budget;
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<CapabilityOffer> offered_capabilities(const Infrastructure& infra) {
  std::vector<CapabilityOffer> out;
  for (const auto& [id, t] : infra.tenants()) {
    const Host& h = infra.host(t.host);
    CapabilityOffer o{id, t.host, t.free(), h.isolation_class, h.site, false, false};
    for (const Allocation* a : infra.allocations_on_tenant(id)) {
      o.occupied = true;
      if (a->isolation != Isolation::shared) o.exclusive = true;
    }
    out.push_back(std::move(o));
  }
  return out;
}

Solver effective_solver(std::size_t services, std::size_t tenants, const PlacementPolicy& policy) {
  if (policy.solver == Solver::greedy) return Solver::greedy;
  return services * tenants <= policy.exhaustive_threshold ? Solver::exhaustive : Solver::greedy;
}

namespace {

constexpr double kNoPath = std::numeric_limits<double>::infinity();

// Solver-side view of one planning instance.
class Instance {
 public:
  Instance(const NetworkSlice& slice, const std::vector<CapabilityRequirement>& requirements,
           const std::vector<CapabilityOffer>& offers, const Infrastructure& infra)
      : limit_(slice.profile.end_to_end_latency) {
    for (const auto& svc : slice.services) {
      auto it = std::find_if(requirements.begin(), requirements.end(),
                             [&](const CapabilityRequirement& r) { return r.service == svc; });
      if (it == requirements.end()) {
        throw Error(Errc::UnknownService, "no requirement for service '" + svc + "'");
      }
      reqs_.push_back(*it);
    }
    offers_ = offers;
    std::sort(offers_.begin(), offers_.end(),
              [](const CapabilityOffer& a, const CapabilityOffer& b) { return a.tenant < b.tenant; });

    const std::size_t n = offers_.size();
    latency_.assign(n, std::vector<double>(n, kNoPath));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        try {
          latency_[i][j] = infra.tenant_latency(offers_[i].tenant, offers_[j].tenant);
        } catch (const Error& e) {
          if (e.code() != Errc::Unreachable) throw;
        }
      }
    }
    admissible_.assign(reqs_.size(), std::vector<bool>(n, false));
    for (std::size_t s = 0; s < reqs_.size(); ++s) {
      for (std::size_t t = 0; t < n; ++t) admissible_[s][t] = admissible(reqs_[s], offers_[t], infra);
    }
    used_.assign(n, ResourceDemand{});
    count_.assign(n, 0);
    dedicated_.assign(n, false);
  }

  std::size_t services() const { return reqs_.size(); }
  std::size_t tenants() const { return offers_.size(); }
  double limit() const { return limit_; }
  double latency(std::size_t a, std::size_t b) const { return latency_[a][b]; }

  bool can_place(std::size_t s, std::size_t t) const {
    if (!admissible_[s][t]) return false;
    if (count_[t] > 0 && (dedicated_[t] || reqs_[s].isolation != Isolation::shared)) return false;
    return (used_[t] + reqs_[s].demand).fits_within(offers_[t].free);
  }

  void place(std::size_t s, std::size_t t) {
    used_[t] += reqs_[s].demand;
    ++count_[t];
    dedicated_[t] = reqs_[s].isolation != Isolation::shared;
  }

  void unplace(std::size_t s, std::size_t t) {
    used_[t] -= reqs_[s].demand;
    --count_[t];
    if (count_[t] == 0) dedicated_[t] = false;
  }

  PlacementPlan make_plan(const EntityId& slice, const std::vector<std::size_t>& choice) const {
    PlacementPlan plan;
    plan.slice = slice;
    plan.feasible = true;
    for (std::size_t s = 0; s < choice.size(); ++s) {
      plan.assignments.push_back({reqs_[s].service, offers_[choice[s]].tenant});
      if (s > 0) {
        const double hop = latency_[choice[s - 1]][choice[s]];
        plan.e2e_latency += hop;
        if (hop > reqs_[s].latency_budget) {
          std::ostringstream os;
          os << "hop into '" << reqs_[s].service << "' takes " << hop
             << " ms, above its budget of " << reqs_[s].latency_budget << " ms";
          plan.warnings.push_back(os.str());
        }
      }
    }
    return plan;
  }

 private:
  static bool admissible(const CapabilityRequirement& r, const CapabilityOffer& o,
                         const Infrastructure& infra) {
    if (!r.demand.fits_within(o.free)) return false;
    if (r.affinity && *r.affinity != o.site) return false;
    if (o.exclusive) return false;
    if (r.isolation != Isolation::shared && o.occupied) return false;
    if (r.isolation == Isolation::dedicated_host) {
      if (o.host_isolation != HostIsolation::dedicated) return false;
      if (infra.tenants_on_host(o.host).size() != 1) return false;
    }
    return true;
  }

  double limit_;
  std::vector<CapabilityRequirement> reqs_;
  std::vector<CapabilityOffer> offers_;
  std::vector<std::vector<double>> latency_;
  std::vector<std::vector<bool>> admissible_;
  std::vector<ResourceDemand> used_;
  std::vector<int> count_;
  std::vector<bool> dedicated_;
};

// Depth-first over tenant tuples in lexicographic order; a later tuple only
// replaces the incumbent when strictly better, so ties keep the smallest tuple.
class ExhaustiveSearch {
 public:
  explicit ExhaustiveSearch(Instance& inst) : inst_(inst), choice_(inst.services()) {}

  std::optional<std::vector<std::size_t>> run() {
    descend(0, 0.0);
    return best_;
  }

 private:
  void descend(std::size_t s, double partial) {
    if (s == inst_.services()) {
      if (!best_ || partial < best_latency_) {
        best_ = choice_;
        best_latency_ = partial;
      }
      return;
    }
    for (std::size_t t = 0; t < inst_.tenants(); ++t) {
      if (!inst_.can_place(s, t)) continue;
      const double next = s == 0 ? 0.0 : partial + inst_.latency(choice_[s - 1], t);
      if (next == kNoPath || next > inst_.limit()) continue;
      if (best_ && next >= best_latency_) continue;
      choice_[s] = t;
      inst_.place(s, t);
      descend(s + 1, next);
      inst_.unplace(s, t);
    }
  }

  Instance& inst_;
  std::vector<std::size_t> choice_;
  std::optional<std::vector<std::size_t>> best_;
  double best_latency_ = kNoPath;
};

std::optional<std::vector<std::size_t>> greedy(Instance& inst) {
  std::vector<std::size_t> choice;
  double total = 0.0;
  for (std::size_t s = 0; s < inst.services(); ++s) {
    std::optional<std::size_t> pick;
    double pick_cost = kNoPath;
    for (std::size_t t = 0; t < inst.tenants(); ++t) {
      if (!inst.can_place(s, t)) continue;
      const double cost = s == 0 ? 0.0 : inst.latency(choice.back(), t);
      if (cost == kNoPath) continue;
      if (!pick || cost < pick_cost) {
        pick = t;
        pick_cost = cost;
      }
    }
    if (!pick) return std::nullopt;
    inst.place(s, *pick);
    choice.push_back(*pick);
    total += pick_cost;
  }
  if (total > inst.limit()) return std::nullopt;
  return choice;
}

}  // namespace

PlacementPlan plan_placement(const NetworkSlice& slice,
                             const std::vector<CapabilityRequirement>& requirements,
                             const std::vector<CapabilityOffer>& offers,
                             const Infrastructure& infra, const PlacementPolicy& policy) {
  policy.validate();
  if (requirements.empty()) throw Error(Errc::InvalidArgument, "no requirements to place");
  PlacementPlan infeasible;
  infeasible.slice = slice.id;
  if (offers.empty()) {
    infeasible.reason = "no tenant offers capacity";
    return infeasible;
  }

  Instance inst(slice, requirements, offers, infra);
  const Solver solver = effective_solver(inst.services(), inst.tenants(), policy);
  auto choice = solver == Solver::exhaustive ? ExhaustiveSearch(inst).run() : greedy(inst);
  if (!choice) {
    infeasible.reason = solver == Solver::exhaustive
                            ? "no assignment satisfies capacity, isolation and latency"
                            : "greedy placement found no admissible tenant for some service";
    return infeasible;
  }
  return inst.make_plan(slice.id, *choice);
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::PlanInfeasible: return "PlanInfeasible";
    case ViolationKind::SliceMismatch: return "SliceMismatch";
    case ViolationKind::MissingAssignment: return "MissingAssignment";
    case ViolationKind::DuplicateAssignment: return "DuplicateAssignment";
    case ViolationKind::SplitService: return "SplitService";
    case ViolationKind::UnknownService: return "UnknownService";
    case ViolationKind::UnknownTenant: return "UnknownTenant";
    case ViolationKind::CumulativeOverflow: return "CumulativeOverflow";
    case ViolationKind::IsolationBreach: return "IsolationBreach";
    case ViolationKind::AffinityMismatch: return "AffinityMismatch";
    case ViolationKind::Unreachable: return "Unreachable";
    case ViolationKind::LatencyExceeded: return "LatencyExceeded";
    case ViolationKind::LatencyMismatch: return "LatencyMismatch";
  }
  return "Unknown";
}

bool PlanVerdict::has(ViolationKind kind) const {
  return std::any_of(violations.begin(), violations.end(),
                     [kind](const Violation& v) { return v.kind == kind; });
}

PlanVerdict verify_plan(const NetworkSlice& slice, const PlacementPlan& plan,
                        const std::vector<CapabilityRequirement>& requirements,
                        const std::vector<CapabilityOffer>& offers, const Infrastructure& infra) {
  PlanVerdict verdict;
  auto flag = [&](ViolationKind kind, const EntityId& service, const EntityId& tenant,
                  std::string message) {
    verdict.ok = false;
    verdict.violations.push_back({kind, service, tenant, std::move(message)});
  };

  if (!plan.feasible) {
    flag(ViolationKind::PlanInfeasible, {}, {}, "plan is marked infeasible");
    return verdict;
  }
  if (plan.slice != slice.id) {
    flag(ViolationKind::SliceMismatch, {}, {}, "plan is for slice '" + plan.slice + "'");
  }

  std::map<EntityId, const CapabilityRequirement*> req_of;
  for (const auto& r : requirements) req_of[r.service] = &r;
  std::map<EntityId, const CapabilityOffer*> offer_of;
  for (const auto& o : offers) offer_of[o.tenant] = &o;
  const std::set<EntityId> members(slice.services.begin(), slice.services.end());

  // Service -> every tenant the document names for it.
  std::map<EntityId, std::vector<EntityId>> named;
  for (const auto& a : plan.assignments) {
    if (!members.contains(a.service)) {
      flag(ViolationKind::UnknownService, a.service, a.tenant,
           "service '" + a.service + "' is not part of the slice");
      continue;
    }
    named[a.service].push_back(a.tenant);
  }
  std::map<EntityId, EntityId> placed;
  for (const auto& [svc, tenants] : named) {
    const std::set<EntityId> distinct(tenants.begin(), tenants.end());
    if (distinct.size() > 1) {
      std::string list;
      for (const auto& t : distinct) list += (list.empty() ? "" : ", ") + t;
      flag(ViolationKind::SplitService, svc, {},
           "service '" + svc + "' is spread over tenants " + list +
               "; all of its functions must share one tenant");
      continue;
    }
    if (tenants.size() > 1) {
      flag(ViolationKind::DuplicateAssignment, svc, tenants.front(),
           "service '" + svc + "' is assigned more than once");
    }
    placed[svc] = tenants.front();
  }
  for (const auto& svc : slice.services) {
    if (!named.contains(svc)) {
      flag(ViolationKind::MissingAssignment, svc, {}, "service '" + svc + "' is not assigned");
    }
  }

  std::map<EntityId, ResourceDemand> load;
  std::map<EntityId, std::vector<EntityId>> residents;
  for (const auto& [svc, tenant] : placed) {
    auto o = offer_of.find(tenant);
    if (o == offer_of.end() || !infra.has_tenant(tenant)) {
      flag(ViolationKind::UnknownTenant, svc, tenant, "tenant '" + tenant + "' offers nothing");
      continue;
    }
    auto r = req_of.find(svc);
    if (r == req_of.end()) {
      flag(ViolationKind::UnknownService, svc, tenant, "no requirement for '" + svc + "'");
      continue;
    }
    load[tenant] += r->second->demand;
    residents[tenant].push_back(svc);
    if (r->second->affinity && *r->second->affinity != o->second->site) {
      flag(ViolationKind::AffinityMismatch, svc, tenant,
           "service '" + svc + "' wants site '" + *r->second->affinity + "'");
    }
  }

  for (const auto& [tenant, total] : load) {
    const CapabilityOffer& o = *offer_of.at(tenant);
    if (!total.fits_within(o.free)) {
      flag(ViolationKind::CumulativeOverflow, {}, tenant,
           "services on '" + tenant + "' need " + to_string(total) + " but only " +
               to_string(o.free) + " is free");
    }
    const auto& here = residents.at(tenant);
    for (const auto& svc : here) {
      const Isolation iso = req_of.at(svc)->isolation;
      if (o.exclusive) {
        flag(ViolationKind::IsolationBreach, svc, tenant,
             "tenant '" + tenant + "' is held by a dedicated service");
      }
      if (iso == Isolation::shared) continue;
      if (o.occupied || here.size() > 1) {
        flag(ViolationKind::IsolationBreach, svc, tenant,
             "service '" + svc + "' needs tenant '" + tenant + "' to itself");
      }
      if (iso == Isolation::dedicated_host) {
        const Host& h = infra.host(o.host);
        if (h.isolation_class != HostIsolation::dedicated ||
            infra.tenants_on_host(h.id).size() != 1) {
          flag(ViolationKind::IsolationBreach, svc, tenant,
               "service '" + svc + "' needs host '" + h.id + "' to carry only its tenant");
        }
      }
    }
  }

  if (placed.size() == slice.services.size()) {
    double e2e = 0.0;
    bool reachable = true;
    for (std::size_t i = 1; i < slice.services.size(); ++i) {
      const auto& from = slice.services[i - 1];
      const auto& to = slice.services[i];
      if (!infra.has_tenant(placed[from]) || !infra.has_tenant(placed[to])) {
        reachable = false;
        continue;
      }
      try {
        e2e += infra.tenant_latency(placed[from], placed[to]);
      } catch (const Error& e) {
        if (e.code() != Errc::Unreachable) throw;
        reachable = false;
        flag(ViolationKind::Unreachable, to, placed[to],
             "no path from '" + placed[from] + "' to '" + placed[to] + "'");
      }
    }
    if (reachable) {
      if (e2e > slice.profile.end_to_end_latency) {
        flag(ViolationKind::LatencyExceeded, {}, {},
             "end-to-end latency " + std::to_string(e2e) + " ms exceeds the profile's " +
                 std::to_string(slice.profile.end_to_end_latency) + " ms");
      }
      if (e2e != plan.e2e_latency) {
        flag(ViolationKind::LatencyMismatch, {}, {},
             "plan states " + std::to_string(plan.e2e_latency) + " ms, recomputed " +
                 std::to_string(e2e) + " ms");
      }
    }
  }
  return verdict;
}

}  // namespace slicer
