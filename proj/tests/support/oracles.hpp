#pragma once

// Reference implementations used only by tests. None of them call the code
// under test for the quantity they compute.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "slicer/infra.hpp"
#include "slicer/model.hpp"
#include "slicer/placement.hpp"

namespace oracle {

// Code points via std::codecvt, quotes included.
std::size_t env_count(const nlohmann::ordered_json& environment, bool count_names);

struct SlaTriple {
  double latency;
  double availability;
  double data_rate;
};
SlaTriple chain(const std::vector<SlaTriple>& parts);
SlaTriple parallel(const std::vector<SlaTriple>& parts);

// All-pairs host latency by Floyd-Warshall; infinity when disconnected.
std::vector<std::vector<double>> host_distances(const slicer::Infrastructure& infra,
                                                std::vector<std::string>& host_ids);

struct Instance {
  slicer::Infrastructure infra;
  slicer::NetworkSlice slice;
  std::vector<slicer::CapabilityRequirement> requirements;
  std::vector<slicer::CapabilityOffer> offers;
};

// Every tenant tuple enumerated; returns the optimum e2e latency.
std::optional<double> brute_force_optimum(const Instance& inst);

// Independent feasibility check of a complete assignment.
bool plan_feasible(const Instance& inst, const slicer::PlacementPlan& plan);

struct InstanceShape {
  int max_services = 5;
  int max_tenants = 6;
  int max_hosts = 4;
  int max_link_latency = 5;
};

// Random instance with integer link latencies, so sums are exact.
Instance random_instance(std::mt19937_64& rng, const InstanceShape& shape = {});

// Services of a slice named s0..s(n-1); one tenant per host unless stated.
slicer::NetworkSlice make_slice(const std::string& id, int services, double limit,
                                slicer::Isolation isolation = slicer::Isolation::shared);

}  // namespace oracle
