#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <random>

#include "slicer/cli.hpp"
#include "slicer/store.hpp"

using namespace slicer;
using slicer::cli::run;

namespace {

const std::string kFixtures = SLICER_FIXTURE_DIR;

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("slicer-cli-" + std::to_string(rd()));
  }
  ~TempDir() { fs::remove_all(path); }
};

cli::CommandResult sh(const fs::path& dir, std::vector<std::string> args) {
  args.insert(args.begin(), {"--catalog", dir.string()});
  return run(args);
}

void design(const fs::path& dir) {
  const std::string f = kFixtures + "/";
  REQUIRE(sh(dir, {"init-testbed"}).exit_code == 0);
  REQUIRE(sh(dir, {"--as", "designer", "onboard-vf", "--vsp", "bcom-vepc", "--vendor", "bcom",
                   "--product", "vepc", "--template", f + "core_cp.tpl.json", "--id", "cp"})
              .exit_code == 0);
  REQUIRE(sh(dir, {"--as", "designer", "onboard-vf", "--vsp", "bcom-vepc", "--template",
                   f + "core_dp.tpl.json", "--id", "dp"})
              .exit_code == 0);
  for (const char* vf : {"cp", "dp"}) REQUIRE(sh(dir, {"--as", "tester", "certify-vf", vf}).exit_code == 0);
  for (const auto& [svc, vf] : {std::pair{"core-cp", "cp"}, std::pair{"core-dp", "dp"}}) {
    REQUIRE(sh(dir, {"--as", "designer", "create-service", svc, "--vf", vf, "--id", svc}).exit_code == 0);
    REQUIRE(sh(dir, {"--as", "tester", "test-service", svc}).exit_code == 0);
    REQUIRE(sh(dir, {"--as", "governor", "approve-service", svc}).exit_code == 0);
    REQUIRE(sh(dir, {"--as", "operator", "distribute-service", svc}).exit_code == 0);
  }
  REQUIRE(sh(dir, {"--as", "designer", "create-slice", "Slice A", "--id", "slice-a", "--service",
                   "core-cp", "--service", "core-dp", "--profile", f + "slice_a.profile.json",
                   "--slice-template", f + "slice_a.template.json"})
              .exit_code == 0);
}

}  // namespace

TEST_CASE("lint-template exit codes") {
  const std::string bad = kFixtures + "/bad_env.tpl.json";
  CHECK(run({"lint-template", kFixtures + "/core_cp.tpl.json"}).exit_code == 0);
  const auto rejected = run({"--json", "lint-template", bad});
  CHECK(rejected.exit_code == 1);
  const auto doc = nlohmann::json::parse(rejected.out);
  CHECK(doc["environment_chars"] == 2003);
  CHECK(doc["findings"][0]["rule_id"] == "env-size");
  CHECK(run({"lint-template", bad, "--env-limit", "20000"}).exit_code == 0);
  CHECK(run({"lint-template", bad, "--env-limit", "20000", "--count-names"}).exit_code == 0);
  CHECK(run({"lint-template", kFixtures + "/missing.json"}).exit_code == 3);
}

TEST_CASE("usage errors exit 2") {
  CHECK(run({}).exit_code == 2);
  CHECK(run({"frobnicate"}).exit_code == 2);
  CHECK(run({"lint-template"}).exit_code == 2);
  CHECK(run({"--as", "emperor", "status", "--catalog", "/tmp"}).exit_code == 2);
  CHECK(run({"place-slice", "x", "--solver", "random", "--catalog", "/tmp"}).exit_code == 2);
  TempDir dir;
  CHECK(sh(dir.path, {"status"}).exit_code == 2);
  CHECK(run({"--help"}).exit_code == 0);
}

TEST_CASE("full workflow through the command line") {
  TempDir dir;
  design(dir.path);
  auto placed = sh(dir.path, {"--json", "place-slice", "slice-a"});
  REQUIRE(placed.exit_code == 0);
  const auto plan = nlohmann::json::parse(placed.out);
  CHECK(plan["e2e_latency"] == 1.0);
  const std::string plan_file = plan["file"];
  CHECK(fs::exists(plan_file));

  CHECK(sh(dir.path, {"--as", "designer", "instantiate-slice", "slice-a", "--plan", plan_file})
            .exit_code == 1);
  CHECK(sh(dir.path, {"--as", "operator", "instantiate-slice", "slice-a", "--plan", plan_file})
            .exit_code == 0);

  const auto status = nlohmann::json::parse(sh(dir.path, {"--json", "status"}).out);
  REQUIRE(status["slices"].size() == 1);
  CHECK(status["slices"][0]["state"] == "active");
  CHECK(status["slices"][0]["members"]["core-cp"]["tenant"] !=
        status["slices"][0]["members"]["core-dp"]["tenant"]);

  const auto audit = sh(dir.path, {"--json", "audit"});
  CHECK(audit.exit_code == 0);
  CHECK(nlohmann::json::parse(audit.out)["replay_matches"] == true);

  CHECK(sh(dir.path, {"--as", "operator", "teardown-slice", "slice-a"}).exit_code == 0);
  const auto after = nlohmann::json::parse(sh(dir.path, {"--json", "status"}).out);
  for (const auto& t : after["tenants"]) CHECK(t["used"]["vcpu"] == 0);
  CHECK(sh(dir.path, {"--as", "operator", "teardown-slice", "slice-a"}).exit_code == 1);
}

TEST_CASE("externally edited plan that splits a service is refused") {
  TempDir dir;
  design(dir.path);
  auto placed = nlohmann::json::parse(sh(dir.path, {"--json", "place-slice", "slice-a"}).out);
  PlacementPlan p = load_plan(placed["file"].get<std::string>());
  p.assignments.push_back({"core-cp", "tenant-onap"});
  const fs::path edited = dir.path / "edited.plan.json";
  save_plan(p, edited);
  const auto r = sh(dir.path, {"--json", "--as", "operator", "instantiate-slice", "slice-a",
                               "--plan", edited.string()});
  CHECK(r.exit_code == 1);
  CHECK(r.detail["error"] == "PlanInvalid");
  const auto status = nlohmann::json::parse(sh(dir.path, {"--json", "status"}).out);
  CHECK(status["slices"][0]["state"] == "ready");
}

TEST_CASE("catalog location from the environment") {
  TempDir dir;
  ::setenv(cli::kCatalogEnv, dir.path.c_str(), 1);
  CHECK(run({"init-testbed"}).exit_code == 0);
  CHECK(run({"init-testbed"}).exit_code == 1);
  CHECK(run({"init-testbed", "--force"}).exit_code == 0);
  CHECK(run({"status"}).exit_code == 0);
  ::unsetenv(cli::kCatalogEnv);
}

TEST_CASE("demo slice-a in memory and on disk") {
  const auto mem = run({"--json", "demo", "slice-a"});
  REQUIRE(mem.exit_code == 0);
  const auto doc = nlohmann::json::parse(mem.out);
  CHECK(doc["audit"]["ok_by_action"]["instantiate_service"] == 2);
  CHECK(doc["audit"]["ok_by_action"]["instantiate_slice"] == 1);

  TempDir dir;
  CHECK(sh(dir.path, {"demo", "slice-a"}).exit_code == 0);
  CHECK(sh(dir.path, {"demo", "slice-a"}).exit_code == 1);
  CHECK(nlohmann::json::parse(sh(dir.path, {"--json", "audit"}).out)["replay_matches"] == true);
  CHECK(run({"demo", "slice-z"}).exit_code == 2);
}

TEST_CASE("certify-vf as governor is denied") {
  TempDir dir;
  REQUIRE(sh(dir.path, {"demo", "slice-a"}).exit_code == 0);
  const auto r = sh(dir.path, {"certify-vf", "core-cp-vf", "--as", "governor"});
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("RoleDenied") != std::string::npos);
}

TEST_CASE("demo is deterministic apart from timestamps") {
  auto events_of = [](const fs::path& dir) {
    auto doc = nlohmann::json::parse(sh(dir, {"--json", "audit"}).out)["events"];
    for (auto& e : doc) e.erase("ts");
    return doc;
  };
  TempDir a, b;
  REQUIRE(sh(a.path, {"demo", "slice-a"}).exit_code == 0);
  REQUIRE(sh(b.path, {"demo", "slice-a"}).exit_code == 0);
  const auto ea = events_of(a.path);
  CHECK(ea.size() == 20);
  CHECK(ea == events_of(b.path));
  CHECK(load_catalog(a.path / kCatalogFile) == load_catalog(b.path / kCatalogFile));
}
