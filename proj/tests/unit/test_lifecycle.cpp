#include <doctest.h>

#include "fuzz.hpp"
#include "slicer/fixtures.hpp"
#include "slicer/lifecycle.hpp"

using namespace slicer;
namespace fx = slicer::fixtures;

namespace {

const Actor kDesigner{Role::designer, "dana"};
const Actor kTester{Role::tester, "tom"};
const Actor kGovernor{Role::governor, "gail"};
const Actor kOperator{Role::operator_, "otto"};

Engine fresh(EngineOptions o = {}) { return Engine(Catalog{}, build_testbed(), AuditLog{}, o); }

template <class F>
Errc code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return Errc::InvalidArgument;
}

std::size_t count_ok(const Engine& e, std::string_view action) {
  std::size_t n = 0;
  for (const auto& ev : e.audit().events()) {
    if (ev.action == action && ev.outcome == Outcome::ok) ++n;
  }
  return n;
}

}  // namespace

TEST_CASE("permission table") {
  CHECK(is_permitted(Role::designer, Permission::onboard_vf));
  CHECK_FALSE(is_permitted(Role::designer, Permission::certify_vf));
  CHECK(is_permitted(Role::tester, Permission::certify_vf));
  CHECK(is_permitted(Role::tester, Permission::test_service));
  CHECK(is_permitted(Role::governor, Permission::approve_service));
  CHECK_FALSE(is_permitted(Role::governor, Permission::distribute_service));
  CHECK(is_permitted(Role::operator_, Permission::distribute_service));
  CHECK(is_permitted(Role::operator_, Permission::instantiate));
  CHECK_FALSE(is_permitted(Role::operator_, Permission::create_slice));
  for (int p = 0; p <= static_cast<int>(Permission::teardown); ++p) {
    CHECK(is_permitted(Role::superuser, static_cast<Permission>(p)));
  }
}

TEST_CASE("slice A end to end") {
  Engine e = fresh();
  const auto out = fx::run_slice_a(e);
  CHECK(state_name(out.slice.state) == "active");
  CHECK(count_ok(e, action::instantiate_service) == 2);
  CHECK(count_ok(e, action::instantiate_slice) == 1);
  REQUIRE(out.plan.assignments.size() == 2);
  CHECK(out.plan.assignments[0].tenant != out.plan.assignments[1].tenant);
  CHECK(e.catalog().deployments.at(fx::kCoreCp).tenant == out.plan.tenant_of(fx::kCoreCp)[0]);
  CHECK(e.service_footprint(fx::kCoreCp) == ResourceDemand{4, 8192, 40, 6});
  const auto& sla = *e.catalog().slices.at(fx::kSliceA).sla;
  CHECK(sla.committed_latency == 8.0);
  CHECK(sla.committed_data_rate == 100.0);
  CHECK(sla.committed_availability == doctest::Approx(0.995 * 0.999));
  CHECK(replay(e.audit().events()) == e.catalog().records);
}

TEST_CASE("each step refuses the wrong role and records the denial") {
  Engine e = fresh();
  e.register_vsp(kDesigner, {fx::kVsp, "bcom", "vepc", {1, 0, 0}, {}});
  const auto before_records = e.catalog().records;
  CHECK(code_of([&] { e.onboard_vf(kTester, fx::kVsp, std::string(fx::core_cp_template()), "vf"); }) ==
        Errc::RoleDenied);
  CHECK(e.catalog().records == before_records);
  CHECK(e.audit().events().back().outcome == Outcome::denied);

  e.onboard_vf(kDesigner, fx::kVsp, std::string(fx::core_cp_template()), "vf");
  CHECK(code_of([&] { e.certify_vf(kDesigner, "vf"); }) == Errc::RoleDenied);
  e.certify_vf(kTester, "vf");
  CHECK(code_of([&] { e.create_service(kTester, "svc", {"vf"}, "svc"); }) == Errc::RoleDenied);
  e.create_service(kDesigner, "svc", {"vf"}, "svc");
  CHECK(code_of([&] { e.advance_service(kGovernor, "svc", ServiceAction::test); }) ==
        Errc::RoleDenied);
  e.advance_service(kTester, "svc", ServiceAction::test);
  CHECK(code_of([&] { e.advance_service(kTester, "svc", ServiceAction::approve); }) ==
        Errc::RoleDenied);
  e.advance_service(kGovernor, "svc", ServiceAction::approve);
  CHECK(code_of([&] { e.advance_service(kGovernor, "svc", ServiceAction::distribute); }) ==
        Errc::RoleDenied);
  e.advance_service(kOperator, "svc", ServiceAction::distribute);
  CHECK(state_name(e.catalog().record("svc").state) == "distributed");
  CHECK(replay(e.audit().events()) == e.catalog().records);
}

TEST_CASE("out-of-order steps are invalid transitions") {
  Engine e = fresh();
  fx::design_slice_a(e);
  CHECK(code_of([&] { e.advance_service(kTester, fx::kCoreCp, ServiceAction::test); }) ==
        Errc::InvalidTransition);
  CHECK(code_of([&] { e.certify_vf(kTester, fx::kCoreCpVf); }) == Errc::InvalidTransition);
  CHECK(code_of([&] { e.teardown_slice(kOperator, fx::kSliceA); }) == Errc::InvalidTransition);
  CHECK(e.audit().events().back().outcome == Outcome::failed);
}

TEST_CASE("uncertified VFs cannot form a service") {
  Engine e = fresh();
  e.register_vsp(kDesigner, {fx::kVsp, "bcom", "vepc", {1, 0, 0}, {}});
  e.onboard_vf(kDesigner, fx::kVsp, std::string(fx::core_dp_template()), "vf");
  CHECK(code_of([&] { e.create_service(kDesigner, "svc", {"vf"}, "svc"); }) == Errc::UncertifiedVf);
  CHECK(code_of([&] { e.create_service(kDesigner, "svc", {}, "svc"); }) == Errc::EmptyService);
  CHECK_FALSE(e.catalog().services.contains("svc"));
}

TEST_CASE("rejected templates carry the report and leave no VF") {
  Engine e = fresh();
  e.register_vsp(kDesigner, {fx::kVsp, "bcom", "vepc", {1, 0, 0}, {}});
  try {
    e.onboard_vf(kDesigner, fx::kVsp, std::string(fx::bad_env_template()), "bad");
    FAIL("expected rejection");
  } catch (const TemplateRejectedError& err) {
    CHECK(err.code() == Errc::TemplateRejected);
    CHECK(err.report().findings.at(0).rule == RuleId::environment_size);
  }
  CHECK_FALSE(e.catalog().records.contains("bad"));

  EngineOptions upgraded;
  upgraded.rules.env_char_limit = kUpgradedEnvCharLimit;
  Engine e2 = fresh(upgraded);
  e2.register_vsp(kDesigner, {fx::kVsp, "bcom", "vepc", {1, 0, 0}, {}});
  CHECK_NOTHROW(e2.onboard_vf(kDesigner, fx::kVsp, std::string(fx::bad_env_template()), "bad"));
}

TEST_CASE("invalid plans are refused without side effects") {
  Engine e = fresh();
  fx::design_slice_a(e);
  PlacementPlan p = e.plan_slice(fx::kSliceA);
  p.assignments.push_back({fx::kCoreCp, kOrchestratorTenant});
  const auto usage = e.infra().usage();
  try {
    e.instantiate_slice(kOperator, fx::kSliceA, p);
    FAIL("expected PlanInvalid");
  } catch (const PlanInvalidError& err) {
    CHECK(err.verdict().has(ViolationKind::SplitService));
  }
  CHECK(e.infra().usage() == usage);
  CHECK(state_name(e.catalog().record(fx::kSliceA).state) == "ready");
}

TEST_CASE("atomic instantiation rolls back on a fault at any position") {
  for (std::size_t k = 0; k < 2; ++k) {
    EngineOptions o;
    o.fault_injector = [k](const EntityId&, const EntityId&, std::size_t i) -> std::optional<std::string> {
      if (i == k) return "no capacity";
      return std::nullopt;
    };
    Engine e = fresh(o);
    fx::design_slice_a(e);
    const auto usage = e.infra().usage();
    const auto plan = e.plan_slice(fx::kSliceA);
    try {
      e.instantiate_slice(kOperator, fx::kSliceA, plan);
      FAIL("expected PartialFailure");
    } catch (const PartialFailureError& err) {
      CHECK(err.service() == e.catalog().slices.at(fx::kSliceA).services[k]);
    }
    CHECK(e.infra().usage() == usage);
    CHECK(e.infra().allocations().empty());
    CHECK(state_name(e.catalog().record(fx::kSliceA).state) == "ready");
    CHECK(count_ok(e, action::instantiate_service) == 0);

    e.set_fault_injector({});
    e.instantiate_slice(kOperator, fx::kSliceA, plan);
    CHECK(state_name(e.catalog().record(fx::kSliceA).state) == "active");
    e.teardown_slice(kOperator, fx::kSliceA);
    CHECK(e.infra().usage() == usage);
    CHECK(replay(e.audit().events()) == e.catalog().records);
  }
}

TEST_CASE("best-effort mode keeps what succeeded") {
  EngineOptions o;
  o.atomic_slice_instantiation = false;
  o.fault_injector = [](const EntityId&, const EntityId&, std::size_t i) -> std::optional<std::string> {
    if (i == 1) return "no capacity";
    return std::nullopt;
  };
  Engine e = fresh(o);
  fx::design_slice_a(e);
  const auto rec = e.instantiate_slice(kOperator, fx::kSliceA, e.plan_slice(fx::kSliceA));
  CHECK(state_name(rec.state) == "partially_instantiated");
  CHECK(state_name(e.catalog().record(fx::kCoreCp).state) == "instantiated");
  CHECK(state_name(e.catalog().record(fx::kCoreDp).state) == "distributed");
  e.teardown_slice(kOperator, fx::kSliceA);
  CHECK(e.infra().allocations().empty());
  CHECK(replay(e.audit().events()) == e.catalog().records);
}

TEST_CASE("teardown leaves services deployed by another slice alone") {
  EngineOptions o;
  o.atomic_slice_instantiation = false;
  Engine e = fresh(o);
  fx::design_slice_a(e);
  SliceRequest req;
  req.id = "slice-b";
  req.name = "B";
  req.customer = fx::kCustomer;
  req.provider = fx::kProvider;
  req.services = {fx::kCoreDp, fx::kCoreCp};
  e.create_slice(kDesigner, req);
  e.set_fault_injector([](const EntityId& s, const EntityId&, std::size_t) -> std::optional<std::string> {
    if (s == fx::kCoreCp) return "fault";
    return std::nullopt;
  });
  e.instantiate_slice(kOperator, "slice-b", e.plan_slice("slice-b"));
  CHECK(state_name(e.catalog().record("slice-b").state) == "partially_instantiated");
  const EntityId dp_tenant = e.catalog().deployments.at(fx::kCoreDp).tenant;
  const EntityId other = dp_tenant == kControlPlaneTenant ? kDataPlaneTenant : kControlPlaneTenant;
  e.instantiate_service(kOperator, fx::kCoreCp, other);
  e.teardown_slice(kOperator, "slice-b");
  CHECK(state_name(e.catalog().record(fx::kCoreCp).state) == "instantiated");
  CHECK(state_name(e.catalog().record(fx::kCoreDp).state) == "terminated");
}

TEST_CASE("standalone service instantiation checks the quota") {
  Engine e = fresh();
  fx::design_slice_a(e);
  CHECK(code_of([&] { e.instantiate_service(kOperator, fx::kCoreCp, kOrchestratorTenant); }) ==
        Errc::InsufficientCapacity);
  CHECK(e.infra().allocations().empty());
  e.instantiate_service(kOperator, fx::kCoreCp, kControlPlaneTenant);
  CHECK(e.infra().tenant(kControlPlaneTenant).used == ResourceDemand{4, 8192, 40, 6});
}

TEST_CASE("slices without a template get an even split") {
  Engine e = fresh();
  fx::design_slice_a(e);
  SliceRequest req;
  req.id = "even";
  req.name = "even";
  req.customer = fx::kCustomer;
  req.provider = fx::kProvider;
  req.services = {fx::kCoreCp, fx::kCoreDp};
  req.profile.end_to_end_latency = 6;
  req.profile.service_availability = 0.99;
  e.create_slice(kDesigner, req);
  const auto& t = e.catalog().slice_templates.at("even");
  CHECK(t.per_service_requirements.at(fx::kCoreCp).latency_budget == 3.0);
  CHECK(t.per_service_requirements.at(fx::kCoreCp).reliability == doctest::Approx(0.995));
  CHECK(state_name(e.catalog().record("even").state) == "ready");
}

TEST_CASE("random operation sequences stay consistent") {
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    fuzz::Stats stats;
    const auto state = fuzz::run_sequence(seed, 40, stats);
    const std::string problem = fuzz::check_state(state);
    INFO("seed " << seed);
    CHECK(problem.empty());
    if (!problem.empty()) MESSAGE(problem);
  }
}
