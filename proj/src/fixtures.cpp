#include "slicer/fixtures.hpp"

#include <nlohmann/json.hpp>

namespace slicer::fixtures {

void design_slice_a(Engine& engine) {
  const Actor designer{Role::designer, "dana"};
  const Actor tester{Role::tester, "tom"};
  const Actor governor{Role::governor, "gail"};
  const Actor op{Role::operator_, "otto"};

  engine.register_customer(designer, {kCustomer, "Company X", "private mobile network", "enterprise"});
  engine.register_provider(designer, {kProvider, "Grey Operator", {"grey-core"}});
  engine.register_vsp(designer, {kVsp, "bcom", "vEPC-CUPS", {1, 3, 0}, {}});

  engine.onboard_vf(designer, kVsp, std::string(core_cp_template()), kCoreCpVf);
  engine.onboard_vf(designer, kVsp, std::string(core_dp_template()), kCoreDpVf);
  engine.certify_vf(tester, kCoreCpVf);
  engine.certify_vf(tester, kCoreDpVf);

  for (const auto& [svc, vf] : {std::pair{kCoreCp, kCoreCpVf}, std::pair{kCoreDp, kCoreDpVf}}) {
    engine.create_service(designer, svc, {vf}, svc);
    engine.advance_service(tester, svc, ServiceAction::test);
    engine.advance_service(governor, svc, ServiceAction::approve);
    engine.advance_service(op, svc, ServiceAction::distribute);
  }

  SliceRequest req;
  req.id = kSliceA;
  req.name = "Slice A";
  req.customer = kCustomer;
  req.provider = kProvider;
  req.services = {kCoreCp, kCoreDp};
  req.profile = profile_from_json(nlohmann::json::parse(slice_a_profile()));
  req.slice_template = slice_template_from_json(nlohmann::json::parse(slice_a_template()));
  engine.create_slice(designer, req);
}

SliceAOutcome run_slice_a(Engine& engine, const PlacementPolicy& policy) {
  design_slice_a(engine);
  PlacementPlan plan = engine.plan_slice(kSliceA, policy);
  if (!plan.feasible) throw Error(Errc::PlanInvalid, "Slice A is not placeable: " + plan.reason);
  LifecycleRecord rec = engine.instantiate_slice({Role::operator_, "otto"}, kSliceA, plan);
  return {std::move(plan), std::move(rec)};
}

}  // namespace slicer::fixtures
