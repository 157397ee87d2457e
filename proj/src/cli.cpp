#include "slicer/cli.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <CLI11.hpp>

#include <algorithm>
#include <map>
#include <memory>
#include <sstream>

#include "slicer/fixtures.hpp"
#include "slicer/lifecycle.hpp"
#include "slicer/store.hpp"

namespace slicer::cli {

using json = nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Holds an advisory lock on the catalog directory for the command's lifetime.
class Session {
 public:
  Session(const fs::path& dir, bool exclusive) : dir_(dir) {
    if (!fs::exists(dir / kCatalogFile) || !fs::exists(dir / kInventoryFile)) {
      throw UsageError("no catalog in '" + dir.string() + "'; run init-testbed first");
    }
    lock_fd_ = ::open((dir / ".lock").c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
    if (lock_fd_ < 0 || ::flock(lock_fd_, exclusive ? LOCK_EX : LOCK_SH) != 0) {
      throw Error(Errc::IoFailure, "cannot lock catalog '" + dir.string() + "'");
    }
    engine_ = std::make_unique<Engine>(load_catalog(dir / kCatalogFile),
                                       load_inventory(dir / kInventoryFile),
                                       AuditLog::open(dir / kAuditFile));
  }
  ~Session() {
    if (lock_fd_ >= 0) ::close(lock_fd_);
  }
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  Engine& engine() { return *engine_; }
  const fs::path& dir() const { return dir_; }

  void commit() {
    save_catalog(engine_->catalog(), dir_ / kCatalogFile);
    save_inventory(engine_->infra(), dir_ / kInventoryFile);
  }

 private:
  fs::path dir_;
  int lock_fd_ = -1;
  std::unique_ptr<Engine> engine_;
};

struct Options {
  std::string catalog;
  std::string role = "superuser";
  std::string actor_id;
  bool json = false;

  // lint-template
  std::string file;
  std::size_t env_limit = kDefaultEnvCharLimit;
  bool count_names = false;

  // init-testbed
  bool no_links = false;
  bool force = false;
  double onap_cp_latency = 1.0;
  double onap_dp_latency = 1.0;
  double cp_dp_latency = 1.0;

  // workflow
  std::string target;
  std::string id;
  std::string vsp;
  std::string vendor;
  std::string product;
  std::string version = "1.0.0";
  std::vector<std::string> vfs;
  std::vector<std::string> services;
  std::string tenant;
  std::string customer = fixtures::kCustomer;
  std::string provider = fixtures::kProvider;
  std::string profile_file;
  std::string slice_template_file;
  double latency = 0.0;
  double rate = 0.0;
  double availability = 0.0;
  std::string isolation;
  bool no_chain = false;
  std::string solver = "exhaustive";
  std::size_t threshold = 64;
  std::string out_file;
  std::string plan_file;
  std::string scenario;
};

std::string demand_text(const ResourceDemand& d) { return to_string(d); }

json demand_json(const ResourceDemand& d) {
  return json{{"vcpu", d.vcpu}, {"ram", d.ram}, {"storage", d.storage}, {"ports", d.ports}};
}

json record_json(const LifecycleRecord& r) {
  return json{{"subject", r.subject},
              {"kind", to_string(r.kind)},
              {"state", state_name(r.state)},
              {"history", r.history}};
}

json status_json(const Engine& engine) {
  json records = json::array();
  for (const auto& [_, r] : engine.catalog().records) records.push_back(record_json(r));
  json tenants = json::array();
  for (const auto& [id, t] : engine.infra().tenants()) {
    tenants.push_back({{"id", id},
                       {"host", t.host},
                       {"quota", demand_json(t.quota)},
                       {"used", demand_json(t.used)},
                       {"free", demand_json(t.free())}});
  }
  json slices = json::array();
  for (const auto& [id, sl] : engine.catalog().slices) {
    json s{{"id", id},
           {"state", state_name(engine.catalog().record(id).state)},
           {"services", sl.services}};
    json placement = json::object();
    for (const auto& svc : sl.services) {
      const auto& srec = engine.catalog().record(svc);
      json entry{{"state", state_name(srec.state)}};
      if (auto d = engine.catalog().deployments.find(svc); d != engine.catalog().deployments.end()) {
        entry["tenant"] = d->second.tenant;
      }
      placement[svc] = entry;
    }
    s["members"] = placement;
    if (sl.sla) {
      s["sla"] = {{"committed_latency", sl.sla->committed_latency},
                  {"committed_availability", sl.sla->committed_availability},
                  {"committed_data_rate", sl.sla->committed_data_rate}};
    }
    if (auto p = engine.catalog().slice_plans.find(id); p != engine.catalog().slice_plans.end()) {
      s["e2e_latency"] = p->second.e2e_latency;
    }
    slices.push_back(s);
  }
  return json{{"records", records}, {"tenants", tenants}, {"slices", slices}};
}

std::string status_text(const json& status) {
  std::ostringstream os;
  os << "artifacts:\n";
  for (const auto& r : status["records"]) {
    os << "  " << r["kind"].get<std::string>() << " " << r["subject"].get<std::string>() << ": "
       << r["state"].get<std::string>() << "\n";
  }
  os << "tenants:\n";
  for (const auto& t : status["tenants"]) {
    os << "  " << t["id"].get<std::string>() << " on " << t["host"].get<std::string>()
       << " used " << t["used"].dump() << " of " << t["quota"].dump() << "\n";
  }
  for (const auto& s : status["slices"]) {
    os << "slice " << s["id"].get<std::string>() << ": " << s["state"].get<std::string>() << "\n";
    for (const auto& [svc, m] : s["members"].items()) {
      os << "  " << svc << ": " << m["state"].get<std::string>();
      if (m.contains("tenant")) os << " on " << m["tenant"].get<std::string>();
      os << "\n";
    }
    if (s.contains("e2e_latency")) os << "  e2e latency: " << s["e2e_latency"].get<double>() << " ms\n";
  }
  return os.str();
}

json audit_json(const std::vector<AuditEvent>& events) {
  json out = json::array();
  for (const auto& e : events) out.push_back(json::parse(to_line(e)));
  return out;
}

json audit_summary(const std::vector<AuditEvent>& events) {
  std::map<std::string, int> by_action;
  for (const auto& e : events) {
    if (e.outcome == Outcome::ok) ++by_action[e.action];
  }
  return json{{"events", events.size()}, {"ok_by_action", by_action}};
}

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::IoFailure:
    case Errc::SchemaMismatch:
    case Errc::SequenceGap:
      return kExitInternal;
    default:
      return kExitRejected;
  }
}

ServiceProfile profile_from_options(const Options& o) {
  ServiceProfile p;
  if (!o.profile_file.empty()) p = profile_from_json(json::parse(read_file(o.profile_file)));
  if (o.latency > 0.0) p.end_to_end_latency = o.latency;
  if (o.rate > 0.0) p.guaranteed_data_rate = o.rate;
  if (o.availability > 0.0) p.service_availability = o.availability;
  if (o.isolation == "shared") {
    p.degree_of_isolation = Isolation::shared;
  } else if (o.isolation == "dedicated_tenant") {
    p.degree_of_isolation = Isolation::dedicated_tenant;
  } else if (o.isolation == "dedicated_host") {
    p.degree_of_isolation = Isolation::dedicated_host;
  } else if (!o.isolation.empty()) {
    throw UsageError("unknown isolation '" + o.isolation + "'");
  }
  return p;
}

class Runner {
 public:
  explicit Runner(Options o) : o_(std::move(o)) {}

  void set(json detail, std::string human, int code = kExitOk) {
    result_.detail = std::move(detail);
    human_ = std::move(human);
    result_.exit_code = code;
  }

  CommandResult finish() {
    result_.out = o_.json ? result_.detail.dump(2) + "\n" : human_;
    return std::move(result_);
  }

  Actor actor() const { return {parse_role(o_.role), o_.actor_id}; }

  fs::path catalog_dir() const {
    if (o_.catalog.empty()) {
      throw UsageError("no catalog directory; pass --catalog or set " + std::string(kCatalogEnv));
    }
    return o_.catalog;
  }

  // Runs `body` against a locked session and always persists afterwards, so
  // failed and denied attempts keep their place in record histories.
  template <class F>
  void mutate(F&& body) {
    Session s(catalog_dir(), true);
    try {
      body(s.engine());
    } catch (...) {
      s.commit();
      throw;
    }
    s.commit();
  }

  template <class F>
  void read(F&& body) {
    Session s(catalog_dir(), false);
    body(s.engine(), s.dir());
  }

  void lint_template() {
    RuleSet rules;
    rules.env_char_limit = o_.env_limit;
    rules.count_names = o_.count_names;
    const TemplateDocument doc = parse_template(read_file(o_.file));
    const ValidationReport report = lint(doc, rules);
    json detail = to_json_document(report);
    detail["template"] = doc.name;
    detail["environment_chars"] = environment_char_count(doc.environment, rules.count_names);
    detail["env_limit"] = rules.env_char_limit;
    std::ostringstream os;
    os << doc.name << ": " << (report.accepted() ? "accepted" : "rejected") << " ("
       << detail["environment_chars"].get<std::size_t>() << " of " << rules.env_char_limit
       << " environment characters)\n";
    for (const auto& f : report.findings) {
      os << "  [" << to_string(f.rule) << "] " << f.location << ": " << f.message << "\n";
    }
    set(detail, os.str(), report.accepted() ? kExitOk : kExitRejected);
  }

  void init_testbed() {
    const fs::path dir = catalog_dir();
    if (fs::exists(dir / kCatalogFile) && !o_.force) {
      throw Error(Errc::Duplicate, "'" + dir.string() + "' already holds a catalog (use --force)");
    }
    fs::create_directories(dir);
    TestbedOptions t;
    t.with_links = !o_.no_links;
    t.orchestrator_cp_latency = o_.onap_cp_latency;
    t.orchestrator_dp_latency = o_.onap_dp_latency;
    t.cp_dp_latency = o_.cp_dp_latency;
    const Infrastructure infra = build_testbed(t);
    save_catalog(Catalog{}, dir / kCatalogFile);
    save_inventory(infra, dir / kInventoryFile);
    fs::remove(dir / kAuditFile);
    write_file_atomic(dir / kAuditFile, "");
    std::ostringstream os;
    os << "initialized " << dir.string() << " with " << infra.tenants().size() << " tenants on "
       << infra.hosts().size() << " hosts\n";
    set(to_json_document(infra), os.str());
  }

  void onboard_vf() {
    mutate([&](Engine& e) {
      if (!e.catalog().vsps.contains(o_.vsp)) {
        if (o_.vendor.empty() || o_.product.empty()) {
          throw UsageError("vsp '" + o_.vsp + "' is unknown; pass --vendor and --product to register it");
        }
        e.register_vsp(actor(), {o_.vsp, o_.vendor, o_.product, SemVer::parse(o_.version), {}});
      }
      const std::string text = read_file(o_.file);
      auto rec = e.onboard_vf(actor(), o_.vsp, text,
                              o_.id.empty() ? std::nullopt : std::optional<EntityId>(o_.id));
      set(record_json(rec), "vf " + rec.subject + ": " + state_name(rec.state) + "\n");
    });
  }

  void certify_vf() {
    mutate([&](Engine& e) {
      auto rec = e.certify_vf(actor(), o_.target);
      set(record_json(rec), "vf " + rec.subject + ": " + state_name(rec.state) + "\n");
    });
  }

  void create_service() {
    mutate([&](Engine& e) {
      auto rec = e.create_service(actor(), o_.target, o_.vfs,
                                  o_.id.empty() ? std::nullopt : std::optional<EntityId>(o_.id));
      set(record_json(rec), "service " + rec.subject + ": " + state_name(rec.state) + "\n");
    });
  }

  void advance(ServiceAction step) {
    mutate([&](Engine& e) {
      auto rec = e.advance_service(actor(), o_.target, step);
      set(record_json(rec), "service " + rec.subject + ": " + state_name(rec.state) + "\n");
    });
  }

  void instantiate_service() {
    mutate([&](Engine& e) {
      auto rec = e.instantiate_service(actor(), o_.target, o_.tenant);
      set(record_json(rec),
          "service " + rec.subject + ": " + state_name(rec.state) + " on " + o_.tenant + "\n");
    });
  }

  void create_slice() {
    mutate([&](Engine& e) {
      const Actor a = actor();
      if (!e.catalog().customers.contains(o_.customer)) {
        e.register_customer(a, {o_.customer, o_.customer, "", ""});
      }
      if (!e.catalog().providers.contains(o_.provider)) {
        e.register_provider(a, {o_.provider, o_.provider, {"default"}});
      }
      SliceRequest req;
      if (!o_.id.empty()) req.id = o_.id;
      req.name = o_.target;
      req.customer = o_.customer;
      req.provider = o_.provider;
      req.services = o_.services;
      req.profile = profile_from_options(o_);
      req.chain_order = !o_.no_chain;
      if (!o_.slice_template_file.empty()) {
        req.slice_template =
            slice_template_from_json(json::parse(read_file(o_.slice_template_file)));
      }
      auto rec = e.create_slice(a, req);
      json detail = record_json(rec);
      const auto& sla = e.catalog().slices.at(rec.subject).sla;
      std::ostringstream os;
      os << "slice " << rec.subject << ": " << state_name(rec.state) << "\n";
      if (sla) {
        detail["sla"] = {{"committed_latency", sla->committed_latency},
                         {"committed_availability", sla->committed_availability},
                         {"committed_data_rate", sla->committed_data_rate}};
        os << "  SLA: " << sla->committed_latency << " ms, " << sla->committed_availability
           << " availability, " << sla->committed_data_rate << " Mbit/s\n";
      }
      for (const auto& w : profile_warnings(req.profile)) os << "  warning: " << w << "\n";
      set(detail, os.str());
    });
  }

  void place_slice() {
    read([&](Engine& e, const fs::path& dir) {
      PlacementPolicy policy;
      if (o_.solver == "greedy") {
        policy.solver = Solver::greedy;
      } else if (o_.solver != "exhaustive") {
        throw UsageError("unknown solver '" + o_.solver + "'");
      }
      policy.exhaustive_threshold = o_.threshold;
      const PlacementPlan plan = e.plan_slice(o_.target, policy);
      fs::path out = o_.out_file;
      if (out.empty()) {
        fs::create_directories(dir / "plans");
        out = dir / "plans" / (o_.target + ".plan.json");
      }
      save_plan(plan, out);
      json detail = to_json_document(plan);
      detail["file"] = out.string();
      std::ostringstream os;
      if (plan.feasible) {
        os << "plan for " << plan.slice << " (e2e latency " << plan.e2e_latency << " ms):\n";
        for (const auto& a : plan.assignments) os << "  " << a.service << " -> " << a.tenant << "\n";
        for (const auto& w : plan.warnings) os << "  warning: " << w << "\n";
      } else {
        os << "slice " << plan.slice << " is not placeable: " << plan.reason << "\n";
      }
      os << "written to " << out.string() << "\n";
      set(detail, os.str(), plan.feasible ? kExitOk : kExitRejected);
    });
  }

  void instantiate_slice() {
    mutate([&](Engine& e) {
      const PlacementPlan plan = load_plan(o_.plan_file);
      auto rec = e.instantiate_slice(actor(), o_.target, plan);
      set(status_json(e), "slice " + rec.subject + ": " + state_name(rec.state) + "\n");
    });
  }

  void teardown_slice() {
    mutate([&](Engine& e) {
      auto rec = e.teardown_slice(actor(), o_.target);
      set(record_json(rec), "slice " + rec.subject + ": " + state_name(rec.state) + "\n");
    });
  }

  void status() {
    read([&](Engine& e, const fs::path&) {
      const json s = status_json(e);
      set(s, status_text(s));
    });
  }

  void audit() {
    read([&](Engine& e, const fs::path&) {
      const auto& events = e.audit().events();
      const bool replay_ok = replay(events) == e.catalog().records;
      json detail{{"events", audit_json(events)}, {"replay_matches", replay_ok}};
      std::ostringstream os;
      for (const auto& ev : events) {
        os << ev.sequence_no << " " << to_string(ev.outcome) << " " << to_string(ev.actor) << "/"
           << ev.actor_id << " " << ev.action << " " << ev.subject;
        if (!ev.detail.empty()) os << " (" << ev.detail << ")";
        os << "\n";
      }
      os << "replay " << (replay_ok ? "matches" : "DOES NOT match") << " the catalog\n";
      set(detail, os.str(), replay_ok ? kExitOk : kExitInternal);
    });
  }

  void demo() {
    if (o_.scenario != "slice-a") throw UsageError("unknown scenario '" + o_.scenario + "'");
    std::unique_ptr<Session> session;
    std::unique_ptr<Engine> owned;
    Engine* engine = nullptr;
    if (!o_.catalog.empty()) {
      const fs::path dir = o_.catalog;
      if (fs::exists(dir / kCatalogFile)) {
        throw Error(Errc::Duplicate, "demo needs a fresh catalog; '" + dir.string() + "' is in use");
      }
      fs::create_directories(dir);
      save_catalog(Catalog{}, dir / kCatalogFile);
      save_inventory(build_testbed(), dir / kInventoryFile);
      write_file_atomic(dir / kAuditFile, "");
      session = std::make_unique<Session>(dir, true);
      engine = &session->engine();
    } else {
      owned = std::make_unique<Engine>(Catalog{}, build_testbed(), AuditLog{});
      engine = owned.get();
    }

    fixtures::SliceAOutcome outcome;
    try {
      outcome = fixtures::run_slice_a(*engine);
    } catch (...) {
      if (session) session->commit();
      throw;
    }
    if (session) session->commit();

    const auto& events = engine->audit().events();
    json detail = status_json(*engine);
    detail["plan"] = to_json_document(outcome.plan);
    detail["audit"] = audit_summary(events);
    std::ostringstream os;
    os << "Slice A: " << state_name(outcome.slice.state) << " on a "
       << engine->infra().tenants().size() << "-tenant testbed\n";
    for (const auto& a : outcome.plan.assignments) {
      os << "  " << a.service << " -> " << a.tenant << " (footprint "
         << demand_text(engine->service_footprint(a.service)) << ")\n";
    }
    os << "end-to-end latency: " << outcome.plan.e2e_latency << " ms\n";
    os << "audit: " << events.size() << " events\n";
    for (const auto& [act, n] : detail["audit"]["ok_by_action"].items()) {
      os << "  " << act << ": " << n.get<int>() << "\n";
    }
    set(detail, os.str());
  }

 private:
  Options o_;
  CommandResult result_;
  std::string human_;
};

}  // namespace

CommandResult run(const std::vector<std::string>& args) {
  Options o;
  CLI::App app{"Network slice lifecycle orchestrator", "slicectl"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--catalog", o.catalog, "Catalog directory")->envname(kCatalogEnv);
  app.add_option("--as", o.role, "Acting role: superuser, designer, tester, governor, operator");
  app.add_option("--actor-id", o.actor_id, "Name recorded in the audit log");
  app.add_flag("--json", o.json, "Machine-readable output");

  auto* lint = app.add_subcommand("lint-template", "Check a VF template against onboarding rules");
  lint->add_option("file", o.file)->required();
  lint->add_option("--env-limit", o.env_limit, "Environment character limit")->check(CLI::PositiveNumber);
  lint->add_flag("--count-names", o.count_names, "Count entry names toward the limit");

  auto* init = app.add_subcommand("init-testbed", "Create a catalog on the three-tenant testbed");
  init->add_flag("--no-links", o.no_links, "Leave hosts disconnected");
  init->add_flag("--force", o.force, "Overwrite an existing catalog");
  init->add_option("--onap-cp-latency", o.onap_cp_latency)->check(CLI::PositiveNumber);
  init->add_option("--onap-dp-latency", o.onap_dp_latency)->check(CLI::PositiveNumber);
  init->add_option("--cp-dp-latency", o.cp_dp_latency)->check(CLI::PositiveNumber);

  auto* onboard = app.add_subcommand("onboard-vf", "Onboard a VF template (designer)");
  onboard->add_option("--vsp", o.vsp)->required();
  onboard->add_option("--template", o.file)->required();
  onboard->add_option("--id", o.id);
  onboard->add_option("--vendor", o.vendor);
  onboard->add_option("--product", o.product);
  onboard->add_option("--version", o.version);

  auto* certify = app.add_subcommand("certify-vf", "Certify a draft VF (tester)");
  certify->add_option("vf", o.target)->required();

  auto* create_svc = app.add_subcommand("create-service", "Create a service from certified VFs (designer)");
  create_svc->add_option("name", o.target)->required();
  create_svc->add_option("--vf", o.vfs);
  create_svc->add_option("--id", o.id);

  auto* test_svc = app.add_subcommand("test-service", "Mark a designed service tested (tester)");
  test_svc->add_option("service", o.target)->required();
  auto* approve_svc = app.add_subcommand("approve-service", "Approve a tested service (governor)");
  approve_svc->add_option("service", o.target)->required();
  auto* distribute_svc = app.add_subcommand("distribute-service", "Distribute an approved service (operator)");
  distribute_svc->add_option("service", o.target)->required();

  auto* inst_svc = app.add_subcommand("instantiate-service", "Instantiate one service on a tenant (operator)");
  inst_svc->add_option("service", o.target)->required();
  inst_svc->add_option("--tenant", o.tenant)->required();

  auto* create_slc = app.add_subcommand("create-slice", "Compose a slice from services (designer)");
  create_slc->add_option("name", o.target)->required();
  create_slc->add_option("--service", o.services)->required();
  create_slc->add_option("--id", o.id);
  create_slc->add_option("--customer", o.customer);
  create_slc->add_option("--provider", o.provider);
  create_slc->add_option("--profile", o.profile_file, "Service profile JSON");
  create_slc->add_option("--slice-template", o.slice_template_file, "Slice template JSON");
  create_slc->add_option("--latency", o.latency, "End-to-end latency, ms");
  create_slc->add_option("--rate", o.rate, "Guaranteed data rate, Mbit/s");
  create_slc->add_option("--availability", o.availability);
  create_slc->add_option("--isolation", o.isolation, "shared, dedicated_tenant or dedicated_host");
  create_slc->add_flag("--no-chain", o.no_chain, "Services are not traversed in order");

  auto* place = app.add_subcommand("place-slice", "Compute a placement plan");
  place->add_option("slice", o.target)->required();
  place->add_option("--solver", o.solver)->check(CLI::IsMember({"exhaustive", "greedy"}));
  place->add_option("--threshold", o.threshold, "services x tenants bound for exact search")
      ->check(CLI::PositiveNumber);
  place->add_option("--out", o.out_file, "Plan file (default: <catalog>/plans/<slice>.plan.json)");

  auto* inst_slc = app.add_subcommand("instantiate-slice", "Instantiate a slice from a plan (operator)");
  inst_slc->add_option("slice", o.target)->required();
  inst_slc->add_option("--plan", o.plan_file)->required();

  auto* teardown = app.add_subcommand("teardown-slice", "Release every resource of a slice (operator)");
  teardown->add_option("slice", o.target)->required();

  auto* status = app.add_subcommand("status", "Show lifecycle states and tenant usage");
  auto* audit = app.add_subcommand("audit", "Print the audit log and check replay");

  auto* demo = app.add_subcommand("demo", "Run a bundled scenario end to end");
  demo->add_option("scenario", o.scenario, "slice-a")->required();

  CommandResult result;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    result.out = app.help();
    return result;
  } catch (const CLI::CallForAllHelp&) {
    result.out = app.help("", CLI::AppFormatMode::All);
    return result;
  } catch (const CLI::ParseError& e) {
    result.exit_code = kExitUsage;
    result.err = std::string(e.what()) + "\n" + app.help();
    return result;
  }

  try {
    parse_role(o.role);
  } catch (const Error& e) {
    result.exit_code = kExitUsage;
    result.err = std::string(e.what()) + "\n";
    return result;
  }

  Runner runner(o);
  try {
    if (lint->parsed()) runner.lint_template();
    else if (init->parsed()) runner.init_testbed();
    else if (onboard->parsed()) runner.onboard_vf();
    else if (certify->parsed()) runner.certify_vf();
    else if (create_svc->parsed()) runner.create_service();
    else if (test_svc->parsed()) runner.advance(ServiceAction::test);
    else if (approve_svc->parsed()) runner.advance(ServiceAction::approve);
    else if (distribute_svc->parsed()) runner.advance(ServiceAction::distribute);
    else if (inst_svc->parsed()) runner.instantiate_service();
    else if (create_slc->parsed()) runner.create_slice();
    else if (place->parsed()) runner.place_slice();
    else if (inst_slc->parsed()) runner.instantiate_slice();
    else if (teardown->parsed()) runner.teardown_slice();
    else if (status->parsed()) runner.status();
    else if (audit->parsed()) runner.audit();
    else if (demo->parsed()) runner.demo();
  } catch (const UsageError& e) {
    result.exit_code = kExitUsage;
    result.err = std::string(e.what()) + "\n";
    return result;
  } catch (const Error& e) {
    result.exit_code = exit_code_for(e.code());
    result.err = std::string(e.what()) + "\n";
    result.detail = json{{"error", to_string(e.code())}, {"message", e.what()}};
    if (const auto* rej = dynamic_cast<const TemplateRejectedError*>(&e)) {
      result.detail["report"] = to_json_document(rej->report());
    } else if (const auto* bad = dynamic_cast<const PlanInvalidError*>(&e)) {
      result.detail["verdict"] = to_json_document(bad->verdict());
    } else if (const auto* partial = dynamic_cast<const PartialFailureError*>(&e)) {
      result.detail["failed_service"] = partial->service();
    }
    if (o.json) result.out = result.detail.dump(2) + "\n";
    return result;
  } catch (const json::exception& e) {
    result.exit_code = kExitRejected;
    result.err = std::string("malformed input: ") + e.what() + "\n";
    return result;
  } catch (const std::exception& e) {
    result.exit_code = kExitInternal;
    result.err = std::string("internal error: ") + e.what() + "\n";
    return result;
  }
  return runner.finish();
}

}  // namespace slicer::cli
