#include "slicer/audit.hpp"

namespace slicer {

std::string_view to_string(Role role) {
  switch (role) {
    case Role::superuser: return "superuser";
    case Role::designer: return "designer";
    case Role::tester: return "tester";
    case Role::governor: return "governor";
    case Role::operator_: return "operator";
  }
  return "unknown";
}

Role parse_role(std::string_view text) {
  for (Role r : {Role::superuser, Role::designer, Role::tester, Role::governor, Role::operator_}) {
    if (to_string(r) == text) return r;
  }
  throw Error(Errc::InvalidArgument, "unknown role '" + std::string(text) + "'");
}

std::string_view to_string(VfState s) {
  switch (s) {
    case VfState::draft: return "draft";
    case VfState::certified: return "certified";
  }
  return "unknown";
}

std::string_view to_string(ServiceState s) {
  switch (s) {
    case ServiceState::designed: return "designed";
    case ServiceState::tested: return "tested";
    case ServiceState::approved: return "approved";
    case ServiceState::distributed: return "distributed";
    case ServiceState::instantiated: return "instantiated";
    case ServiceState::terminated: return "terminated";
  }
  return "unknown";
}

std::string_view to_string(SliceState s) {
  switch (s) {
    case SliceState::drafted: return "drafted";
    case SliceState::ready: return "ready";
    case SliceState::partially_instantiated: return "partially_instantiated";
    case SliceState::active: return "active";
    case SliceState::terminated: return "terminated";
  }
  return "unknown";
}

std::string_view to_string(RecordKind k) {
  switch (k) {
    case RecordKind::vf: return "vf";
    case RecordKind::service: return "service";
    case RecordKind::slice: return "slice";
  }
  return "unknown";
}

std::string state_name(const LifecycleState& s) {
  return std::visit([](auto v) { return std::string(to_string(v)); }, s);
}

bool is_legal(VfState from, VfState to) {
  return from == VfState::draft && to == VfState::certified;
}

bool is_legal(ServiceState from, ServiceState to) {
  return static_cast<int>(to) == static_cast<int>(from) + 1;
}

bool is_legal(SliceState from, SliceState to) {
  using S = SliceState;
  switch (from) {
    case S::drafted: return to == S::ready;
    case S::ready: return to == S::active || to == S::partially_instantiated;
    case S::partially_instantiated:
      return to == S::active || to == S::ready || to == S::terminated;
    case S::active: return to == S::terminated;
    case S::terminated: return false;
  }
  return false;
}

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::ok: return "ok";
    case Outcome::denied: return "denied";
    case Outcome::failed: return "failed";
  }
  return "unknown";
}

namespace {

struct Effect {
  RecordKind kind;
  LifecycleState to;
  bool creates;
};

std::optional<Effect> effect_of(std::string_view name) {
  if (name == action::onboard_vf) return Effect{RecordKind::vf, VfState::draft, true};
  if (name == action::certify_vf) return Effect{RecordKind::vf, VfState::certified, false};
  if (name == action::create_service) {
    return Effect{RecordKind::service, ServiceState::designed, true};
  }
  if (name == action::test_service) return Effect{RecordKind::service, ServiceState::tested, false};
  if (name == action::approve_service) {
    return Effect{RecordKind::service, ServiceState::approved, false};
  }
  if (name == action::distribute_service) {
    return Effect{RecordKind::service, ServiceState::distributed, false};
  }
  if (name == action::instantiate_service) {
    return Effect{RecordKind::service, ServiceState::instantiated, false};
  }
  if (name == action::terminate_service) {
    return Effect{RecordKind::service, ServiceState::terminated, false};
  }
  if (name == action::create_slice) return Effect{RecordKind::slice, SliceState::drafted, true};
  if (name == action::slice_ready) return Effect{RecordKind::slice, SliceState::ready, false};
  if (name == action::instantiate_slice) {
    return Effect{RecordKind::slice, SliceState::active, false};
  }
  if (name == action::instantiate_slice_partial) {
    return Effect{RecordKind::slice, SliceState::partially_instantiated, false};
  }
  if (name == action::teardown_slice) {
    return Effect{RecordKind::slice, SliceState::terminated, false};
  }
  return std::nullopt;
}

bool legal_step(const LifecycleState& from, const LifecycleState& to) {
  if (from.index() != to.index()) return false;
  return std::visit(
      [&](auto f) {
        using T = decltype(f);
        return is_legal(f, std::get<T>(to));
      },
      from);
}

}  // namespace

void apply_event(std::map<EntityId, LifecycleRecord>& records, const AuditEvent& event) {
  auto it = records.find(event.subject);
  const auto effect = event.outcome == Outcome::ok ? effect_of(event.action) : std::nullopt;

  if (effect && effect->creates) {
    if (it != records.end()) {
      throw Error(Errc::InvalidTransition, "event " + std::to_string(event.sequence_no) +
                                               " recreates '" + event.subject + "'");
    }
    records.emplace(event.subject, LifecycleRecord{event.subject, effect->kind, effect->to,
                                                   {event.sequence_no}});
    return;
  }
  if (it == records.end()) {
    if (effect) {
      throw Error(Errc::InvalidTransition, "event " + std::to_string(event.sequence_no) +
                                               " moves unknown subject '" + event.subject + "'");
    }
    return;
  }
  LifecycleRecord& rec = it->second;
  if (effect) {
    if (rec.kind != effect->kind || !legal_step(rec.state, effect->to)) {
      throw Error(Errc::InvalidTransition,
                  "event " + std::to_string(event.sequence_no) + " (" + event.action +
                      ") cannot move '" + event.subject + "' from " + state_name(rec.state));
    }
    rec.state = effect->to;
  }
  rec.history.push_back(event.sequence_no);
}

std::map<EntityId, LifecycleRecord> replay(const std::vector<AuditEvent>& events) {
  std::map<EntityId, LifecycleRecord> records;
  std::uint64_t expected = 1;
  for (const auto& e : events) {
    if (e.sequence_no != expected) {
      throw Error(Errc::SequenceGap, "expected sequence " + std::to_string(expected) + ", found " +
                                         std::to_string(e.sequence_no));
    }
    ++expected;
    apply_event(records, e);
  }
  return records;
}

}  // namespace slicer
