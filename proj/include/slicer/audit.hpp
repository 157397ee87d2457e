#pragma once

// Roles, lifecycle states, audit events and replay of an audit stream into
// lifecycle records.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "slicer/model.hpp"

namespace slicer {

enum class Role { superuser, designer, tester, governor, operator_ };

std::string_view to_string(Role role);
Role parse_role(std::string_view text);

enum class VfState { draft, certified };
enum class ServiceState { designed, tested, approved, distributed, instantiated, terminated };
enum class SliceState { drafted, ready, partially_instantiated, active, terminated };

std::string_view to_string(VfState s);
std::string_view to_string(ServiceState s);
std::string_view to_string(SliceState s);

enum class RecordKind { vf, service, slice };
std::string_view to_string(RecordKind k);

using LifecycleState = std::variant<VfState, ServiceState, SliceState>;
std::string state_name(const LifecycleState& s);

// Declared transition graphs.
bool is_legal(VfState from, VfState to);
bool is_legal(ServiceState from, ServiceState to);
bool is_legal(SliceState from, SliceState to);

enum class Outcome { ok, denied, failed };
std::string_view to_string(Outcome o);

// Canonical action names carried by audit events.
namespace action {
inline constexpr std::string_view register_customer = "register_customer";
inline constexpr std::string_view register_provider = "register_provider";
inline constexpr std::string_view register_vsp = "register_vsp";
inline constexpr std::string_view onboard_vf = "onboard_vf";
inline constexpr std::string_view certify_vf = "certify_vf";
inline constexpr std::string_view create_service = "create_service";
inline constexpr std::string_view test_service = "test_service";
inline constexpr std::string_view approve_service = "approve_service";
inline constexpr std::string_view distribute_service = "distribute_service";
inline constexpr std::string_view instantiate_service = "instantiate_service";
inline constexpr std::string_view terminate_service = "terminate_service";
inline constexpr std::string_view create_slice = "create_slice";
inline constexpr std::string_view slice_ready = "slice_ready";
inline constexpr std::string_view instantiate_slice = "instantiate_slice";
inline constexpr std::string_view instantiate_slice_partial = "instantiate_slice_partial";
inline constexpr std::string_view teardown_slice = "teardown_slice";
}  // namespace action

struct AuditEvent {
  std::uint64_t sequence_no = 0;
  Role actor = Role::superuser;
  std::string actor_id;
  std::string action;
  EntityId subject;
  std::int64_t timestamp = 0;  // monotonic clock, ns
  Outcome outcome = Outcome::ok;
  std::string detail;

  friend bool operator==(const AuditEvent&, const AuditEvent&) = default;
};

struct LifecycleRecord {
  EntityId subject;
  RecordKind kind = RecordKind::vf;
  LifecycleState state = VfState::draft;
  std::vector<std::uint64_t> history;  // sequence numbers

  friend bool operator==(const LifecycleRecord&, const LifecycleRecord&) = default;
};

// Applies one event to a record set. Only ok events change state; every event
// whose subject has a record is appended to that record's history. Throws
// InvalidTransition when an ok event does not fit the transition graphs.
void apply_event(std::map<EntityId, LifecycleRecord>& records, const AuditEvent& event);

// Folds a whole stream from an empty catalog. Throws SequenceGap when the
// sequence numbers are not 1, 2, 3, ...
std::map<EntityId, LifecycleRecord> replay(const std::vector<AuditEvent>& events);

}  // namespace slicer
