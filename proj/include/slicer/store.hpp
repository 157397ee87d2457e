#pragma once

// File-backed persistence. A catalog directory holds three files:
//
//   catalog.json    design-time catalog (see docs/schema.md)
//   inventory.json  infrastructure: hosts, tenants, links, live allocations
//   audit.log       one JSON audit event per line, append-only
//
// Whole-file saves go through a temporary file and an atomic rename, so an
// interrupted save leaves the previous file intact.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "slicer/audit.hpp"
#include "slicer/catalog.hpp"
#include "slicer/infra.hpp"
#include "slicer/placement.hpp"
#include "slicer/template.hpp"

namespace slicer {

namespace fs = std::filesystem;

inline constexpr const char* kCatalogFile = "catalog.json";
inline constexpr const char* kInventoryFile = "inventory.json";
inline constexpr const char* kAuditFile = "audit.log";
inline constexpr int kInventorySchemaVersion = 1;

nlohmann::json to_json_document(const Catalog& catalog);
Catalog catalog_from_json(const nlohmann::json& doc);

nlohmann::json to_json_document(const Infrastructure& infra);
Infrastructure inventory_from_json(const nlohmann::json& doc);

nlohmann::json to_json_document(const PlacementPlan& plan);
PlacementPlan plan_from_json(const nlohmann::json& doc);

nlohmann::json to_json_document(const SliceTemplate& t);
SliceTemplate slice_template_from_json(const nlohmann::json& doc);

nlohmann::json to_json_document(const ServiceProfile& p);
ServiceProfile profile_from_json(const nlohmann::json& doc);

nlohmann::json to_json_document(const ValidationReport& report);
nlohmann::json to_json_document(const PlanVerdict& verdict);
nlohmann::json to_json_document(const LifecycleRecord& record);

// Single line, fixed field order:
// seq, actor, actor_id, action, subject, ts, outcome, detail.
std::string to_line(const AuditEvent& event);
AuditEvent event_from_line(const std::string& line);

struct SaveOptions {
  // Test hook: write only this many bytes of the new content, then fail as
  // if the process died before the rename.
  std::optional<std::size_t> crash_after_bytes;
};

void write_file_atomic(const fs::path& path, const std::string& content,
                       const SaveOptions& options = {});
std::string read_file(const fs::path& path);

void save_catalog(const Catalog& catalog, const fs::path& path, const SaveOptions& options = {});
Catalog load_catalog(const fs::path& path);

void save_inventory(const Infrastructure& infra, const fs::path& path,
                    const SaveOptions& options = {});
Infrastructure load_inventory(const fs::path& path);

void save_plan(const PlacementPlan& plan, const fs::path& path);
PlacementPlan load_plan(const fs::path& path);

class AuditLog {
 public:
  // In-memory log.
  AuditLog() = default;
  // File-backed log; existing events are loaded and checked for gaps.
  static AuditLog open(const fs::path& path);

  // Durable (flushed and synced) before returning when file-backed.
  void append(const AuditEvent& event);

  const std::vector<AuditEvent>& events() const { return events_; }
  std::uint64_t last_sequence() const { return events_.empty() ? 0 : events_.back().sequence_no; }
  const std::optional<fs::path>& path() const { return path_; }

 private:
  std::optional<fs::path> path_;
  std::vector<AuditEvent> events_;
};

void append_event(AuditLog& log, const AuditEvent& event);

}  // namespace slicer
