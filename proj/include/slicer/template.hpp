#pragma once

// VF template documents: parsing, onboarding rules, resource footprint.
//
// Documents are JSON with top-level keys "name", "parameters", "resources"
// and "environment"; docs/template.schema.json is the reference.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "slicer/model.hpp"

namespace slicer {

enum class ResourceKind { compute, network, subnet, port, other };

// External names, bit-exact.
inline constexpr std::string_view kNovaServer = "OS::Nova::Server";
inline constexpr std::string_view kNeutronNet = "OS::Neutron::Net";
inline constexpr std::string_view kNeutronSubnet = "OS::Neutron::Subnet";
inline constexpr std::string_view kNeutronPort = "OS::Neutron::Port";
inline constexpr std::string_view kFloatingIp = "OS::Neutron::FloatingIP";
inline constexpr std::string_view kFloatingIpAssociation = "OS::Neutron::FloatingIPAssociation";

struct ResourceType {
  ResourceKind kind = ResourceKind::other;
  std::string other_name;  // set only for ResourceKind::other

  static ResourceType from_external(std::string_view name);
  std::string external_name() const;

  friend bool operator==(const ResourceType&, const ResourceType&) = default;
};

struct TemplateParameter {
  std::string type;
  std::optional<nlohmann::ordered_json> default_value;

  friend bool operator==(const TemplateParameter&, const TemplateParameter&) = default;
};

struct ResourceDescriptor {
  ResourceType type;
  nlohmann::ordered_json properties = nlohmann::ordered_json::object();
  std::map<std::string, std::string> metadata;  // compute only

  friend bool operator==(const ResourceDescriptor&, const ResourceDescriptor&) = default;
};

struct EnvironmentDocument {
  std::vector<std::pair<std::string, std::string>> entries;  // in document order

  friend bool operator==(const EnvironmentDocument&, const EnvironmentDocument&) = default;
};

struct TemplateDocument {
  std::string name;
  std::map<std::string, TemplateParameter> parameters;
  std::vector<std::pair<std::string, ResourceDescriptor>> resources;  // in document order
  EnvironmentDocument environment;

  const ResourceDescriptor* find_resource(std::string_view name) const;
  std::size_t count(ResourceKind kind) const;

  friend bool operator==(const TemplateDocument&, const TemplateDocument&) = default;
};

enum class RuleId { compute_metadata, forbidden_kind, naming, environment_size };

// Stable identifiers used in reports: "a-compute-metadata", "b-forbidden-kind",
// "c-naming", "env-size".
std::string_view to_string(RuleId rule);

enum class Severity { error, warning };

struct Finding {
  RuleId rule;
  Severity severity = Severity::error;
  std::string location;
  std::string message;

  friend bool operator==(const Finding&, const Finding&) = default;
};

enum class Verdict { accepted, rejected };

struct ValidationReport {
  Verdict verdict = Verdict::accepted;
  std::vector<Finding> findings;

  bool accepted() const { return verdict == Verdict::accepted; }
  void add(Finding f);
  void merge(const ValidationReport& other);
  std::size_t error_count() const;
};

inline constexpr std::size_t kDefaultEnvCharLimit = 2000;
inline constexpr std::size_t kUpgradedEnvCharLimit = 20000;

struct RuleSet {
  std::size_t env_char_limit = kDefaultEnvCharLimit;
  bool count_names = false;
  std::set<std::string> forbidden_kinds{std::string(kFloatingIp),
                                        std::string(kFloatingIpAssociation)};
  std::set<std::string> required_compute_metadata{"vnf_name", "vnf_id", "vf_module_id"};
  std::string naming_pattern = "[a-z0-9_]{1,63}";

  void validate() const;
};

TemplateDocument parse_template(std::string_view text);

ValidationReport validate_template(const TemplateDocument& doc, const RuleSet& rules = {});

// Number of Unicode code points in a UTF-8 string.
std::size_t utf8_length(std::string_view s);

// Characters the environment occupies once concatenated into a single field:
// every value wrapped in a pair of quotes, names likewise when count_names.
std::size_t environment_char_count(const EnvironmentDocument& env, bool count_names = false);

ValidationReport validate_environment(const EnvironmentDocument& env, const RuleSet& rules = {});

// Template and environment rules together.
ValidationReport lint(const TemplateDocument& doc, const RuleSet& rules = {});

ResourceDemand resource_footprint(const TemplateDocument& doc);

// One component per compute resource, carrying its sizing and the ports it
// attaches.
std::vector<FunctionComponent> function_components(const TemplateDocument& doc);

}  // namespace slicer
