#include "slicer/template.hpp"

#include <algorithm>
#include <regex>

namespace slicer {

using ojson = nlohmann::ordered_json;

ResourceType ResourceType::from_external(std::string_view name) {
  if (name == kNovaServer) return {ResourceKind::compute, {}};
  if (name == kNeutronNet) return {ResourceKind::network, {}};
  if (name == kNeutronSubnet) return {ResourceKind::subnet, {}};
  if (name == kNeutronPort) return {ResourceKind::port, {}};
  return {ResourceKind::other, std::string(name)};
}

std::string ResourceType::external_name() const {
  switch (kind) {
    case ResourceKind::compute: return std::string(kNovaServer);
    case ResourceKind::network: return std::string(kNeutronNet);
    case ResourceKind::subnet: return std::string(kNeutronSubnet);
    case ResourceKind::port: return std::string(kNeutronPort);
    case ResourceKind::other: return other_name;
  }
  return other_name;
}

const ResourceDescriptor* TemplateDocument::find_resource(std::string_view name) const {
  for (const auto& [n, r] : resources) {
    if (n == name) return &r;
  }
  return nullptr;
}

std::size_t TemplateDocument::count(ResourceKind kind) const {
  return static_cast<std::size_t>(std::count_if(
      resources.begin(), resources.end(), [kind](const auto& r) { return r.second.type.kind == kind; }));
}

std::string_view to_string(RuleId rule) {
  switch (rule) {
    case RuleId::compute_metadata: return "a-compute-metadata";
    case RuleId::forbidden_kind: return "b-forbidden-kind";
    case RuleId::naming: return "c-naming";
    case RuleId::environment_size: return "env-size";
  }
  return "unknown";
}

void ValidationReport::add(Finding f) {
  if (f.severity == Severity::error) verdict = Verdict::rejected;
  findings.push_back(std::move(f));
}

void ValidationReport::merge(const ValidationReport& other) {
  for (const auto& f : other.findings) add(f);
}

std::size_t ValidationReport::error_count() const {
  return static_cast<std::size_t>(std::count_if(findings.begin(), findings.end(), [](const Finding& f) {
    return f.severity == Severity::error;
  }));
}

void RuleSet::validate() const {
  if (env_char_limit == 0) throw Error(Errc::InvalidArgument, "env_char_limit must be positive");
  try {
    std::regex re(naming_pattern);
  } catch (const std::regex_error& e) {
    throw Error(Errc::InvalidArgument, "bad naming pattern '" + naming_pattern + "': " + e.what());
  }
}

namespace {

std::string scalar_text(const ojson& v) {
  return v.is_string() ? v.get<std::string>() : v.dump();
}

// The single-key intrinsic {"get_xxx": arg}, if `node` is one.
const ojson* intrinsic(const ojson& node, std::string_view fn) {
  if (!node.is_object() || node.size() != 1) return nullptr;
  auto it = node.find(std::string(fn));
  return it == node.end() ? nullptr : &*it;
}

std::optional<std::string> reference_target(const ojson& arg) {
  if (arg.is_string()) return arg.get<std::string>();
  if (arg.is_array() && !arg.empty() && arg.front().is_string()) {
    return arg.front().get<std::string>();
  }
  return std::nullopt;
}

void check_references(const ojson& node, const TemplateDocument& doc, const std::string& where) {
  if (const ojson* arg = intrinsic(node, "get_param")) {
    auto target = reference_target(*arg);
    if (!target || !doc.parameters.contains(*target)) {
      throw Error(Errc::DanglingReference,
                  where + " references undeclared parameter " + arg->dump());
    }
    return;
  }
  for (std::string_view fn : {"get_resource", "get_attr"}) {
    if (const ojson* arg = intrinsic(node, fn)) {
      auto target = reference_target(*arg);
      if (!target || doc.find_resource(*target) == nullptr) {
        throw Error(Errc::DanglingReference,
                    where + " references undeclared resource " + arg->dump());
      }
      return;
    }
  }
  if (node.is_object()) {
    for (const auto& [k, v] : node.items()) check_references(v, doc, where + "." + k);
  } else if (node.is_array()) {
    for (std::size_t i = 0; i < node.size(); ++i) {
      check_references(node[i], doc, where + "[" + std::to_string(i) + "]");
    }
  }
}

// Kind of the resource a {"get_resource": name} node points at.
std::optional<ResourceKind> referenced_kind(const ojson* node, const TemplateDocument& doc) {
  if (node == nullptr) return std::nullopt;
  const ojson* arg = intrinsic(*node, "get_resource");
  if (arg == nullptr || !arg->is_string()) return std::nullopt;
  const ResourceDescriptor* r = doc.find_resource(arg->get<std::string>());
  if (r == nullptr) return std::nullopt;
  return r->type.kind;
}

const ojson* property(const ResourceDescriptor& r, const char* key) {
  auto it = r.properties.find(key);
  return it == r.properties.end() ? nullptr : &*it;
}

void check_topology(const std::string& name, const ResourceDescriptor& r,
                    const TemplateDocument& doc) {
  if (r.type.kind == ResourceKind::subnet) {
    if (referenced_kind(property(r, "network"), doc) != ResourceKind::network) {
      throw Error(Errc::DanglingReference,
                  "subnet '" + name + "' does not reference a network resource");
    }
  } else if (r.type.kind == ResourceKind::port) {
    if (referenced_kind(property(r, "network"), doc) == ResourceKind::network) return;
    if (const ojson* ips = property(r, "fixed_ips"); ips != nullptr && ips->is_array()) {
      for (const auto& ip : *ips) {
        if (!ip.is_object()) continue;
        auto it = ip.find("subnet");
        if (it != ip.end() && referenced_kind(&*it, doc) == ResourceKind::subnet) return;
      }
    }
    throw Error(Errc::DanglingReference,
                "port '" + name + "' references neither a network nor a subnet resource");
  }
}

const ojson& require_object(const ojson& node, const std::string& where) {
  if (!node.is_object()) throw Error(Errc::SyntaxError, where + " must be an object");
  return node;
}

}  // namespace

TemplateDocument parse_template(std::string_view text) {
  ojson root;
  try {
    root = ojson::parse(text);
  } catch (const ojson::parse_error& e) {
    throw Error(Errc::SyntaxError, e.what());
  }
  require_object(root, "template");

  TemplateDocument doc;
  auto name = root.find("name");
  if (name == root.end() || !name->is_string() || name->get<std::string>().empty()) {
    throw Error(Errc::SyntaxError, "template needs a non-empty string 'name'");
  }
  doc.name = name->get<std::string>();

  for (const auto& [key, _] : root.items()) {
    if (key != "name" && key != "parameters" && key != "resources" && key != "environment" &&
        key != "description") {
      throw Error(Errc::SyntaxError, "unknown top-level key '" + key + "'");
    }
  }

  if (auto it = root.find("parameters"); it != root.end()) {
    for (const auto& [pname, pdef] : require_object(*it, "parameters").items()) {
      require_object(pdef, "parameter '" + pname + "'");
      auto type = pdef.find("type");
      if (type == pdef.end() || !type->is_string()) {
        throw Error(Errc::SyntaxError, "parameter '" + pname + "' needs a string 'type'");
      }
      TemplateParameter p{type->get<std::string>(), std::nullopt};
      if (auto d = pdef.find("default"); d != pdef.end()) p.default_value = *d;
      doc.parameters.emplace(pname, std::move(p));
    }
  }

  if (auto it = root.find("resources"); it != root.end()) {
    for (const auto& [rname, rdef] : require_object(*it, "resources").items()) {
      require_object(rdef, "resource '" + rname + "'");
      auto type = rdef.find("type");
      if (type == rdef.end() || !type->is_string()) {
        throw Error(Errc::SyntaxError, "resource '" + rname + "' needs a string 'type'");
      }
      ResourceDescriptor r;
      r.type = ResourceType::from_external(type->get<std::string>());
      if (auto props = rdef.find("properties"); props != rdef.end()) {
        r.properties = require_object(*props, "properties of '" + rname + "'");
      }
      if (r.type.kind == ResourceKind::compute) {
        if (auto md = r.properties.find("metadata"); md != r.properties.end()) {
          for (const auto& [k, v] : require_object(*md, "metadata of '" + rname + "'").items()) {
            r.metadata.emplace(k, scalar_text(v));
          }
        }
      }
      doc.resources.emplace_back(rname, std::move(r));
    }
  }

  if (auto it = root.find("environment"); it != root.end()) {
    for (const auto& [k, v] : require_object(*it, "environment").items()) {
      if (v.is_object() || v.is_array()) {
        throw Error(Errc::SyntaxError, "environment entry '" + k + "' must be a scalar");
      }
      doc.environment.entries.emplace_back(k, scalar_text(v));
    }
  }

  for (const auto& [rname, r] : doc.resources) {
    check_references(r.properties, doc, "resources." + rname + ".properties");
    check_topology(rname, r, doc);
  }
  return doc;
}

ValidationReport validate_template(const TemplateDocument& doc, const RuleSet& rules) {
  rules.validate();
  const std::regex naming(rules.naming_pattern);
  ValidationReport report;
  for (const auto& [rname, r] : doc.resources) {
    const std::string where = "resources." + rname;
    if (r.type.kind == ResourceKind::compute) {
      for (const auto& key : rules.required_compute_metadata) {
        if (!r.metadata.contains(key)) {
          report.add({RuleId::compute_metadata, Severity::error, where + ".metadata." + key,
                      "compute resource '" + rname + "' lacks mandatory metadata '" + key + "'"});
        }
      }
    }
    const std::string external = r.type.external_name();
    if (rules.forbidden_kinds.contains(external)) {
      report.add({RuleId::forbidden_kind, Severity::error, where + ".type",
                  "resource '" + rname + "' uses forbidden type " + external});
    }
    if (!std::regex_match(rname, naming)) {
      report.add({RuleId::naming, Severity::error, where,
                  "resource name '" + rname + "' does not match " + rules.naming_pattern});
    }
  }
  return report;
}

std::size_t utf8_length(std::string_view s) {
  return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](char c) {
    return (static_cast<unsigned char>(c) & 0xC0U) != 0x80U;
  }));
}

std::size_t environment_char_count(const EnvironmentDocument& env, bool count_names) {
  std::size_t total = 0;
  for (const auto& [name, value] : env.entries) {
    total += utf8_length(value) + 2;
    if (count_names) total += utf8_length(name) + 2;
  }
  return total;
}

ValidationReport validate_environment(const EnvironmentDocument& env, const RuleSet& rules) {
  rules.validate();
  ValidationReport report;
  const std::size_t count = environment_char_count(env, rules.count_names);
  if (count > rules.env_char_limit) {
    report.add({RuleId::environment_size, Severity::error, "environment",
                "environment occupies " + std::to_string(count) +
                    " characters, above the limit of " + std::to_string(rules.env_char_limit)});
  }
  return report;
}

ValidationReport lint(const TemplateDocument& doc, const RuleSet& rules) {
  ValidationReport report = validate_template(doc, rules);
  report.merge(validate_environment(doc.environment, rules));
  return report;
}

namespace {

std::optional<std::int64_t> sizing_value(const ResourceDescriptor& r, const char* key,
                                         const TemplateDocument& doc) {
  const ojson* v = property(r, key);
  if (v == nullptr) return std::nullopt;
  if (const ojson* arg = intrinsic(*v, "get_param"); arg != nullptr && arg->is_string()) {
    auto p = doc.parameters.find(arg->get<std::string>());
    if (p == doc.parameters.end() || !p->second.default_value) return std::nullopt;
    v = &*p->second.default_value;
  }
  if (!v->is_number_integer() || v->get<std::int64_t>() < 0) return std::nullopt;
  return v->get<std::int64_t>();
}

ResourceDemand compute_sizing(const std::string& rname, const ResourceDescriptor& r,
                              const TemplateDocument& doc) {
  ResourceDemand d;
  const std::pair<const char*, std::int64_t*> fields[] = {
      {"vcpus", &d.vcpu}, {"ram", &d.ram}, {"disk", &d.storage}};
  for (const auto& [key, slot] : fields) {
    auto v = sizing_value(r, key, doc);
    if (!v) {
      throw Error(Errc::MissingSizing,
                  "compute resource '" + rname + "' has no usable '" + key + "' property");
    }
    *slot = *v;
  }
  return d;
}

}  // namespace

ResourceDemand resource_footprint(const TemplateDocument& doc) {
  ResourceDemand total;
  for (const auto& [rname, r] : doc.resources) {
    if (r.type.kind == ResourceKind::compute) {
      total += compute_sizing(rname, r, doc);
    } else if (r.type.kind == ResourceKind::port) {
      total.ports += 1;
    }
  }
  return total;
}

std::vector<FunctionComponent> function_components(const TemplateDocument& doc) {
  std::vector<FunctionComponent> out;
  for (const auto& [rname, r] : doc.resources) {
    if (r.type.kind != ResourceKind::compute) continue;
    FunctionComponent c{rname, compute_sizing(rname, r, doc), {}};
    if (const ojson* nets = property(r, "networks"); nets != nullptr && nets->is_array()) {
      for (const auto& n : *nets) {
        if (!n.is_object()) continue;
        auto port = n.find("port");
        if (port == n.end()) continue;
        if (const ojson* arg = intrinsic(*port, "get_resource"); arg && arg->is_string()) {
          c.ports.push_back(arg->get<std::string>());
        }
      }
    }
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace slicer
