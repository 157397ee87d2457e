#include "slicer/catalog.hpp"

#include <openssl/evp.h>

#include <array>
#include <set>
#include <tuple>

namespace slicer {

std::string content_hash(std::string_view text) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw Error(Errc::IoFailure, "SHA-256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0x0F]);
  }
  return out;
}

const LifecycleRecord& Catalog::record(const EntityId& id) const {
  auto it = records.find(id);
  if (it == records.end()) throw Error(Errc::NotFound, "no lifecycle record for '" + id + "'");
  return it->second;
}

namespace {

template <class Map>
void check_keys(const Map& m, const char* what) {
  for (const auto& [k, v] : m) {
    if (k != v.id) {
      throw Error(Errc::InvalidArgument, std::string(what) + " keyed '" + k + "' has id '" + v.id + "'");
    }
  }
}

void require(bool ok, const std::string& message) {
  if (!ok) throw Error(Errc::InvalidArgument, message);
}

}  // namespace

void Catalog::validate() const {
  if (version != kCatalogSchemaVersion) {
    throw Error(Errc::SchemaMismatch, "catalog version " + std::to_string(version));
  }
  check_keys(customers, "customer");
  check_keys(providers, "provider");
  check_keys(vsps, "vendor software product");
  check_keys(functions, "function");
  check_keys(services, "service");
  check_keys(slices, "slice");

  for (const auto& [_, c] : customers) c.validate();
  for (const auto& [_, p] : providers) p.validate();

  std::set<std::tuple<std::string, std::string, SemVer>> products;
  for (const auto& [id, v] : vsps) {
    v.validate();
    require(products.emplace(v.vendor_name, v.product_name, v.version).second,
            "duplicate vendor product " + v.vendor_name + "/" + v.product_name + " " +
                to_string(v.version));
    for (const auto& f : v.owned_resources) {
      require(functions.contains(f), "vsp '" + id + "' owns unknown function '" + f + "'");
    }
  }

  for (const auto& [hash, text] : template_blobs) {
    require(content_hash(text) == hash, "template blob " + hash + " does not match its content");
  }
  for (const auto& [id, f] : functions) {
    f.validate();
    if (f.template_ref) {
      require(template_blobs.contains(*f.template_ref),
              "function '" + id + "' references missing template blob");
    }
  }
  for (const auto& [id, s] : services) {
    s.validate();
    for (const auto& f : s.functions) {
      require(functions.contains(f), "service '" + id + "' uses unknown function '" + f + "'");
    }
  }
  for (const auto& [id, sl] : slices) {
    sl.validate();
    require(customers.contains(sl.customer), "slice '" + id + "' has unknown customer");
    require(providers.contains(sl.provider), "slice '" + id + "' has unknown provider");
    for (const auto& s : sl.services) {
      require(services.contains(s), "slice '" + id + "' uses unknown service '" + s + "'");
    }
  }
  for (const auto& [id, t] : slice_templates) {
    auto sl = slices.find(id);
    require(sl != slices.end(), "template for unknown slice '" + id + "'");
    t.validate(sl->second);
  }

  for (const auto& [id, r] : records) {
    require(r.subject == id, "record keyed '" + id + "' describes '" + r.subject + "'");
    switch (r.kind) {
      case RecordKind::vf:
        require(functions.contains(id) && std::holds_alternative<VfState>(r.state),
                "bad vf record '" + id + "'");
        break;
      case RecordKind::service:
        require(services.contains(id) && std::holds_alternative<ServiceState>(r.state),
                "bad service record '" + id + "'");
        break;
      case RecordKind::slice:
        require(slices.contains(id) && std::holds_alternative<SliceState>(r.state),
                "bad slice record '" + id + "'");
        break;
    }
  }
  for (const auto& [id, d] : deployments) {
    require(services.contains(id), "deployment of unknown service '" + id + "'");
  }
  for (const auto& [id, p] : slice_plans) {
    require(slices.contains(id), "plan of unknown slice '" + id + "'");
  }
}

}  // namespace slicer
