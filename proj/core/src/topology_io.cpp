#include "swarmsim/topology_io.hpp"

#include "json_text.hpp"
#include "swarmsim/rng.hpp"
#include "swarmsim/version.hpp"

namespace swarmsim {

using detail::Json;

std::string topology_to_string(const Overlay& overlay) {
  const OverlayParams& p = overlay.params();
  Json doc;
  doc["version"] = kTopologyFormatVersion;
  doc["tool"] = std::string(kToolName) + "/" + std::string(kToolVersion);
  doc["rng"] = std::string(Rng::kAlgorithm);
  doc["params"] = {{"n", p.n}, {"bits", p.bits}, {"k", p.k}, {"seed", p.seed}};
  Json nodes = Json::array();
  for (Address a : overlay.nodes()) nodes.push_back(a.value());
  doc["nodes"] = std::move(nodes);
  Json tables = Json::array();
  for (const RoutingTable& t : overlay.tables()) {
    Json buckets = Json::array();
    for (const auto& bucket : t.buckets) {
      Json entries = Json::array();
      for (Address e : bucket) entries.push_back(e.value());
      buckets.push_back(std::move(entries));
    }
    tables.push_back({{"owner", t.owner.value()}, {"buckets", std::move(buckets)}});
  }
  doc["tables"] = std::move(tables);
  return detail::canonical_dump(doc);
}

namespace {
std::uint64_t as_u64(const Json& v, const std::string& where) {
  if (!v.is_number_unsigned()) throw FormatError(where + ": expected a non-negative integer");
  return v.get<std::uint64_t>();
}

Address as_address(const Json& v, unsigned bits, const std::string& where) {
  const std::uint64_t value = as_u64(v, where);
  if (value >> bits != 0) throw FormatError(where + ": address " + std::to_string(value) + " out of range");
  return Address(value, bits);
}
}  // namespace

Overlay topology_from_string(const std::string& text) {
  const std::string where = "topology";
  const Json doc = detail::parse_json(text, where);
  const auto version = detail::get_field<std::uint64_t>(doc, "version", where);
  if (version != kTopologyFormatVersion) {
    throw FormatError("topology: unsupported version " + std::to_string(version) + " (expected " +
                      std::to_string(kTopologyFormatVersion) + ")");
  }
  const Json& jp = detail::get_member(doc, "params", where);
  OverlayParams params;
  params.n = detail::get_field<std::uint64_t>(jp, "n", "topology.params");
  params.bits = detail::get_field<unsigned>(jp, "bits", "topology.params");
  params.k = detail::get_field<unsigned>(jp, "k", "topology.params");
  params.seed = detail::get_field<std::uint64_t>(jp, "seed", "topology.params");
  if (params.bits < 2 || params.bits > 32) throw FormatError("topology.params: bits out of range");

  const Json& jnodes = detail::get_member(doc, "nodes", where);
  if (!jnodes.is_array()) throw FormatError("topology.nodes: expected an array");
  std::vector<Address> nodes;
  nodes.reserve(jnodes.size());
  for (const Json& v : jnodes) nodes.push_back(as_address(v, params.bits, "topology.nodes"));

  const Json& jtables = detail::get_member(doc, "tables", where);
  if (!jtables.is_array()) throw FormatError("topology.tables: expected an array");
  std::vector<RoutingTable> tables;
  tables.reserve(jtables.size());
  for (const Json& jt : jtables) {
    RoutingTable t;
    t.owner = as_address(detail::get_member(jt, "owner", "topology.tables"), params.bits, "topology.tables.owner");
    const Json& jb = detail::get_member(jt, "buckets", "topology.tables");
    if (!jb.is_array()) throw FormatError("topology.tables.buckets: expected an array");
    for (const Json& bucket : jb) {
      if (!bucket.is_array()) throw FormatError("topology.tables.buckets: expected arrays of addresses");
      auto& out = t.buckets.emplace_back();
      for (const Json& e : bucket) out.push_back(as_address(e, params.bits, "topology.tables.buckets"));
    }
    tables.push_back(std::move(t));
  }
  return Overlay(params, std::move(nodes), std::move(tables));
}

void save_topology(const Overlay& overlay, const std::filesystem::path& path) {
  detail::write_file(path, topology_to_string(overlay));
}

Overlay load_topology(const std::filesystem::path& path) {
  return topology_from_string(detail::read_file(path));
}

std::uint64_t topology_digest(const Overlay& overlay) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t word) {
    for (int i = 0; i < 8; ++i) {
      h ^= (word >> (8 * i)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  const OverlayParams& p = overlay.params();
  mix(p.n);
  mix(p.bits);
  mix(p.k);
  mix(p.seed);
  for (const RoutingTable& t : overlay.tables()) {
    mix(t.owner.value());
    for (const auto& bucket : t.buckets) {
      mix(bucket.size());
      for (Address e : bucket) mix(e.value());
    }
  }
  return h;
}

}  // namespace swarmsim
