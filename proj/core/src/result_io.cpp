#include "swarmsim/result_io.hpp"

#include <cstdio>

#include "json_text.hpp"
#include "swarmsim/rng.hpp"
#include "swarmsim/version.hpp"

namespace swarmsim {

using detail::get_field;
using detail::get_member;
using detail::Json;

namespace {
std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t parse_hex64(const std::string& s, const std::string& where) {
  if (s.size() != 16 || s.find_first_not_of("0123456789abcdef") != std::string::npos) {
    throw FormatError(where + ": expected 16 lowercase hex digits");
  }
  return std::stoull(s, nullptr, 16);
}

Address address_field(const Json& obj, const char* key, unsigned bits, const std::string& where) {
  const auto v = get_field<std::uint64_t>(obj, key, where);
  if (v >> bits != 0) throw FormatError(where + ": address out of range");
  return Address(v, bits);
}

Address address_at(const Json& arr, std::size_t i, unsigned bits, const std::string& where) {
  const Json& v = arr.at(i);
  if (!v.is_number_unsigned() || v.get<std::uint64_t>() >> bits != 0) {
    throw FormatError(where + ": invalid address");
  }
  return Address(v.get<std::uint64_t>(), bits);
}
}  // namespace

std::string result_to_string(const RunResult& r) {
  Json doc;
  doc["version"] = kResultFormatVersion;
  doc["tool"] = std::string(kToolName) + "/" + std::string(kToolVersion);
  doc["rng"] = std::string(Rng::kAlgorithm);

  Json config;
  config["overlay"] = {{"n", r.overlay.n}, {"bits", r.overlay.bits}, {"k", r.overlay.k}, {"seed", r.overlay.seed}};
  config["topology_digest"] = hex64(r.topology_digest);
  config["workload"] = {{"files", r.workload.files},
                        {"chunks_min", r.workload.chunks_min},
                        {"chunks_max", r.workload.chunks_max},
                        {"originator_fraction", r.workload.originator_fraction},
                        {"workload_seed", r.workload.workload_seed}};
  config["pricing"] = r.pricing.to_string();
  Json ledger_cfg;
  ledger_cfg["payment_threshold"] =
      r.ledger_settings.payment_threshold ? Json(*r.ledger_settings.payment_threshold) : Json(nullptr);
  ledger_cfg["amortization_rate"] = r.ledger_settings.amortization_rate;
  config["ledger"] = std::move(ledger_cfg);
  config["forwarded_includes_storer"] = true;
  doc["config"] = std::move(config);

  Json steps = Json::array();
  for (const StepRange& s : r.steps) steps.push_back({s.begin, s.end});
  doc["steps"] = std::move(steps);

  Json per_node = Json::array();
  for (std::size_t i = 0; i < r.per_node.size(); ++i) {
    const NodeCounters& c = r.per_node[i];
    per_node.push_back({{"address", r.nodes.at(i).value()},
                        {"forwarded", c.forwarded},
                        {"first_hop_forwarded", c.first_hop_forwarded},
                        {"income", c.income},
                        {"paid", c.paid},
                        {"originated_chunks", c.originated_chunks}});
  }
  doc["per_node"] = std::move(per_node);

  doc["totals"] = {{"steps", r.totals.steps},
                   {"chunks", r.totals.chunks},
                   {"hops", r.totals.hops},
                   {"zero_hop_downloads", r.totals.zero_hop_downloads},
                   {"payments", r.totals.payments},
                   {"frozen_transfers", r.totals.frozen_transfers}};

  Json balances = Json::array();
  for (const BalanceEntry& b : r.ledger.balances) balances.push_back({b.low.value(), b.high.value(), b.balance});
  Json cheques = Json::array();
  for (const ChequeSummary& c : r.ledger.cheques) {
    cheques.push_back({c.issuer.value(), c.beneficiary.value(), c.cumulative_amount, c.last_step, c.count});
  }
  doc["ledger"] = {{"balances_columns", {"low", "high", "balance"}},
                   {"balances", std::move(balances)},
                   {"cheques_columns", {"issuer", "beneficiary", "cumulative_amount", "last_step", "count"}},
                   {"cheques", std::move(cheques)}};
  return detail::canonical_dump(doc);
}

RunResult result_from_string(const std::string& text) {
  const Json doc = detail::parse_json(text, "result");
  const auto version = get_field<std::uint64_t>(doc, "version", "result");
  if (version != kResultFormatVersion) {
    throw FormatError("result: unsupported version " + std::to_string(version));
  }
  RunResult r;
  const Json& config = get_member(doc, "config", "result");
  const Json& ov = get_member(config, "overlay", "result.config");
  r.overlay.n = get_field<std::uint64_t>(ov, "n", "result.config.overlay");
  r.overlay.bits = get_field<unsigned>(ov, "bits", "result.config.overlay");
  r.overlay.k = get_field<unsigned>(ov, "k", "result.config.overlay");
  r.overlay.seed = get_field<std::uint64_t>(ov, "seed", "result.config.overlay");
  try {
    r.overlay.validate();
  } catch (const Error& e) {
    throw FormatError(std::string("result.config.overlay: ") + e.what());
  }
  const unsigned bits = r.overlay.bits;
  r.topology_digest = parse_hex64(get_field<std::string>(config, "topology_digest", "result.config"),
                                  "result.config.topology_digest");

  const Json& wl = get_member(config, "workload", "result.config");
  r.workload.files = get_field<std::uint64_t>(wl, "files", "result.config.workload");
  r.workload.chunks_min = get_field<std::uint64_t>(wl, "chunks_min", "result.config.workload");
  r.workload.chunks_max = get_field<std::uint64_t>(wl, "chunks_max", "result.config.workload");
  r.workload.originator_fraction = get_field<double>(wl, "originator_fraction", "result.config.workload");
  r.workload.workload_seed = get_field<std::uint64_t>(wl, "workload_seed", "result.config.workload");
  try {
    r.workload.validate();
    r.pricing = PricingMode::parse(get_field<std::string>(config, "pricing", "result.config"));
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("result.config: ") + e.what());
  }

  const Json& lc = get_member(config, "ledger", "result.config");
  const Json& threshold = get_member(lc, "payment_threshold", "result.config.ledger");
  if (!threshold.is_null()) r.ledger_settings.payment_threshold = get_field<std::uint64_t>(lc, "payment_threshold", "result.config.ledger");
  r.ledger_settings.amortization_rate = get_field<std::uint64_t>(lc, "amortization_rate", "result.config.ledger");

  const Json& steps = get_member(doc, "steps", "result");
  if (!steps.is_array()) throw FormatError("result.steps: expected an array");
  for (const Json& s : steps) {
    if (!s.is_array() || s.size() != 2 || !s[0].is_number_unsigned() || !s[1].is_number_unsigned()) {
      throw FormatError("result.steps: expected [begin, end] pairs");
    }
    r.steps.push_back({s[0].get<std::uint64_t>(), s[1].get<std::uint64_t>()});
  }

  const Json& per_node = get_member(doc, "per_node", "result");
  if (!per_node.is_array() || per_node.size() != r.overlay.n) {
    throw FormatError("result.per_node: expected one entry per node");
  }
  for (const Json& e : per_node) {
    const std::string where = "result.per_node";
    r.nodes.push_back(address_field(e, "address", bits, where));
    NodeCounters c;
    c.forwarded = get_field<std::uint64_t>(e, "forwarded", where);
    c.first_hop_forwarded = get_field<std::uint64_t>(e, "first_hop_forwarded", where);
    c.income = get_field<std::uint64_t>(e, "income", where);
    c.paid = get_field<std::uint64_t>(e, "paid", where);
    c.originated_chunks = get_field<std::uint64_t>(e, "originated_chunks", where);
    r.per_node.push_back(c);
  }
  for (std::size_t i = 1; i < r.nodes.size(); ++i) {
    if (!(r.nodes[i - 1] < r.nodes[i])) throw FormatError("result.per_node: addresses not strictly ascending");
  }

  const Json& t = get_member(doc, "totals", "result");
  r.totals.steps = get_field<std::uint64_t>(t, "steps", "result.totals");
  r.totals.chunks = get_field<std::uint64_t>(t, "chunks", "result.totals");
  r.totals.hops = get_field<std::uint64_t>(t, "hops", "result.totals");
  r.totals.zero_hop_downloads = get_field<std::uint64_t>(t, "zero_hop_downloads", "result.totals");
  r.totals.payments = get_field<std::uint64_t>(t, "payments", "result.totals");
  r.totals.frozen_transfers = get_field<std::uint64_t>(t, "frozen_transfers", "result.totals");

  const Json& ledger = get_member(doc, "ledger", "result");
  const Json& balances = get_member(ledger, "balances", "result.ledger");
  if (!balances.is_array()) throw FormatError("result.ledger.balances: expected an array");
  for (const Json& b : balances) {
    if (!b.is_array() || b.size() != 3 || !b[2].is_number_integer()) {
      throw FormatError("result.ledger.balances: expected [low, high, balance] rows");
    }
    r.ledger.balances.push_back({address_at(b, 0, bits, "result.ledger.balances"),
                                 address_at(b, 1, bits, "result.ledger.balances"), b[2].get<std::int64_t>()});
  }
  const Json& cheques = get_member(ledger, "cheques", "result.ledger");
  if (!cheques.is_array()) throw FormatError("result.ledger.cheques: expected an array");
  for (const Json& c : cheques) {
    if (!c.is_array() || c.size() != 5 || !c[2].is_number_unsigned() || !c[3].is_number_unsigned() ||
        !c[4].is_number_unsigned()) {
      throw FormatError("result.ledger.cheques: expected [issuer, beneficiary, cumulative, last_step, count] rows");
    }
    r.ledger.cheques.push_back({address_at(c, 0, bits, "result.ledger.cheques"),
                                address_at(c, 1, bits, "result.ledger.cheques"), c[2].get<std::uint64_t>(),
                                c[3].get<std::uint64_t>(), c[4].get<std::uint64_t>()});
  }
  return r;
}

void save_result(const RunResult& result, const std::filesystem::path& path) {
  detail::write_file(path, result_to_string(result));
}

RunResult load_result(const std::filesystem::path& path) {
  return result_from_string(detail::read_file(path));
}

}  // namespace swarmsim
