#include "swarmsim/harness.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>

#include "json_text.hpp"
#include "swarmsim/report_io.hpp"
#include "swarmsim/result_io.hpp"
#include "swarmsim/topology_io.hpp"
#include "swarmsim/version.hpp"

namespace swarmsim::harness {

using detail::get_field;
using detail::get_member;
using detail::Json;

void ExperimentConfig::validate() const {
  if (overlay.has_value() == topology_path.has_value()) {
    throw InvalidArgument("exactly one of overlay params or a topology file must be given");
  }
  if (overlay) overlay->validate();
  workload.validate();
  if (shard && (shard->begin > shard->end || shard->end > workload.files)) {
    throw InvalidArgument("shard " + std::to_string(shard->begin) + ":" + std::to_string(shard->end) +
                          " is outside 0:" + std::to_string(workload.files));
  }
}

StepRange parse_shard(const std::string& text) {
  const auto colon = text.find(':');
  auto parse = [&](std::string_view part, std::uint64_t& out) {
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), out);
    return !part.empty() && ec == std::errc{} && ptr == part.data() + part.size();
  };
  StepRange r;
  if (colon == std::string::npos || !parse(std::string_view(text).substr(0, colon), r.begin) ||
      !parse(std::string_view(text).substr(colon + 1), r.end) || r.begin > r.end) {
    throw InvalidArgument("shard must look like <start>:<end> with start <= end, got '" + text + "'");
  }
  return r;
}

namespace {
void reject_unknown(const Json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  const std::set<std::string> known(allowed.begin(), allowed.end());
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!known.count(it.key())) throw FormatError(where + ": unknown field '" + it.key() + "'");
  }
}

template <typename T>
void maybe(const Json& obj, const char* key, T& target, const std::string& where) {
  if (obj.contains(key)) target = get_field<T>(obj, key, where);
}
}  // namespace

ExperimentConfig config_from_string(const std::string& text) {
  const Json doc = detail::parse_json(text, "config");
  if (!doc.is_object()) throw FormatError("config: expected an object");
  reject_unknown(doc, {"overlay", "topology", "workload", "pricing", "ledger", "f1_variant", "out", "shard"},
                 "config");
  ExperimentConfig cfg;
  if (doc.contains("overlay")) {
    const Json& o = doc["overlay"];
    if (!o.is_object()) throw FormatError("config.overlay: expected an object");
    reject_unknown(o, {"n", "bits", "k", "seed"}, "config.overlay");
    OverlayParams p;
    maybe(o, "n", p.n, "config.overlay");
    maybe(o, "bits", p.bits, "config.overlay");
    maybe(o, "k", p.k, "config.overlay");
    maybe(o, "seed", p.seed, "config.overlay");
    cfg.overlay = p;
  }
  if (doc.contains("topology")) cfg.topology_path = get_field<std::string>(doc, "topology", "config");
  if (doc.contains("workload")) {
    const Json& w = doc["workload"];
    if (!w.is_object()) throw FormatError("config.workload: expected an object");
    reject_unknown(w, {"files", "chunks_min", "chunks_max", "originator_fraction", "workload_seed"},
                   "config.workload");
    maybe(w, "files", cfg.workload.files, "config.workload");
    maybe(w, "chunks_min", cfg.workload.chunks_min, "config.workload");
    maybe(w, "chunks_max", cfg.workload.chunks_max, "config.workload");
    maybe(w, "originator_fraction", cfg.workload.originator_fraction, "config.workload");
    maybe(w, "workload_seed", cfg.workload.workload_seed, "config.workload");
  }
  if (doc.contains("pricing")) cfg.pricing = PricingMode::parse(get_field<std::string>(doc, "pricing", "config"));
  if (doc.contains("ledger")) {
    const Json& l = doc["ledger"];
    if (!l.is_object()) throw FormatError("config.ledger: expected an object");
    reject_unknown(l, {"payment_threshold", "amortization_rate"}, "config.ledger");
    if (l.contains("payment_threshold") && !l["payment_threshold"].is_null()) {
      cfg.ledger.payment_threshold = get_field<std::uint64_t>(l, "payment_threshold", "config.ledger");
    }
    maybe(l, "amortization_rate", cfg.ledger.amortization_rate, "config.ledger");
  }
  if (doc.contains("f1_variant")) cfg.f1_variant = parse_f1_variant(get_field<std::string>(doc, "f1_variant", "config"));
  if (doc.contains("out")) cfg.out = get_field<std::string>(doc, "out", "config");
  if (doc.contains("shard")) cfg.shard = parse_shard(get_field<std::string>(doc, "shard", "config"));
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  return config_from_string(detail::read_file(path));
}

std::filesystem::path resolve_output(const std::filesystem::path& out, const std::string& default_name) {
  const std::string ext = out.extension().string();
  if (ext == ".json" || ext == ".csv" || ext == ".svg") return out;
  return out / default_name;
}

TopologySummary summarize(const Overlay& overlay) {
  TopologySummary s;
  s.n = overlay.params().n;
  s.bits = overlay.bits();
  s.k = overlay.params().k;
  s.buckets = overlay.bits();
  for (std::uint32_t i = 0; i < overlay.size(); ++i) {
    s.total_entries += overlay.table(i).size();
    std::size_t deeper = 0;  // peers with proximity order >= depth
    unsigned depth = overlay.bits();
    for (unsigned d = overlay.bits(); d-- > 0;) {
      deeper += overlay.candidate_count(i, d);
      if (deeper < s.k) depth = d;
    }
    ++s.neighborhood_depths[depth];
  }
  return s;
}

std::string to_string(const TopologySummary& s) {
  std::string out = "nodes=" + std::to_string(s.n) + " bits=" + std::to_string(s.bits) +
                    " k=" + std::to_string(s.k) + " buckets=" + std::to_string(s.buckets) +
                    " entries=" + std::to_string(s.total_entries) + "\nneighborhood depth distribution:";
  for (const auto& [depth, count] : s.neighborhood_depths) {
    out += "\n  depth " + std::to_string(depth) + ": " + std::to_string(count) + " nodes";
  }
  return out;
}

TopologyOutcome cmd_topology(const OverlayParams& params, const std::filesystem::path& out) {
  const Overlay overlay = build_overlay(params);
  TopologyOutcome outcome{resolve_output(out, "topology.json"), summarize(overlay)};
  save_topology(overlay, outcome.path);
  return outcome;
}

RunOutcome cmd_run(const ExperimentConfig& config) {
  config.validate();
  const Overlay overlay = config.topology_path ? load_topology(*config.topology_path) : build_overlay(*config.overlay);
  RunOutcome outcome;
  outcome.result = run_experiment(overlay, config.workload, config.pricing, config.ledger, config.shard);
  outcome.path = resolve_output(config.out, "result.json");
  save_result(outcome.result, outcome.path);
  return outcome;
}

RunOutcome cmd_merge(std::span<const std::filesystem::path> inputs, const std::filesystem::path& out) {
  std::vector<RunResult> results;
  results.reserve(inputs.size());
  for (const auto& p : inputs) results.push_back(load_result(p));
  RunOutcome outcome;
  outcome.result = merge_results(results);
  outcome.path = resolve_output(out, "result.json");
  save_result(outcome.result, outcome.path);
  return outcome;
}

ReportOutcome cmd_report(const std::filesystem::path& result_file, const std::filesystem::path& out_dir,
                         F1Variant variant, std::optional<std::uint64_t> bin_width) {
  const RunResult result = load_result(result_file);
  ReportOutcome outcome;
  outcome.report = fairness_report(result, variant, bin_width);
  const FairnessReport& rep = outcome.report;

  char digest[17];
  std::snprintf(digest, sizeof digest, "%016llx", static_cast<unsigned long long>(result.topology_digest));
  const std::string provenance =
      std::string(kToolName) + "/" + std::string(kToolVersion) + " n=" + std::to_string(result.overlay.n) +
      " bits=" + std::to_string(result.overlay.bits) + " k=" + std::to_string(result.overlay.k) +
      " seed=" + std::to_string(result.overlay.seed) + " topology=" + digest +
      " files=" + std::to_string(result.workload.files) +
      " originator_fraction=" + Json(result.workload.originator_fraction).dump() +
      " workload_seed=" + std::to_string(result.workload.workload_seed) + " pricing=" + result.pricing.to_string() +
      " f1=" + std::string(to_string(variant));
  const std::string cell = " (k=" + std::to_string(result.overlay.k) + ", " +
                           std::to_string(std::lround(result.workload.originator_fraction * 100)) +
                           "% originators)";
  const std::string f1_title =
      variant == F1Variant::first_hop_ratio ? "F1: forwarded per first-hop forward" : "F1: forwarded per income unit";

  auto emit = [&](const std::string& name, const std::string& text) {
    const auto path = out_dir / name;
    detail::write_file(path, text);
    outcome.files.push_back(path);
  };
  emit("report.json", report_to_string(rep, result));
  emit("lorenz_f1.csv", lorenz_csv(rep.lorenz_f1));
  emit("lorenz_f2.csv", lorenz_csv(rep.lorenz_f2));
  emit("forwarded_hist.csv", histogram_csv(rep.histogram));
  emit("lorenz_f1.svg", lorenz_svg(rep.lorenz_f1, rep.gini_f1, f1_title + cell, provenance));
  emit("lorenz_f2.svg", lorenz_svg(rep.lorenz_f2, rep.gini_f2, "F2: income" + cell, provenance));
  emit("forwarded_hist.svg", histogram_svg(rep.histogram, "Forwarded chunks" + cell, provenance));
  return outcome;
}

}  // namespace swarmsim::harness
