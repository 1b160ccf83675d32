// Command-line experiment runner: topology / run / merge / report.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "swarmsim/harness.hpp"
#include "swarmsim/routing.hpp"
#include "swarmsim/version.hpp"

namespace {

constexpr int kExitError = 1;
constexpr int kExitRoutingFailure = 3;

void configure_logging() {
  auto logger = spdlog::stderr_color_mt("swarmsim");
  logger->set_pattern("[%l] %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("SIM_LOG")) {
    const auto level = spdlog::level::from_str(env);
    // from_str maps unknown names to "off"; only honour it when asked for.
    if (level != spdlog::level::off || std::string(env) == "off") {
      spdlog::set_level(level);
    } else {
      spdlog::warn("ignoring unknown SIM_LOG level '{}'", env);
    }
  }
}

struct OverlayFlags {
  std::optional<std::uint64_t> nodes;
  std::optional<unsigned> bits;
  std::optional<unsigned> bucket_size;
  std::optional<std::uint64_t> seed;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--nodes", nodes, "Number of overlay nodes (default 1000)");
    cmd->add_option("--bits", bits, "Address width in bits (default 16)");
    cmd->add_option("--bucket-size", bucket_size, "Bucket capacity k (default 4)");
    cmd->add_option("--seed", seed, "Topology seed (default 0)");
  }

  bool any() const { return nodes || bits || bucket_size || seed; }

  swarmsim::OverlayParams apply(swarmsim::OverlayParams p) const {
    if (nodes) p.n = *nodes;
    if (bits) p.bits = *bits;
    if (bucket_size) p.k = *bucket_size;
    if (seed) p.seed = *seed;
    return p;
  }
};

struct RunFlags {
  std::optional<std::string> config;
  OverlayFlags overlay;
  std::optional<std::uint64_t> files;
  std::optional<std::uint64_t> chunks_min;
  std::optional<std::uint64_t> chunks_max;
  std::optional<double> originator_fraction;
  std::optional<std::uint64_t> workload_seed;
  std::optional<std::string> pricing;
  std::optional<std::string> f1_variant;
  std::optional<std::string> topology;
  std::optional<std::string> out;
  std::optional<std::string> shard;

  swarmsim::harness::ExperimentConfig resolve() const {
    using namespace swarmsim;
    harness::ExperimentConfig cfg = config ? harness::load_config(*config) : harness::ExperimentConfig{};
    if (topology && overlay.any()) {
      throw InvalidArgument("--topology cannot be combined with --nodes/--bits/--bucket-size/--seed");
    }
    if (topology) {
      cfg.topology_path = *topology;
      cfg.overlay.reset();
    } else if (overlay.any()) {
      cfg.overlay = overlay.apply(cfg.overlay.value_or(OverlayParams{}));
      cfg.topology_path.reset();
    } else if (!cfg.overlay && !cfg.topology_path) {
      cfg.overlay = OverlayParams{};
    }
    if (files) cfg.workload.files = *files;
    if (chunks_min) cfg.workload.chunks_min = *chunks_min;
    if (chunks_max) cfg.workload.chunks_max = *chunks_max;
    if (originator_fraction) cfg.workload.originator_fraction = *originator_fraction;
    if (workload_seed) cfg.workload.workload_seed = *workload_seed;
    if (pricing) cfg.pricing = PricingMode::parse(*pricing);
    if (f1_variant) cfg.f1_variant = parse_f1_variant(*f1_variant);
    if (out) cfg.out = *out;
    if (shard) cfg.shard = harness::parse_shard(*shard);
    cfg.validate();
    return cfg;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();

  CLI::App app{"Bandwidth-incentive simulator for Kademlia storage overlays"};
  app.set_version_flag("--version", std::string(swarmsim::kToolVersion));
  app.require_subcommand(1);

  OverlayFlags topo_flags;
  std::string topo_out = "topology.json";
  auto* topology_cmd = app.add_subcommand("topology", "Build an overlay and write its topology file");
  topo_flags.add_to(topology_cmd);
  topology_cmd->add_option("--out", topo_out, "Output file or directory")->capture_default_str();

  RunFlags run;
  auto* run_cmd = app.add_subcommand("run", "Run one experiment and write its result file");
  run_cmd->add_option("--config", run.config, "Config file (flags override its fields)");
  run.overlay.add_to(run_cmd);
  run_cmd->add_option("--files", run.files, "Number of file downloads (steps)");
  run_cmd->add_option("--chunks-min", run.chunks_min, "Minimum chunks per file");
  run_cmd->add_option("--chunks-max", run.chunks_max, "Maximum chunks per file");
  run_cmd->add_option("--originator-fraction", run.originator_fraction, "Fraction of nodes that originate downloads");
  run_cmd->add_option("--workload-seed", run.workload_seed, "Workload seed");
  run_cmd->add_option("--pricing", run.pricing, "xor-remaining | proximity-step | constant:<c>");
  run_cmd->add_option("--f1-variant", run.f1_variant, "first-hop-ratio | per-reward (recorded for reports)");
  run_cmd->add_option("--topology", run.topology, "Reuse an existing topology file");
  run_cmd->add_option("--out", run.out, "Output file or directory (default out/)");
  run_cmd->add_option("--shard", run.shard, "Only run steps <start>:<end>");

  std::vector<std::string> merge_inputs;
  std::string merge_out = "merged";
  auto* merge_cmd = app.add_subcommand("merge", "Merge result files of one experiment");
  merge_cmd->add_option("inputs", merge_inputs, "Result files")->required()->check(CLI::ExistingFile);
  merge_cmd->add_option("--out", merge_out, "Output file or directory")->capture_default_str();

  std::string report_input;
  std::string report_out = "report";
  std::string report_variant = "first-hop-ratio";
  std::optional<std::uint64_t> bin_width;
  auto* report_cmd = app.add_subcommand("report", "Compute fairness metrics and plots for a result file");
  report_cmd->add_option("result", report_input, "Result file")->required();
  report_cmd->add_option("--out", report_out, "Output directory")->capture_default_str();
  report_cmd->add_option("--f1-variant", report_variant, "first-hop-ratio | per-reward")->capture_default_str();
  report_cmd->add_option("--bin-width", bin_width, "Histogram bin width (default max(1, round(max/50)))");

  CLI11_PARSE(app, argc, argv);

  using namespace swarmsim;
  try {
    const auto t0 = std::chrono::steady_clock::now();
    if (*topology_cmd) {
      const auto outcome = harness::cmd_topology(topo_flags.apply(OverlayParams{}), topo_out);
      std::cout << harness::to_string(outcome.summary) << "\nwrote " << outcome.path.string() << "\n";
    } else if (*run_cmd) {
      const harness::ExperimentConfig cfg = run.resolve();
      spdlog::info("running {} files ({}), pricing {}", cfg.workload.files,
                   cfg.topology_path ? "topology " + cfg.topology_path->string() : std::string("generated overlay"),
                   cfg.pricing.to_string());
      const auto outcome = harness::cmd_run(cfg);
      const auto& totals = outcome.result.totals;
      std::cout << "steps=" << totals.steps << " chunks=" << totals.chunks << " hops=" << totals.hops
                << " mean_forwarded=" << average_forwarded(outcome.result) << "\nwrote " << outcome.path.string()
                << "\n";
    } else if (*merge_cmd) {
      std::vector<std::filesystem::path> inputs(merge_inputs.begin(), merge_inputs.end());
      const auto outcome = harness::cmd_merge(inputs, merge_out);
      std::cout << "merged " << inputs.size() << " results (" << outcome.result.totals.steps << " steps)\nwrote "
                << outcome.path.string() << "\n";
    } else if (*report_cmd) {
      const auto outcome = harness::cmd_report(report_input, report_out, parse_f1_variant(report_variant), bin_width);
      const auto show = [](const std::optional<double>& g) { return g ? std::to_string(*g) : std::string("undefined"); };
      std::cout << "gini_f1=" << show(outcome.report.gini_f1) << " gini_f2=" << show(outcome.report.gini_f2)
                << " mean_forwarded=" << outcome.report.average_forwarded << "\n";
      for (const auto& f : outcome.files) std::cout << "wrote " << f.string() << "\n";
    }
    spdlog::info("done in {:.2f}s", seconds_since(t0));
  } catch (const RoutingFailure& e) {
    std::cerr << "error: " << e.what() << "\npartial path:";
    for (Address hop : e.partial_path().hops) std::cerr << ' ' << to_string(hop);
    std::cerr << "\n";
    return kExitRoutingFailure;
  } catch (const IncompatibleRuns& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return 0;
}
