#include "swarmsim/report_io.hpp"

#include <cstdio>

#include "json_text.hpp"
#include "swarmsim/version.hpp"

namespace swarmsim {

using detail::Json;

namespace {
Json metric(const std::optional<double>& v) { return v ? Json(*v) : Json("undefined"); }

std::string fmt_share(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10f", v);
  return buf;
}
}  // namespace

std::string report_to_string(const FairnessReport& report, const RunResult& source) {
  Json doc;
  doc["version"] = kReportFormatVersion;
  doc["tool"] = std::string(kToolName) + "/" + std::string(kToolVersion);

  char digest[17];
  std::snprintf(digest, sizeof digest, "%016llx", static_cast<unsigned long long>(source.topology_digest));
  Json steps = Json::array();
  for (const StepRange& s : source.steps) steps.push_back({s.begin, s.end});
  doc["source"] = {
      {"overlay", {{"n", source.overlay.n}, {"bits", source.overlay.bits}, {"k", source.overlay.k}, {"seed", source.overlay.seed}}},
      {"topology_digest", digest},
      {"workload",
       {{"files", source.workload.files},
        {"chunks_min", source.workload.chunks_min},
        {"chunks_max", source.workload.chunks_max},
        {"originator_fraction", source.workload.originator_fraction},
        {"workload_seed", source.workload.workload_seed}}},
      {"pricing", source.pricing.to_string()},
      {"steps", std::move(steps)}};

  Json f1;
  f1["variant"] = std::string(to_string(report.f1_variant));
  f1["population"] = report.f1_population;
  f1["gini"] = metric(report.gini_f1);
  f1["gini_unnormalized"] = metric(report.gini_f1_unnormalized);
  if (!report.gini_f1) f1["reason"] = "no node received any reward";
  Json f2;
  f2["population"] = report.f2_population;
  f2["gini"] = metric(report.gini_f2);
  f2["gini_unnormalized"] = metric(report.gini_f2_unnormalized);
  if (!report.gini_f2) f2["reason"] = "all incomes are zero";
  doc["f1"] = std::move(f1);
  doc["f2"] = std::move(f2);
  doc["forwarded"] = {{"average", report.average_forwarded},
                      {"total", report.total_forwarded},
                      {"histogram_bin_width", report.histogram.bin_width},
                      {"histogram_bins", report.histogram.bins.size()}};
  return detail::canonical_dump(doc);
}

std::string lorenz_csv(std::span<const LorenzPoint> curve) {
  std::string out = "population_share,value_share\n";
  for (const LorenzPoint& p : curve) {
    out += fmt_share(p.population_share);
    out += ',';
    out += fmt_share(p.value_share);
    out += '\n';
  }
  return out;
}

std::string histogram_csv(const Histogram& histogram) {
  std::string out = "bin_low,count\n";
  for (const HistogramBin& b : histogram.bins) {
    out += std::to_string(b.low);
    out += ',';
    out += std::to_string(b.count);
    out += '\n';
  }
  return out;
}

}  // namespace swarmsim
