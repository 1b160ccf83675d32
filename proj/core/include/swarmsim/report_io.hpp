#pragma once

#include <optional>
#include <span>
#include <string>

#include "swarmsim/analysis.hpp"

namespace swarmsim {

inline constexpr std::uint64_t kReportFormatVersion = 1;

/// Report summary document. Undefined metrics are written as the string
/// "undefined" together with the reason.
std::string report_to_string(const FairnessReport& report, const RunResult& source);

/// "population_share,value_share" rows; header only for an undefined curve.
std::string lorenz_csv(std::span<const LorenzPoint> curve);

/// "bin_low,count" rows.
std::string histogram_csv(const Histogram& histogram);

/// Lorenz curve with the equality diagonal and a Gini annotation
/// ("undefined" when `gini` is empty).
std::string lorenz_svg(std::span<const LorenzPoint> curve, std::optional<double> gini,
                       const std::string& title, const std::string& provenance);

std::string histogram_svg(const Histogram& histogram, const std::string& title,
                          const std::string& provenance);

}  // namespace swarmsim
