#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "swarmsim/simulation.hpp"

namespace swarmsim {

inline constexpr std::uint64_t kResultFormatVersion = 1;

/// Canonical result document: config echo, step ranges, per-node counters,
/// totals and the ledger snapshot. Identical results serialize to identical
/// bytes.
std::string result_to_string(const RunResult& result);
RunResult result_from_string(const std::string& text);

void save_result(const RunResult& result, const std::filesystem::path& path);
RunResult load_result(const std::filesystem::path& path);

}  // namespace swarmsim
