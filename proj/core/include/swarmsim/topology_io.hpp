#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "swarmsim/overlay.hpp"

namespace swarmsim {

inline constexpr std::uint64_t kTopologyFormatVersion = 1;

/// Canonical topology text: sorted nodes, sorted bucket entries, stable key
/// order. Byte equality of two files implies structural equality.
std::string topology_to_string(const Overlay& overlay);

/// Parses and validates a topology document. Throws FormatError on schema or
/// version mismatch and on any overlay invariant violation.
Overlay topology_from_string(const std::string& text);

void save_topology(const Overlay& overlay, const std::filesystem::path& path);
Overlay load_topology(const std::filesystem::path& path);

/// FNV-1a digest over params, nodes and bucket contents. Identifies the
/// overlay a result was computed on, independent of tool version.
std::uint64_t topology_digest(const Overlay& overlay);

}  // namespace swarmsim
