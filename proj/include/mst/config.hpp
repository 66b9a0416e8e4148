#pragma once

// JSON experiment configuration (schema version 1, see docs/config.schema.json).

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mst/root_trace.hpp"

namespace mst::harness {

using json = nlohmann::json;

inline constexpr int schema_version = 1;

struct GridSpec {
  Vec3 lo;
  Vec3 hi;
  std::array<int, 3> counts{};
};

struct ExperimentSpec {
  kkr::SystemConfig system;
  std::vector<int> L_list; // cutoffs of the convergence study, ascending
  int L_ref = 8;
  double guard = 0.5; // eigenvalue tracking radius across L
  std::uint64_t seed = 1;
  std::string output = "out";
  std::optional<GridSpec> grid; // wave-function export for `solve`
};

/// Parse and validate. Relative data files are resolved against `base_dir`.
/// Throws ConfigError naming the offending field, GeometryError for
/// overlapping spheres.
ExperimentSpec parse_config(const json &doc, const std::filesystem::path &base_dir = {});
ExperimentSpec load_config(const std::filesystem::path &path);

/// Fully resolved configuration with every default spelled out.
json to_json(const ExperimentSpec &spec);

/// FNV-1a 64 of the compact resolved configuration, as 16 hex digits.
std::string config_hash(const ExperimentSpec &spec);

} // namespace mst::harness
