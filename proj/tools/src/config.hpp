#pragma once

#include "sievevar/dgp.hpp"
#include "sievevar/mc.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sievevar::app {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Parses and validates a JSON document; errors become InputError.
[[nodiscard]] json load_json_file(const std::filesystem::path& path);

/// "desk" or an object {dim?, ar, ma, sigma_u}; matrices are arrays of rows.
[[nodiscard]] VarmaSpec parse_dgp(const json& node);
[[nodiscard]] json dgp_to_json(const VarmaSpec& spec);

struct SimulateConfig {
  VarmaSpec dgp = default_desk_dgp();
  std::size_t sample_size = 300;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> burn_in;
};

[[nodiscard]] SimulateConfig parse_simulate_config(const json& doc);

struct McConfig {
  ExperimentConfig experiment;
  /// Set for counterexample designs; enables mc_flags.csv.
  std::optional<CoverageThresholds> flag_thresholds;
};

[[nodiscard]] McConfig parse_mc_config(const json& doc);

[[nodiscard]] std::vector<std::string> preset_names();
/// Preset as a config document; throws InputError for an unknown name.
[[nodiscard]] json preset(std::string_view name);

/// --seed flag, then SIEVEVAR_SEED, then `fallback`.
[[nodiscard]] std::uint64_t resolve_seed(const std::optional<std::string>& flag,
                                         std::optional<std::uint64_t> fallback);
[[nodiscard]] std::uint64_t parse_seed(std::string_view text);

}  // namespace sievevar::app
