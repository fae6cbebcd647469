#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "franson/correlation.hpp"
#include "franson/correlator.hpp"
#include "franson/detection.hpp"
#include "franson/errors.hpp"
#include "franson/interferometer.hpp"
#include "franson/source.hpp"

namespace franson {

inline constexpr int kSchemaVersion = 1;

enum class Mode { Analytic, MonteCarlo };

const char* mode_name(Mode m);
Mode parse_mode(std::string_view name);

/// Optional overrides, in seconds; unset values follow the t_sl-based defaults.
struct CorrelatorSettings {
  std::optional<double> window;
  std::optional<double> bin_width;
  std::optional<double> tau_max;

  friend bool operator==(const CorrelatorSettings&, const CorrelatorSettings&) = default;
};

struct ScanSettings {
  std::size_t points = 16;
  std::size_t pairs_per_point = 100000;
  Mode mode = Mode::MonteCarlo;
  std::vector<double> crossover_grid;  ///< delta * t_sl
  std::vector<double> tau_offsets;     ///< units of 1/delta
  std::vector<double> pump_grid;       ///< pump_linewidth * t_sl
  ChshSettings chsh;

  ScanSettings();
  friend bool operator==(const ScanSettings&, const ScanSettings&) = default;
};

struct RunConfig {
  int schema_version = kSchemaVersion;
  std::uint64_t seed = 1;
  SpectralModel source;
  UmziConfig alice = umzi_for(Party::A);
  UmziConfig bob = umzi_for(Party::B);
  DetectorModel detector;
  CorrelatorSettings correlator;
  ScanSettings scan;

  // derived by validate()
  RegimeFlags regime_a;
  RegimeFlags regime_b;
  std::vector<std::string> warnings;

  /// Checks every module invariant, computes regime flags and warnings.
  void validate();

  CorrelatorParams correlator_params() const;
  DetectionSetup detection_setup() const;

  friend bool operator==(const RunConfig& x, const RunConfig& y);
};

/// JSON text (comments allowed). Throws ParseError with line and column for
/// malformed text, ConfigError for unknown keys, wrong types or violated
/// constraints.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

nlohmann::ordered_json config_to_json(const RunConfig& cfg);
/// Canonical text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& cfg);
/// Hex FNV-1a 64 of the canonical text.
std::string config_hash(const RunConfig& cfg);

std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace franson
