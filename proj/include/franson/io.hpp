#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "franson/correlator.hpp"
#include "franson/detection.hpp"
#include "franson/experiment.hpp"

namespace franson {

inline constexpr const char* kToolVersion = "1.0.0";

/// Time-tag dump:
///
///     # franson-timetags 1
///     # seed <u64>
///     # config_hash <16 hex digits>
///     # columns party port time_ps
///     A 5 1234567
///     B 6 1234570
///
/// One tag per line, merged in time order. Diagnostic fields are not written.
struct TagDump {
  std::uint64_t seed = 0;
  std::string config_hash;
  std::vector<TimeTag> tags;
};

void write_timetags(std::ostream& out, std::span<const TimeTag> tags, std::uint64_t seed,
                    const std::string& config_hash);
/// Throws ParseError naming the offending line.
TagDump read_timetags(std::istream& in);

/// `# seed` / `# config_hash` comment lines, then `tau_ps,portA,portB,count`
/// with one row per bin and port pair; tau_ps is the bin's lower edge.
void write_histogram_csv(std::ostream& out, const CoincidenceHistogram& hist, std::uint64_t seed,
                         const std::string& config_hash);

nlohmann::ordered_json histogram_summary_json(const CoincidenceHistogram& hist, std::uint64_t seed,
                                              const std::string& config_hash);

/// Grid column followed by each series (and its `<name>_err` column).
void write_scan_csv(std::ostream& out, const ScanResult& result);
nlohmann::ordered_json scan_summary_json(const ScanResult& result);

/// Writes `text` to `path`, creating parent directories.
void write_file(const std::filesystem::path& path, const std::string& text);

}  // namespace franson
