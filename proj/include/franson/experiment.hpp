#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <utility>
#include <vector>

#include "franson/config.hpp"
#include "franson/correlator.hpp"
#include "franson/detection.hpp"
#include "franson/fit.hpp"

namespace franson {

struct Series {
  std::string name;
  std::vector<double> values;
  std::vector<double> errors;  ///< empty when the column has no uncertainty
};

struct ScanResult {
  std::string experiment;
  std::string variable;  ///< name of the independent variable
  std::vector<double> grid;
  std::deque<Series> series;
  std::vector<std::pair<std::string, SinusoidFit>> fits;
  std::vector<std::pair<std::string, double>> summary;
  std::vector<std::string> warnings;
  std::uint64_t seed = 0;
  std::string config_hash;

  const Series& series_named(const std::string& name) const;
  const SinusoidFit& fit_named(const std::string& name) const;
  double value(const std::string& name) const;

  Series& add_series(std::string name, std::size_t n, bool with_errors);
  void set(std::string name, double v) { summary.emplace_back(std::move(name), v); }
};

/// One scan point pushed through source -> detection -> correlator.
struct PipelineRun {
  std::size_t pairs = 0;
  TagStreams tags;
  CoincidenceHistogram histogram;
};

PipelineRun run_pipeline(const SpectralModel& model, const DetectionSetup& setup,
                         const CorrelatorParams& params, std::size_t n_pairs, std::uint64_t seed,
                         std::uint32_t scan_index);

/// Pipeline for the configured settings at scan index 0; the stream the
/// `timetags` command dumps.
PipelineRun run_configured_pipeline(const RunConfig& cfg);

/// Central-peak rate per port pair versus phi + psi. Series R55, R56, R65, R66.
ScanResult run_fringe_scan(const RunConfig& cfg, Mode mode);

/// Both settings driven together, phi = psi = theta. Local port-5 intensity
/// per party from ensemble-averaged first-order interference, tag singles, and
/// the coincidence fringe (second harmonic in theta) from the same tags.
ScanResult run_local_scan(const RunConfig& cfg);

/// Local visibility versus delta * t_sl, with t_sl varied at fixed delta.
ScanResult run_crossover_sweep(const RunConfig& cfg);

/// Nonlocal visibility versus an imposed t_A - t_B offset (units of 1/delta),
/// with the coincidence window centred on the shifted peak.
ScanResult run_tau_decay(const RunConfig& cfg, Mode mode);

/// Nonlocal visibility versus pump_linewidth * t_sl, alongside the empirical
/// characteristic function of the sampled pump jitter.
ScanResult run_pump_sweep(const RunConfig& cfg, Mode mode);

/// CHSH S from the four configured setting pairs.
ScanResult run_chsh(const RunConfig& cfg, Mode mode);

}  // namespace franson
