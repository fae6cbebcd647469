#include "franson/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "franson/correlation.hpp"
#include "franson/interferometer.hpp"
#include "franson/stats.hpp"

namespace franson {

namespace {

constexpr const char* kPortPairNames[2][2] = {{"R55", "R56"}, {"R65", "R66"}};

ScanResult make_result(const RunConfig& cfg, std::string experiment, std::string variable,
                       std::vector<double> grid) {
  ScanResult r;
  r.experiment = std::move(experiment);
  r.variable = std::move(variable);
  r.grid = std::move(grid);
  r.seed = cfg.seed;
  r.config_hash = config_hash(cfg);
  r.warnings = cfg.warnings;
  return r;
}

struct CentralRates {
  PortTable rate{};
  PortTable error{};
};

CentralRates central_rates(const PipelineRun& run) {
  CentralRates out;
  const auto n = static_cast<double>(run.pairs);
  for (Port a : kPorts) {
    for (Port b : kPorts) {
      const auto k = static_cast<double>(run.histogram.totals(a, b).central);
      out.rate[port_index(a)][port_index(b)] = k / n;
      out.error[port_index(a)][port_index(b)] = binomial_stderr(k, n);
    }
  }
  return out;
}

PortTable central_counts(const PipelineRun& run) {
  PortTable t{};
  for (Port a : kPorts)
    for (Port b : kPorts)
      t[port_index(a)][port_index(b)] = static_cast<double>(run.histogram.totals(a, b).central);
  return t;
}

/// Rates per port pair versus theta = phi + psi, with bob's setting held.
struct FringeData {
  std::array<std::array<std::vector<double>, 2>, 2> rate;
  std::array<std::array<std::vector<double>, 2>, 2> error;
};

FringeData fringe_data(const RunConfig& cfg, const SpectralModel& model, const DetectionSetup& base,
                       const CorrelatorParams& params, std::span<const double> thetas, Mode mode,
                       std::uint32_t index_offset) {
  FringeData data;
  const CounterRng rng(cfg.seed);
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    DetectionSetup setup = base;
    setup.a.phase = thetas[i] - setup.b.phase;
    const auto index = static_cast<std::uint32_t>(index_offset + i);
    PortTable rate{}, error{};
    if (mode == Mode::Analytic) {
      const double envelope = two_photon_envelope(setup.tau_offset, setup.bandwidth);
      const EnsembleRates e = ensemble_fringe(model, setup.a, setup.b, cfg.scan.pairs_per_point,
                                              rng.substream({index, purpose::source}), envelope);
      rate = e.rate;
      error = e.stderr_rate;
    } else {
      const PipelineRun run = run_pipeline(model, setup, params, cfg.scan.pairs_per_point, cfg.seed, index);
      const CentralRates c = central_rates(run);
      rate = c.rate;
      error = c.error;
    }
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        data.rate[a][b].push_back(rate[a][b]);
        data.error[a][b].push_back(error[a][b]);
      }
    }
  }
  return data;
}

bool monotone_non_increasing(const std::vector<double>& v, const std::vector<double>& err, double k_sigma) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    const double slack = err.empty() ? 0.0 : k_sigma * std::hypot(err[i], err[i - 1]);
    if (v[i] > v[i - 1] + slack) return false;
  }
  return true;
}

}  // namespace

const Series& ScanResult::series_named(const std::string& name) const {
  for (const auto& s : series)
    if (s.name == name) return s;
  throw std::out_of_range("no series named " + name);
}

const SinusoidFit& ScanResult::fit_named(const std::string& name) const {
  for (const auto& [n, f] : fits)
    if (n == name) return f;
  throw std::out_of_range("no fit named " + name);
}

double ScanResult::value(const std::string& name) const {
  for (const auto& [n, v] : summary)
    if (n == name) return v;
  throw std::out_of_range("no summary value named " + name);
}

Series& ScanResult::add_series(std::string name, std::size_t n, bool with_errors) {
  Series s;
  s.name = std::move(name);
  s.values.assign(n, 0.0);
  if (with_errors) s.errors.assign(n, 0.0);
  series.push_back(std::move(s));
  return series.back();
}

PipelineRun run_pipeline(const SpectralModel& model, const DetectionSetup& setup,
                         const CorrelatorParams& params, std::size_t n_pairs, std::uint64_t seed,
                         std::uint32_t scan_index) {
  const CounterRng rng(seed);
  PairSource source(model, rng.substream({scan_index, purpose::source}));
  const std::vector<PhotonPair> pairs = source.take(n_pairs);
  TagStreams tags = detect_pairs(pairs, setup, rng.substream({scan_index, purpose::detection}));
  CoincidenceHistogram hist = correlate(tags.a, tags.b, params);
  return {n_pairs, std::move(tags), std::move(hist)};
}

PipelineRun run_configured_pipeline(const RunConfig& cfg) {
  return run_pipeline(cfg.source, cfg.detection_setup(), cfg.correlator_params(),
                      cfg.scan.pairs_per_point, cfg.seed, 0);
}

ScanResult run_fringe_scan(const RunConfig& cfg, Mode mode) {
  const std::vector<double> thetas = uniform_phase_grid(cfg.scan.points);
  check_phase_grid(thetas);
  ScanResult r = make_result(cfg, "fringe-scan", "theta", thetas);
  const FringeData d = fringe_data(cfg, cfg.source, cfg.detection_setup(), cfg.correlator_params(),
                                   thetas, mode, 0);
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      Series& s = r.add_series(kPortPairNames[a][b], thetas.size(), true);
      s.values = d.rate[a][b];
      s.errors = d.error[a][b];
      r.fits.emplace_back(kPortPairNames[a][b], fit_sinusoid(thetas, s.values, s.errors));
    }
  }
  Series& oracle = r.add_series("R55_closed_form", thetas.size(), false);
  for (std::size_t i = 0; i < thetas.size(); ++i) oracle.values[i] = 0.125 * (1.0 + std::cos(thetas[i]));

  const SinusoidFit& f = r.fit_named("R55");
  r.set("mode_analytic", mode == Mode::Analytic ? 1.0 : 0.0);
  r.set("fit_ok", f.ok ? 1.0 : 0.0);
  r.set("visibility", f.visibility);
  r.set("visibility_error", f.visibility_error);
  r.set("phase_offset", f.phase);
  r.set("phase_offset_error", f.phase_error);
  r.set("fit_residual_rms", f.residual_rms);
  r.set("maxmin_visibility", f.maxmin_visibility);
  if (!f.ok) r.warnings.emplace_back("sinusoid fit failed (singular normal equations)");
  return r;
}

ScanResult run_local_scan(const RunConfig& cfg) {
  const std::vector<double> thetas = uniform_phase_grid(cfg.scan.points);
  check_phase_grid(thetas);
  ScanResult r = make_result(cfg, "local-scan", "theta", thetas);
  const std::size_t n = thetas.size();
  Series& local_a = r.add_series("local_I5_A", n, true);
  Series& local_b = r.add_series("local_I5_B", n, true);
  Series& singles_a = r.add_series("singles_I5_A", n, true);
  Series& singles_b = r.add_series("singles_I5_B", n, true);
  Series& nonlocal = r.add_series("R55", n, true);

  const double gamma_a = cfg.alice.path_overlap(cfg.source.tau_ind);
  const double gamma_b = cfg.bob.path_overlap(cfg.source.tau_ind);
  const CounterRng rng(cfg.seed);
  const CorrelatorParams params = cfg.correlator_params();

  for (std::size_t i = 0; i < n; ++i) {
    DetectionSetup setup = cfg.detection_setup();
    setup.a.phase = thetas[i];
    setup.b.phase = thetas[i];
    const auto index = static_cast<std::uint32_t>(i);

    PairSource source(cfg.source, rng.substream({index, purpose::source}));
    const std::vector<PhotonPair> pairs = source.take(cfg.scan.pairs_per_point);
    RunningMean mean_a, mean_b;
    for (const PhotonPair& p : pairs) {
      mean_a.add(local_intensity(umzi_transfer(party_detuning(p, Party::A), setup.a), gamma_a).i5);
      mean_b.add(local_intensity(umzi_transfer(party_detuning(p, Party::B), setup.b), gamma_b).i5);
    }
    local_a.values[i] = mean_a.mean();
    local_a.errors[i] = mean_a.standard_error();
    local_b.values[i] = mean_b.mean();
    local_b.errors[i] = mean_b.standard_error();

    const TagStreams tags = detect_pairs(pairs, setup, rng.substream({index, purpose::detection}));
    auto singles = [](const std::vector<TimeTag>& stream, Series& out, std::size_t k) {
      const auto five = static_cast<double>(
          std::count_if(stream.begin(), stream.end(), [](const TimeTag& t) { return t.port() == Port::Five; }));
      const auto total = static_cast<double>(stream.size());
      out.values[k] = total > 0 ? five / total : 0.0;
      out.errors[k] = binomial_stderr(five, total);
    };
    singles(tags.a, singles_a, i);
    singles(tags.b, singles_b, i);

    const CoincidenceHistogram hist = correlate(tags.a, tags.b, params);
    const auto k = static_cast<double>(hist.totals(Port::Five, Port::Five).central);
    const auto pairs_n = static_cast<double>(pairs.size());
    nonlocal.values[i] = k / pairs_n;
    nonlocal.errors[i] = binomial_stderr(k, pairs_n);
  }

  r.fits.emplace_back("local_I5_A", fit_sinusoid(thetas, local_a.values, local_a.errors));
  r.fits.emplace_back("local_I5_B", fit_sinusoid(thetas, local_b.values, local_b.errors));
  r.fits.emplace_back("singles_I5_A", fit_sinusoid(thetas, singles_a.values, singles_a.errors));
  r.fits.emplace_back("singles_I5_B", fit_sinusoid(thetas, singles_b.values, singles_b.errors));
  r.fits.emplace_back("R55", fit_sinusoid(thetas, nonlocal.values, nonlocal.errors, 2));

  r.set("gamma_A", gamma_a);
  r.set("gamma_B", gamma_b);
  r.set("local_visibility_A", r.fit_named("local_I5_A").visibility);
  r.set("local_visibility_B", r.fit_named("local_I5_B").visibility);
  r.set("singles_visibility_A", r.fit_named("singles_I5_A").visibility);
  r.set("singles_visibility_B", r.fit_named("singles_I5_B").visibility);
  r.set("nonlocal_visibility", r.fit_named("R55").visibility);
  r.set("nonlocal_visibility_error", r.fit_named("R55").visibility_error);
  return r;
}

ScanResult run_crossover_sweep(const RunConfig& cfg) {
  const std::vector<double>& grid = cfg.scan.crossover_grid;
  ScanResult r = make_result(cfg, "crossover", "delta_t_sl", grid);
  Series& vis = r.add_series("local_visibility", grid.size(), true);
  Series& oracle = r.add_series("cf_oracle", grid.size(), false);
  Series& t_sl = r.add_series("t_sl", grid.size(), false);
  const std::vector<double> phases = uniform_phase_grid(cfg.scan.points);
  const CounterRng rng(cfg.seed);

  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    UmziConfig at = cfg.alice;
    at.t_sl = grid[i] / cfg.source.delta;
    const LocalFringe lf = ensemble_local_fringe(cfg.source, at, phases, cfg.scan.pairs_per_point,
                                                 rng.substream({static_cast<std::uint32_t>(i), purpose::source}));
    vis.values[i] = lf.visibility();
    vis.errors[i] = lf.fit.visibility_error;
    oracle.values[i] = gaussian_characteristic(cfg.source.delta, at.t_sl);
    t_sl.values[i] = at.t_sl;
    worst = std::max(worst, std::abs(vis.values[i] - oracle.values[i]));
  }
  r.set("max_abs_deviation", worst);
  return r;
}

ScanResult run_tau_decay(const RunConfig& cfg, Mode mode) {
  const std::vector<double>& grid = cfg.scan.tau_offsets;
  ScanResult r = make_result(cfg, "tau-decay", "tau_offset_delta", grid);
  Series& vis = r.add_series("visibility", grid.size(), true);
  Series& oracle = r.add_series("envelope", grid.size(), false);
  Series& offset_ps = r.add_series("tau_offset_ps", grid.size(), false);
  const std::vector<double> thetas = uniform_phase_grid(cfg.scan.points);

  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double offset = grid[i] / cfg.source.delta;
    DetectionSetup setup = cfg.detection_setup();
    setup.tau_offset = offset;
    CorrelatorParams params = cfg.correlator_params();
    params.center = to_picoseconds(offset);
    params.validate();
    const FringeData d = fringe_data(cfg, cfg.source, setup, params, thetas, mode,
                                     static_cast<std::uint32_t>(i * thetas.size()));
    const SinusoidFit f = fit_sinusoid(thetas, d.rate[0][0], d.error[0][0]);
    vis.values[i] = f.visibility;
    vis.errors[i] = f.visibility_error;
    oracle.values[i] = two_photon_envelope(offset, cfg.source.delta);
    offset_ps.values[i] = static_cast<double>(params.center.count());
  }
  r.set("monotone_strict", monotone_non_increasing(vis.values, {}, 0.0) ? 1.0 : 0.0);
  r.set("monotone_within_3sigma", monotone_non_increasing(vis.values, vis.errors, 3.0) ? 1.0 : 0.0);
  return r;
}

ScanResult run_pump_sweep(const RunConfig& cfg, Mode mode) {
  const std::vector<double>& grid = cfg.scan.pump_grid;
  ScanResult r = make_result(cfg, "pump-sweep", "pump_linewidth_t_sl", grid);
  Series& vis = r.add_series("visibility", grid.size(), true);
  Series& empirical = r.add_series("empirical_cf", grid.size(), true);
  Series& oracle = r.add_series("cf_oracle", grid.size(), false);
  const std::vector<double> thetas = uniform_phase_grid(cfg.scan.points);
  const double t_sl = cfg.alice.t_sl;

  for (std::size_t i = 0; i < grid.size(); ++i) {
    SpectralModel model = cfg.source;
    model.pump_linewidth = grid[i] / t_sl;
    const auto first_index = static_cast<std::uint32_t>(i * thetas.size());
    const FringeData d = fringe_data(cfg, model, cfg.detection_setup(), cfg.correlator_params(),
                                     thetas, mode, first_index);
    const SinusoidFit f = fit_sinusoid(thetas, d.rate[0][0], d.error[0][0]);
    vis.values[i] = f.visibility;
    vis.errors[i] = f.visibility_error;

    // characteristic function of the very dp values the scan consumed
    RunningMean re, im;
    const CounterRng rng(cfg.seed);
    for (std::size_t k = 0; k < thetas.size(); ++k) {
      PairSource source(model, rng.substream({first_index + static_cast<std::uint32_t>(k), purpose::source}));
      for (std::size_t j = 0; j < cfg.scan.pairs_per_point; ++j) {
        const double arg = 2.0 * std::numbers::pi * source.next().dp * t_sl;
        re.add(std::cos(arg));
        im.add(std::sin(arg));
      }
    }
    empirical.values[i] = std::hypot(re.mean(), im.mean());
    empirical.errors[i] = std::hypot(re.standard_error(), im.standard_error()) / std::numbers::sqrt2;
    oracle.values[i] = gaussian_characteristic(model.pump_linewidth, t_sl);
  }
  r.set("monotone_strict", monotone_non_increasing(vis.values, {}, 0.0) ? 1.0 : 0.0);
  return r;
}

ScanResult run_chsh(const RunConfig& cfg, Mode mode) {
  ScanResult r = make_result(cfg, "chsh", "setting_pair", {0, 1, 2, 3});
  Series& e = r.add_series("E", 4, true);
  const ChshSettings& s = cfg.scan.chsh;
  const std::array<std::pair<double, double>, 4> combos = {
      {{s.a, s.b}, {s.a, s.b_prime}, {s.a_prime, s.b}, {s.a_prime, s.b_prime}}};
  const CounterRng rng(cfg.seed);

  std::array<double, 4> correlations{};
  for (std::size_t k = 0; k < 4; ++k) {
    DetectionSetup setup = cfg.detection_setup();
    setup.a.phase = combos[k].first;
    setup.b.phase = combos[k].second;
    const auto index = static_cast<std::uint32_t>(k);
    if (mode == Mode::Analytic) {
      const EnsembleRates rates = ensemble_fringe(cfg.source, setup.a, setup.b, cfg.scan.pairs_per_point,
                                                  rng.substream({0, purpose::source}));
      correlations[k] = correlation_value(rates.rate);
      e.errors[k] = 0.0;
    } else {
      const PipelineRun run = run_pipeline(cfg.source, setup, cfg.correlator_params(),
                                           cfg.scan.pairs_per_point, cfg.seed, index);
      const PortTable counts = central_counts(run);
      correlations[k] = correlation_value(counts);
      const double total = counts[0][0] + counts[0][1] + counts[1][0] + counts[1][1];
      e.errors[k] = std::sqrt(std::max(1.0 - correlations[k] * correlations[k], 0.0) / total);
    }
    e.values[k] = correlations[k];
  }
  const ChshResult chsh = chsh_from_correlations(correlations);
  double s_err = 0.0;
  for (double err : e.errors) s_err += err * err;
  r.set("mode_analytic", mode == Mode::Analytic ? 1.0 : 0.0);
  r.set("S", chsh.s);
  r.set("S_error", std::sqrt(s_err));
  for (std::size_t k = 0; k < 4; ++k) r.set("form_" + std::to_string(k), chsh.forms[k]);
  return r;
}

}  // namespace franson
