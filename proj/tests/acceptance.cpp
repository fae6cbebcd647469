// Acceptance gate: runs every criterion at full scale and prints one line each.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "franson/config.hpp"
#include "franson/correlation.hpp"
#include "franson/correlator.hpp"
#include "franson/detection.hpp"
#include "franson/experiment.hpp"
#include "franson/fit.hpp"
#include "franson/interferometer.hpp"
#include "franson/io.hpp"
#include "franson/source.hpp"

using namespace franson;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kPairs = 100000;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("FAILED ") + what;
    }
  }
  void note(const std::string& text) { detail += (detail.empty() ? "" : "; ") + text; }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

RunConfig ideal_config(std::size_t pairs = kPairs) {
  RunConfig cfg = parse_config("{}");
  cfg.scan.pairs_per_point = pairs;
  cfg.validate();
  return cfg;
}

std::string csv_of(const ScanResult& r) {
  std::ostringstream out;
  write_scan_csv(out, r);
  return out.str();
}

Outcome nonlocal_fringe_law() {
  Outcome o;
  const RunConfig cfg = ideal_config();
  const ScanResult exact = run_fringe_scan(cfg, Mode::Analytic);
  const Series& r55 = exact.series_named("R55");
  double worst = 0.0;
  for (std::size_t i = 0; i < exact.grid.size(); ++i) {
    worst = std::max(worst, std::abs(r55.values[i] - (1 + std::cos(exact.grid[i])) / 8));
  }
  o.require(worst < 1e-9, "analytic |R55 - (1+cos)/8| < 1e-9");
  o.note("analytic max dev " + fmt("%.2e", worst));

  const auto start = std::chrono::steady_clock::now();
  const ScanResult mc = run_fringe_scan(cfg, Mode::MonteCarlo);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double v = mc.value("visibility");
  const double phase = mc.value("phase_offset");
  o.require(v >= 0.99, "MC V >= 0.99");
  o.require(std::abs(phase) < 0.02, "MC |phase offset| < 0.02 rad");
  o.require(seconds < 30.0, "MC runtime < 30 s");
  o.note("MC V " + fmt("%.4f", v) + ", phase " + fmt("%.4f", phase) + " rad, " + fmt("%.2f", seconds) + " s");
  return o;
}

Outcome local_uniformity() {
  Outcome o;
  const RunConfig cfg = ideal_config();
  o.require(std::abs(cfg.source.delta * cfg.alice.t_sl - 100.0) < 1e-9, "delta * t_sl == 100");
  const ScanResult r = run_local_scan(cfg);
  for (const char* key : {"local_visibility_A", "local_visibility_B", "singles_visibility_A", "singles_visibility_B"}) {
    o.require(r.value(key) < 0.02, std::string(key) + " < 0.02");
  }
  o.require(r.value("nonlocal_visibility") > 0.95, "nonlocal visibility > 0.95");
  o.note("local A/B " + fmt("%.4f", r.value("local_visibility_A")) + "/" + fmt("%.4f", r.value("local_visibility_B")) +
         ", singles A/B " + fmt("%.4f", r.value("singles_visibility_A")) + "/" +
         fmt("%.4f", r.value("singles_visibility_B")) + ", nonlocal " + fmt("%.4f", r.value("nonlocal_visibility")));
  return o;
}

Outcome detuning_immunity() {
  Outcome o;
  SpectralModel model;
  model.pump_linewidth = 0.0;
  UmziConfig a = umzi_for(Party::A), b = umzi_for(Party::B);
  a.phase = 0.731;
  b.phase = -1.9;
  PairSource source(model, CounterRng(11));
  const std::vector<PhotonPair> pairs = source.take(10000);
  std::size_t mismatches = 0, distinct_df = 0;
  for (const PhotonPair& p : pairs) {
    if (p.df != pairs[0].df) ++distinct_df;
    for (Port pa : kPorts)
      for (Port pb : kPorts)
        if (central_peak_rate(p, a, b, pa, pb) != central_peak_rate(pairs[0], a, b, pa, pb)) ++mismatches;
  }
  o.require(mismatches == 0, "bit-identical central rates");
  o.require(distinct_df + 1 >= 1000, ">= 1000 distinct detunings");
  o.note(std::to_string(pairs.size()) + " pairs, " + std::to_string(mismatches) + " mismatches");
  return o;
}

Outcome coincidence_selection() {
  Outcome o;
  const RunConfig cfg = ideal_config();
  const CorrelatorParams params = cfg.correlator_params();
  o.require(params.window * 10 == params.t_sl, "w = t_sl/10");
  o.require(cfg.detector.jitter < 0.05 * cfg.alice.t_sl, "jitter << t_sl");

  const std::vector<double> thetas = uniform_phase_grid(cfg.scan.points);
  std::vector<double> side_totals, side_errors;
  std::size_t contaminated = 0, central_true = 0, central_hist = 0;
  double side_plus_sum = 0, side_minus_sum = 0;
  std::size_t side_plus_n = 0, side_minus_n = 0;
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    DetectionSetup setup = cfg.detection_setup();
    setup.a.phase = thetas[i];
    const PipelineRun run = run_pipeline(cfg.source, setup, params, kPairs, cfg.seed, static_cast<std::uint32_t>(i));

    // pair tags back up by their diagnostic id (oracle side only)
    std::vector<std::optional<TimeTag>> by_a(kPairs), by_b(kPairs);
    for (const TimeTag& t : run.tags.a) by_a[t.oracle_diagnostics().pair_id] = t;
    for (const TimeTag& t : run.tags.b) by_b[t.oracle_diagnostics().pair_id] = t;
    for (std::size_t id = 0; id < kPairs; ++id) {
      if (!by_a[id] || !by_b[id]) continue;
      const Picoseconds tau = by_a[id]->time() - by_b[id]->time() - params.center;
      const Branch br = by_a[id]->oracle_diagnostics().branch;
      if (std::abs(tau.count()) <= params.window.count()) {
        ++central_true;
        if (br != Branch::Central) ++contaminated;
      }
      if (br == Branch::LS) {
        side_plus_sum += static_cast<double>(tau.count());
        ++side_plus_n;
      } else if (br == Branch::SL) {
        side_minus_sum += static_cast<double>(tau.count());
        ++side_minus_n;
      }
    }
    const PeakTotals t = run.histogram.totals();
    central_hist += t.central;
    side_totals.push_back(static_cast<double>(t.side_plus + t.side_minus));
    side_errors.push_back(std::sqrt(static_cast<double>(t.side_plus + t.side_minus)));
  }
  o.require(contaminated == 0, "zero SL/LS events in the central window");
  o.require(central_hist == central_true, "central window holds only true pairs");
  const double t_sl_ps = static_cast<double>(params.t_sl.count());
  const double plus = side_plus_sum / static_cast<double>(side_plus_n);
  const double minus = side_minus_sum / static_cast<double>(side_minus_n);
  const double bin = static_cast<double>(params.bin_width.count());
  o.require(std::abs(plus - t_sl_ps) < bin && std::abs(minus + t_sl_ps) < bin, "side peaks at +-t_sl");

  const SinusoidFit flat = fit_sinusoid(thetas, side_totals, side_errors);
  o.require(flat.ok, "side-total fit");
  const bool phase_flat = std::abs(flat.cos_coeff) <= 3 * flat.cos_error && std::abs(flat.sin_coeff) <= 3 * flat.sin_error;
  o.require(phase_flat, "side totals phase-flat within 3 sigma");
  o.note(std::to_string(contaminated) + " contaminating events; side peaks at " + fmt("%+.2f", plus) + "/" +
         fmt("%+.2f", minus) + " ps; side modulation " + fmt("%.2f", flat.cos_coeff / flat.cos_error) + "/" +
         fmt("%.2f", flat.sin_coeff / flat.sin_error) + " sigma");
  return o;
}

Outcome post_selection_loss() {
  Outcome o;
  const RunConfig cfg = ideal_config();
  o.require(cfg.detector.efficiency == 1.0, "eta = 1");
  const PipelineRun run = run_configured_pipeline(cfg);
  const PeakSummary s = peak_counts(run.histogram);
  const double n = static_cast<double>(s.all.all());
  const double f = s.central_fraction();
  const double sigma = std::sqrt(0.25 / n);
  o.require(std::abs(f - 0.5) <= 3 * sigma, "central fraction 0.5 +- 3 sigma");
  o.note("fraction " + fmt("%.5f", f) + " (" + fmt("%.2f", (f - 0.5) / sigma) + " sigma, n=" + fmt("%.0f", n) + ")");
  return o;
}

Outcome crossover_oracle() {
  Outcome o;
  const RunConfig cfg = ideal_config();
  o.require(cfg.scan.crossover_grid.size() == 10 && std::abs(cfg.scan.crossover_grid.front() - 0.01) < 1e-12 &&
                std::abs(cfg.scan.crossover_grid.back() - 100.0) < 1e-9,
            "10-point log grid over [0.01, 100]");
  const ScanResult r = run_crossover_sweep(cfg);
  const Series& cf = r.series_named("cf_oracle");
  for (std::size_t i = 0; i < r.grid.size(); ++i) {
    const double x = r.grid[i];
    const double oracle = std::exp(-(kPi * x) * (kPi * x) / (4 * std::numbers::ln2));
    o.require(std::abs(cf.values[i] - oracle) < 1e-12, "oracle column");
  }
  o.require(r.value("max_abs_deviation") < 0.02, "max |V - CF| < 0.02");
  o.note("max |V - CF| " + fmt("%.4f", r.value("max_abs_deviation")));
  return o;
}

Outcome pump_degradation() {
  Outcome o;
  const RunConfig cfg = ideal_config();
  const ScanResult r = run_pump_sweep(cfg, Mode::MonteCarlo);
  const Series& v = r.series_named("visibility");
  const Series& emp = r.series_named("empirical_cf");
  o.require(v.values.size() == 5, "5 grid points");
  double worst = 0.0;
  for (std::size_t i = 0; i < v.values.size(); ++i) {
    const double z = std::abs(v.values[i] - emp.values[i]) / std::hypot(v.errors[i], emp.errors[i]);
    worst = std::max(worst, z);
  }
  o.require(worst <= 3.0, "|V - CF(dp)| within 3 combined sigma");
  o.require(r.value("monotone_strict") == 1.0, "monotone non-increasing");
  std::string vs;
  for (double x : v.values) vs += fmt("%.3f ", x);
  o.note("V = " + vs + "; worst " + fmt("%.2f", worst) + " sigma");
  return o;
}

Outcome tau_decay() {
  Outcome o;
  const RunConfig cfg = ideal_config();
  for (Mode mode : {Mode::Analytic, Mode::MonteCarlo}) {
    const ScanResult r = run_tau_decay(cfg, mode);
    const Series& v = r.series_named("visibility");
    const std::string tag = mode_name(mode);
    o.require(r.value(mode == Mode::Analytic ? "monotone_strict" : "monotone_within_3sigma") == 1.0,
              tag + " monotone non-increasing");
    std::optional<double> at_one;
    for (std::size_t i = 0; i < r.grid.size(); ++i)
      if (r.grid[i] == 1.0) at_one = v.values[i];
    o.require(at_one.has_value() && *at_one < 0.5, tag + " V(1/delta) < 0.5");
    o.note(tag + " V(1/delta) " + fmt("%.4f", at_one.value_or(-1)));
  }
  return o;
}

Outcome structural_invariants() {
  Outcome o;
  double worst_total = 0, worst_marginal = 0, worst_intensity = 0;
  bool phase_exact = true;
  const CounterRng rng(99);
  SpectralModel model;
  model.pump_linewidth = 1e9;
  PairSource source(model, rng.substream({0, purpose::source}));
  for (std::uint64_t k = 0; k < 5000; ++k) {
    DrawSequence d = rng.substream({1, purpose::detection}).draws(k);
    UmziConfig a = umzi_for(Party::A), b = umzi_for(Party::B);
    a.phase = 2 * kPi * d.uniform();
    b.phase = 2 * kPi * d.uniform();
    const double envelope = d.uniform();
    PhotonPair p = source.next();
    const OutcomeDistribution dist = outcome_distribution(p, a, b, envelope);
    worst_total = std::max(worst_total, std::abs(dist.total() - 1.0));

    UmziConfig b_other = b;
    b_other.phase += 1.0 + 3 * d.uniform();
    const OutcomeDistribution other = outcome_distribution(p, a, b_other, envelope);
    UmziConfig a_other = a;
    a_other.phase -= 2.0;
    const OutcomeDistribution other_a = outcome_distribution(p, a_other, b, envelope);
    for (Port port : kPorts) {
      worst_marginal = std::max(worst_marginal, std::abs(dist.marginal_a(port) - other.marginal_a(port)));
      worst_marginal = std::max(worst_marginal, std::abs(dist.marginal_b(port) - other_a.marginal_b(port)));
    }

    PhotonPair q = p;
    q.xi = 2 * kPi * d.uniform();
    phase_exact = phase_exact && outcome_distribution(q, a, b, envelope).entries() == dist.entries();

    const double gamma = d.uniform();
    const LocalIntensity li = local_intensity(umzi_transfer(party_detuning(p, Party::A), a), gamma);
    worst_intensity = std::max(worst_intensity, std::abs(li.i5 + li.i6 - 1.0));
  }
  o.require(worst_total <= 1e-12, "probability conservation 1e-12");
  o.require(worst_marginal <= 1e-12, "no-signaling marginals 1e-12");
  o.require(phase_exact, "global-phase immunity exact");
  o.require(worst_intensity <= 1e-12, "I5 + I6 = 1 to 1e-12");

  const RunConfig cfg = ideal_config(20000);
  const ScanResult x = run_fringe_scan(cfg, Mode::MonteCarlo);
  const ScanResult y = run_fringe_scan(cfg, Mode::MonteCarlo);
  o.require(csv_of(x) == csv_of(y) && scan_summary_json(x).dump() == scan_summary_json(y).dump(),
            "byte-identical reruns");

  const PipelineRun run = run_configured_pipeline(cfg);
  TagStreams stripped, scrambled;
  for (const auto& t : run.tags.a) {
    stripped.a.push_back(t.without_diagnostics());
    scrambled.a.emplace_back(t.party(), t.port(), t.time(), TagDiagnostics{Branch::SL, 12345});
  }
  for (const auto& t : run.tags.b) {
    stripped.b.push_back(t.without_diagnostics());
    scrambled.b.emplace_back(t.party(), t.port(), t.time(), TagDiagnostics{Branch::LS, 54321});
  }
  auto histogram_text = [&](const TagStreams& s) {
    std::ostringstream out;
    write_histogram_csv(out, correlate(s.a, s.b, cfg.correlator_params()), cfg.seed, config_hash(cfg));
    return out.str();
  };
  const std::string reference = histogram_text(run.tags);
  o.require(reference == histogram_text(stripped) && reference == histogram_text(scrambled),
            "correlator blind to diagnostics");

  o.note("conservation " + fmt("%.1e", worst_total) + ", marginals " + fmt("%.1e", worst_marginal) +
         ", I5+I6 " + fmt("%.1e", worst_intensity));
  return o;
}

Outcome chsh() {
  Outcome o;
  const RunConfig cfg = ideal_config();
  o.require(cfg.scan.chsh == ChshSettings{0, kPi / 2, -kPi / 4, kPi / 4}, "settings (0, pi/2, -pi/4, pi/4)");
  const ScanResult exact = run_chsh(cfg, Mode::Analytic);
  o.require(std::abs(exact.value("S") - 2 * std::numbers::sqrt2) < 1e-6, "analytic S = 2 sqrt 2");
  const ScanResult mc = run_chsh(cfg, Mode::MonteCarlo);
  o.require(mc.value("S") > 2.7, "MC S > 2.7");
  o.note("analytic S " + fmt("%.9f", exact.value("S")) + ", MC S " + fmt("%.4f", mc.value("S")) + " +- " +
         fmt("%.4f", mc.value("S_error")));
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"nonlocal fringe law", nonlocal_fringe_law},
      {"local uniformity", local_uniformity},
      {"detuning immunity", detuning_immunity},
      {"coincidence selection", coincidence_selection},
      {"50% post-selection loss", post_selection_loss},
      {"crossover oracle", crossover_oracle},
      {"pump-linewidth degradation", pump_degradation},
      {"tau_AB decay", tau_decay},
      {"structural invariants", structural_invariants},
      {"CHSH", chsh},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failures;
    std::printf("[%s] %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
