#include "franson/interferometer.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "franson/errors.hpp"
#include "franson/stats.hpp"

namespace franson {

using cd = std::complex<double>;

void UmziConfig::validate() const {
  if (!std::isfinite(t_sl) || !(t_sl > 0)) throw ConfigError("t_sl", "t_sl must be > 0");
  if (!std::isfinite(phase)) throw ConfigError("phase", "phase must be finite");
  if (gamma && !(*gamma >= 0.0 && *gamma <= 1.0)) throw ConfigError("gamma", "gamma must be in [0, 1]");
}

double UmziConfig::path_overlap(double tau_ind) const {
  if (gamma) return *gamma;
  const double ratio = t_sl / tau_ind;
  return std::exp(-ratio * ratio * std::numbers::ln2);
}

RegimeFlags classify_regime(const UmziConfig& cfg, const SpectralModel& model) {
  return {model.delta * cfg.t_sl > 10.0, cfg.t_sl < 0.1 * model.tau_ind};
}

UmziPhase umzi_phase(double detuning, const UmziConfig& cfg) {
  return {2.0 * std::numbers::pi * (detuning * cfg.t_sl), cfg.phase};
}

double joint_phase(const UmziPhase& a, const UmziPhase& b) {
  return (a.dynamic + b.dynamic) + (a.setting + b.setting);
}

double party_detuning(const PhotonPair& pair, Party party) {
  return party == Party::A ? pair.signal_detuning() : pair.idler_detuning();
}

double PortAmplitudes::total_weight() const {
  return std::norm(port5.s) + std::norm(port5.l) + std::norm(port6.s) + std::norm(port6.l);
}

PortAmplitudes umzi_transfer(const UmziPhase& phase) {
  const double r = 1.0 / std::numbers::sqrt2;
  Eigen::Matrix2cd bs;
  bs << cd(r, 0), cd(0, r), cd(0, r), cd(r, 0);
  Eigen::Matrix2cd short_arm = Eigen::Matrix2cd::Zero();
  short_arm(0, 0) = 1.0;
  Eigen::Matrix2cd long_arm = Eigen::Matrix2cd::Zero();
  long_arm(1, 1) = -std::polar(1.0, phase.total());

  const Eigen::Vector2cd input(1.0, 0.0);
  const Eigen::Vector2cd via_s = bs * short_arm * bs * input;
  const Eigen::Vector2cd via_l = bs * long_arm * bs * input;
  return {{via_s(0), via_l(0)}, {via_s(1), via_l(1)}};
}

PortAmplitudes umzi_transfer(double detuning, const UmziConfig& cfg) {
  return umzi_transfer(umzi_phase(detuning, cfg));
}

LocalIntensity local_intensity(const PortAmplitudes& pa, double gamma) {
  auto port = [gamma](const PathAmplitudes& p) {
    return std::norm(p.s) + std::norm(p.l) + 2.0 * gamma * std::real(std::conj(p.s) * p.l);
  };
  return {port(pa.port5), port(pa.port6)};
}

LocalFringe ensemble_local_fringe(const SpectralModel& model, const UmziConfig& cfg,
                                  std::span<const double> phase_grid, std::size_t n_pairs,
                                  const CounterRng& rng) {
  check_phase_grid(phase_grid);
  if (n_pairs == 0) throw ConfigError("scan.pairs_per_point", "need at least one pair");

  PairSource source(model, rng);
  std::vector<double> detunings(n_pairs);
  for (auto& d : detunings) d = party_detuning(source.next(), cfg.party);

  LocalFringe out;
  out.gamma = cfg.path_overlap(model.tau_ind);
  out.phases.assign(phase_grid.begin(), phase_grid.end());
  for (double setting : phase_grid) {
    UmziConfig at = cfg;
    at.phase = setting;
    RunningMean mean;
    for (double d : detunings) mean.add(local_intensity(umzi_transfer(d, at), out.gamma).i5);
    out.mean_i5.push_back(mean.mean());
    out.stderr_i5.push_back(mean.standard_error());
  }
  out.fit = fit_sinusoid(out.phases, out.mean_i5, out.stderr_i5);
  return out;
}

double gaussian_characteristic(double fwhm, double lag) {
  const double x = std::numbers::pi * fwhm * lag;
  return std::exp(-x * x / (4.0 * std::numbers::ln2));
}

}  // namespace franson
