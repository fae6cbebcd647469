#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "franson/random.hpp"

namespace franson {

/// FWHM of a Gaussian divided by its standard deviation, 2·sqrt(2 ln 2).
inline constexpr double kFwhmPerSigma = 2.3548200450309493;

/// Spectral structure of the down-conversion source.
///
/// `delta` is the FWHM of the single-photon frequency distribution; each
/// photon's detuning from `f0` is drawn from a Gaussian of that width.
/// The pump linewidth jitters the sum frequency of a pair.
struct SpectralModel {
  double f0 = 193.4e12;
  double delta = 1.0e12;
  double pump_linewidth = 0.0;
  double tau_ind = 10.0e-9;
  double pair_rate = 1.0e4;

  /// Throws ConfigError naming the first violated constraint.
  void validate() const;

  friend bool operator==(const SpectralModel&, const SpectralModel&) = default;
  /// Soft violations (e.g. delta not small against f0).
  std::vector<std::string> warnings() const;

  double detuning_sigma() const { return delta / kFwhmPerSigma; }
  double pump_sigma() const { return pump_linewidth / kFwhmPerSigma; }
  /// Two-photon relative delay spread; FWHM is 1/delta.
  double delay_sigma() const { return 1.0 / (delta * kFwhmPerSigma); }
};

/// One down-conversion emission event. The signal goes to party A, the
/// idler to party B.
struct PhotonPair {
  std::uint64_t id = 0;
  double df = 0.0;   ///< signal detuning; idler carries -df
  double dp = 0.0;   ///< pump frequency jitter, shared as dp/2 by both photons
  double xi = 0.0;   ///< global phase in [0, 2pi)
  double t0 = 0.0;   ///< emission time (s)
  double eps = 0.0;  ///< idler arrival delay relative to the signal (s)

  /// Offset of the signal frequency from f0.
  double signal_detuning() const { return dp / 2 + df; }
  double idler_detuning() const { return dp / 2 - df; }
  double signal_frequency(double f0) const { return (f0 + dp / 2) + df; }
  double idler_frequency(double f0) const { return (f0 + dp / 2) - df; }
};

/// Samples pair `id` of the sequence. All fields but `t0` depend only on
/// (seed, substream, id); `t0` is `previous_t0` plus an exponential gap.
PhotonPair sample_pair(const SpectralModel& model, const CounterRng& rng, std::uint64_t id,
                       double previous_t0);

/// Sequential view over the pair sequence of one substream; emission times
/// form a Poisson process at `model.pair_rate`.
class PairSource {
 public:
  PairSource(SpectralModel model, CounterRng rng) : model_(model), rng_(rng) {}

  PhotonPair next();
  std::vector<PhotonPair> take(std::size_t count);

  const SpectralModel& model() const { return model_; }

 private:
  SpectralModel model_;
  CounterRng rng_;
  std::uint64_t next_id_ = 0;
  double last_t0_ = 0.0;
};

}  // namespace franson
