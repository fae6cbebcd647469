#include "franson/source.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "franson/errors.hpp"

namespace franson {

void SpectralModel::validate() const {
  auto require = [](bool ok, const char* field, const char* constraint) {
    if (!ok) throw ConfigError(field, constraint);
  };
  require(std::isfinite(f0) && f0 > 0, "f0", "f0 must be > 0");
  require(std::isfinite(delta) && delta > 0, "delta", "delta must be > 0");
  require(std::isfinite(pump_linewidth) && pump_linewidth >= 0, "pump_linewidth",
          "pump_linewidth must be >= 0");
  require(std::isfinite(tau_ind) && tau_ind > 0, "tau_ind", "tau_ind must be > 0");
  require(std::isfinite(pair_rate) && pair_rate > 0, "pair_rate", "pair_rate must be > 0");
  require(tau_ind * delta >= 1.0, "tau_ind",
          "tau_ind * delta must be >= 1 (individual coherence not shorter than ensemble coherence)");
}

std::vector<std::string> SpectralModel::warnings() const {
  std::vector<std::string> out;
  if (delta >= 0.01 * f0) out.emplace_back("delta is not small against f0 (delta >= 0.01 f0)");
  return out;
}

PhotonPair sample_pair(const SpectralModel& model, const CounterRng& rng, std::uint64_t id,
                       double previous_t0) {
  auto draws = rng.draws(id);
  PhotonPair pair;
  pair.id = id;
  pair.df = model.detuning_sigma() * draws.standard_normal();
  pair.dp = model.pump_sigma() * draws.standard_normal();
  pair.xi = 2.0 * std::numbers::pi * draws.uniform();
  if (pair.xi >= 2.0 * std::numbers::pi) pair.xi = 0.0;
  pair.eps = model.delay_sigma() * draws.standard_normal();

  const double gap = draws.exponential() / model.pair_rate;
  pair.t0 = previous_t0 + gap;
  if (!(pair.t0 > previous_t0)) pair.t0 = std::nextafter(previous_t0, INFINITY);

  if (!std::isfinite(pair.df) || !std::isfinite(pair.dp) || !std::isfinite(pair.eps) ||
      !std::isfinite(pair.t0)) {
    throw std::logic_error("sample_pair produced a non-finite value");
  }
  return pair;
}

PhotonPair PairSource::next() {
  PhotonPair pair = sample_pair(model_, rng_, next_id_++, last_t0_);
  last_t0_ = pair.t0;
  return pair;
}

std::vector<PhotonPair> PairSource::take(std::size_t count) {
  std::vector<PhotonPair> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(next());
  return out;
}

}  // namespace franson
