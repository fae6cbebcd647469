#pragma once

#include <array>
#include <complex>
#include <cstdint>

#include "franson/interferometer.hpp"
#include "franson/random.hpp"
#include "franson/source.hpp"

namespace franson {

/// Which arm each photon of a detected pair took. Central covers the
/// indistinguishable S-S and L-L products.
enum class Branch : std::uint8_t { Central, SL, LS };

inline constexpr Branch kBranches[3] = {Branch::Central, Branch::SL, Branch::LS};

const char* branch_name(Branch b);

/// Joint probabilities over (port_A, port_B, branch).
class OutcomeDistribution {
 public:
  double& at(Port a, Port b, Branch br) { return p_[index(a, b, br)]; }
  double at(Port a, Port b, Branch br) const { return p_[index(a, b, br)]; }

  const std::array<double, 12>& entries() const { return p_; }
  double total() const;
  double central_total() const;
  double marginal_a(Port a) const;
  double marginal_b(Port b) const;

  static std::size_t index(Port a, Port b, Branch br) {
    return static_cast<std::size_t>(port_index(a) * 6 + port_index(b) * 3 + static_cast<int>(br));
  }

 private:
  std::array<double, 12> p_{};
};

/// S-S plus L-L amplitude for one port pair, built from the two single-photon
/// transfers. The S-L and L-S products are excluded: they arrive t_sl apart
/// and never fall in the central coincidence window.
std::complex<double> joint_central_amplitude(const PhotonPair& pair, const UmziConfig& cfg_a,
                                             const UmziConfig& cfg_b, Port port_a, Port port_b);

/// (1/8)(1 + s_A s_B V cos(phi' + psi')), where `envelope` V in [0, 1] is the
/// two-photon overlap factor.
double central_peak_rate(const PhotonPair& pair, const UmziConfig& cfg_a, const UmziConfig& cfg_b,
                         Port port_a, Port port_b, double envelope = 1.0);

/// Central entries from central_peak_rate, every side entry 1/16.
OutcomeDistribution outcome_distribution(const PhotonPair& pair, const UmziConfig& cfg_a,
                                         const UmziConfig& cfg_b, double envelope = 1.0);

/// 2x2 table indexed by [port_index(a)][port_index(b)].
using PortTable = std::array<std::array<double, 2>, 2>;

struct EnsembleRates {
  PortTable rate{};
  PortTable stderr_rate{};
  std::size_t pairs = 0;

  double at(Port a, Port b) const { return rate[port_index(a)][port_index(b)]; }
};

/// Mean central rate over `n_pairs` sampled pairs. For dp = 0 every pair
/// contributes the same value, so the mean is exact.
EnsembleRates ensemble_fringe(const SpectralModel& model, const UmziConfig& cfg_a,
                              const UmziConfig& cfg_b, std::size_t n_pairs, const CounterRng& rng,
                              double envelope = 1.0);

/// (R55 + R66 - R56 - R65) / (R55 + R66 + R56 + R65). Throws std::domain_error
/// when the total is zero.
double correlation_value(const PortTable& r);

struct ChshSettings {
  double a = 0.0;
  double a_prime = 0.0;
  double b = 0.0;
  double b_prime = 0.0;

  friend bool operator==(const ChshSettings&, const ChshSettings&) = default;
};

/// The four CHSH combinations, form k carrying the minus sign on term k of
/// (E(a,b), E(a,b'), E(a',b), E(a',b')).
std::array<double, 4> chsh_forms(const std::array<double, 4>& e);

struct ChshResult {
  std::array<double, 4> correlations{};  ///< E(a,b), E(a,b'), E(a',b), E(a',b')
  std::array<double, 4> forms{};
  double s = 0.0;  ///< max over the forms
};

ChshResult chsh_from_correlations(const std::array<double, 4>& e);

ChshResult chsh_value(const SpectralModel& model, const UmziConfig& cfg_a, const UmziConfig& cfg_b,
                      const ChshSettings& settings, std::size_t n_pairs, const CounterRng& rng,
                      double envelope = 1.0);

}  // namespace franson
