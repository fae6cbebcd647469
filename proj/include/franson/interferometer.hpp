#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "franson/fit.hpp"
#include "franson/random.hpp"
#include "franson/source.hpp"

namespace franson {

enum class Party : std::uint8_t { A, B };
enum class Port : std::uint8_t { Five = 5, Six = 6 };

inline constexpr Port kPorts[2] = {Port::Five, Port::Six};

inline int port_index(Port p) { return p == Port::Five ? 0 : 1; }
/// +1 for port 5, -1 for port 6.
inline int port_sign(Port p) { return p == Port::Five ? 1 : -1; }

/// One party's unbalanced Mach-Zehnder interferometer.
struct UmziConfig {
  Party party = Party::A;
  double t_sl = 100e-12;  ///< long-minus-short delay (s)
  double phase = 0.0;     ///< controllable setting (rad), carrier term already absorbed
  std::optional<double> gamma;  ///< path overlap <S|L>; derived from tau_ind when unset

  void validate() const;

  friend bool operator==(const UmziConfig&, const UmziConfig&) = default;
  /// exp(-(t_sl / tau_ind)^2 ln 2) unless overridden.
  double path_overlap(double tau_ind) const;
};

inline UmziConfig umzi_for(Party party) {
  UmziConfig cfg;
  cfg.party = party;
  return cfg;
}

struct RegimeFlags {
  bool incoherent_ensemble = false;  ///< delta * t_sl > 10
  bool individual_coherent = false;  ///< t_sl < 0.1 tau_ind
  bool critical_condition() const { return incoherent_ensemble && individual_coherent; }
};

RegimeFlags classify_regime(const UmziConfig& cfg, const SpectralModel& model);

/// Relative phase between the long and short arm for one photon, kept as the
/// detuning-driven part and the controllable setting separately so that
/// opposite detunings cancel exactly when two phases are combined.
struct UmziPhase {
  double dynamic = 0.0;  ///< 2pi * detuning * t_sl
  double setting = 0.0;

  double total() const { return dynamic + setting; }
};

UmziPhase umzi_phase(double detuning, const UmziConfig& cfg);

/// phi' + psi', summing the detuning parts before adding the settings.
double joint_phase(const UmziPhase& a, const UmziPhase& b);

/// The detuning of the photon that `cfg.party` receives from `pair`.
double party_detuning(const PhotonPair& pair, Party party);

/// Path-basis coefficients at one output port.
struct PathAmplitudes {
  std::complex<double> s;
  std::complex<double> l;
};

struct PortAmplitudes {
  PathAmplitudes port5;
  PathAmplitudes port6;

  const PathAmplitudes& operator[](Port p) const { return p == Port::Five ? port5 : port6; }
  double total_weight() const;
};

/// Single-photon transfer BS * [path projector] * [arm phase] * BS applied to
/// a unit input in port 1. The input global phase is dropped.
PortAmplitudes umzi_transfer(const UmziPhase& phase);
PortAmplitudes umzi_transfer(double detuning, const UmziConfig& cfg);

struct LocalIntensity {
  double i5 = 0.0;
  double i6 = 0.0;
};

/// Mean port intensities of one photon, where `gamma` is the overlap between
/// the short- and long-path wave packets.
LocalIntensity local_intensity(const PortAmplitudes& pa, double gamma);

struct LocalFringe {
  std::vector<double> phases;
  std::vector<double> mean_i5;
  std::vector<double> stderr_i5;
  SinusoidFit fit;
  double gamma = 1.0;

  double visibility() const { return fit.visibility; }
};

/// Ensemble-averaged port-5 intensity versus the interferometer setting. The
/// same `n_pairs` pairs are reused at every phase.
LocalFringe ensemble_local_fringe(const SpectralModel& model, const UmziConfig& cfg,
                                  std::span<const double> phase_grid, std::size_t n_pairs,
                                  const CounterRng& rng);

/// |E exp(2pi i f T)| for Gaussian f with the given FWHM.
double gaussian_characteristic(double fwhm, double lag);

}  // namespace franson
