#include "franson/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "franson/stats.hpp"

namespace franson {

const char* branch_name(Branch b) {
  switch (b) {
    case Branch::Central: return "central";
    case Branch::SL: return "SL";
    case Branch::LS: return "LS";
  }
  return "?";
}

double OutcomeDistribution::total() const {
  double sum = 0.0;
  for (double p : p_) sum += p;
  return sum;
}

double OutcomeDistribution::central_total() const {
  double sum = 0.0;
  for (Port a : kPorts)
    for (Port b : kPorts) sum += at(a, b, Branch::Central);
  return sum;
}

double OutcomeDistribution::marginal_a(Port a) const {
  double sum = 0.0;
  for (Port b : kPorts)
    for (Branch br : kBranches) sum += at(a, b, br);
  return sum;
}

double OutcomeDistribution::marginal_b(Port b) const {
  double sum = 0.0;
  for (Port a : kPorts)
    for (Branch br : kBranches) sum += at(a, b, br);
  return sum;
}

std::complex<double> joint_central_amplitude(const PhotonPair& pair, const UmziConfig& cfg_a,
                                             const UmziConfig& cfg_b, Port port_a, Port port_b) {
  const PathAmplitudes a = umzi_transfer(party_detuning(pair, cfg_a.party), cfg_a)[port_a];
  const PathAmplitudes b = umzi_transfer(party_detuning(pair, cfg_b.party), cfg_b)[port_b];
  return a.s * b.s + a.l * b.l;
}

double central_peak_rate(const PhotonPair& pair, const UmziConfig& cfg_a, const UmziConfig& cfg_b,
                         Port port_a, Port port_b, double envelope) {
  const double theta = joint_phase(umzi_phase(party_detuning(pair, cfg_a.party), cfg_a),
                                   umzi_phase(party_detuning(pair, cfg_b.party), cfg_b));
  const int parity = port_sign(port_a) * port_sign(port_b);
  return 0.125 * (1.0 + parity * envelope * std::cos(theta));
}

OutcomeDistribution outcome_distribution(const PhotonPair& pair, const UmziConfig& cfg_a,
                                         const UmziConfig& cfg_b, double envelope) {
  OutcomeDistribution d;
  for (Port a : kPorts) {
    for (Port b : kPorts) {
      d.at(a, b, Branch::Central) = central_peak_rate(pair, cfg_a, cfg_b, a, b, envelope);
      d.at(a, b, Branch::SL) = 0.0625;
      d.at(a, b, Branch::LS) = 0.0625;
    }
  }
  return d;
}

EnsembleRates ensemble_fringe(const SpectralModel& model, const UmziConfig& cfg_a,
                              const UmziConfig& cfg_b, std::size_t n_pairs, const CounterRng& rng,
                              double envelope) {
  if (n_pairs == 0) throw std::invalid_argument("ensemble_fringe: need at least one pair");
  std::array<std::array<RunningMean, 2>, 2> acc;
  PairSource source(model, rng);
  for (std::size_t j = 0; j < n_pairs; ++j) {
    const PhotonPair pair = source.next();
    for (Port a : kPorts)
      for (Port b : kPorts)
        acc[port_index(a)][port_index(b)].add(central_peak_rate(pair, cfg_a, cfg_b, a, b, envelope));
  }
  EnsembleRates out;
  out.pairs = n_pairs;
  for (int i = 0; i < 2; ++i) {
    for (int k = 0; k < 2; ++k) {
      out.rate[i][k] = acc[i][k].mean();
      out.stderr_rate[i][k] = acc[i][k].standard_error();
    }
  }
  return out;
}

double correlation_value(const PortTable& r) {
  const double same = r[0][0] + r[1][1];
  const double diff = r[0][1] + r[1][0];
  const double total = same + diff;
  if (!(total > 0.0)) throw std::domain_error("correlation undefined: zero total central rate");
  return (same - diff) / total;
}

std::array<double, 4> chsh_forms(const std::array<double, 4>& e) {
  std::array<double, 4> forms{};
  const double sum = e[0] + e[1] + e[2] + e[3];
  for (std::size_t k = 0; k < 4; ++k) forms[k] = std::abs(sum - 2.0 * e[k]);
  return forms;
}

ChshResult chsh_from_correlations(const std::array<double, 4>& e) {
  ChshResult out;
  out.correlations = e;
  out.forms = chsh_forms(e);
  out.s = *std::max_element(out.forms.begin(), out.forms.end());
  return out;
}

ChshResult chsh_value(const SpectralModel& model, const UmziConfig& cfg_a, const UmziConfig& cfg_b,
                      const ChshSettings& settings, std::size_t n_pairs, const CounterRng& rng,
                      double envelope) {
  const std::array<std::pair<double, double>, 4> combos = {{{settings.a, settings.b},
                                                            {settings.a, settings.b_prime},
                                                            {settings.a_prime, settings.b},
                                                            {settings.a_prime, settings.b_prime}}};
  std::array<double, 4> e{};
  for (std::size_t k = 0; k < 4; ++k) {
    UmziConfig a = cfg_a, b = cfg_b;
    a.phase = combos[k].first;
    b.phase = combos[k].second;
    e[k] = correlation_value(ensemble_fringe(model, a, b, n_pairs, rng, envelope).rate);
  }
  return chsh_from_correlations(e);
}

}  // namespace franson
