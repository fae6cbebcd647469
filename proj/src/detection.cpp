#include "franson/detection.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "franson/errors.hpp"

namespace franson {

Picoseconds to_picoseconds(double seconds) {
  return Picoseconds(std::llround(seconds * 1e12));
}

double to_seconds(Picoseconds t) {
  return static_cast<double>(t.count()) * 1e-12;
}

void DetectorModel::validate() const {
  if (!std::isfinite(jitter) || jitter < 0) throw ConfigError("jitter", "jitter must be >= 0");
  if (!(efficiency > 0 && efficiency <= 1)) throw ConfigError("efficiency", "efficiency must be in (0, 1]");
}

double two_photon_envelope(double delay, double bandwidth) {
  const double x = delay * bandwidth;
  return std::exp(-2.0 * std::numbers::ln2 * x * x);
}

PairDetection sample_event_pair(const PhotonPair& pair, const DetectionSetup& setup,
                                DrawSequence& draws) {
  const double envelope = two_photon_envelope(setup.tau_offset, setup.bandwidth);
  const OutcomeDistribution dist = outcome_distribution(pair, setup.a, setup.b, envelope);

  PairDetection out;
  const double u = draws.uniform();
  double cumulative = 0.0;
  bool chosen = false;
  for (Port a : kPorts) {
    for (Port b : kPorts) {
      for (Branch br : kBranches) {
        cumulative += dist.at(a, b, br);
        if (!chosen && u < cumulative) {
          out.port_a = a;
          out.port_b = b;
          out.branch = br;
          chosen = true;
        }
      }
    }
  }
  if (!chosen) {
    // u landed in the rounding slack above the last cumulative sum
    out.port_a = Port::Six;
    out.port_b = Port::Six;
    out.branch = Branch::LS;
  }

  int long_a = 0, long_b = 0;
  switch (out.branch) {
    case Branch::Central:
      long_a = long_b = draws.uniform() < 0.5 ? 0 : 1;
      break;
    case Branch::SL:
      long_b = 1;
      break;
    case Branch::LS:
      long_a = 1;
      break;
  }

  const double jitter_a = setup.detector.jitter * draws.standard_normal();
  const double jitter_b = setup.detector.jitter * draws.standard_normal();
  const double t_a = pair.t0 + long_a * setup.a.t_sl + jitter_a;
  const double t_b = pair.t0 + pair.eps + long_b * setup.b.t_sl + jitter_b - setup.tau_offset;

  const TagDiagnostics diag{out.branch, pair.id};
  if (draws.uniform() < setup.detector.efficiency) {
    out.tag_a = TimeTag(Party::A, out.port_a, to_picoseconds(t_a), diag);
  }
  if (draws.uniform() < setup.detector.efficiency) {
    out.tag_b = TimeTag(Party::B, out.port_b, to_picoseconds(t_b), diag);
  }
  return out;
}

namespace {

bool tag_order(const TimeTag& x, const TimeTag& y) {
  if (x.time() != y.time()) return x.time() < y.time();
  if (x.party() != y.party()) return x.party() < y.party();
  return x.oracle_diagnostics().pair_id < y.oracle_diagnostics().pair_id;
}

}  // namespace

TagStreams detect_pairs(std::span<const PhotonPair> pairs, const DetectionSetup& setup,
                        const CounterRng& rng) {
  TagStreams out;
  out.a.reserve(pairs.size());
  out.b.reserve(pairs.size());
  for (const PhotonPair& pair : pairs) {
    DrawSequence draws = rng.draws(pair.id);
    const PairDetection d = sample_event_pair(pair, setup, draws);
    if (d.tag_a) out.a.push_back(*d.tag_a);
    if (d.tag_b) out.b.push_back(*d.tag_b);
  }
  std::stable_sort(out.a.begin(), out.a.end(), tag_order);
  std::stable_sort(out.b.begin(), out.b.end(), tag_order);
  return out;
}

std::vector<TimeTag> merge_streams(const TagStreams& streams) {
  std::vector<TimeTag> out;
  out.reserve(streams.a.size() + streams.b.size());
  std::merge(streams.a.begin(), streams.a.end(), streams.b.begin(), streams.b.end(),
             std::back_inserter(out), tag_order);
  return out;
}

TagStreams split_streams(std::span<const TimeTag> tags) {
  TagStreams out;
  for (const TimeTag& t : tags) (t.party() == Party::A ? out.a : out.b).push_back(t);
  return out;
}

}  // namespace franson
