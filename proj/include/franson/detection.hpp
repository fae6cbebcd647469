#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "franson/correlation.hpp"
#include "franson/interferometer.hpp"
#include "franson/random.hpp"
#include "franson/source.hpp"

namespace franson {

using Picoseconds = std::chrono::duration<std::int64_t, std::pico>;

/// Round-to-nearest conversion from seconds.
Picoseconds to_picoseconds(double seconds);
double to_seconds(Picoseconds t);

struct DetectorModel {
  double jitter = 2e-12;  ///< RMS timing jitter (s)
  double efficiency = 1.0;

  void validate() const;

  friend bool operator==(const DetectorModel&, const DetectorModel&) = default;
};

/// Simulation bookkeeping attached to a tag. Correlation code must never
/// read it; only oracle checks in tests do.
struct TagDiagnostics {
  Branch branch = Branch::Central;
  std::uint64_t pair_id = 0;

  friend bool operator==(const TagDiagnostics&, const TagDiagnostics&) = default;
};

class TimeTag {
 public:
  TimeTag() = default;
  TimeTag(Party party, Port port, Picoseconds time, TagDiagnostics diag = {})
      : party_(party), port_(port), time_(time), diag_(diag) {}

  Party party() const { return party_; }
  Port port() const { return port_; }
  Picoseconds time() const { return time_; }

  const TagDiagnostics& oracle_diagnostics() const { return diag_; }
  TimeTag without_diagnostics() const { return TimeTag(party_, port_, time_); }

  friend bool operator==(const TimeTag&, const TimeTag&) = default;

 private:
  Party party_ = Party::A;
  Port port_ = Port::Five;
  Picoseconds time_{0};
  TagDiagnostics diag_{};
};

/// Everything needed to turn a pair into detections.
struct DetectionSetup {
  UmziConfig a;
  UmziConfig b = umzi_for(Party::B);
  DetectorModel detector;
  double bandwidth = 1e12;  ///< ensemble FWHM, sets the two-photon envelope width
  double tau_offset = 0.0;  ///< imposed t_A - t_B shift of the coincidence peaks (s)
};

/// exp(-2 ln2 (delay * bandwidth)^2): two-photon overlap factor for a delay
/// mismatch between the photons of a pair.
double two_photon_envelope(double delay, double bandwidth);

struct PairDetection {
  Port port_a = Port::Five;
  Port port_b = Port::Five;
  Branch branch = Branch::Central;
  std::optional<TimeTag> tag_a;
  std::optional<TimeTag> tag_b;

  int tag_count() const { return (tag_a ? 1 : 0) + (tag_b ? 1 : 0); }
};

/// Samples ports and branch from the outcome distribution and assigns times.
/// A central event is labelled S-S or L-L at random to anchor its absolute
/// times; the label is unobservable since only t_A - t_B enters any result.
PairDetection sample_event_pair(const PhotonPair& pair, const DetectionSetup& setup,
                                DrawSequence& draws);

struct TagStreams {
  std::vector<TimeTag> a;
  std::vector<TimeTag> b;
};

/// Detection for a batch of pairs; each pair uses draws keyed by its id.
/// Both streams are sorted by time, ties broken by pair id.
TagStreams detect_pairs(std::span<const PhotonPair> pairs, const DetectionSetup& setup,
                        const CounterRng& rng);

/// Both streams merged in (time, party, pair id) order.
std::vector<TimeTag> merge_streams(const TagStreams& streams);
/// Inverse of merge_streams; input order preserved within each party.
TagStreams split_streams(std::span<const TimeTag> tags);

}  // namespace franson
