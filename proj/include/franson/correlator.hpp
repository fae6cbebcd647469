#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "franson/detection.hpp"

namespace franson {

struct CorrelatorParams {
  Picoseconds window{10};     ///< half-width w of each peak window
  Picoseconds bin_width{2};
  Picoseconds tau_max{200};   ///< pairs with |t_A - t_B| <= tau_max are histogrammed
  Picoseconds t_sl{100};      ///< side-peak separation
  Picoseconds center{0};      ///< expected position of the central peak

  /// w = t_sl/10, bin = t_sl/50, tau_max = 2 t_sl.
  static CorrelatorParams defaults_for(double t_sl_seconds);

  /// Throws ConfigError on non-positive widths or a range that cannot hold
  /// both side peaks.
  void validate() const;
  bool overlapping_windows() const { return 2 * window >= t_sl; }
};

struct PeakTotals {
  std::uint64_t central = 0;
  std::uint64_t side_plus = 0;   ///< around center + t_sl
  std::uint64_t side_minus = 0;  ///< around center - t_sl

  std::uint64_t all() const { return central + side_plus + side_minus; }
  friend bool operator==(const PeakTotals&, const PeakTotals&) = default;
};

/// Counts of t_A - t_B per port pair.
class CoincidenceHistogram {
 public:
  explicit CoincidenceHistogram(CorrelatorParams params);

  const CorrelatorParams& params() const { return params_; }
  std::size_t bin_count() const { return bins_; }
  Picoseconds bin_lower_edge(std::size_t k) const;
  /// Bin holding `tau`, which must satisfy |tau| <= tau_max.
  std::size_t bin_of(Picoseconds tau) const;

  std::uint64_t count(Port a, Port b, std::size_t bin) const { return counts_[slot(a, b)][bin]; }
  const PeakTotals& totals(Port a, Port b) const { return totals_[slot(a, b)]; }
  PeakTotals totals() const;
  std::uint64_t binned_total() const;

  /// Candidate comparisons made while correlating.
  std::uint64_t comparisons() const { return comparisons_; }
  bool overlapping_windows() const { return params_.overlapping_windows(); }

  void add(Port a, Port b, Picoseconds tau);

  friend bool operator==(const CoincidenceHistogram& x, const CoincidenceHistogram& y) {
    return x.counts_ == y.counts_ && x.totals_ == y.totals_;
  }

 private:
  friend CoincidenceHistogram correlate(std::span<const TimeTag>, std::span<const TimeTag>,
                                        const CorrelatorParams&);
  static std::size_t slot(Port a, Port b) {
    return static_cast<std::size_t>(port_index(a) * 2 + port_index(b));
  }

  CorrelatorParams params_;
  std::size_t bins_;
  std::array<std::vector<std::uint64_t>, 4> counts_;
  std::array<PeakTotals, 4> totals_{};
  std::uint64_t comparisons_ = 0;
};

/// Single forward pass over two time-sorted streams (A then B). Throws
/// std::invalid_argument if a stream is unsorted or holds the other party's
/// tags. Reads only party, port and time of each tag.
CoincidenceHistogram correlate(std::span<const TimeTag> stream_a, std::span<const TimeTag> stream_b,
                               const CorrelatorParams& params);

struct PeakSummary {
  std::array<std::array<PeakTotals, 2>, 2> by_ports{};
  PeakTotals all;

  const PeakTotals& at(Port a, Port b) const { return by_ports[port_index(a)][port_index(b)]; }
  /// central / (central + both sides)
  double central_fraction() const;
};

PeakSummary peak_counts(const CoincidenceHistogram& hist);

}  // namespace franson
