#include "franson/correlator.hpp"

#include <stdexcept>

#include "franson/errors.hpp"

namespace franson {

CorrelatorParams CorrelatorParams::defaults_for(double t_sl_seconds) {
  CorrelatorParams p;
  p.t_sl = to_picoseconds(t_sl_seconds);
  p.window = to_picoseconds(t_sl_seconds / 10);
  p.bin_width = std::max(Picoseconds(1), to_picoseconds(t_sl_seconds / 50));
  p.tau_max = to_picoseconds(2 * t_sl_seconds);
  return p;
}

void CorrelatorParams::validate() const {
  if (window.count() <= 0) throw ConfigError("correlator.window", "window must be > 0");
  if (bin_width.count() <= 0) throw ConfigError("correlator.bin_width", "bin_width must be > 0");
  if (t_sl.count() <= 0) throw ConfigError("t_sl", "t_sl must be at least 1 ps for correlation");
  if (tau_max < t_sl + 5 * bin_width) {
    throw ConfigError("correlator.tau_max", "tau_max must be >= t_sl + 5 * bin_width");
  }
  const auto reach = (center < Picoseconds(0) ? -center : center) + t_sl + window;
  if (tau_max < reach) {
    throw ConfigError("correlator.tau_max", "tau_max must cover |center| + t_sl + window");
  }
}

CoincidenceHistogram::CoincidenceHistogram(CorrelatorParams params) : params_(params) {
  params_.validate();
  const auto span = 2 * params_.tau_max.count();
  bins_ = static_cast<std::size_t>((span + params_.bin_width.count() - 1) / params_.bin_width.count());
  for (auto& c : counts_) c.assign(bins_, 0);
}

Picoseconds CoincidenceHistogram::bin_lower_edge(std::size_t k) const {
  return -params_.tau_max + static_cast<std::int64_t>(k) * params_.bin_width;
}

std::size_t CoincidenceHistogram::bin_of(Picoseconds tau) const {
  const auto k = static_cast<std::size_t>((tau + params_.tau_max) / params_.bin_width);
  return k < bins_ ? k : bins_ - 1;
}

PeakTotals CoincidenceHistogram::totals() const {
  PeakTotals sum;
  for (const auto& t : totals_) {
    sum.central += t.central;
    sum.side_plus += t.side_plus;
    sum.side_minus += t.side_minus;
  }
  return sum;
}

std::uint64_t CoincidenceHistogram::binned_total() const {
  std::uint64_t sum = 0;
  for (const auto& c : counts_)
    for (auto n : c) sum += n;
  return sum;
}

void CoincidenceHistogram::add(Port a, Port b, Picoseconds tau) {
  const std::size_t s = slot(a, b);
  ++counts_[s][bin_of(tau)];
  const auto rel = tau - params_.center;
  auto within = [w = params_.window](Picoseconds d) { return -w <= d && d <= w; };
  if (within(rel)) ++totals_[s].central;
  if (within(rel - params_.t_sl)) ++totals_[s].side_plus;
  if (within(rel + params_.t_sl)) ++totals_[s].side_minus;
}

CoincidenceHistogram correlate(std::span<const TimeTag> stream_a, std::span<const TimeTag> stream_b,
                               const CorrelatorParams& params) {
  CoincidenceHistogram hist(params);
  for (std::size_t i = 0; i < stream_b.size(); ++i) {
    if (stream_b[i].party() != Party::B) throw std::invalid_argument("correlate: stream B holds a party-A tag");
    if (i > 0 && stream_b[i].time() < stream_b[i - 1].time()) {
      throw std::invalid_argument("correlate: stream B is not sorted by time");
    }
  }

  const Picoseconds tau_max = params.tau_max;
  std::size_t lo = 0;
  std::uint64_t comparisons = 0;
  for (std::size_t i = 0; i < stream_a.size(); ++i) {
    const TimeTag& a = stream_a[i];
    if (a.party() != Party::A) throw std::invalid_argument("correlate: stream A holds a party-B tag");
    if (i > 0 && a.time() < stream_a[i - 1].time()) {
      throw std::invalid_argument("correlate: stream A is not sorted by time");
    }
    // B tags older than a - tau_max can never match a later A tag either
    while (lo < stream_b.size() && stream_b[lo].time() < a.time() - tau_max) {
      ++lo;
      ++comparisons;
    }
    for (std::size_t k = lo; k < stream_b.size(); ++k) {
      ++comparisons;
      const TimeTag& b = stream_b[k];
      if (b.time() > a.time() + tau_max) break;
      hist.add(a.port(), b.port(), a.time() - b.time());
    }
  }
  hist.comparisons_ = comparisons;
  return hist;
}

double PeakSummary::central_fraction() const {
  const auto n = all.all();
  return n > 0 ? static_cast<double>(all.central) / static_cast<double>(n) : 0.0;
}

PeakSummary peak_counts(const CoincidenceHistogram& hist) {
  PeakSummary out;
  for (Port a : kPorts)
    for (Port b : kPorts) out.by_ports[port_index(a)][port_index(b)] = hist.totals(a, b);
  out.all = hist.totals();
  return out;
}

}  // namespace franson
