#pragma once

#include <cmath>
#include <algorithm>
#include <cstddef>

namespace franson {

/// Welford accumulator. A constant sequence yields exactly that constant.
class RunningMean {
 public:
  void add(double x) {
    ++count_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
  }

  std::size_t count() const { return count_; }
  double mean() const { return mean_; }
  double variance() const { return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0; }
  double standard_error() const {
    return count_ > 0 ? std::sqrt(variance() / static_cast<double>(count_)) : 0.0;
  }

 private:
  std::size_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// Standard error of a binomial proportion k / n.
inline double binomial_stderr(double k, double n) {
  if (n <= 0) return 0.0;
  const double p = k / n;
  return std::sqrt(std::max(p * (1.0 - p), 0.0) / n);
}

}  // namespace franson
