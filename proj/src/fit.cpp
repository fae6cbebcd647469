#include "franson/fit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "franson/errors.hpp"

namespace franson {

double wrap_phase(double angle) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double wrapped = std::remainder(angle, two_pi);
  if (wrapped <= -std::numbers::pi) wrapped += two_pi;
  return wrapped;
}

SinusoidFit fit_sinusoid(std::span<const double> x, std::span<const double> y,
                         std::span<const double> sigma, int harmonic) {
  if (x.size() != y.size() || (!sigma.empty() && sigma.size() != x.size())) {
    throw std::invalid_argument("fit_sinusoid: mismatched input lengths");
  }
  SinusoidFit fit;
  const auto n = static_cast<Eigen::Index>(x.size());
  if (n < 3) return fit;

  Eigen::MatrixXd design(n, 3);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double arg = harmonic * x[static_cast<std::size_t>(i)];
    design(i, 0) = 1.0;
    design(i, 1) = std::cos(arg);
    design(i, 2) = std::sin(arg);
    rhs(i) = y[static_cast<std::size_t>(i)];
  }

  const Eigen::Matrix3d normal = design.transpose() * design;
  Eigen::FullPivLU<Eigen::Matrix3d> lu(normal);
  lu.setThreshold(1e-10);
  if (!lu.isInvertible()) return fit;
  const Eigen::Matrix3d normal_inv = lu.inverse();
  const Eigen::Vector3d coeff = normal_inv * (design.transpose() * rhs);

  fit.ok = true;
  fit.offset = coeff(0);
  fit.cos_coeff = coeff(1);
  fit.sin_coeff = coeff(2);
  fit.amplitude = std::hypot(coeff(1), coeff(2));
  fit.phase = wrap_phase(std::atan2(-coeff(2), coeff(1)));
  fit.visibility = fit.offset != 0.0 ? fit.amplitude / std::abs(fit.offset) : 0.0;

  const Eigen::VectorXd resid = rhs - design * coeff;
  fit.residual_rms = std::sqrt(resid.squaredNorm() / static_cast<double>(n));

  if (!sigma.empty()) {
    // sandwich covariance for OLS with known per-point variances
    Eigen::MatrixXd weighted = design;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double s = sigma[static_cast<std::size_t>(i)];
      weighted.row(i) *= s * s;
    }
    const Eigen::Matrix3d cov = normal_inv * (design.transpose() * weighted) * normal_inv;
    fit.cos_error = std::sqrt(std::max(cov(1, 1), 0.0));
    fit.sin_error = std::sqrt(std::max(cov(2, 2), 0.0));

    // delta method on V = hypot(c, s) / a and phase = atan2(-s, c)
    const double a = fit.offset, c = fit.cos_coeff, s = fit.sin_coeff, r = fit.amplitude;
    if (r > 0.0 && a != 0.0) {
      const Eigen::Vector3d grad_v(-r / (a * a), c / (r * a), s / (r * a));
      fit.visibility_error = std::sqrt(std::max(grad_v.dot(cov * grad_v), 0.0));
      const Eigen::Vector3d grad_p(0.0, s / (r * r), -c / (r * r));
      fit.phase_error = std::sqrt(std::max(grad_p.dot(cov * grad_p), 0.0));
    } else if (a != 0.0) {
      // at zero amplitude the visibility error is set by the component errors
      fit.visibility_error = std::hypot(fit.cos_error, fit.sin_error) / std::abs(a);
      fit.phase_error = std::numbers::pi;
    }
  }

  const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
  if (*hi + *lo != 0.0) fit.maxmin_visibility = (*hi - *lo) / (*hi + *lo);
  return fit;
}

std::vector<double> uniform_phase_grid(std::size_t count, double start) {
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) {
    grid[i] = start + 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(count);
  }
  return grid;
}

void check_phase_grid(std::span<const double> grid) {
  if (grid.size() < 8) throw ConfigError("scan.points", "phase grid needs at least 8 points");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw ConfigError("scan.points", "phase grid must be strictly increasing");
  }
  const double span = grid.back() - grid.front();
  const double mean_step = span / static_cast<double>(grid.size() - 1);
  if (span + mean_step < 2.0 * std::numbers::pi * (1.0 - 1e-9)) {
    throw ConfigError("scan.points", "phase grid must cover a full 2pi period");
  }
}

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  if (count < 2 || !(lo > 0) || !(hi > lo)) throw std::invalid_argument("log_grid: bad range");
  std::vector<double> grid(count);
  const double step = std::log(hi / lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) grid[i] = lo * std::exp(step * static_cast<double>(i));
  grid.back() = hi;
  return grid;
}

}  // namespace franson
