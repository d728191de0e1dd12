#include "unifdr/density.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace unifdr {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014326779399460599343819;

double gauss_kernel(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

double quantile_type7(std::vector<double>& sorted, double q) {
  const std::size_t n = sorted.size();
  const double pos = q * static_cast<double>(n - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const double frac = pos - static_cast<double>(lo);
  if (lo + 1 >= n) return sorted[n - 1];
  return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
}

}  // namespace

double sample_sd(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) return 0.0;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(n - 1));
}

double sample_iqr(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  return quantile_type7(sorted, 0.75) - quantile_type7(sorted, 0.25);
}

double bandwidth_scale(std::span<const double> values) {
  const double sd = sample_sd(values);
  const double iqr = sample_iqr(values);
  if (sd <= 0.0 && iqr <= 0.0) return 0.0;
  if (iqr <= 0.0) return sd;
  if (sd <= 0.0) return iqr / 1.34;
  return std::min(sd, iqr / 1.34);
}

double bandwidth_rule(std::size_t n, double scale) {
  if (n < 2) throw std::invalid_argument("bandwidth_rule: n >= 2 required");
  const double shrink = std::pow(static_cast<double>(n), -0.2);
  if (!(scale > 0.0)) return shrink;  // degenerate sample fallback
  return 0.9 * scale * shrink;
}

double kde_eval(std::span<const double> points, double h, double t) {
  if (!(h > 0.0)) throw std::invalid_argument("kde_eval: h > 0 required");
  if (points.empty()) throw std::invalid_argument("kde_eval: empty sample");
  double sum = 0.0;
  for (double x : points) {
    const double z = (t - x) / h;
    if (std::fabs(z) < 39.0) sum += gauss_kernel(z);
  }
  return sum / (static_cast<double>(points.size()) * h);
}

double kde_eval_reflected(std::span<const double> points, double h, double t,
                          double lo, double hi) {
  if (!(h > 0.0)) throw std::invalid_argument("kde_eval_reflected: h > 0 required");
  if (points.empty()) throw std::invalid_argument("kde_eval_reflected: empty sample");
  double sum = 0.0;
  for (double x : points) {
    const double z0 = (t - x) / h;
    const double zlo = (t - (2.0 * lo - x)) / h;  // mirror image at lo
    const double zhi = (t - (2.0 * hi - x)) / h;  // mirror image at hi
    if (std::fabs(z0) < 39.0) sum += gauss_kernel(z0);
    if (std::fabs(zlo) < 39.0) sum += gauss_kernel(zlo);
    if (std::fabs(zhi) < 39.0) sum += gauss_kernel(zhi);
  }
  return sum / (static_cast<double>(points.size()) * h);
}

ModeEstimate estimate_mode(std::span<const double> retained, const ModeOptions& options) {
  if (retained.size() < 10) throw std::invalid_argument("estimate_mode: need >= 10 values");
  if (options.grid_resolution < 256)
    throw std::invalid_argument("estimate_mode: grid_resolution >= 256 required");

  const std::size_t grid = options.grid_resolution;
  ModeEstimate est;
  est.transformed = options.transform;
  est.grid_resolution = grid;

  // Bandwidths below one grid step would let the whole estimate fall
  // between evaluation points; the search cannot resolve finer anyway.
  const double h_floor = 1.0 / static_cast<double>(grid);

  if (!options.transform) {
    const double h = std::max(h_floor,
                              (options.bandwidth > 0.0)
                                  ? options.bandwidth
                                  : bandwidth_rule(retained.size(), bandwidth_scale(retained)));
    est.bandwidth = h;
    double best = -1.0;
    double best_t = 0.5;
    for (std::size_t i = 0; i < grid; ++i) {
      const double t = (static_cast<double>(i) + 0.5) / static_cast<double>(grid);
      const double f = kde_eval_reflected(retained, h, t);
      if (f > best) {
        best = f;
        best_t = t;
      }
    }
    est.theta_hat = best_t;
    return est;
  }

  std::vector<double> logs(retained.size());
  for (std::size_t i = 0; i < retained.size(); ++i) logs[i] = -std::log(retained[i]);
  const double h = std::max(h_floor, (options.bandwidth > 0.0)
                                         ? options.bandwidth
                                         : bandwidth_rule(logs.size(), bandwidth_scale(logs)));
  est.bandwidth = h;
  double best = -1.0;
  double best_t = 0.5;
  for (std::size_t i = 0; i < grid; ++i) {
    const double t = (static_cast<double>(i) + 0.5) / static_cast<double>(grid);
    // Density on the p axis recovered through the change of variables.
    const double f = kde_eval(logs, h, -std::log(t)) / t;
    if (f > best) {
      best = f;
      best_t = t;
    }
  }
  est.theta_hat = best_t;
  return est;
}

StabilizedXi stabilized_xi(const LabeledPValues& sample, double stability_threshold,
                           std::span<const double> schedule, const ModeOptions& options,
                           Direction direction) {
  if (schedule.empty()) throw std::invalid_argument("stabilized_xi: empty schedule");
  if (schedule.front() != 0.5)
    throw std::invalid_argument("stabilized_xi: schedule must start at 1/2");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (!(schedule[i] > 0.0 && schedule[i] < 1.0))
      throw std::invalid_argument("stabilized_xi: schedule values must be in (0,1)");
    if (i > 0 && !(schedule[i] < schedule[i - 1]))
      throw std::invalid_argument("stabilized_xi: schedule must be strictly decreasing");
  }
  if (!(stability_threshold > 0.0))
    throw std::invalid_argument("stabilized_xi: threshold must be positive");

  StabilizedXi result;
  ModeEstimate prev_mode;
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    FilterConfig cfg;
    cfg.xi = schedule[k];
    cfg.direction = direction;
    const FilterResult filtered = fixed_length_filter(sample, cfg);
    const std::vector<double> kept = filtered.retained_values();
    const ModeEstimate mode = estimate_mode(kept, options);
    result.trace.emplace_back(schedule[k], mode.theta_hat);
    if (k > 0 && std::fabs(mode.theta_hat - prev_mode.theta_hat) < stability_threshold) {
      result.xi_hat = schedule[k - 1];  // second-to-last visited
      result.mode = prev_mode;
      result.stabilized = true;
      return result;
    }
    prev_mode = mode;
  }
  result.xi_hat = schedule.back();
  result.mode = prev_mode;
  result.stabilized = false;
  return result;
}

}  // namespace unifdr
