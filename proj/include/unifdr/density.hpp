// Kernel density estimation on filtered p-values and extraction of the
// sample mode, optionally on the -log p axis, plus the schedule-driven
// stabilization heuristic for picking the retained fraction.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "unifdr/filters.hpp"
#include "unifdr/mixtures.hpp"

namespace unifdr {

double sample_sd(std::span<const double> values);

// Interquartile range with linear interpolation between order statistics.
double sample_iqr(std::span<const double> values);

// min(sd, IQR/1.34); 0 for degenerate samples.
double bandwidth_scale(std::span<const double> values);

// h = 0.9 * scale * n^{-1/5}.  The exponent keeps h -> 0 and n h^2 -> infinity
// as n grows.  Zero dispersion falls back to n^{-1/5}.
double bandwidth_rule(std::size_t n, double scale);

// Gaussian-kernel density estimate (1/(n h)) sum K((t - x_j)/h).
double kde_eval(std::span<const double> points, double h, double t);

// Same estimate with boundary reflection at lo and hi; integrates to ~1 over
// [lo, hi] and removes the downward bias of plain KDE near the edges.
double kde_eval_reflected(std::span<const double> points, double h, double t,
                          double lo = 0.0, double hi = 1.0);

struct ModeEstimate {
  double theta_hat = 0.0;     // mode location on the p axis
  double bandwidth = 0.0;     // on the estimation axis (p or -log p)
  bool transformed = false;   // estimated on the -log p axis
  std::size_t grid_resolution = 0;
};

struct ModeOptions {
  bool transform = false;
  std::size_t grid_resolution = 4096;
  double bandwidth = 0.0;  // > 0 overrides the plug-in rule
};

// Grid argmax of the estimated density.  Without the transform this is the
// reflected KDE on (0,1); with it, the density g of y = -log p is estimated
// and mapped back through g(-log t)/t before taking the argmax.
ModeEstimate estimate_mode(std::span<const double> retained, const ModeOptions& options = {});

struct StabilizedXi {
  double xi_hat = 0.0;
  ModeEstimate mode;
  bool stabilized = false;
  std::vector<std::pair<double, double>> trace;  // (xi, theta_hat) per step
};

// Walks the decreasing xi schedule, filtering and re-estimating the mode,
// and stops as soon as consecutive estimates move by less than
// `stability_threshold`; the returned xi is the second-to-last one visited.
StabilizedXi stabilized_xi(const LabeledPValues& sample, double stability_threshold,
                           std::span<const double> schedule, const ModeOptions& options = {},
                           Direction direction = Direction::ascending);

}  // namespace unifdr
