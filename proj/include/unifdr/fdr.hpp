// FDR machinery: window and threshold estimators of the alternative
// fraction, FDR/pFDR estimates for interval rejection regions centered at an
// estimated mode, data-dependent selection of the region half-width, the
// Benjamini-Hochberg baseline, and confusion scoring against ground truth.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace unifdr {

struct RejectionRegion {
  double center = 0.0;
  double delta = 0.0;  // half-width, >= 0

  double lo() const { return std::max(0.0, center - delta); }
  double hi() const { return std::min(1.0, center + delta); }
  // Uniform-null mass of the region: its length after clipping to [0,1].
  double length() const { return std::max(0.0, hi() - lo()); }
};

// Number of p-values with |p - center| <= delta.
std::size_t count_rejections(std::span<const double> pvals, const RejectionRegion& region);

struct EpsilonWindow {
  double epsilon_hat = 0.0;  // clamped into [0,1]
  std::size_t W = 0;         // #{ |p_i - theta_hat| > xi/2 }
};

// Window analogue of the threshold estimator: 1 - eps_hat = W / ((1-xi) m).
EpsilonWindow estimate_epsilon_window(std::span<const double> pvals, double theta_hat,
                                      double xi);

// Threshold estimator: 1 - eps_hat = #{p_i > lambda} / ((1-lambda) m),
// clamped into [0,1].
double storey_epsilon(std::span<const double> pvals, double lambda);

// FDR estimate for the region of half-width delta centered at theta, in the
// literal half-width form W * delta / ((1-xi) * max(R,1)).
double fdr_hat(std::span<const double> pvals, double theta, double delta, double xi);

// Same estimator with the region's clipped length in place of delta, so the
// numerator matches the uniform-null mass actually covered (2*delta in the
// interior, less at the boundary).  This is the form the selection step
// controls; see select_delta.
double fdr_hat_region(std::span<const double> pvals, double theta, double delta, double xi);

// pFDR estimate: fdr_hat divided by the positivity correction 1-(1-delta)^m.
// delta = 0 yields +infinity.
double pfdr_hat(std::span<const double> pvals, double theta, double delta, double xi,
                std::size_t m);

struct FdrReport {
  double theta = 0.0;
  double xi = 0.0;
  double alpha = 0.0;
  double epsilon_hat = 0.0;
  std::size_t W = 0;
  std::size_t R = 0;
  double delta_hat = 0.0;  // selected half-width
  double fdr_hat = 0.0;    // region-length estimate at the selected delta
  double pfdr_hat = 0.0;
  std::vector<std::size_t> rejected;  // input indices
};

// Four-step selection: order candidate half-widths as observed distances
// d_(1) <= ... <= d_(m) from theta_hat, take the largest one whose estimated
// FDR stays at or below alpha, and reject every p-value within it.  The
// estimate used is fdr_hat_region; with no qualifying candidate the report
// carries an empty region.
FdrReport select_delta(std::span<const double> pvals, double theta_hat, double xi,
                       double alpha);

// Step-up BH baseline: rejects the k smallest p-values for the largest k
// with p_(k) <= k alpha / m.  Returns input indices.
std::vector<std::size_t> bh_procedure(std::span<const double> pvals, double alpha);

struct ConfusionCounts {
  std::size_t V = 0;  // rejected nulls
  std::size_t S = 0;  // rejected alternatives
  std::size_t R = 0;  // V + S
  std::size_t alternatives = 0;  // total labeled alternatives in the sample

  double fdp() const { return static_cast<double>(V) / std::max<std::size_t>(R, 1); }
  double tpp() const {
    return static_cast<double>(S) / std::max<std::size_t>(alternatives, 1);
  }
};

ConfusionCounts evaluate(std::span<const std::size_t> rejected,
                         std::span<const std::uint8_t> labels);

}  // namespace unifdr
