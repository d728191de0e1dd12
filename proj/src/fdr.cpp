#include "unifdr/fdr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace unifdr {

namespace {

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

double fdr_from_mass(double w_over, double null_mass, std::size_t rejections) {
  return w_over * null_mass / static_cast<double>(std::max<std::size_t>(rejections, 1));
}

}  // namespace

std::size_t count_rejections(std::span<const double> pvals, const RejectionRegion& region) {
  std::size_t n = 0;
  for (double p : pvals) {
    if (std::fabs(p - region.center) <= region.delta) ++n;
  }
  return n;
}

EpsilonWindow estimate_epsilon_window(std::span<const double> pvals, double theta_hat,
                                      double xi) {
  if (!(xi > 0.0 && xi < 1.0))
    throw std::invalid_argument("estimate_epsilon_window: xi must be in (0,1)");
  EpsilonWindow out;
  const double half = 0.5 * xi;
  for (double p : pvals) {
    if (std::fabs(p - theta_hat) > half) ++out.W;
  }
  const double m = static_cast<double>(pvals.size());
  out.epsilon_hat = clamp01(1.0 - static_cast<double>(out.W) / ((1.0 - xi) * m));
  return out;
}

double storey_epsilon(std::span<const double> pvals, double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0))
    throw std::invalid_argument("storey_epsilon: lambda must be in (0,1)");
  std::size_t w = 0;
  for (double p : pvals) {
    if (p > lambda) ++w;
  }
  const double m = static_cast<double>(pvals.size());
  return clamp01(1.0 - static_cast<double>(w) / ((1.0 - lambda) * m));
}

double fdr_hat(std::span<const double> pvals, double theta, double delta, double xi) {
  if (!(xi > 0.0 && xi < 1.0)) throw std::invalid_argument("fdr_hat: xi must be in (0,1)");
  if (delta < 0.0) throw std::invalid_argument("fdr_hat: delta >= 0 required");
  const auto win = estimate_epsilon_window(pvals, theta, xi);
  const std::size_t r = count_rejections(pvals, {theta, delta});
  return fdr_from_mass(static_cast<double>(win.W) / (1.0 - xi), delta, r);
}

double fdr_hat_region(std::span<const double> pvals, double theta, double delta, double xi) {
  if (!(xi > 0.0 && xi < 1.0))
    throw std::invalid_argument("fdr_hat_region: xi must be in (0,1)");
  if (delta < 0.0) throw std::invalid_argument("fdr_hat_region: delta >= 0 required");
  const auto win = estimate_epsilon_window(pvals, theta, xi);
  const RejectionRegion region{theta, delta};
  const std::size_t r = count_rejections(pvals, region);
  return fdr_from_mass(static_cast<double>(win.W) / (1.0 - xi), region.length(), r);
}

double pfdr_hat(std::span<const double> pvals, double theta, double delta, double xi,
                std::size_t m) {
  if (delta == 0.0) return std::numeric_limits<double>::infinity();
  const double base = fdr_hat(pvals, theta, delta, xi);
  // 1 - (1-delta)^m, evaluated without cancellation for small delta.
  const double positivity = -std::expm1(static_cast<double>(m) * std::log1p(-delta));
  return base / positivity;
}

FdrReport select_delta(std::span<const double> pvals, double theta_hat, double xi,
                       double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("select_delta: alpha must be in (0,1)");
  const std::size_t m = pvals.size();

  FdrReport report;
  report.theta = theta_hat;
  report.xi = xi;
  report.alpha = alpha;

  const auto win = estimate_epsilon_window(pvals, theta_hat, xi);
  report.epsilon_hat = win.epsilon_hat;
  report.W = win.W;
  const double w_over = static_cast<double>(win.W) / (1.0 - xi);

  std::vector<double> dist(m);
  for (std::size_t i = 0; i < m; ++i) dist[i] = std::fabs(pvals[i] - theta_hat);
  std::vector<double> sorted_dist = dist;
  std::sort(sorted_dist.begin(), sorted_dist.end());

  // R as a function of the candidate half-width d_(k) counts ties at the
  // boundary, so step k upward through distinct candidates.
  double best_delta = -1.0;
  for (std::size_t k = 0; k < m; ++k) {
    if (k + 1 < m && sorted_dist[k + 1] == sorted_dist[k]) continue;
    const double delta = sorted_dist[k];
    const RejectionRegion region{theta_hat, delta};
    const std::size_t r = k + 1;  // all distances <= delta, ties included
    const double est = fdr_from_mass(w_over, region.length(), r);
    if (est <= alpha) best_delta = delta;
  }

  if (best_delta < 0.0) {
    report.delta_hat = 0.0;
    report.R = 0;
    report.fdr_hat = 0.0;
    report.pfdr_hat = std::numeric_limits<double>::infinity();
    return report;
  }

  report.delta_hat = best_delta;
  for (std::size_t i = 0; i < m; ++i) {
    if (dist[i] <= best_delta) report.rejected.push_back(i);
  }
  report.R = report.rejected.size();
  const RejectionRegion region{theta_hat, best_delta};
  report.fdr_hat = fdr_from_mass(w_over, region.length(), report.R);
  const double positivity = -std::expm1(static_cast<double>(m) * std::log1p(-best_delta));
  report.pfdr_hat = report.fdr_hat / positivity;
  return report;
}

std::vector<std::size_t> bh_procedure(std::span<const double> pvals, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("bh_procedure: alpha must be in (0,1)");
  const std::size_t m = pvals.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return pvals[a] < pvals[b]; });

  std::size_t cutoff = 0;  // largest k with p_(k) <= k alpha / m
  for (std::size_t k = m; k >= 1; --k) {
    if (pvals[order[k - 1]] <= static_cast<double>(k) * alpha / static_cast<double>(m)) {
      cutoff = k;
      break;
    }
  }
  std::vector<std::size_t> rejected(order.begin(), order.begin() + cutoff);
  std::sort(rejected.begin(), rejected.end());
  return rejected;
}

ConfusionCounts evaluate(std::span<const std::size_t> rejected,
                         std::span<const std::uint8_t> labels) {
  if (labels.empty()) throw std::invalid_argument("evaluate: ground-truth labels required");
  ConfusionCounts cc;
  for (std::uint8_t l : labels) cc.alternatives += l;
  for (std::size_t idx : rejected) {
    if (idx >= labels.size()) throw std::out_of_range("evaluate: rejected index out of range");
    if (labels[idx]) ++cc.S; else ++cc.V;
  }
  cc.R = cc.V + cc.S;
  return cc;
}

}  // namespace unifdr
