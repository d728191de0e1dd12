#include "unifdr/gaps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace unifdr {

namespace {

std::vector<double> sorted_copy(std::span<const double> pvals) {
  std::vector<double> s(pvals.begin(), pvals.end());
  std::sort(s.begin(), s.end());
  return s;
}

}  // namespace

std::vector<double> smoothed_pvalues(std::span<const double> pvals) {
  if (pvals.empty()) throw std::invalid_argument("smoothed_pvalues: m >= 1 required");
  const std::vector<double> s = sorted_copy(pvals);
  std::vector<double> out(s.size());
  double run = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    run += s[j];
    out[j] = run / static_cast<double>(j + 1);
  }
  return out;
}

std::vector<double> weighted_gaps(std::span<const double> pvals) {
  if (pvals.size() < 2) throw std::invalid_argument("weighted_gaps: m >= 2 required");
  const std::vector<double> smooth = smoothed_pvalues(pvals);
  std::vector<double> out(smooth.size());
  out[0] = smooth[0];
  for (std::size_t j = 1; j < smooth.size(); ++j) out[j] = smooth[j] - smooth[j - 1];
  return out;
}

std::vector<double> raw_gaps(std::span<const double> pvals) {
  if (pvals.empty()) throw std::invalid_argument("raw_gaps: m >= 1 required");
  const std::vector<double> s = sorted_copy(pvals);
  std::vector<double> out(s.size());
  out[0] = s[0];
  for (std::size_t j = 1; j < s.size(); ++j) out[j] = s[j] - s[j - 1];
  return out;
}

Discrepancies local_discrepancies(std::span<const double> weighted, std::size_t k) {
  const std::size_t m = weighted.size();
  if (!(k >= 1 && 2 * k < m))
    throw std::invalid_argument("local_discrepancies: need 1 <= k < m/2");
  const double null_mean = 1.0 / (2.0 * (static_cast<double>(m) + 1.0));
  const double nan = std::numeric_limits<double>::quiet_NaN();

  // Prefix sums over G_dag for O(1) window means.
  std::vector<double> prefix(m + 1, 0.0);
  for (std::size_t j = 0; j < m; ++j) prefix[j + 1] = prefix[j] + weighted[j];
  const auto window_mean = [&](std::size_t first, std::size_t last) {
    // 1-based inclusive indices into G_dag.
    return (prefix[last] - prefix[first - 1]) / static_cast<double>(last - first + 1);
  };

  Discrepancies d;
  d.lower.assign(m, nan);
  d.upper.assign(m, nan);
  for (std::size_t j = 1; j <= m; ++j) {
    if (j > k) d.lower[j - 1] = std::fabs(window_mean(j - k, j - 1) - null_mean);
    if (j + k - 1 <= m) d.upper[j - 1] = std::fabs(window_mean(j, j + k - 1) - null_mean);
  }
  return d;
}

std::vector<GapCenter> detect_centers(std::span<const double> pvals, std::size_t k,
                                      double threshold) {
  const std::size_t m = pvals.size();
  if (!(k >= 1 && 2 * k < m)) throw std::invalid_argument("detect_centers: need 1 <= k < m/2");
  const std::vector<double> s = sorted_copy(pvals);
  const std::vector<double> gdag = weighted_gaps(s);
  const double null_mean = 1.0 / (2.0 * (static_cast<double>(m) + 1.0));
  const double cut = threshold * null_mean;

  std::vector<double> prefix(m + 1, 0.0);
  for (std::size_t j = 0; j < m; ++j) prefix[j + 1] = prefix[j] + gdag[j];

  // Signed depth of the upper window at j (1-based): null mean minus the
  // window mean.  Clusters push it positive, and the running-mean memory of
  // G_dag keeps a long positive shadow after each cluster, so nearby
  // clusters share one depressed stretch instead of separate threshold
  // runs.  Candidates are therefore depth maxima dominating a 2k
  // neighborhood, not runs.
  const std::size_t last_j = m - k + 1;
  std::vector<double> depth(last_j + 1, 0.0);
  for (std::size_t j = 1; j <= last_j; ++j) {
    depth[j] = null_mean - (prefix[j + k - 1] - prefix[j - 1]) / static_cast<double>(k);
  }

  const std::size_t w = 2 * k;
  std::vector<GapCenter> centers;
  for (std::size_t j = 1; j <= last_j; ++j) {
    if (!(depth[j] > cut)) continue;
    bool dominant = true;
    const std::size_t lo = (j > w) ? j - w : 1;
    const std::size_t hi = std::min(last_j, j + w);
    for (std::size_t i = lo; i <= hi && dominant; ++i) {
      if (i == j) continue;
      // Plateau ties resolve to the leftmost window.
      if (depth[i] > depth[j] || (depth[i] == depth[j] && i < j)) dominant = false;
    }
    if (!dominant) continue;
    GapCenter c;
    c.order_index = std::min(m, j + k / 2);  // median index of the window
    c.p = s[c.order_index - 1];
    c.depth = depth[j];
    centers.push_back(c);
  }
  std::sort(centers.begin(), centers.end(),
            [](const GapCenter& a, const GapCenter& b) { return a.depth > b.depth; });
  return centers;
}

std::vector<GapCenter> detect_centers(std::span<const double> pvals, double threshold) {
  const auto k = static_cast<std::size_t>(
      std::ceil(std::sqrt(static_cast<double>(pvals.size()))));
  return detect_centers(pvals, k, threshold);
}

}  // namespace unifdr
