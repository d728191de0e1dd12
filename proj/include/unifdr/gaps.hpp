// Gap diagnostics on ordered p-values: running means (smoothed p-values),
// their increments (weighted gaps), windowed discrepancies from the uniform
// expectation, and detection of candidate cluster centers where the gap
// level drops well below it.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace unifdr {

// Running means of the order statistics: p_dag[j-1] = (1/j) sum_{i<=j} p_(i).
std::vector<double> smoothed_pvalues(std::span<const double> pvals);

// Weighted gaps G_dag[j-1] = p_dag[j] - p_dag[j-1] with p_dag[0] = 0; under
// uniformity each has expectation 1/(2(m+1)).
std::vector<double> weighted_gaps(std::span<const double> pvals);

// Raw gaps p_(j) - p_(j-1) with p_(0) = 0; Beta(1, m) under uniformity.
std::vector<double> raw_gaps(std::span<const double> pvals);

struct Discrepancies {
  // |window mean of G_dag - 1/(2(m+1))|; NaN where the window leaves 1..m.
  std::vector<double> lower;  // window (j-k .. j-1)
  std::vector<double> upper;  // window (j .. j+k-1)
};

Discrepancies local_discrepancies(std::span<const double> weighted, std::size_t k);

struct GapCenter {
  double p = 0.0;            // representative p-value of the cluster
  std::size_t order_index = 0;  // 1-based order-statistic index
  double depth = 0.0;        // null expectation minus window mean, > 0
};

// Scans the signed upper-window gap mean for runs dipping more than
// threshold * 1/(2(m+1)) below the null expectation; each run yields one
// candidate at its deepest window, mapped to the p-value at the window
// median.  Sorted deepest first.
std::vector<GapCenter> detect_centers(std::span<const double> pvals, std::size_t k,
                                      double threshold);

// detect_centers with the default window k = ceil(sqrt(m)).
std::vector<GapCenter> detect_centers(std::span<const double> pvals, double threshold);

}  // namespace unifdr
