// Uniform filters: delete p-values from regions where the sample looks
// uniform so that alternative clusters stand out.  The fixed-length filter
// walks a regular grid of interval centers and deletes the nearest remaining
// p-value per center; the random filter deletes one random member of each
// non-empty interval.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "unifdr/mixtures.hpp"

namespace unifdr {

enum class FilterKind { fixed, random };
enum class Direction { ascending, descending };

struct FilterConfig {
  double xi = 0.15;                            // retained fraction, in (0,1)
  FilterKind kind = FilterKind::fixed;
  Direction direction = Direction::ascending;  // center traversal, fixed only
  std::uint64_t seed = 0;                      // random kind only

  void validate() const;
};

struct IndexedValue {
  std::size_t index;  // position in the input sample
  double p;
};

struct IntervalRecord {
  double center;
  std::optional<std::size_t> deleted;  // input index, or nullopt (random kind)
};

struct FilterResult {
  std::vector<IndexedValue> retained;
  std::vector<IndexedValue> deleted;
  std::vector<IntervalRecord> intervals;

  // Count of retained values whose label is 1; requires a labeled sample.
  std::size_t retained_alternatives(const LabeledPValues& sample) const;
  std::size_t deleted_alternatives(const LabeledPValues& sample) const;

  std::vector<double> retained_values() const;
};

// Number of deletions for a sample of size m: ceil((1 - xi) * m).
std::size_t deletion_count(double xi, std::size_t m);

// Deletes m_xi values, sweeping centers c_j = (2j-1)/(2 m_xi) in the
// configured direction and removing the not-yet-deleted value closest to
// each center.  Equidistant candidates resolve to the smaller p-value, and
// among duplicates of the same p to the smaller input index.  Runs in
// O(m log m).
FilterResult fixed_length_filter(const LabeledPValues& sample, const FilterConfig& config);

// Partitions (0,1] into m_xi equal intervals and deletes one uniformly
// chosen member of every non-empty interval; deterministic given the seed.
FilterResult random_filter(const LabeledPValues& sample, const FilterConfig& config);

// Counts per equal-width bin over (0,1], boundaries belonging to the
// right-closed bin; the counts sum to the sample size.
std::vector<std::size_t> bin_counts(std::span<const double> pvals, std::size_t nbins);

}  // namespace unifdr
