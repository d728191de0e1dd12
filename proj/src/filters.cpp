#include "unifdr/filters.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "unifdr/numerics.hpp"
#include "unifdr/rng.hpp"

namespace unifdr {

namespace {

using Entry = std::pair<double, std::size_t>;  // (p, input index)

// Nearest remaining entry to `center`; ties on distance go to the smaller p,
// ties on p to the smaller input index.
std::set<Entry>::iterator nearest_entry(std::set<Entry>& pool, double center) {
  auto hi = pool.lower_bound(Entry{center, 0});
  if (hi == pool.begin()) return hi;
  if (hi == pool.end()) return pool.lower_bound(Entry{std::prev(hi)->first, 0});

  auto lo = std::prev(hi);
  const double dlo = center - lo->first;
  const double dhi = hi->first - center;
  if (dlo < dhi) {
    // Duplicates of lo's value sit contiguously before it; take the first.
    return pool.lower_bound(Entry{lo->first, 0});
  }
  if (dhi < dlo) return hi;
  // Equidistant: the smaller p wins, i.e. the low side.
  return pool.lower_bound(Entry{lo->first, 0});
}

}  // namespace

void FilterConfig::validate() const {
  if (!(xi > 0.0 && xi < 1.0)) throw std::invalid_argument("FilterConfig: xi must be in (0,1)");
}

std::size_t deletion_count(double xi, std::size_t m) {
  if (!(xi > 0.0 && xi < 1.0)) throw std::invalid_argument("deletion_count: xi must be in (0,1)");
  return num::ceil_count((1.0 - xi) * static_cast<double>(m));
}

std::size_t FilterResult::retained_alternatives(const LabeledPValues& sample) const {
  if (!sample.labeled()) throw std::invalid_argument("retained_alternatives: sample has no labels");
  std::size_t n = 0;
  for (const auto& rv : retained) n += sample.h[rv.index];
  return n;
}

std::size_t FilterResult::deleted_alternatives(const LabeledPValues& sample) const {
  if (!sample.labeled()) throw std::invalid_argument("deleted_alternatives: sample has no labels");
  std::size_t n = 0;
  for (const auto& dv : deleted) n += sample.h[dv.index];
  return n;
}

std::vector<double> FilterResult::retained_values() const {
  std::vector<double> out;
  out.reserve(retained.size());
  for (const auto& rv : retained) out.push_back(rv.p);
  return out;
}

FilterResult fixed_length_filter(const LabeledPValues& sample, const FilterConfig& config) {
  config.validate();
  const std::size_t m = sample.size();
  const std::size_t m_xi = deletion_count(config.xi, m);
  if (m_xi > m) throw std::invalid_argument("fixed_length_filter: more deletions than values");
  if (m_xi < 1) throw std::invalid_argument("fixed_length_filter: m_xi >= 1 required");

  std::set<Entry> pool;
  for (std::size_t i = 0; i < m; ++i) pool.insert({sample.p[i], i});

  FilterResult result;
  result.deleted.reserve(m_xi);
  result.intervals.reserve(m_xi);

  std::vector<char> removed(m, 0);
  for (std::size_t step = 0; step < m_xi; ++step) {
    const std::size_t j = (config.direction == Direction::ascending) ? step + 1 : m_xi - step;
    const double center =
        (2.0 * static_cast<double>(j) - 1.0) / (2.0 * static_cast<double>(m_xi));
    auto it = nearest_entry(pool, center);
    result.deleted.push_back({it->second, it->first});
    result.intervals.push_back({center, it->second});
    removed[it->second] = 1;
    pool.erase(it);
  }
  if (config.direction == Direction::descending) {
    std::reverse(result.intervals.begin(), result.intervals.end());
  }

  result.retained.reserve(m - m_xi);
  for (std::size_t i = 0; i < m; ++i) {
    if (!removed[i]) result.retained.push_back({i, sample.p[i]});
  }
  return result;
}

FilterResult random_filter(const LabeledPValues& sample, const FilterConfig& config) {
  config.validate();
  const std::size_t m = sample.size();
  const std::size_t m_xi = deletion_count(config.xi, m);
  if (m_xi > m) throw std::invalid_argument("random_filter: more intervals than values");
  if (m_xi < 1) throw std::invalid_argument("random_filter: m_xi >= 1 required");

  // Bucket indices by interval ((j-1)/m_xi, j/m_xi], j = 1..m_xi.
  std::vector<std::vector<std::size_t>> buckets(m_xi);
  for (std::size_t i = 0; i < m; ++i) {
    double pos = std::ceil(sample.p[i] * static_cast<double>(m_xi));
    std::size_t j = static_cast<std::size_t>(pos);
    if (j < 1) j = 1;
    if (j > m_xi) j = m_xi;
    buckets[j - 1].push_back(i);
  }

  rng::Stream stream(config.seed);
  FilterResult result;
  result.intervals.reserve(m_xi);
  std::vector<char> removed(m, 0);
  for (std::size_t j = 0; j < m_xi; ++j) {
    const double center =
        (2.0 * static_cast<double>(j + 1) - 1.0) / (2.0 * static_cast<double>(m_xi));
    if (buckets[j].empty()) {
      result.intervals.push_back({center, std::nullopt});
      continue;
    }
    const std::size_t pick = buckets[j][stream.uniform_index(buckets[j].size())];
    result.deleted.push_back({pick, sample.p[pick]});
    result.intervals.push_back({center, pick});
    removed[pick] = 1;
  }

  result.retained.reserve(m - result.deleted.size());
  for (std::size_t i = 0; i < m; ++i) {
    if (!removed[i]) result.retained.push_back({i, sample.p[i]});
  }
  return result;
}

std::vector<std::size_t> bin_counts(std::span<const double> pvals, std::size_t nbins) {
  if (nbins < 1) throw std::invalid_argument("bin_counts: nbins >= 1 required");
  std::vector<std::size_t> counts(nbins, 0);
  for (double p : pvals) {
    double pos = std::ceil(p * static_cast<double>(nbins));
    std::size_t j = static_cast<std::size_t>(pos);
    if (j < 1) j = 1;
    if (j > nbins) j = nbins;
    ++counts[j - 1];
  }
  return counts;
}

}  // namespace unifdr
