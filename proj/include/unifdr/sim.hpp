// Replicated Monte Carlo experiments: filter enrichment tables, the full
// rejection pipeline, asymptotic filtering behavior, and mode-estimate
// convergence.  Replication r of a run is seeded by derive_seed(master, r),
// so results are independent of scheduling and re-runnable one replication
// at a time.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "unifdr/density.hpp"
#include "unifdr/fdr.hpp"
#include "unifdr/filters.hpp"
#include "unifdr/mixtures.hpp"

namespace unifdr::sim {

struct MetricSummary {
  double mean = 0.0;
  double se = 0.0;  // NaN when reps < 2
  std::size_t reps = 0;
};

MetricSummary summarize(std::span<const double> values);

// Runs fn(r) for r = 0..n-1 on up to `jobs` threads.  Outputs must be
// written into per-index slots so the result is order-independent.
void parallel_for_index(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

// ---- filter enrichment table ----------------------------------------------

struct EnrichmentRow {
  MixtureModel model;
  double xi = 0.05;
  std::size_t m = 40000;
};

struct EnrichmentResult {
  EnrichmentRow row;
  std::size_t deletions = 0;
  double true_alternatives = 0.0;      // epsilon * m
  double theoretical_remaining = 0.0;  // from expected_false_deletions
  bool theoretical_valid = true;       // false when retained slots < eps*m
  MetricSummary retained_alternatives;
  std::vector<double> per_rep;
};

std::vector<EnrichmentRow> default_enrichment_rows();

std::vector<EnrichmentResult> run_table1(std::span<const EnrichmentRow> rows, std::size_t reps,
                                         std::uint64_t master_seed, int jobs = 1,
                                         Direction direction = Direction::ascending);

// ---- full pipeline ---------------------------------------------------------

struct PipelineConfig {
  MixtureModel model;
  std::size_t m = 1000;
  double xi_filter = 0.15;  // retained fraction for mode estimation
  double xi_select = 0.4;   // window parameter for the epsilon/FDR estimators
  double alpha = 0.1;
  std::size_t reps = 200;
  std::uint64_t master_seed = 1;
  bool transform = false;
  FilterKind filter_kind = FilterKind::fixed;
  std::size_t grid_resolution = 4096;
  int jobs = 1;
};

struct PipelineReplication {
  double theta_hat = 0.0;
  double delta_hat = 0.0;
  double eps_hat = 0.0;
  double fdr_hat = 0.0;
  double fdp = 0.0;
  double tpp = 0.0;  // S / (epsilon * m)
};

struct PipelineResult {
  PipelineConfig config;
  std::vector<PipelineReplication> replications;
  MetricSummary theta_hat, delta_hat, eps_hat, fdr_hat, fdp, tpp;
};

// Per replication: sample -> filter(xi_filter) -> estimate_mode ->
// select_delta(xi_select, alpha) on the full sample -> confusion scoring.
PipelineResult run_table2(const PipelineConfig& config);

// ---- asymptotic filtering --------------------------------------------------

struct AsymptoticConfig {
  double gamma = 0.8;  // epsilon_m = m^{-gamma}
  double r = 0.7;      // mu_m = m^r
  double xi = 0.05;
  std::vector<std::size_t> m_grid = {2000, 20000, 200000};
  std::size_t reps = 50;
  std::uint64_t master_seed = 1;
  FilterKind filter_kind = FilterKind::fixed;
  int jobs = 1;
};

struct AsymptoticPoint {
  std::size_t m = 0;
  double epsilon_m = 0.0;
  double mu_m = 0.0;
  bool vacuous = false;  // epsilon_m * m < 1
  MetricSummary fe_fraction;  // deleted alternatives / (epsilon_m * m)
};

std::vector<AsymptoticPoint> run_asymptotic(const AsymptoticConfig& config);

// ---- mode convergence ------------------------------------------------------

struct ModeConvergencePoint {
  std::size_t m = 0;
  double median_abs_error = 0.0;
};

// Median |theta_hat - cauchy_mode(mu)| per sample size; Cauchy family only.
std::vector<ModeConvergencePoint> run_mode_convergence(const MixtureModel& model,
                                                       std::span<const std::size_t> m_grid,
                                                       std::size_t reps,
                                                       std::uint64_t master_seed,
                                                       double xi_filter = 0.15, int jobs = 1);

}  // namespace unifdr::sim
