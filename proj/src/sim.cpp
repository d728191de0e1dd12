#include "unifdr/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

#include "unifdr/reference.hpp"
#include "unifdr/rng.hpp"

namespace unifdr::sim {

MetricSummary summarize(std::span<const double> values) {
  MetricSummary s;
  s.reps = values.size();
  if (values.empty()) {
    s.mean = std::numeric_limits<double>::quiet_NaN();
    s.se = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  s.mean = mean;
  if (values.size() < 2) {
    s.se = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
  s.se = sd / std::sqrt(static_cast<double>(values.size()));
  return s;
}

void parallel_for_index(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  std::size_t workers = (jobs <= 0) ? hw : static_cast<std::size_t>(jobs);
  workers = std::min<std::size_t>(workers, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::exception_ptr error;
  std::mutex error_mutex;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::vector<EnrichmentRow> default_enrichment_rows() {
  std::vector<EnrichmentRow> rows;
  for (const auto& t : reference::kTable1) {
    EnrichmentRow r;
    r.model = (t.family == std::string("gaussian")) ? MixtureModel::gaussian(t.epsilon, t.mu)
                                                    : MixtureModel::cauchy(t.epsilon, t.mu);
    r.xi = t.xi;
    r.m = t.m;
    rows.push_back(r);
  }
  return rows;
}

std::vector<EnrichmentResult> run_table1(std::span<const EnrichmentRow> rows, std::size_t reps,
                                         std::uint64_t master_seed, int jobs,
                                         Direction direction) {
  if (reps < 1) throw std::invalid_argument("run_table1: reps >= 1 required");
  std::vector<EnrichmentResult> results(rows.size());
  for (std::size_t ri = 0; ri < rows.size(); ++ri) {
    const EnrichmentRow& row = rows[ri];
    EnrichmentResult& res = results[ri];
    res.row = row;
    res.deletions = deletion_count(row.xi, row.m);
    res.true_alternatives = row.model.epsilon * static_cast<double>(row.m);

    const auto est = expected_false_deletions(row.model, row.xi, row.m);
    res.theoretical_remaining = est.remaining_alternatives;
    // The expectation formula presumes the retained slots can hold all true
    // alternatives; rows where xi*m < eps*m are outside its regime.
    res.theoretical_valid =
        static_cast<double>(row.m - res.deletions) >= res.true_alternatives;

    res.per_rep.assign(reps, 0.0);
    parallel_for_index(reps, jobs, [&](std::size_t rep) {
      const std::uint64_t seed = rng::derive_seed(master_seed, ri * 100003ULL + rep);
      const LabeledPValues sample = sample_pvalues(row.model, row.m, seed);
      FilterConfig cfg;
      cfg.xi = row.xi;
      cfg.direction = direction;
      const FilterResult filtered = fixed_length_filter(sample, cfg);
      res.per_rep[rep] = static_cast<double>(filtered.retained_alternatives(sample));
    });
    res.retained_alternatives = summarize(res.per_rep);
  }
  return results;
}

PipelineResult run_table2(const PipelineConfig& config) {
  config.model.validate();
  if (config.reps < 1) throw std::invalid_argument("run_table2: reps >= 1 required");

  PipelineResult result;
  result.config = config;
  result.replications.assign(config.reps, {});

  const double eps_m = config.model.epsilon * static_cast<double>(config.m);
  parallel_for_index(config.reps, config.jobs, [&](std::size_t rep) {
    const std::uint64_t seed = rng::derive_seed(config.master_seed, rep);
    const LabeledPValues sample = sample_pvalues(config.model, config.m, seed);

    FilterConfig fcfg;
    fcfg.xi = config.xi_filter;
    fcfg.kind = config.filter_kind;
    fcfg.seed = rng::derive_seed(seed, 1);
    const FilterResult filtered = (config.filter_kind == FilterKind::fixed)
                                      ? fixed_length_filter(sample, fcfg)
                                      : random_filter(sample, fcfg);

    ModeOptions mopt;
    mopt.transform = config.transform;
    mopt.grid_resolution = config.grid_resolution;
    const ModeEstimate mode = estimate_mode(filtered.retained_values(), mopt);

    const FdrReport report =
        select_delta(sample.p, mode.theta_hat, config.xi_select, config.alpha);
    const ConfusionCounts cc = evaluate(report.rejected, sample.h);

    PipelineReplication& out = result.replications[rep];
    out.theta_hat = mode.theta_hat;
    out.delta_hat = report.delta_hat;
    out.eps_hat = report.epsilon_hat;
    out.fdr_hat = report.fdr_hat;
    out.fdp = cc.fdp();
    out.tpp = (eps_m > 0.0) ? static_cast<double>(cc.S) / eps_m : 0.0;
  });

  const auto metric = [&](double PipelineReplication::*field) {
    std::vector<double> v(config.reps);
    for (std::size_t i = 0; i < config.reps; ++i) v[i] = result.replications[i].*field;
    return summarize(v);
  };
  result.theta_hat = metric(&PipelineReplication::theta_hat);
  result.delta_hat = metric(&PipelineReplication::delta_hat);
  result.eps_hat = metric(&PipelineReplication::eps_hat);
  result.fdr_hat = metric(&PipelineReplication::fdr_hat);
  result.fdp = metric(&PipelineReplication::fdp);
  result.tpp = metric(&PipelineReplication::tpp);
  return result;
}

std::vector<AsymptoticPoint> run_asymptotic(const AsymptoticConfig& config) {
  if (config.reps < 1) throw std::invalid_argument("run_asymptotic: reps >= 1 required");
  for (std::size_t i = 1; i < config.m_grid.size(); ++i) {
    if (config.m_grid[i] <= config.m_grid[i - 1])
      throw std::invalid_argument("run_asymptotic: m_grid must be increasing");
  }

  std::vector<AsymptoticPoint> points(config.m_grid.size());
  for (std::size_t gi = 0; gi < config.m_grid.size(); ++gi) {
    const std::size_t m = config.m_grid[gi];
    AsymptoticPoint& pt = points[gi];
    pt.m = m;
    pt.epsilon_m = std::pow(static_cast<double>(m), -config.gamma);
    pt.mu_m = std::pow(static_cast<double>(m), config.r);
    pt.vacuous = pt.epsilon_m * static_cast<double>(m) < 1.0;
    if (pt.vacuous) continue;

    const MixtureModel model = MixtureModel::cauchy(pt.epsilon_m, pt.mu_m);
    std::vector<double> fractions(config.reps, 0.0);
    parallel_for_index(config.reps, config.jobs, [&](std::size_t rep) {
      const std::uint64_t seed = rng::derive_seed(config.master_seed, gi * 100003ULL + rep);
      const LabeledPValues sample = sample_pvalues(model, m, seed);
      FilterConfig cfg;
      cfg.xi = config.xi;
      cfg.kind = config.filter_kind;
      cfg.seed = rng::derive_seed(seed, 7);
      const FilterResult filtered = (config.filter_kind == FilterKind::fixed)
                                        ? fixed_length_filter(sample, cfg)
                                        : random_filter(sample, cfg);
      fractions[rep] = static_cast<double>(filtered.deleted_alternatives(sample)) /
                       (pt.epsilon_m * static_cast<double>(m));
    });
    pt.fe_fraction = summarize(fractions);
  }
  return points;
}

std::vector<ModeConvergencePoint> run_mode_convergence(const MixtureModel& model,
                                                       std::span<const std::size_t> m_grid,
                                                       std::size_t reps,
                                                       std::uint64_t master_seed,
                                                       double xi_filter, int jobs) {
  if (model.family != Family::cauchy)
    throw std::invalid_argument("run_mode_convergence: Cauchy family required");
  const double target = cauchy_mode(model.mu);

  std::vector<ModeConvergencePoint> points(m_grid.size());
  for (std::size_t gi = 0; gi < m_grid.size(); ++gi) {
    const std::size_t m = m_grid[gi];
    std::vector<double> errors(reps, 0.0);
    parallel_for_index(reps, jobs, [&](std::size_t rep) {
      const std::uint64_t seed = rng::derive_seed(master_seed, gi * 100003ULL + rep);
      const LabeledPValues sample = sample_pvalues(model, m, seed);
      FilterConfig cfg;
      cfg.xi = xi_filter;
      const FilterResult filtered = fixed_length_filter(sample, cfg);
      const ModeEstimate mode = estimate_mode(filtered.retained_values());
      errors[rep] = std::fabs(mode.theta_hat - target);
    });
    std::sort(errors.begin(), errors.end());
    ModeConvergencePoint& pt = points[gi];
    pt.m = m;
    const std::size_t n = errors.size();
    pt.median_abs_error =
        (n % 2 == 1) ? errors[n / 2] : 0.5 * (errors[n / 2 - 1] + errors[n / 2]);
  }
  return points;
}

}  // namespace unifdr::sim

namespace unifdr::reference {

const PipelineTarget* table2_target(double mu) {
  for (const auto& t : kTable2) {
    if (t.mu == mu) return &t;
  }
  return nullptr;
}

}  // namespace unifdr::reference
