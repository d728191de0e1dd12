// unifdr command-line tool: generate samples from two-group mixtures,
// analyze p-value files with the uniform-filter pipeline, explore bin
// counts, and reproduce the reference simulation tables.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "unifdr/density.hpp"
#include "unifdr/fdr.hpp"
#include "unifdr/filters.hpp"
#include "unifdr/io.hpp"
#include "unifdr/mixtures.hpp"
#include "unifdr/reference.hpp"
#include "unifdr/sim.hpp"

namespace {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr std::uint64_t kDefaultMasterSeed = 3;

// Relative outputs land in $UNIFDR_OUT_DIR when it is set.
fs::path resolve_output(const std::string& path) {
  fs::path p(path);
  if (p.is_absolute()) return p;
  if (const char* dir = std::getenv("UNIFDR_OUT_DIR")) {
    if (*dir) return fs::path(dir) / p;
  }
  return p;
}

std::uint64_t ensure_seed(const CLI::Option* seed_opt, std::uint64_t seed) {
  if (seed_opt->count() > 0) return seed;
  std::random_device rd;
  const std::uint64_t fresh =
      (static_cast<std::uint64_t>(rd()) << 32) ^ static_cast<std::uint64_t>(rd());
  std::printf("seed %llu (generated; pass --seed %llu to reproduce)\n",
              static_cast<unsigned long long>(fresh), static_cast<unsigned long long>(fresh));
  return fresh;
}

struct ModelFlags {
  std::string family = "cauchy";
  double epsilon = 0.15;
  double mu = 10.0;
  int df = 3;

  void attach(CLI::App* cmd) {
    cmd->add_option("--family", family, "test statistic family: gaussian|cauchy|student_t")
        ->capture_default_str();
    cmd->add_option("--epsilon", epsilon, "alternative fraction, in [0,1)")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd->add_option("--mu", mu, "alternative shift")->capture_default_str();
    cmd->add_option("--df", df, "degrees of freedom (student_t)")->capture_default_str();
  }

  unifdr::MixtureModel build() const {
    unifdr::MixtureModel m;
    m.family = unifdr::family_from_name(family);
    m.epsilon = epsilon;
    m.mu = mu;
    m.df = df;
    m.validate();
    return m;
  }
};

int cmd_generate(const ModelFlags& mf, std::size_t m, std::uint64_t seed,
                 const std::string& out) {
  const unifdr::MixtureModel model = mf.build();
  const unifdr::LabeledPValues sample = unifdr::sample_pvalues(model, m, seed);
  const fs::path path = resolve_output(out);
  unifdr::io::write_sample_csv(path, sample);
  ordered_json params;
  params["family"] = mf.family;
  params["epsilon"] = mf.epsilon;
  params["mu"] = mf.mu;
  if (model.family == unifdr::Family::student_t) params["df"] = mf.df;
  params["m"] = m;
  unifdr::io::write_manifest(path, "generate", params, seed);
  std::printf("wrote %s (%zu p-values)\n", path.string().c_str(), sample.size());
  return 0;
}

struct AnalyzeFlags {
  std::string in;
  std::string out = "report.json";
  double xi = 0.15;
  double xi_select = 0.4;
  double alpha = 0.1;
  bool transform = false;
  double bandwidth = 0.0;
  std::string filter = "fixed";
  std::size_t grid = 4096;
};

int cmd_analyze(const AnalyzeFlags& af, std::uint64_t seed) {
  const unifdr::LabeledPValues sample = unifdr::io::read_sample_csv(af.in);

  unifdr::FilterConfig fcfg;
  fcfg.xi = af.xi;
  fcfg.kind = (af.filter == "random") ? unifdr::FilterKind::random : unifdr::FilterKind::fixed;
  fcfg.seed = seed;
  const unifdr::FilterResult filtered = (fcfg.kind == unifdr::FilterKind::fixed)
                                            ? unifdr::fixed_length_filter(sample, fcfg)
                                            : unifdr::random_filter(sample, fcfg);

  unifdr::ModeOptions mopt;
  mopt.transform = af.transform;
  mopt.grid_resolution = af.grid;
  mopt.bandwidth = af.bandwidth;
  const unifdr::ModeEstimate mode = unifdr::estimate_mode(filtered.retained_values(), mopt);

  const unifdr::FdrReport report =
      unifdr::select_delta(sample.p, mode.theta_hat, af.xi_select, af.alpha);

  ordered_json j = unifdr::io::report_to_json(report);
  j["bandwidth"] = mode.bandwidth;
  j["transform"] = mode.transformed;
  j["xi_filter"] = af.xi;
  j["retained"] = filtered.retained.size();
  if (sample.labeled()) {
    const unifdr::ConfusionCounts cc = unifdr::evaluate(report.rejected, sample.h);
    j["confusion"] = unifdr::io::confusion_to_json(cc);
  }

  const fs::path path = resolve_output(af.out);
  unifdr::io::write_json(path, j);
  ordered_json params;
  params["in"] = af.in;
  params["xi"] = af.xi;
  params["xi_select"] = af.xi_select;
  params["alpha"] = af.alpha;
  params["transform"] = af.transform;
  params["bandwidth"] = af.bandwidth;
  params["filter"] = af.filter;
  params["grid"] = af.grid;
  unifdr::io::write_manifest(path, "analyze", params, seed);
  std::printf("wrote %s (theta_hat=%s delta_hat=%s R=%zu)\n", path.string().c_str(),
              unifdr::io::format_double(report.theta).c_str(),
              unifdr::io::format_double(report.delta_hat).c_str(), report.R);
  return 0;
}

int cmd_explore(const std::string& in, std::size_t nbins, double upto, const std::string& out) {
  const unifdr::LabeledPValues sample = unifdr::io::read_sample_csv(in);
  const std::size_t bins = (nbins == 0) ? sample.size() : nbins;
  const auto counts = unifdr::bin_counts(sample.p, bins);
  const fs::path path = resolve_output(out);
  unifdr::io::write_bin_counts_csv(path, counts, upto);
  ordered_json params;
  params["in"] = in;
  params["nbins"] = bins;
  params["upto"] = upto;
  unifdr::io::write_manifest(path, "explore", params, 0);
  std::printf("wrote %s\n", path.string().c_str());
  return 0;
}

bool print_check(const char* what, double got, double want, double tol) {
  const bool ok = std::abs(got - want) <= tol;
  std::printf("  %-26s %10.5f  vs reference %8.5f  (tol %.4g)  %s\n", what, got, want, tol,
              ok ? "PASS" : "FAIL");
  return ok;
}

int reproduce_table1(std::size_t reps, std::uint64_t seed, int jobs, const fs::path& outdir) {
  const auto rows = unifdr::sim::default_enrichment_rows();
  const auto results = unifdr::sim::run_table1(rows, reps, seed, jobs);
  const fs::path path = outdir / "table1.csv";
  unifdr::io::write_table1_csv(path, results);
  ordered_json params;
  params["reps"] = reps;
  unifdr::io::write_manifest(path, "reproduce table1", params, seed);

  std::printf("table1: %zu rows, %zu replications each -> %s\n", results.size(), reps,
              path.string().c_str());
  bool all = true;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& ref = unifdr::reference::kTable1[i];
    const auto& res = results[i];
    std::printf("row %zu (%s mu=%g xi=%g):\n", i + 1, ref.family, ref.mu, ref.xi);
    if (ref.theoretical >= 0.0) {
      all &= print_check("theoretical remaining", res.theoretical_remaining, ref.theoretical,
                         unifdr::reference::kTable1TheoreticalTol);
    }
    all &= print_check("simulated mean", res.retained_alternatives.mean, ref.simulated,
                       3.0 * ref.simulated_se);
  }
  std::printf("table1 overall: %s\n", all ? "PASS" : "FAIL");
  return 0;
}

int reproduce_table2(std::vector<double> mus, std::size_t reps, std::uint64_t seed,
                     double xi_filter, double xi_select, bool transform, int jobs,
                     const fs::path& outdir) {
  if (mus.empty()) {
    for (const auto& t : unifdr::reference::kTable2) mus.push_back(t.mu);
  }
  bool all = true;
  for (double mu : mus) {
    unifdr::sim::PipelineConfig cfg;
    cfg.model = unifdr::MixtureModel::cauchy(0.15, mu);
    cfg.m = 1000;
    cfg.xi_filter = xi_filter;
    cfg.xi_select = xi_select;
    cfg.alpha = unifdr::reference::kTable2Alpha;
    cfg.reps = reps;
    cfg.master_seed = seed;
    cfg.transform = transform;
    cfg.jobs = jobs;
    const auto res = unifdr::sim::run_table2(cfg);

    char name[64];
    std::snprintf(name, sizeof(name), "table2_mu%g.csv", mu);
    const fs::path path = outdir / name;
    unifdr::io::write_replications_csv(path, res);
    ordered_json params;
    params["mu"] = mu;
    params["reps"] = reps;
    params["xi_filter"] = xi_filter;
    params["xi_select"] = xi_select;
    params["transform"] = transform;
    unifdr::io::write_manifest(path, "reproduce table2", params, seed);

    std::printf("table2 mu=%g (%zu reps) -> %s\n", mu, reps, path.string().c_str());
    std::printf("  mean eps_hat %.4f, mean fdr_hat %.4f, mean delta_hat %.5f\n",
                res.eps_hat.mean, res.fdr_hat.mean, res.delta_hat.mean);
    if (const auto* ref = unifdr::reference::table2_target(mu)) {
      all &= print_check("mean theta_hat", res.theta_hat.mean, ref->theta_hat,
                         unifdr::reference::kTable2ThetaTol);
      all &= print_check("realized FDR", res.fdp.mean, ref->fdr,
                         unifdr::reference::kTable2FdrTol);
      const bool controlled = res.fdp.mean <= unifdr::reference::kTable2Alpha;
      std::printf("  %-26s %10.5f  <= alpha %.2f              %s\n", "FDR control",
                  res.fdp.mean, unifdr::reference::kTable2Alpha, controlled ? "PASS" : "FAIL");
      all &= controlled;
      all &= print_check("mean TPP", res.tpp.mean, ref->tpp, unifdr::reference::kTable2TppTol);
    }
  }
  std::printf("table2 overall: %s\n", all ? "PASS" : "FAIL");
  return 0;
}

int reproduce_asymptotic(double gamma, std::vector<double> r_list, double xi,
                         std::vector<std::size_t> m_grid, std::size_t reps, std::uint64_t seed,
                         int jobs, const fs::path& outdir) {
  if (r_list.empty()) r_list = {0.7, 0.4};
  for (double r : r_list) {
    unifdr::sim::AsymptoticConfig cfg;
    cfg.gamma = gamma;
    cfg.r = r;
    cfg.xi = xi;
    if (!m_grid.empty()) cfg.m_grid = m_grid;
    cfg.reps = reps;
    cfg.master_seed = seed;
    cfg.jobs = jobs;
    const auto pts = unifdr::sim::run_asymptotic(cfg);

    char name[64];
    std::snprintf(name, sizeof(name), "asymptotic_gamma%g_r%g.csv", gamma, r);
    const fs::path path = outdir / name;
    unifdr::io::write_asymptotic_csv(path, pts);
    ordered_json params;
    params["gamma"] = gamma;
    params["r"] = r;
    params["xi"] = xi;
    params["reps"] = reps;
    unifdr::io::write_manifest(path, "reproduce asymptotic", params, seed);

    std::printf("asymptotic gamma=%g r=%g -> %s\n", gamma, r, path.string().c_str());
    for (const auto& pt : pts) {
      if (pt.vacuous) {
        std::printf("  m=%-8zu vacuous (epsilon_m * m < 1)\n", pt.m);
      } else {
        std::printf("  m=%-8zu FE fraction %.4f (se %.4f)\n", pt.m, pt.fe_fraction.mean,
                    pt.fe_fraction.se);
      }
    }
    const bool above = r > 1.0 - gamma / 2.0;
    bool decreasing = true;
    for (std::size_t i = 1; i < pts.size(); ++i) {
      decreasing &= pts[i].fe_fraction.mean < pts[i - 1].fe_fraction.mean;
    }
    std::printf("  boundary: r %s 1 - gamma/2 = %.3f; FE fractions %s\n", above ? ">" : "<=",
                1.0 - gamma / 2.0, decreasing ? "strictly decreasing" : "not decreasing");
  }
  return 0;
}

int reproduce_mode_convergence(double mu, double epsilon, std::vector<std::size_t> grid,
                               std::size_t reps, std::uint64_t seed, double xi, int jobs,
                               const fs::path& outdir) {
  if (grid.empty()) grid = {500, 2000, 8000};
  const auto pts = unifdr::sim::run_mode_convergence(unifdr::MixtureModel::cauchy(epsilon, mu),
                                                     grid, reps, seed, xi, jobs);
  const fs::path path = outdir / "mode_convergence.csv";
  unifdr::io::write_mode_convergence_csv(path, pts);
  ordered_json params;
  params["mu"] = mu;
  params["epsilon"] = epsilon;
  params["reps"] = reps;
  params["xi"] = xi;
  unifdr::io::write_manifest(path, "reproduce mode-convergence", params, seed);

  std::printf("mode-convergence mu=%g -> %s\n", mu, path.string().c_str());
  bool nonincreasing = true;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::printf("  m=%-6zu median |theta_hat - p_c| = %.5f\n", pts[i].m,
                pts[i].median_abs_error);
    if (i > 0) nonincreasing &= pts[i].median_abs_error <= pts[i - 1].median_abs_error;
  }
  std::printf("  medians %s\n", nonincreasing ? "non-increasing: PASS" : "increasing: FAIL");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"uniform filtering of p-values for multiple testing"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value config file (flags override it)");

  auto* gen = app.add_subcommand("generate", "sample labeled p-values from a mixture model");
  ModelFlags gen_model;
  gen_model.attach(gen);
  std::size_t gen_m = 1000;
  std::uint64_t gen_seed = kDefaultMasterSeed;
  std::string gen_out = "sample.csv";
  gen->add_option("--m", gen_m, "number of tests")->check(CLI::PositiveNumber)
      ->capture_default_str();
  auto* gen_seed_opt = gen->add_option("--seed", gen_seed, "RNG seed");
  gen->add_option("--out", gen_out, "output CSV path")->capture_default_str();

  auto* ana = app.add_subcommand("analyze", "run the filter/mode/FDR pipeline on a CSV");
  AnalyzeFlags af;
  ana->add_option("--in", af.in, "input CSV (index,p[,h])")->required();
  ana->add_option("--out", af.out, "output JSON report")->capture_default_str();
  ana->add_option("--xi", af.xi, "retained fraction for the filter")
      ->check(CLI::Range(0.0, 1.0))->capture_default_str();
  ana->add_option("--xi-select", af.xi_select, "window parameter for the FDR estimators")
      ->check(CLI::Range(0.0, 1.0))->capture_default_str();
  ana->add_option("--alpha", af.alpha, "FDR level")->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  ana->add_flag("--transform", af.transform, "estimate the mode on the -log p axis");
  ana->add_option("--bandwidth", af.bandwidth, "KDE bandwidth override (0 = plug-in rule)")
      ->capture_default_str();
  ana->add_option("--filter", af.filter, "filter kind: fixed|random")
      ->check(CLI::IsMember({"fixed", "random"}))->capture_default_str();
  ana->add_option("--grid", af.grid, "mode search grid resolution")->capture_default_str();
  std::uint64_t ana_seed = kDefaultMasterSeed;
  auto* ana_seed_opt = ana->add_option("--seed", ana_seed, "RNG seed (random filter)");

  auto* exp = app.add_subcommand("explore", "bin counts of a p-value file");
  std::string exp_in, exp_out = "bins.csv";
  std::size_t exp_nbins = 0;
  double exp_upto = 0.2;
  exp->add_option("--in", exp_in, "input CSV")->required();
  exp->add_option("--nbins", exp_nbins, "number of bins (default: sample size)");
  exp->add_option("--upto", exp_upto, "emit rows with bin midpoint <= this")
      ->capture_default_str();
  exp->add_option("--out", exp_out, "output CSV")->capture_default_str();

  auto* rep = app.add_subcommand("reproduce", "re-run the reference experiments");
  std::string rep_what;
  rep->add_option("what", rep_what, "table1|table2|asymptotic|mode-convergence")->required();
  std::size_t rep_reps = 0;
  std::uint64_t rep_seed = kDefaultMasterSeed;
  int rep_jobs = 0;
  std::string rep_outdir = ".";
  std::vector<double> rep_mus;
  double rep_gamma = 0.8;
  std::vector<double> rep_r;
  double rep_xi = 0.05;
  double rep_xi_filter = 0.15;
  double rep_xi_select = 0.4;
  bool rep_transform = false;
  double rep_epsilon = 0.15;
  std::vector<std::size_t> rep_mgrid;
  rep->add_option("--reps", rep_reps, "replications (default: experiment-specific)");
  rep->add_option("--seed", rep_seed, "master seed")->capture_default_str();
  rep->add_option("--jobs", rep_jobs, "worker threads (0 = all cores)");
  rep->add_option("--outdir", rep_outdir, "output directory")->capture_default_str();
  rep->add_option("--mu", rep_mus, "table2: shift values (default: all columns)");
  rep->add_option("--gamma", rep_gamma, "asymptotic: epsilon exponent")->capture_default_str();
  rep->add_option("--r", rep_r, "asymptotic: shift exponents (default: 0.7 and 0.4)");
  rep->add_option("--xi", rep_xi, "asymptotic/mode-convergence: filter fraction")
      ->capture_default_str();
  rep->add_option("--xi-filter", rep_xi_filter, "table2: filter fraction")
      ->capture_default_str();
  rep->add_option("--xi-select", rep_xi_select, "table2: estimator window")
      ->capture_default_str();
  rep->add_flag("--transform", rep_transform, "table2: -log p mode estimation");
  rep->add_option("--epsilon", rep_epsilon, "mode-convergence: alternative fraction")
      ->capture_default_str();
  rep->add_option("--m-grid", rep_mgrid, "asymptotic/mode-convergence: sample sizes");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      return cmd_generate(gen_model, gen_m, ensure_seed(gen_seed_opt, gen_seed), gen_out);
    }
    if (ana->parsed()) {
      const std::uint64_t seed =
          (af.filter == "random") ? ensure_seed(ana_seed_opt, ana_seed) : ana_seed;
      return cmd_analyze(af, seed);
    }
    if (exp->parsed()) {
      return cmd_explore(exp_in, exp_nbins, exp_upto, exp_out);
    }
    if (rep->parsed()) {
      const fs::path outdir = resolve_output(rep_outdir);
      fs::create_directories(outdir);
      if (rep_what == "table1") {
        return reproduce_table1(rep_reps ? rep_reps : 10, rep_seed, rep_jobs, outdir);
      }
      if (rep_what == "table2") {
        return reproduce_table2(rep_mus, rep_reps ? rep_reps : 200, rep_seed, rep_xi_filter,
                                rep_xi_select, rep_transform, rep_jobs, outdir);
      }
      if (rep_what == "asymptotic") {
        return reproduce_asymptotic(rep_gamma, rep_r, rep_xi, rep_mgrid,
                                    rep_reps ? rep_reps : 50, rep_seed, rep_jobs, outdir);
      }
      if (rep_what == "mode-convergence") {
        const double mu = rep_mus.empty() ? 10.0 : rep_mus.front();
        return reproduce_mode_convergence(mu, rep_epsilon, rep_mgrid, rep_reps ? rep_reps : 50,
                                          rep_seed, rep_xi, rep_jobs, outdir);
      }
      std::fprintf(stderr, "unknown reproduce target: %s\n", rep_what.c_str());
      return 2;
    }
  } catch (const unifdr::io::IngestError& e) {
    std::fprintf(stderr, "ingestion error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
