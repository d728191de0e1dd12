#include "unifdr/mixtures.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "unifdr/numerics.hpp"
#include "unifdr/rng.hpp"

namespace unifdr {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kEps = std::numeric_limits<double>::epsilon();

void check_unit_interval(double t, const char* who) {
  if (!(t > 0.0 && t < 1.0)) throw std::domain_error(std::string(who) + ": t must be in (0,1)");
}

double clamp_interior(double p) {
  if (p <= 0.0) return kEps;
  if (p >= 1.0) return 1.0 - kEps;
  return p;
}

// cot(pi t) for t in (0,1); sin is positive on the whole range.
double cot_pi(double t) {
  return std::cos(kPi * t) / std::sin(kPi * t);
}

}  // namespace

const char* family_name(Family f) {
  switch (f) {
    case Family::gaussian: return "gaussian";
    case Family::cauchy: return "cauchy";
    case Family::student_t: return "student_t";
  }
  return "?";
}

Family family_from_name(const std::string& name) {
  if (name == "gaussian" || name == "normal") return Family::gaussian;
  if (name == "cauchy") return Family::cauchy;
  if (name == "student_t" || name == "student" || name == "t") return Family::student_t;
  throw std::invalid_argument("unknown family: " + name);
}

void MixtureModel::validate() const {
  if (!(epsilon >= 0.0 && epsilon < 1.0))
    throw std::invalid_argument("MixtureModel: epsilon must be in [0,1)");
  if (!std::isfinite(mu)) throw std::invalid_argument("MixtureModel: mu must be finite");
  if (family == Family::student_t && df < 1)
    throw std::invalid_argument("MixtureModel: student_t needs df >= 1");
}

MixtureModel MixtureModel::gaussian(double epsilon, double mu) {
  MixtureModel m{Family::gaussian, epsilon, mu, 1};
  m.validate();
  return m;
}

MixtureModel MixtureModel::cauchy(double epsilon, double mu) {
  MixtureModel m{Family::cauchy, epsilon, mu, 1};
  m.validate();
  return m;
}

MixtureModel MixtureModel::student(double epsilon, double mu, int df) {
  MixtureModel m{Family::student_t, epsilon, mu, df};
  m.validate();
  return m;
}

std::size_t LabeledPValues::alternative_count() const {
  std::size_t n = 0;
  for (auto v : h) n += v;
  return n;
}

LabeledPValues sample_pvalues(const MixtureModel& model, std::size_t m, std::uint64_t seed) {
  model.validate();
  if (m < 1) throw std::invalid_argument("sample_pvalues: m >= 1 required");

  rng::Stream stream(seed);
  LabeledPValues out;
  out.seed = seed;
  out.p.resize(m);
  out.h.resize(m);

  for (std::size_t i = 0; i < m; ++i) {
    const bool alt = stream.bernoulli(model.epsilon);
    out.h[i] = alt ? 1 : 0;
    const double u = stream.uniform_open();
    double p = u;
    if (!alt) {
      // Null draws map straight through P = 1 - F0(X) to a uniform.
      p = u;
    } else {
      switch (model.family) {
        case Family::gaussian: {
          const double x = model.mu + num::normal_quantile(u);
          p = num::normal_sf(x);
          break;
        }
        case Family::cauchy: {
          const double x = model.mu + num::cauchy_quantile(u);
          p = num::cauchy_sf(x);
          break;
        }
        case Family::student_t: {
          // Ratio construction: T = Z / sqrt(chi2_df / df) with the chi-square
          // assembled from df squared normals.  Draw count is fixed per value,
          // keeping the stream layout deterministic.
          const double z = num::normal_quantile(u);
          double chi2 = 0.0;
          for (int k = 0; k < model.df; ++k) {
            const double g = num::normal_quantile(stream.uniform_open());
            chi2 += g * g;
          }
          const double x = model.mu + z / std::sqrt(chi2 / model.df);
          p = num::student_t_sf(x, model.df);
          break;
        }
      }
    }
    out.p[i] = clamp_interior(p);
  }
  return out;
}

double pvalue_density_gaussian(double t, double mu) {
  check_unit_interval(t, "pvalue_density_gaussian");
  const double z = num::normal_quantile(1.0 - t);
  return std::exp(mu * z - 0.5 * mu * mu);
}

double pvalue_density_cauchy(double t, double mu) {
  check_unit_interval(t, "pvalue_density_cauchy");
  const double c = cot_pi(t);
  if (std::fabs(c) > 1.0) {
    // Divide through by c^2 so the extreme-t limits stay finite.
    const double inv = 1.0 / c;
    const double num = inv * inv + 1.0;
    const double den = inv * inv + (1.0 - mu * inv) * (1.0 - mu * inv);
    return num / den;
  }
  const double diff = c - mu;
  return (1.0 + c * c) / (1.0 + diff * diff);
}

double cauchy_mode(double mu) {
  if (!std::isfinite(mu)) throw std::domain_error("cauchy_mode: mu must be finite");
  return std::atan(-std::sqrt(1.0 + 0.25 * mu * mu) - 0.5 * mu) / kPi + 0.5;
}

double pvalue_density(double t, const MixtureModel& model) {
  switch (model.family) {
    case Family::gaussian: return pvalue_density_gaussian(t, model.mu);
    case Family::cauchy: return pvalue_density_cauchy(t, model.mu);
    case Family::student_t: {
      check_unit_interval(t, "pvalue_density");
      const double x = num::student_t_quantile(1.0 - t, model.df);
      return num::student_t_pdf(x - model.mu, model.df) / num::student_t_pdf(x, model.df);
    }
  }
  throw std::logic_error("pvalue_density: unhandled family");
}

double pvalue_cdf(double t, const MixtureModel& model) {
  check_unit_interval(t, "pvalue_cdf");
  switch (model.family) {
    case Family::gaussian:
      return num::normal_sf(num::normal_quantile(1.0 - t) - model.mu);
    case Family::cauchy:
      return num::cauchy_sf(cot_pi(t) - model.mu);
    case Family::student_t:
      return num::student_t_sf(num::student_t_quantile(1.0 - t, model.df) - model.mu, model.df);
  }
  throw std::logic_error("pvalue_cdf: unhandled family");
}

double marginal_density(double t, const MixtureModel& model) {
  check_unit_interval(t, "marginal_density");
  if (model.epsilon == 0.0) return 1.0;
  return (1.0 - model.epsilon) + model.epsilon * pvalue_density(t, model);
}

double local_fdr(double t, const MixtureModel& model) {
  return (1.0 - model.epsilon) / marginal_density(t, model);
}

FalseDeletionEstimate expected_false_deletions(const MixtureModel& model, double xi,
                                               std::size_t m, std::size_t grid) {
  model.validate();
  if (!(xi > 0.0 && xi < 1.0))
    throw std::domain_error("expected_false_deletions: xi must be in (0,1)");
  if (grid < 2) throw std::domain_error("expected_false_deletions: grid >= 2 required");

  double integral = 0.0;
  if (model.epsilon > 0.0) {
    const double w = 1.0 / static_cast<double>(grid);
    for (std::size_t i = 0; i < grid; ++i) {
      const double t = (static_cast<double>(i) + 0.5) * w;
      const double ef = model.epsilon * pvalue_density(t, model);
      integral += ef / ((1.0 - model.epsilon) + ef);
    }
    integral *= w;
  }

  FalseDeletionEstimate est;
  est.integral = integral;
  est.deletions = static_cast<double>(num::ceil_count((1.0 - xi) * static_cast<double>(m)));
  est.false_deletions = est.deletions * integral;
  est.remaining_alternatives = model.epsilon * static_cast<double>(m) - est.false_deletions;
  return est;
}

double detectability_constant(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::domain_error("detectability_constant: gamma must be in (0,1)");
  return std::sqrt(2.0 * (1.0 - std::sqrt(1.0 - gamma)));
}

}  // namespace unifdr
