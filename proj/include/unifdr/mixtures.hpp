// Two-group mixture models for multiple testing: sampling of labeled
// p-values and the analytic quantities attached to the model (alternative
// p-value density and CDF, the closed-form Cauchy mode, local FDR, expected
// false deletions under uniform filtering, and the detectability constant).

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace unifdr {

enum class Family { gaussian, cauchy, student_t };

const char* family_name(Family f);
Family family_from_name(const std::string& name);

// Test statistics are drawn from (1-epsilon) F0 + epsilon F0(. - mu) and
// mapped to p-values by P = 1 - F0(X).
struct MixtureModel {
  Family family = Family::gaussian;
  double epsilon = 0.0;  // probability of a true alternative, in [0,1)
  double mu = 0.0;       // shift of the alternative, in null-scale units
  int df = 1;            // degrees of freedom, student_t only

  void validate() const;

  static MixtureModel gaussian(double epsilon, double mu);
  static MixtureModel cauchy(double epsilon, double mu);
  static MixtureModel student(double epsilon, double mu, int df);
};

// A sample of p-values with optional ground-truth indicators (h[i] = 1 when
// test i came from the alternative) and the seed that produced it.
struct LabeledPValues {
  std::vector<double> p;
  std::vector<std::uint8_t> h;  // empty when labels are unavailable
  std::uint64_t seed = 0;

  std::size_t size() const { return p.size(); }
  bool labeled() const { return !h.empty(); }
  std::size_t alternative_count() const;
};

// Draws m labeled p-values from the model.  Bit-reproducible for fixed
// (model, m, seed).  Values landing exactly on 0 or 1 in floating point are
// clamped one machine epsilon inside so downstream -log transforms stay
// finite.
LabeledPValues sample_pvalues(const MixtureModel& model, std::size_t m, std::uint64_t seed);

// Alternative p-value density f_P for the Gaussian shift model:
// exp(mu * z_{1-t} - mu^2/2).
double pvalue_density_gaussian(double t, double mu);

// Alternative p-value density for the shifted standard Cauchy:
// (1 + cot^2(pi t)) / (1 + (cot(pi t) - mu)^2).
double pvalue_density_cauchy(double t, double mu);

// Mode of the Cauchy alternative p-value density, in closed form:
// p_c = arctan(-sqrt(1 + mu^2/4) - mu/2)/pi + 1/2.
double cauchy_mode(double mu);

// f_P for any supported family (dispatches on model.family).
double pvalue_density(double t, const MixtureModel& model);

// Alternative p-value CDF F_P(t) = 1 - F1(F0^{-1}(1-t)).
double pvalue_cdf(double t, const MixtureModel& model);

// Marginal density of an observed p-value: (1-eps) + eps * f_P(t).
double marginal_density(double t, const MixtureModel& model);

// Pointwise posterior null probability (1-eps) / ((1-eps) + eps f_P(t)).
double local_fdr(double t, const MixtureModel& model);

struct FalseDeletionEstimate {
  double integral = 0.0;                // J = int eps f_P / ((1-eps) + eps f_P)
  double deletions = 0.0;               // number of deletions m_xi
  double false_deletions = 0.0;         // m_xi * J
  double remaining_alternatives = 0.0;  // eps * m - m_xi * J
};

// Expected false deletions of a fixed-length filter retaining fraction xi,
// with the integral evaluated by a midpoint Riemann sum on `grid` intervals.
FalseDeletionEstimate expected_false_deletions(const MixtureModel& model, double xi,
                                               std::size_t m, std::size_t grid = 2000);

// C_low = sqrt(2 (1 - sqrt(1 - gamma))): Gaussian shifts mu = C sqrt(log m)
// with C above this constant produce a filter-detectable cluster when the
// alternative fraction decays like m^{-gamma}.
double detectability_constant(double gamma);

}  // namespace unifdr
