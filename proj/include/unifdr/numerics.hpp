// Scalar special functions used throughout the library: normal and Cauchy
// quantiles/tails, Student-t tails via the regularized incomplete beta
// function, and a guarded ceiling for count arithmetic.  No external
// numerical dependencies.

#pragma once

#include <cstddef>

namespace unifdr::num {

// Inverse standard normal CDF (Wichura's AS 241, double precision branch).
// Relative error below 1e-15 for p in (1e-300, 1-1e-16).
double normal_quantile(double p);

double normal_cdf(double x);
double normal_sf(double x);   // upper tail 1 - Phi(x)
double normal_pdf(double x);

// Standard Cauchy: quantile tan(pi*(p - 1/2)); survival function with a
// stable large-|x| branch so tiny p-values keep full precision.
double cauchy_quantile(double p);
double cauchy_cdf(double x);
double cauchy_sf(double x);
double cauchy_pdf(double x);

// Student-t with integer df >= 1.
double student_t_pdf(double x, int df);
double student_t_sf(double x, int df);
double student_t_cdf(double x, int df);
double student_t_quantile(double p, int df);

double log_beta(double a, double b);

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double reg_incomplete_beta(double x, double a, double b);

// ceil(x) that snaps to the nearest integer when x is within 1e-9 of it.
// Count expressions like (1 - xi) * m are exact in intent but not in
// floating point; without the snap, 0.95 * 40000 ceils to 38001.
std::size_t ceil_count(double x);

}  // namespace unifdr::num
