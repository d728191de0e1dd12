#include "unifdr/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace unifdr::num {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kSqrt2 = 1.414213562373095048801688724209698079;

double polyval(const double* c, int n, double x) {
  double r = c[n - 1];
  for (int i = n - 2; i >= 0; --i) r = r * x + c[i];
  return r;
}

}  // namespace

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("normal_quantile: p must be in (0,1)");

  // AS 241 algorithm PPND16.
  static const double a[8] = {
      3.3871328727963666080e0,  1.3314166789178437745e+2, 1.9715909503065514427e+3,
      1.3731693765509461125e+4, 4.5921953931549871457e+4, 6.7265770927008700853e+4,
      3.3430575583588128105e+4, 2.5090809287301226727e+3};
  static const double b[8] = {
      1.0,                      4.2313330701600911252e+1, 6.8718700749205790830e+2,
      5.3941960214247511077e+3, 2.1213794301586595867e+4, 3.9307895800092710610e+4,
      2.8729085735721942674e+4, 5.2264952788528545610e+3};
  static const double c[8] = {
      1.42343711074968357734e0,  4.63033784615654529590e0,  5.76949722146069140550e0,
      3.64784832476320460504e0,  1.27045825245236838258e0,  2.41780725177450611770e-1,
      2.27238449892691845833e-2, 7.74545014278341407640e-4};
  static const double d[8] = {
      1.0,                       2.05319162663775882187e0,  1.67638483018380384940e0,
      6.89767334985100004550e-1, 1.48103976427480074590e-1, 1.51986665636164571966e-2,
      5.47593808499534494600e-4, 1.05075007164441684324e-9};
  static const double e[8] = {
      6.65790464350110377720e0,  5.46378491116411436990e0,  1.78482653991729133580e0,
      2.96560571828504891230e-1, 2.65321895265761230930e-2, 1.24266094738807843860e-3,
      2.71155556874348757815e-5, 2.01033439929228813265e-7};
  static const double f[8] = {
      1.0,                       5.99832206555887937690e-1, 1.36929880922735805310e-1,
      1.48753612908506148525e-2, 7.86869131145613259100e-4, 1.84631831751005468180e-5,
      1.42151175831644588870e-7, 2.04426310338993978564e-15};

  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q * polyval(a, 8, r) / polyval(b, 8, r);
  }
  double r = (q < 0.0) ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double value;
  if (r <= 5.0) {
    r -= 1.6;
    value = polyval(c, 8, r) / polyval(d, 8, r);
  } else {
    r -= 5.0;
    value = polyval(e, 8, r) / polyval(f, 8, r);
  }
  return (q < 0.0) ? -value : value;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double normal_sf(double x) { return 0.5 * std::erfc(x / kSqrt2); }

double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi);
}

double cauchy_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("cauchy_quantile: p must be in (0,1)");
  return std::tan(kPi * (p - 0.5));
}

double cauchy_cdf(double x) { return 1.0 - cauchy_sf(x); }

double cauchy_sf(double x) {
  // 1/2 - atan(x)/pi, rewritten as atan(1/x)/pi for x > 1 (and the mirror
  // for x < -1) to avoid cancellation in the tails.
  if (x > 1.0) return std::atan(1.0 / x) / kPi;
  if (x < -1.0) return 1.0 + std::atan(1.0 / x) / kPi;
  return 0.5 - std::atan(x) / kPi;
}

double cauchy_pdf(double x) { return 1.0 / (kPi * (1.0 + x * x)); }

double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

namespace {

// Continued fraction for the incomplete beta (Lentz's method).
double incbeta_cf(double x, double a, double b) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-15;
  double c = 1.0;
  double d = 1.0 - (a + b) * x / (a + 1.0);
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 300; ++m) {
    const double m2 = 2.0 * m;
    double num = m * (b - m) * x / ((a + m2 - 1.0) * (a + m2));
    d = 1.0 + num * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + num / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    num = -(a + m) * (a + b + m) * x / ((a + m2) * (a + m2 + 1.0));
    d = 1.0 + num * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + num / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < eps) break;
  }
  return h;
}

}  // namespace

double reg_incomplete_beta(double x, double a, double b) {
  if (!(a > 0.0 && b > 0.0)) throw std::domain_error("reg_incomplete_beta: a,b must be positive");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double front = std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta(a, b));
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * incbeta_cf(x, a, b) / a;
  }
  return 1.0 - std::exp(b * std::log1p(-x) + a * std::log(x) - log_beta(b, a)) *
                   incbeta_cf(1.0 - x, b, a) / b;
}

double student_t_pdf(double x, int df) {
  if (df < 1) throw std::domain_error("student_t_pdf: df >= 1 required");
  const double v = df;
  const double lognorm = std::lgamma((v + 1.0) / 2.0) - std::lgamma(v / 2.0) -
                         0.5 * std::log(v * kPi);
  return std::exp(lognorm - (v + 1.0) / 2.0 * std::log1p(x * x / v));
}

double student_t_sf(double x, int df) {
  if (df < 1) throw std::domain_error("student_t_sf: df >= 1 required");
  if (df == 1) return cauchy_sf(x);
  const double v = df;
  const double z = v / (v + x * x);
  const double half_tail = 0.5 * reg_incomplete_beta(z, v / 2.0, 0.5);
  return (x >= 0.0) ? half_tail : 1.0 - half_tail;
}

double student_t_cdf(double x, int df) { return 1.0 - student_t_sf(x, df); }

double student_t_quantile(double p, int df) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("student_t_quantile: p must be in (0,1)");
  if (df == 1) return cauchy_quantile(p);
  double lo = -1.0, hi = 1.0;
  while (student_t_cdf(lo, df) > p) lo *= 2.0;
  while (student_t_cdf(hi, df) < p) hi *= 2.0;
  // Plain bisection; 200 halvings reach the ulp scale of any bracket.
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double f = student_t_cdf(mid, df) - p;
    if (f == 0.0) return mid;
    if (f > 0.0) hi = mid; else lo = mid;
  }
  return 0.5 * (lo + hi);
}

std::size_t ceil_count(double x) {
  if (x < 0.0) throw std::domain_error("ceil_count: negative argument");
  const double nearest = std::nearbyint(x);
  if (std::fabs(x - nearest) < 1e-9 * std::max(1.0, std::fabs(x))) {
    return static_cast<std::size_t>(nearest);
  }
  return static_cast<std::size_t>(std::ceil(x));
}

}  // namespace unifdr::num
