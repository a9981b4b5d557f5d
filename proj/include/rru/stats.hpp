#ifndef RRU_STATS_HPP_
#define RRU_STATS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

// Numerical statistics primitives: normal/beta/gamma special functions,
// one-sample Kolmogorov-Smirnov machinery, Pearson correlation.
// Everything here is implemented in-repo to documented tolerances so the
// library has no environment-dependent numeric behavior.

namespace rru {

namespace detail {

// Lanczos approximation, g=7, n=9 (Boost/NR coefficient set).
// Relative error below 1e-13 for positive arguments.
inline double lgamma_lanczos(double x) {
  static const double coef[9] = {
      0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
      771.32342877765313,   -176.61502916214059,   12.507343278686905,
      -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  if (x < 0.5) {
    // reflection
    return std::log(M_PI / std::sin(M_PI * x)) - lgamma_lanczos(1.0 - x);
  }
  x -= 1.0;
  double a = coef[0];
  double t = x + 7.5;
  for (int i = 1; i < 9; ++i) a += coef[i] / (x + i);
  return 0.5 * std::log(2.0 * M_PI) + (x + 0.5) * std::log(t) - t + std::log(a);
}

inline double erfc_series(double x) {
  // erf(x) = 2/sqrt(pi) * sum_{k>=0} (-1)^k x^{2k+1} / (k! (2k+1))
  double sum = x;
  double term = x;
  for (int k = 1; k < 200; ++k) {
    term *= -x * x / k;
    double add = term / (2 * k + 1);
    sum += add;
    if (std::fabs(add) < 1e-17 * std::fabs(sum)) break;
  }
  return 1.0 - 2.0 / std::sqrt(M_PI) * sum;
}

}  // namespace detail

/// Upper regularized incomplete gamma Q(s,x), series below s+1 and Lentz
/// continued fraction above. Error <= 1e-10.
inline double gamma_upper_regularized(double s, double x) {
  if (!(s > 0.0)) throw std::domain_error("gamma_upper_regularized: s must be > 0");
  if (!(x >= 0.0)) throw std::domain_error("gamma_upper_regularized: x must be >= 0");
  if (x == 0.0) return 1.0;
  double lg = detail::lgamma_lanczos(s);
  if (x < s + 1.0) {
    // lower series P(s,x), return 1 - P
    double sum = 1.0 / s;
    double term = sum;
    double ap = s;
    for (int i = 0; i < 1000; ++i) {
      ap += 1.0;
      term *= x / ap;
      sum += term;
      if (std::fabs(term) < std::fabs(sum) * 1e-15) break;
    }
    return 1.0 - sum * std::exp(-x + s * std::log(x) - lg);
  }
  const double tiny = 1e-300;
  double b = x + 1.0 - s, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int i = 1; i <= 1000; ++i) {
    double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-15) break;
  }
  return std::exp(-x + s * std::log(x) - lg) * h;
}

namespace detail {

// erfc via power series for small arguments and the incomplete-gamma
// continued fraction (erfc(x) = Q(1/2, x^2)) for the tail.
inline double erfc_pos(double x) {
  return x < 2.0 ? erfc_series(x) : gamma_upper_regularized(0.5, x * x);
}

}  // namespace detail

/// Standard normal CDF, absolute error <= 1e-12.
inline double normal_cdf(double x) {
  double z = x / std::numbers::sqrt2;
  if (z >= 0.0) return 1.0 - 0.5 * detail::erfc_pos(z);
  return 0.5 * detail::erfc_pos(-z);
}

inline double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
}

/// Inverse standard normal CDF via Newton refinement on normal_cdf,
/// started from the Beasley-Springer-Moro style rational guess.
inline double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("normal_quantile: p must be in (0,1)");
  // rational approximation (central + tail branches), then Halley refinement
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p > 1.0 - plow) {
    double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else {
    double q = p - 0.5, r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  for (int it = 0; it < 3; ++it) {
    double e = normal_cdf(x) - p;
    double u = e / normal_pdf(x);
    double step = u / (1.0 + 0.5 * x * u);
    x -= step;
    if (std::fabs(step) < 1e-14 * (1.0 + std::fabs(x))) break;
  }
  return x;
}

/// Regularized incomplete beta I_x(a,b), continued fraction with the usual
/// symmetry switch at x = (a+1)/(a+b+2). Error <= 1e-10.
inline double beta_cdf(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("beta_cdf: a,b must be > 0");
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("beta_cdf: x must be in [0,1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  auto cont_frac = [](double a_, double b_, double x_) {
    const double tiny = 1e-300;
    double qab = a_ + b_, qap = a_ + 1.0, qam = a_ - 1.0;
    double c = 1.0, d = 1.0 - qab * x_ / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 500; ++m) {
      int m2 = 2 * m;
      double aa = m * (b_ - m) * x_ / ((qam + m2) * (a_ + m2));
      d = 1.0 + aa * d;
      if (std::fabs(d) < tiny) d = tiny;
      c = 1.0 + aa / c;
      if (std::fabs(c) < tiny) c = tiny;
      d = 1.0 / d;
      h *= d * c;
      aa = -(a_ + m) * (qab + m) * x_ / ((a_ + m2) * (qap + m2));
      d = 1.0 + aa * d;
      if (std::fabs(d) < tiny) d = tiny;
      c = 1.0 + aa / c;
      if (std::fabs(c) < tiny) c = tiny;
      d = 1.0 / d;
      double del = d * c;
      h *= del;
      if (std::fabs(del - 1.0) < 1e-14) break;
    }
    return h;
  };
  double lbeta = detail::lgamma_lanczos(a) + detail::lgamma_lanczos(b) -
                 detail::lgamma_lanczos(a + b);
  double front = std::exp(a * std::log(x) + b * std::log1p(-x) - lbeta);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * cont_frac(a, b, x) / a;
  }
  return 1.0 - std::exp(b * std::log1p(-x) + a * std::log(x) - lbeta) *
                   cont_frac(b, a, 1.0 - x) / b;
}

/// A sorted sample ready for ECDF comparisons.
struct EcdfSample {
  std::vector<double> values;  // nondecreasing
  std::size_t size() const { return values.size(); }

  static EcdfSample from(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    return EcdfSample{std::move(xs)};
  }
};

struct GofResult {
  double statistic = 0.0;  // KS D in [0,1]
  double p_value = 1.0;
  std::size_t sample_size = 0;
};

/// One-sample KS statistic D = sup |ECDF - F| evaluated at the jump points.
template <class Cdf>
double ks_statistic(const EcdfSample& sample, Cdf&& cdf) {
  const std::size_t n = sample.size();
  if (n == 0) throw std::invalid_argument("ks_statistic: empty sample");
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double f = cdf(sample.values[i]);
    double hi = double(i + 1) / double(n) - f;
    double lo = f - double(i) / double(n);
    d = std::max(d, std::max(hi, lo));
  }
  return d;
}

/// Asymptotic Kolmogorov tail Q(sqrt(n) D) = 2 sum (-1)^{k-1} exp(-2 k^2 t^2).
inline double ks_pvalue(double d, std::size_t n) {
  double t = std::sqrt(double(n)) * d;
  if (t <= 0.0) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k < 200; ++k) {
    double term = std::exp(-2.0 * double(k) * double(k) * t * t);
    sum += sign * term;
    if (term < 1e-12) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

template <class Cdf>
GofResult ks_test(const EcdfSample& sample, Cdf&& cdf) {
  GofResult r;
  r.sample_size = sample.size();
  r.statistic = ks_statistic(sample, cdf);
  r.p_value = ks_pvalue(r.statistic, sample.size());
  return r;
}

/// Sample Pearson correlation; nullopt when either variance vanishes.
inline std::optional<double> pearson_corr(const std::vector<double>& xs,
                                          const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::invalid_argument("pearson_corr: need equal lengths >= 2");
  const std::size_t n = xs.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= double(n);
  my /= double(n);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double dx = xs[i] - mx, dy = ys[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

inline double median_of(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median_of: empty");
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace rru

#endif  // RRU_STATS_HPP_
