#ifndef RRU_MODEL_HPP_
#define RRU_MODEL_HPP_

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "rru/stats.hpp"

// Response distributions, utility transforms and the design configuration.
// The closed-form moments computed here (in particular the transformed-response
// means m_B, m_W) drive every rate diagnostic downstream.

namespace rru {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ResponseKind { bernoulli, normal, uniform, exponential, point_mass, beta };

struct ResponseModel {
  ResponseKind kind = ResponseKind::bernoulli;
  double a = 0.5;  // p | mean | lo | rate | v | alpha
  double b = 0.0;  // - | sd | hi | - | - | beta

  static ResponseModel bernoulli(double p) { return {ResponseKind::bernoulli, p, 0.0}; }
  static ResponseModel normal(double mean, double sd) { return {ResponseKind::normal, mean, sd}; }
  static ResponseModel uniform(double lo, double hi) { return {ResponseKind::uniform, lo, hi}; }
  static ResponseModel exponential(double rate) { return {ResponseKind::exponential, rate, 0.0}; }
  static ResponseModel point_mass(double v) { return {ResponseKind::point_mass, v, 0.0}; }
  static ResponseModel beta(double alpha, double beta_) { return {ResponseKind::beta, alpha, beta_}; }

  void append_violations(std::vector<std::string>& out, const std::string& who) const {
    switch (kind) {
      case ResponseKind::bernoulli:
        if (!(a >= 0.0 && a <= 1.0)) out.push_back(who + ": bernoulli p must be in [0,1]");
        break;
      case ResponseKind::normal:
        if (!(b > 0.0)) out.push_back(who + ": normal sd must be > 0");
        break;
      case ResponseKind::uniform:
        if (!(a < b)) out.push_back(who + ": uniform requires lo < hi");
        break;
      case ResponseKind::exponential:
        if (!(a > 0.0)) out.push_back(who + ": exponential rate must be > 0");
        break;
      case ResponseKind::point_mass:
        if (!std::isfinite(a)) out.push_back(who + ": point_mass value must be finite");
        break;
      case ResponseKind::beta:
        if (!(a > 0.0 && b > 0.0)) out.push_back(who + ": beta requires a > 0 and b > 0");
        break;
    }
  }

  bool valid() const {
    std::vector<std::string> v;
    append_violations(v, "");
    return v.empty();
  }

  double mean() const {
    switch (kind) {
      case ResponseKind::bernoulli: return a;
      case ResponseKind::normal: return a;
      case ResponseKind::uniform: return 0.5 * (a + b);
      case ResponseKind::exponential: return 1.0 / a;
      case ResponseKind::point_mass: return a;
      case ResponseKind::beta: return a / (a + b);
    }
    return 0.0;
  }

  double variance() const {
    switch (kind) {
      case ResponseKind::bernoulli: return a * (1.0 - a);
      case ResponseKind::normal: return b * b;
      case ResponseKind::uniform: return (b - a) * (b - a) / 12.0;
      case ResponseKind::exponential: return 1.0 / (a * a);
      case ResponseKind::point_mass: return 0.0;
      case ResponseKind::beta: return a * b / ((a + b) * (a + b) * (a + b + 1.0));
    }
    return 0.0;
  }

  double cdf(double x) const {
    switch (kind) {
      case ResponseKind::bernoulli:
        if (x < 0.0) return 0.0;
        if (x < 1.0) return 1.0 - a;
        return 1.0;
      case ResponseKind::normal: return normal_cdf((x - a) / b);
      case ResponseKind::uniform:
        if (x <= a) return 0.0;
        if (x >= b) return 1.0;
        return (x - a) / (b - a);
      case ResponseKind::exponential: return x <= 0.0 ? 0.0 : -std::expm1(-a * x);
      case ResponseKind::point_mass: return x >= a ? 1.0 : 0.0;
      case ResponseKind::beta:
        if (x <= 0.0) return 0.0;
        if (x >= 1.0) return 1.0;
        return beta_cdf(x, a, b);
    }
    return 0.0;
  }

  bool discrete() const {
    return kind == ResponseKind::bernoulli || kind == ResponseKind::point_mass;
  }

  // support endpoints; +-inf for unbounded families
  double support_lo() const {
    switch (kind) {
      case ResponseKind::bernoulli: return 0.0;
      case ResponseKind::normal: return -std::numeric_limits<double>::infinity();
      case ResponseKind::uniform: return a;
      case ResponseKind::exponential: return 0.0;
      case ResponseKind::point_mass: return a;
      case ResponseKind::beta: return 0.0;
    }
    return 0.0;
  }

  double support_hi() const {
    switch (kind) {
      case ResponseKind::bernoulli: return 1.0;
      case ResponseKind::normal: return std::numeric_limits<double>::infinity();
      case ResponseKind::uniform: return b;
      case ResponseKind::exponential: return std::numeric_limits<double>::infinity();
      case ResponseKind::point_mass: return a;
      case ResponseKind::beta: return 1.0;
    }
    return 0.0;
  }
};

/// Closed-form (mean, variance) of the raw response.
inline std::pair<double, double> response_mean_var(const ResponseModel& m) {
  if (!m.valid()) throw ConfigError("response_mean_var: invalid model parameters");
  return {m.mean(), m.variance()};
}

enum class UtilityKind { identity, clip_affine, indicator, logistic };

/// Bounded nonnegative reinforcement map applied to responses before they
/// enter the urn. identity carries a declared bound u_max; the other kinds
/// map into [0,1].
struct UtilityTransform {
  UtilityKind kind = UtilityKind::identity;
  double a = 1.0;  // u_max | lo | threshold | center
  double b = 0.0;  // -     | hi | -         | scale

  static UtilityTransform identity(double u_max) { return {UtilityKind::identity, u_max, 0.0}; }
  static UtilityTransform clip_affine(double lo, double hi) { return {UtilityKind::clip_affine, lo, hi}; }
  static UtilityTransform indicator(double threshold) { return {UtilityKind::indicator, threshold, 0.0}; }
  static UtilityTransform logistic(double center, double scale) { return {UtilityKind::logistic, center, scale}; }

  void append_violations(std::vector<std::string>& out, const std::string& who) const {
    switch (kind) {
      case UtilityKind::identity:
        if (!(a > 0.0) || !std::isfinite(a)) out.push_back(who + ": identity u_max must be finite and > 0");
        break;
      case UtilityKind::clip_affine:
        if (!(a < b)) out.push_back(who + ": clip_affine requires lo < hi");
        break;
      case UtilityKind::indicator:
        if (!std::isfinite(a)) out.push_back(who + ": indicator threshold must be finite");
        break;
      case UtilityKind::logistic:
        if (!(b > 0.0)) out.push_back(who + ": logistic scale must be > 0");
        break;
    }
  }

  double u_max() const { return kind == UtilityKind::identity ? a : 1.0; }

  double operator()(double y) const {
    switch (kind) {
      case UtilityKind::identity: return y;
      case UtilityKind::clip_affine: return std::clamp((y - a) / (b - a), 0.0, 1.0);
      case UtilityKind::indicator: return y > a ? 1.0 : 0.0;
      case UtilityKind::logistic: return 1.0 / (1.0 + std::exp(-(y - a) / b));
    }
    return 0.0;
  }
};

namespace detail {

// Adaptive Simpson with an absolute tolerance and a depth cap.
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a,
                               double b, double fa, double fm, double fb,
                               double whole, double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = simpson(f, a, m, fa, flm, fm);
  double right = simpson(f, m, b, fm, frm, fb);
  if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol) {
  double m = 0.5 * (a + b);
  double fa = f(a), fm = f(m), fb = f(b);
  return adaptive_simpson(f, a, b, fa, fm, fb, simpson(f, a, b, fa, fm, fb), tol, 48);
}

}  // namespace detail

/// E[U(Y)^k]; closed form where the pair admits one, otherwise adaptive
/// quadrature over the response density to absolute tolerance 1e-10.
inline double utility_moment(const ResponseModel& model, const UtilityTransform& transform,
                             int order) {
  if (order < 1) throw ConfigError("utility_moment: order must be >= 1");
  {
    std::vector<std::string> v;
    model.append_violations(v, "model");
    transform.append_violations(v, "utility");
    if (!v.empty()) throw ConfigError("utility_moment: " + v.front());
  }
  const double tol = 1e-10;
  auto upow = [&](double y) {
    double u = transform(y);
    double r = 1.0;
    for (int i = 0; i < order; ++i) r *= u;
    return r;
  };

  // discrete families: exact sum over support
  if (model.kind == ResponseKind::point_mass) return upow(model.a);
  if (model.kind == ResponseKind::bernoulli)
    return (1.0 - model.a) * upow(0.0) + model.a * upow(1.0);

  // indicator output is 0/1, so every moment is the exceedance probability
  if (transform.kind == UtilityKind::indicator) return 1.0 - model.cdf(transform.a);

  switch (model.kind) {
    case ResponseKind::normal: {
      double mu = model.a, sd = model.b;
      if (transform.kind == UtilityKind::identity) {
        if (order == 1) return mu;
        if (order == 2) return mu * mu + sd * sd;
      }
      auto f = [&](double y) { return upow(y) * normal_pdf((y - mu) / sd) / sd; };
      return detail::integrate(f, mu - 12.0 * sd, mu + 12.0 * sd, tol);
    }
    case ResponseKind::uniform: {
      double lo = model.a, hi = model.b;
      if (transform.kind == UtilityKind::identity) {
        if (order == 1) return 0.5 * (lo + hi);
        if (order == 2) return (hi * hi * hi - lo * lo * lo) / (3.0 * (hi - lo));
      }
      auto f = [&](double y) { return upow(y) / (hi - lo); };
      return detail::integrate(f, lo, hi, tol);
    }
    case ResponseKind::exponential: {
      double rate = model.a;
      if (transform.kind == UtilityKind::identity) {
        if (order == 1) return 1.0 / rate;
        if (order == 2) return 2.0 / (rate * rate);
      }
      auto f = [&](double y) { return upow(y) * rate * std::exp(-rate * y); };
      // tail mass beyond 50/rate is ~2e-22 and U is bounded
      return detail::integrate(f, 0.0, 50.0 / rate, tol);
    }
    case ResponseKind::beta: {
      double pa = model.a, pb = model.b;
      if (transform.kind == UtilityKind::identity) {
        if (order == 1) return pa / (pa + pb);
        if (order == 2) return pa * (pa + 1.0) / ((pa + pb) * (pa + pb + 1.0));
      }
      // split at 1/2 and absorb each endpoint singularity by substitution:
      // left uses y = 0.5 t^{1/pa} so y^{pa-1} dy = (0.5^pa/pa) dt; right mirrors with pb
      double lbeta = detail::lgamma_lanczos(pa) + detail::lgamma_lanczos(pb) -
                     detail::lgamma_lanczos(pa + pb);
      double norm = std::exp(-lbeta);
      auto left = [&](double t) {
        // y = 0.5 t^{1/pa}; y^{pa-1} dy = (0.5^pa / pa) dt
        double y = 0.5 * std::pow(t, 1.0 / pa);
        return upow(y) * std::pow(1.0 - y, pb - 1.0);
      };
      auto right = [&](double t) {
        double y = 1.0 - 0.5 * std::pow(t, 1.0 / pb);
        return upow(y) * std::pow(y, pa - 1.0);
      };
      double scale_l = norm * std::pow(0.5, pa) / pa;
      double scale_r = norm * std::pow(0.5, pb) / pb;
      return scale_l * detail::integrate(left, 0.0, 1.0, tol / std::max(scale_l, 1.0)) +
             scale_r * detail::integrate(right, 0.0, 1.0, tol / std::max(scale_r, 1.0));
    }
    default:
      break;
  }
  throw ConfigError("utility_moment: unsupported model kind");
}

struct DesignConfig {
  ResponseModel arm_B;
  ResponseModel arm_W;
  UtilityTransform utility;
  double b = 1.0;              // initial black mass
  double w = 1.0;              // initial white mass
  std::uint64_t horizon = 0;   // number of allocations
  std::vector<std::uint64_t> checkpoints;
};

/// Closed-form truth for a config: raw-response moments and transformed means.
struct TruthSet {
  double mu_B, mu_W, sigma_B, sigma_W, m_B, m_W;
};

inline TruthSet truth_from(const DesignConfig& cfg) {
  auto [mu_b, var_b] = response_mean_var(cfg.arm_B);
  auto [mu_w, var_w] = response_mean_var(cfg.arm_W);
  return {mu_b, mu_w, std::sqrt(var_b), std::sqrt(var_w),
          utility_moment(cfg.arm_B, cfg.utility, 1),
          utility_moment(cfg.arm_W, cfg.utility, 1)};
}

/// Configuration lint; the returned list is empty exactly when the config is
/// runnable. With rate_diagnostics set, additionally requires m_B, m_W > 0.
inline std::vector<std::string> validate_config(const DesignConfig& cfg,
                                                bool rate_diagnostics = false) {
  std::vector<std::string> out;
  if (!(cfg.b > 0.0)) out.push_back("b: initial black mass must be > 0");
  if (!(cfg.w > 0.0)) out.push_back("w: initial white mass must be > 0");
  cfg.arm_B.append_violations(out, "arm_B");
  cfg.arm_W.append_violations(out, "arm_W");
  cfg.utility.append_violations(out, "utility");
  if (cfg.utility.kind == UtilityKind::identity) {
    for (auto [arm, name] : {std::pair{&cfg.arm_B, "arm_B"}, std::pair{&cfg.arm_W, "arm_W"}}) {
      if (arm->support_lo() < 0.0 || arm->support_hi() > cfg.utility.u_max())
        out.push_back(std::string(name) +
                      ": response support must lie in [0, u_max] under the identity utility");
    }
  }
  if (cfg.horizon > 0 && cfg.checkpoints.empty())
    out.push_back("checkpoints: must be nonempty for a positive horizon");
  for (std::size_t i = 0; i < cfg.checkpoints.size(); ++i) {
    if (cfg.checkpoints[i] == 0 || cfg.checkpoints[i] > cfg.horizon) {
      out.push_back("checkpoints: entries must be in [1, horizon]");
      break;
    }
    if (i > 0 && cfg.checkpoints[i] <= cfg.checkpoints[i - 1]) {
      out.push_back("checkpoints: must be strictly increasing");
      break;
    }
  }
  if (rate_diagnostics && out.empty()) {
    TruthSet t = truth_from(cfg);
    if (!(t.m_B > 0.0)) out.push_back("arm_B: m_B must be > 0 for rate diagnostics");
    if (!(t.m_W > 0.0)) out.push_back("arm_W: m_W must be > 0 for rate diagnostics");
  }
  return out;
}

}  // namespace rru

#endif  // RRU_MODEL_HPP_
