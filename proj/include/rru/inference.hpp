#ifndef RRU_INFERENCE_HPP_
#define RRU_INFERENCE_HPP_

#include <cmath>
#include <cstdint>
#include <optional>

#include "rru/model.hpp"
#include "rru/stats.hpp"

// Checkpoint statistics: adaptive means/variances, the two-sample statistics
// zeta0 / zeta, the weight lambda_n, the noncentrality drift, and the
// limit-tracking quantities eta^2-hat and psi-hat. All pure functions of
// streaming sums; no state is re-scanned.

namespace rru {

/// Streaming per-arm sums of raw (untransformed) responses.
struct ArmSums {
  std::uint64_t count = 0;
  double sum_y = 0.0;
  double sum_y2 = 0.0;
};

inline std::optional<double> arm_mean(const ArmSums& s) {
  if (s.count == 0) return std::nullopt;
  return s.sum_y / double(s.count);
}

/// Variance with divisor N, clamped at 0 against round-off.
inline std::optional<double> arm_variance(const ArmSums& s) {
  if (s.count == 0) return std::nullopt;
  double m = s.sum_y / double(s.count);
  double v = s.sum_y2 / double(s.count) - m * m;
  return std::max(v, 0.0);
}

/// All statistics snapshotted at one patient index n.
struct CheckpointStats {
  std::uint64_t n = 0;
  std::uint64_t n_B = 0;
  std::uint64_t n_W = 0;
  std::optional<double> ybar_B, ybar_W;
  std::optional<double> var_B, var_W;
  double z_n = 0.0;
  std::optional<double> zeta0;
  std::optional<double> zeta;          // needs true mu, sigma
  std::optional<double> lambda_n;      // needs true sigma
  std::optional<double> phi_hat;       // needs true mu, sigma_W
  std::optional<double> eta_sq_hat;    // needs m_B, m_W
  std::optional<double> psi_hat;       // needs m_B, m_W
  std::optional<double> remark2_residual;
  std::optional<double> corollary2_ratio;
  std::optional<double> rate_exponent;  // m_W / m_B
};

/// Plug-in two-sample statistic with adaptive sample sizes.
inline std::optional<double> zeta0_statistic(std::uint64_t n_B, std::uint64_t n_W,
                                             std::optional<double> ybar_B,
                                             std::optional<double> ybar_W,
                                             std::optional<double> var_B,
                                             std::optional<double> var_W) {
  if (n_B == 0 || n_W == 0 || !ybar_B || !ybar_W || !var_B || !var_W) return std::nullopt;
  double se2 = *var_B / double(n_B) + *var_W / double(n_W);
  if (se2 <= 0.0) return std::nullopt;
  return (*ybar_B - *ybar_W) / std::sqrt(se2);
}

/// Centered statistic with true variances; standard normal in the limit under
/// both hypotheses.
inline std::optional<double> zeta_statistic(std::uint64_t n_B, std::uint64_t n_W,
                                            std::optional<double> ybar_B,
                                            std::optional<double> ybar_W, double mu_B,
                                            double mu_W, double sigma_B, double sigma_W) {
  if (n_B == 0 || n_W == 0 || !ybar_B || !ybar_W) return std::nullopt;
  double se2 = sigma_B * sigma_B / double(n_B) + sigma_W * sigma_W / double(n_W);
  if (se2 <= 0.0) return std::nullopt;
  return (*ybar_B - *ybar_W - (mu_B - mu_W)) / std::sqrt(se2);
}

inline std::optional<double> lambda_weight(std::uint64_t n, std::uint64_t n_B,
                                           std::uint64_t n_W, double sigma_B,
                                           double sigma_W) {
  if (n == 0) return std::nullopt;
  double sb2 = sigma_B * sigma_B, sw2 = sigma_W * sigma_W;
  double num = sb2 * double(n_W) / double(n);
  double den = num + sw2 * double(n_B) / double(n);
  if (den <= 0.0) return std::nullopt;
  return num / den;
}

/// Drift of zeta0 under the alternative; with the plug-in eta^2-hat this is
/// exactly sqrt(N_W) (mu_B - mu_W) / sigma_W.
inline double noncentrality_phi(std::uint64_t n_W, double mu_B, double mu_W,
                                double sigma_W) {
  return std::sqrt(double(n_W)) * (mu_B - mu_W) / sigma_W;
}

/// Finite-n tracker of the rate limit: N_W(n) / n^{m_W/m_B}.
inline double eta_sq_estimate(std::uint64_t n, std::uint64_t n_W, double m_B, double m_W) {
  return double(n_W) / std::pow(double(n), m_W / m_B);
}

/// Finite-n tracker of the cumulative-response limit: B_n / W_n^{m_B/m_W}.
inline double psi_estimate(double black_mass, double white_mass, double m_B, double m_W) {
  return black_mass / std::pow(white_mass, m_B / m_W);
}

/// Relative discrepancy of the identity eta^2 = (1/m_W) (m_B/psi)^{m_W/m_B}.
inline std::optional<double> remark2_residual(std::uint64_t n, std::uint64_t n_W,
                                              double black_mass, double white_mass,
                                              double m_B, double m_W) {
  if (n_W == 0) return std::nullopt;
  double eta = eta_sq_estimate(n, n_W, m_B, m_W);
  double psi = psi_estimate(black_mass, white_mass, m_B, m_W);
  double rhs = (1.0 / m_W) * std::pow(m_B / psi, m_W / m_B);
  return eta / rhs - 1.0;
}

/// ((1 - Z) n^{1 - m_W/m_B}) / ((m_W/m_B) eta^2-hat); converges a.s. to 1.
inline std::optional<double> corollary2_ratio(std::uint64_t n, std::uint64_t n_W,
                                              double black_mass, double white_mass,
                                              double m_B, double m_W) {
  if (n_W == 0) return std::nullopt;
  double z = black_mass / (black_mass + white_mass);
  double eta = eta_sq_estimate(n, n_W, m_B, m_W);
  double r = m_W / m_B;
  return ((1.0 - z) * std::pow(double(n), 1.0 - r)) / (r * eta);
}

/// Goodness of fit of an observed response subsequence against its model law.
/// Continuous laws use the KS test; discrete laws need a tie-aware comparison,
/// so bernoulli uses a 1-df chi-square on the success count and a point mass
/// just checks the values.
inline GofResult response_gof(const std::vector<double>& values, const ResponseModel& model) {
  if (values.empty()) throw std::invalid_argument("response_gof: empty sample");
  std::size_t n = values.size();
  switch (model.kind) {
    case ResponseKind::bernoulli: {
      std::size_t k = 0;
      for (double v : values) k += v > 0.5 ? 1 : 0;
      double p = model.a;
      if (p <= 0.0 || p >= 1.0) {
        bool exact = k == (p >= 1.0 ? n : 0);
        return {exact ? 0.0 : 1.0, exact ? 1.0 : 0.0, n};
      }
      double chi2 = (double(k) - double(n) * p) * (double(k) - double(n) * p) /
                    (double(n) * p * (1.0 - p));
      return {std::fabs(double(k) / double(n) - p), gamma_upper_regularized(0.5, chi2 / 2.0), n};
    }
    case ResponseKind::point_mass: {
      for (double v : values)
        if (v != model.a) return {1.0, 0.0, n};
      return {0.0, 1.0, n};
    }
    default:
      return ks_test(EcdfSample::from(std::vector<double>(values)),
                     [&](double x) { return model.cdf(x); });
  }
}

/// One-sided rejection rule {zeta0 > z_{1-alpha}}, strict at the boundary.
inline bool reject_h0(double zeta0_value, double alpha) {
  return zeta0_value > normal_quantile(1.0 - alpha);
}

/// Assemble every statistic available at a checkpoint. truth may be null,
/// in which case only the plug-in quantities are populated.
inline CheckpointStats compute_checkpoint(std::uint64_t n, const ArmSums& arm_B,
                                          const ArmSums& arm_W, double black_mass,
                                          double white_mass,
                                          const TruthSet* truth = nullptr) {
  CheckpointStats s;
  s.n = n;
  s.n_B = arm_B.count;
  s.n_W = arm_W.count;
  s.ybar_B = arm_mean(arm_B);
  s.ybar_W = arm_mean(arm_W);
  s.var_B = arm_variance(arm_B);
  s.var_W = arm_variance(arm_W);
  s.z_n = black_mass / (black_mass + white_mass);
  s.zeta0 = zeta0_statistic(s.n_B, s.n_W, s.ybar_B, s.ybar_W, s.var_B, s.var_W);
  if (truth) {
    s.zeta = zeta_statistic(s.n_B, s.n_W, s.ybar_B, s.ybar_W, truth->mu_B, truth->mu_W,
                            truth->sigma_B, truth->sigma_W);
    s.lambda_n = lambda_weight(n, s.n_B, s.n_W, truth->sigma_B, truth->sigma_W);
    if (truth->sigma_W > 0.0)
      s.phi_hat = noncentrality_phi(s.n_W, truth->mu_B, truth->mu_W, truth->sigma_W);
    if (truth->m_W > 0.0 && n > 0) {
      s.rate_exponent = truth->m_W / truth->m_B;
      s.eta_sq_hat = eta_sq_estimate(n, s.n_W, truth->m_B, truth->m_W);
      s.psi_hat = psi_estimate(black_mass, white_mass, truth->m_B, truth->m_W);
      if (truth->m_B > truth->m_W) {
        s.remark2_residual =
            remark2_residual(n, s.n_W, black_mass, white_mass, truth->m_B, truth->m_W);
        s.corollary2_ratio =
            corollary2_ratio(n, s.n_W, black_mass, white_mass, truth->m_B, truth->m_W);
      }
    }
  }
  return s;
}

}  // namespace rru

#endif  // RRU_INFERENCE_HPP_
