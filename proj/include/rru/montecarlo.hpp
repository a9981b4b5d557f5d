#ifndef RRU_MONTECARLO_HPP_
#define RRU_MONTECARLO_HPP_

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "rru/inference.hpp"
#include "rru/rng.hpp"
#include "rru/stats.hpp"
#include "rru/urn.hpp"

// Replicated-study orchestration. Replicates are independent given their
// derived seeds, so any worker pool may run them; aggregation is a single
// index-ordered reduction, which makes reports independent of worker count.

namespace rru {

struct StudyPlan {
  DesignConfig cfg;
  std::uint64_t replicates = 1;
  std::uint64_t base_seed = 0;
  double alpha = 0.05;
  std::optional<TruthSet> truth;  // populated from closed forms when absent
  // optional diagnostics
  std::optional<std::pair<double, double>> z_beta_reference;  // KS of terminal Z vs Beta(a,b)
  bool subsequence_check = false;  // per-replicate KS of B-arm responses vs L_B
  double subsequence_alpha = 0.01;
};

struct Aggregate {
  std::uint64_t defined = 0;
  double mean = 0.0;
  double median = 0.0;
  double q05 = 0.0;
  double q95 = 0.0;
};

inline Aggregate aggregate_of(const std::vector<double>& defined_values) {
  Aggregate a;
  a.defined = defined_values.size();
  if (defined_values.empty()) return a;
  double sum = 0.0;
  for (double v : defined_values) sum += v;
  a.mean = sum / double(defined_values.size());
  std::vector<double> sorted = defined_values;
  std::sort(sorted.begin(), sorted.end());
  auto q = [&](double p) {
    double idx = p * double(sorted.size() - 1);
    std::size_t lo = std::size_t(idx);
    std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    double frac = idx - double(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
  };
  a.median = q(0.5);
  a.q05 = q(0.05);
  a.q95 = q(0.95);
  return a;
}

struct CheckpointAggregates {
  std::uint64_t n = 0;
  Aggregate z, zeta0, zeta, lambda, eta_sq_hat, psi_hat, remark2_residual, corollary2_ratio;
  double rejection_rate = 0.0;   // zeta0 > z_{1-alpha}, over replicates with zeta0 defined
};

struct StudyReport {
  std::uint64_t replicates = 0;
  double alpha = 0.05;
  std::optional<TruthSet> truth;
  std::vector<std::uint64_t> checkpoints;
  // per_replicate[r][c] is the stats of replicate r at checkpoint c
  std::vector<std::vector<CheckpointStats>> per_replicate;
  std::vector<CheckpointAggregates> aggregates;
  // terminal-checkpoint diagnostics
  std::optional<GofResult> zeta0_ks;             // vs N(0,1)
  std::optional<GofResult> zeta_ks;              // vs N(0,1), true variances
  std::optional<GofResult> std_mean_B_ks;        // sqrt(N_B)(Ybar_B - mu_B)/sigma_B vs N(0,1)
  std::optional<GofResult> std_mean_W_ks;
  std::optional<GofResult> zeta0_minus_phi_ks;   // vs N(0,1)
  std::optional<GofResult> z_beta_ks;            // terminal Z vs configured Beta
  std::optional<double> corr_std_means;
  std::optional<double> corr_zeta_eta;
  std::optional<double> rejection_rate;          // zeta0 at terminal checkpoint
  std::optional<double> rejection_rate_zeta;     // zeta at terminal checkpoint
  std::optional<double> subsequence_pass_rate;   // per-replicate B-arm KS pass share
  double z_extreme_fraction = 0.0;               // terminal Z outside [0.01, 0.99]
};

inline unsigned worker_count_from_env() {
  if (const char* env = std::getenv("RRU_WORKERS")) {
    long v = std::atol(env);
    if (v >= 1) return unsigned(v);
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc ? hc : 1;
}

/// Run the plan's replicates (parallel over a worker pool; output independent
/// of the pool size) and aggregate.
inline StudyReport run_study(const StudyPlan& plan, unsigned workers = 0) {
  auto violations = validate_config(plan.cfg);
  if (!violations.empty()) throw ConfigError("run_study: " + violations.front());
  if (plan.replicates < 1) throw ConfigError("run_study: replicates must be >= 1");
  if (!(plan.alpha > 0.0 && plan.alpha < 1.0))
    throw ConfigError("run_study: alpha must be in (0,1)");
  if (workers == 0) workers = worker_count_from_env();

  TruthSet truth_storage{};
  const TruthSet* truth = nullptr;
  if (plan.truth) {
    truth_storage = *plan.truth;
    truth = &truth_storage;
  } else {
    truth_storage = truth_from(plan.cfg);
    truth = &truth_storage;
  }

  const std::uint64_t R = plan.replicates;
  StudyReport report;
  report.replicates = R;
  report.alpha = plan.alpha;
  report.truth = truth_storage;
  report.checkpoints = plan.cfg.checkpoints;
  report.per_replicate.resize(R);
  std::vector<char> subseq_pass(R, 0);

  const bool need_records = plan.subsequence_check;
  std::atomic<std::uint64_t> next{0};
  auto worker = [&]() {
    for (;;) {
      std::uint64_t r = next.fetch_add(1);
      if (r >= R) return;
      std::uint64_t seed = derive_seed(plan.base_seed, r);
      TrialPath path = run_trial(plan.cfg, seed, truth, need_records);
      if (plan.subsequence_check) {
        auto [b_arm, w_arm] = observed_subsequences(path);
        if (!b_arm.empty()) {
          GofResult gof = response_gof(b_arm, plan.cfg.arm_B);
          subseq_pass[r] = gof.p_value > plan.subsequence_alpha ? 1 : 0;
        }
      }
      report.per_replicate[r] = std::move(path.snapshots);
    }
  };
  if (workers <= 1 || R == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  // aggregation, strictly in replicate-index order
  const std::size_t C = plan.cfg.checkpoints.size();
  report.aggregates.resize(C);
  double z_alpha = normal_quantile(1.0 - plan.alpha);
  for (std::size_t c = 0; c < C; ++c) {
    CheckpointAggregates& agg = report.aggregates[c];
    agg.n = plan.cfg.checkpoints[c];
    std::vector<double> zs, zeta0s, zetas, lambdas, etas, psis, rem2s, cor2s;
    std::uint64_t rejected = 0, zeta0_defined = 0;
    for (std::uint64_t r = 0; r < R; ++r) {
      const CheckpointStats& s = report.per_replicate[r][c];
      zs.push_back(s.z_n);
      if (s.zeta0) {
        zeta0s.push_back(*s.zeta0);
        ++zeta0_defined;
        if (*s.zeta0 > z_alpha) ++rejected;
      }
      if (s.zeta) zetas.push_back(*s.zeta);
      if (s.lambda_n) lambdas.push_back(*s.lambda_n);
      if (s.eta_sq_hat) etas.push_back(*s.eta_sq_hat);
      if (s.psi_hat) psis.push_back(*s.psi_hat);
      if (s.remark2_residual) rem2s.push_back(*s.remark2_residual);
      if (s.corollary2_ratio) cor2s.push_back(*s.corollary2_ratio);
    }
    agg.z = aggregate_of(zs);
    agg.zeta0 = aggregate_of(zeta0s);
    agg.zeta = aggregate_of(zetas);
    agg.lambda = aggregate_of(lambdas);
    agg.eta_sq_hat = aggregate_of(etas);
    agg.psi_hat = aggregate_of(psis);
    agg.remark2_residual = aggregate_of(rem2s);
    agg.corollary2_ratio = aggregate_of(cor2s);
    agg.rejection_rate = zeta0_defined ? double(rejected) / double(zeta0_defined) : 0.0;
  }

  // terminal-checkpoint diagnostics
  if (C > 0) {
    std::vector<double> zeta0s, zetas, std_b, std_w, zeta0_minus_phi, etas, term_z;
    std::uint64_t rejected0 = 0, def0 = 0, rejected_z = 0, def_z = 0, extreme = 0;
    for (std::uint64_t r = 0; r < R; ++r) {
      const CheckpointStats& s = report.per_replicate[r][C - 1];
      term_z.push_back(s.z_n);
      if (s.z_n < 0.01 || s.z_n > 0.99) ++extreme;
      if (s.zeta0) {
        ++def0;
        zeta0s.push_back(*s.zeta0);
        if (*s.zeta0 > z_alpha) ++rejected0;
        if (s.phi_hat) zeta0_minus_phi.push_back(*s.zeta0 - *s.phi_hat);
      }
      if (s.zeta) {
        ++def_z;
        zetas.push_back(*s.zeta);
        if (*s.zeta > z_alpha) ++rejected_z;
      }
      if (truth_storage.sigma_B > 0.0 && s.n_B > 0 && s.ybar_B)
        std_b.push_back(std::sqrt(double(s.n_B)) * (*s.ybar_B - truth_storage.mu_B) /
                        truth_storage.sigma_B);
      if (truth_storage.sigma_W > 0.0 && s.n_W > 0 && s.ybar_W)
        std_w.push_back(std::sqrt(double(s.n_W)) * (*s.ybar_W - truth_storage.mu_W) /
                        truth_storage.sigma_W);
      if (s.eta_sq_hat) etas.push_back(*s.eta_sq_hat);
    }
    report.z_extreme_fraction = double(extreme) / double(R);
    auto phi = [](double x) { return normal_cdf(x); };
    if (!zeta0s.empty()) {
      report.zeta0_ks = ks_test(EcdfSample::from(zeta0s), phi);
      report.rejection_rate = double(rejected0) / double(def0);
    }
    if (!zetas.empty()) {
      report.zeta_ks = ks_test(EcdfSample::from(zetas), phi);
      report.rejection_rate_zeta = double(rejected_z) / double(def_z);
    }
    if (!std_b.empty()) report.std_mean_B_ks = ks_test(EcdfSample::from(std_b), phi);
    if (!std_w.empty()) report.std_mean_W_ks = ks_test(EcdfSample::from(std_w), phi);
    if (!zeta0_minus_phi.empty())
      report.zeta0_minus_phi_ks = ks_test(EcdfSample::from(zeta0_minus_phi), phi);
    if (plan.z_beta_reference) {
      auto [ba, bb] = *plan.z_beta_reference;
      report.z_beta_ks = ks_test(EcdfSample::from(term_z),
                                 [&](double x) { return beta_cdf(std::clamp(x, 0.0, 1.0), ba, bb); });
    }
    if (std_b.size() == R && std_w.size() == R && R >= 2)
      report.corr_std_means = pearson_corr(std_b, std_w);
    if (zetas.size() == R && etas.size() == R && R >= 2)
      report.corr_zeta_eta = pearson_corr(zetas, etas);
    if (plan.subsequence_check) {
      std::uint64_t passed = 0;
      for (std::uint64_t r = 0; r < R; ++r) passed += subseq_pass[r];
      report.subsequence_pass_rate = double(passed) / double(R);
    }
  }
  return report;
}

struct NamedCheck {
  std::string name;
  double value = 0.0;
  bool defined = true;
};

/// Diagnostics under equal transformed means: normality of zeta0 and of the
/// standardized arm means, their cross-correlation, empirical size, and the
/// degenerate-avoidance fraction.
struct H0SuiteResult {
  StudyReport report;
  std::vector<NamedCheck> checks;
};

inline H0SuiteResult h0_suite(StudyPlan plan, unsigned workers = 0) {
  TruthSet t = plan.truth ? *plan.truth : truth_from(plan.cfg);
  if (std::fabs(t.m_B - t.m_W) > 1e-12)
    throw std::logic_error("h0_suite: requires equal transformed means m_B = m_W");
  plan.truth = t;
  H0SuiteResult out;
  out.report = run_study(plan, workers);
  auto push = [&](const std::string& name, std::optional<double> v) {
    out.checks.push_back({name, v.value_or(0.0), v.has_value()});
  };
  push("zeta0_ks_d", out.report.zeta0_ks
                         ? std::optional<double>(out.report.zeta0_ks->statistic)
                         : std::nullopt);
  push("std_mean_B_ks_d", out.report.std_mean_B_ks
                              ? std::optional<double>(out.report.std_mean_B_ks->statistic)
                              : std::nullopt);
  push("std_mean_W_ks_d", out.report.std_mean_W_ks
                              ? std::optional<double>(out.report.std_mean_W_ks->statistic)
                              : std::nullopt);
  push("corr_std_means", out.report.corr_std_means);
  push("empirical_size", out.report.rejection_rate);
  push("z_extreme_fraction", out.report.z_extreme_fraction);
  return out;
}

/// Diagnostics under m_B > m_W: allocation share, rate-law stability across
/// the top two checkpoints, the Remark-2 / Corollary-2 trackers, normality of
/// zeta0 - phi, the mixing correlation proxy, and empirical power.
struct H1SuiteResult {
  StudyReport report;
  std::vector<NamedCheck> checks;
  std::vector<double> eta_stability_ratios;  // per replicate, top two checkpoints
};

inline H1SuiteResult h1_suite(StudyPlan plan, unsigned workers = 0) {
  TruthSet t = plan.truth ? *plan.truth : truth_from(plan.cfg);
  if (!(t.m_B > t.m_W && t.m_W > 0.0))
    throw std::logic_error("h1_suite: requires m_B > m_W > 0");
  plan.truth = t;
  H1SuiteResult out;
  out.report = run_study(plan, workers);
  const StudyReport& rep = out.report;
  const std::size_t C = rep.checkpoints.size();

  std::vector<double> nb_shares;
  for (const auto& reps : rep.per_replicate) {
    const CheckpointStats& s = reps[C - 1];
    nb_shares.push_back(double(s.n_B) / double(s.n));
  }
  if (C >= 2) {
    for (const auto& reps : rep.per_replicate) {
      const CheckpointStats& mid = reps[C - 2];
      const CheckpointStats& last = reps[C - 1];
      if (mid.eta_sq_hat && last.eta_sq_hat && *mid.eta_sq_hat > 0.0)
        out.eta_stability_ratios.push_back(*last.eta_sq_hat / *mid.eta_sq_hat);
    }
  }
  std::vector<double> abs_rem2;
  for (const auto& reps : rep.per_replicate)
    if (reps[C - 1].remark2_residual)
      abs_rem2.push_back(std::fabs(*reps[C - 1].remark2_residual));

  auto push = [&](const std::string& name, std::optional<double> v) {
    out.checks.push_back({name, v.value_or(0.0), v.has_value()});
  };
  push("mean_terminal_NB_share", aggregate_of(nb_shares).mean);
  push("eta_stability_ratio_median",
       out.eta_stability_ratios.empty()
           ? std::nullopt
           : std::optional<double>(median_of(out.eta_stability_ratios)));
  push("remark2_abs_residual_median",
       abs_rem2.empty() ? std::nullopt : std::optional<double>(median_of(abs_rem2)));
  push("corollary2_ratio_median",
       rep.aggregates[C - 1].corollary2_ratio.defined
           ? std::optional<double>(rep.aggregates[C - 1].corollary2_ratio.median)
           : std::nullopt);
  push("zeta0_minus_phi_ks_d",
       rep.zeta0_minus_phi_ks ? std::optional<double>(rep.zeta0_minus_phi_ks->statistic)
                              : std::nullopt);
  push("corr_zeta_eta", rep.corr_zeta_eta);
  push("empirical_power", rep.rejection_rate);
  return out;
}

struct PowerRow {
  double effect = 0.0;
  std::uint64_t n = 0;
  std::uint64_t replicates = 0;
  double alpha = 0.05;
  double empirical_power = 0.0;
  double mean_nw_share = 0.0;
  double mean_eta_sq = 0.0;
};

/// Shift arm B's mean by `effect` within its family; throws ConfigError when
/// the shifted parameters leave the family's domain.
inline ResponseModel shift_mean(const ResponseModel& m, double effect) {
  ResponseModel out = m;
  switch (m.kind) {
    case ResponseKind::bernoulli:
      out.a = m.a + effect;
      if (!(out.a >= 0.0 && out.a <= 1.0))
        throw ConfigError("shift_mean: arm_B.p out of [0,1] at effect " + std::to_string(effect));
      return out;
    case ResponseKind::normal:
      out.a = m.a + effect;
      return out;
    case ResponseKind::point_mass:
      out.a = m.a + effect;
      return out;
    case ResponseKind::uniform:
      out.a = m.a + effect;
      out.b = m.b + effect;
      return out;
    case ResponseKind::exponential: {
      double mean = 1.0 / m.a + effect;
      if (!(mean > 0.0))
        throw ConfigError("shift_mean: arm_B.rate requires positive mean at effect " +
                          std::to_string(effect));
      out.a = 1.0 / mean;
      return out;
    }
    case ResponseKind::beta:
      throw ConfigError("shift_mean: mean shifts are not defined for beta arms");
  }
  throw ConfigError("shift_mean: unknown family");
}

/// One study per effect size; effect 0 reproduces the H0 size row.
inline std::vector<PowerRow> power_curve(const StudyPlan& plan_template,
                                         const std::vector<double>& effect_sizes,
                                         unsigned workers = 0) {
  std::vector<double> effects = effect_sizes;
  std::sort(effects.begin(), effects.end());
  std::vector<PowerRow> rows;
  for (double effect : effects) {
    StudyPlan plan = plan_template;
    plan.cfg.arm_B = shift_mean(plan_template.cfg.arm_B, effect);
    plan.truth.reset();  // recompute closed forms for the shifted arm
    auto violations = validate_config(plan.cfg);
    if (!violations.empty()) throw ConfigError("power_curve: " + violations.front());
    StudyReport rep = run_study(plan, workers);
    PowerRow row;
    row.effect = effect;
    row.n = plan.cfg.horizon;
    row.replicates = plan.replicates;
    row.alpha = plan.alpha;
    row.empirical_power = rep.rejection_rate.value_or(0.0);
    const std::size_t C = rep.checkpoints.size();
    std::vector<double> nw_shares, etas;
    for (const auto& reps : rep.per_replicate) {
      const CheckpointStats& s = reps[C - 1];
      nw_shares.push_back(double(s.n_W) / double(s.n));
      if (s.eta_sq_hat) etas.push_back(*s.eta_sq_hat);
    }
    row.mean_nw_share = aggregate_of(nw_shares).mean;
    row.mean_eta_sq = etas.empty() ? 0.0 : aggregate_of(etas).mean;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace rru

#endif  // RRU_MONTECARLO_HPP_
