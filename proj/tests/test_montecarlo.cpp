#include <catch2/catch_amalgamated.hpp>

#include <unordered_set>

#include "rru/io.hpp"
#include "rru/montecarlo.hpp"

using namespace rru;

namespace {

DesignConfig equal_bernoulli(std::uint64_t horizon) {
  DesignConfig cfg;
  cfg.arm_B = ResponseModel::bernoulli(0.5);
  cfg.arm_W = ResponseModel::bernoulli(0.5);
  cfg.utility = UtilityTransform::identity(1.0);
  cfg.b = 1.0;
  cfg.w = 1.0;
  cfg.horizon = horizon;
  cfg.checkpoints = {horizon};
  return cfg;
}

}  // namespace

TEST_CASE("derive_seed contract") {
  CHECK(derive_seed(42, 7) == derive_seed(42, 7));
  CHECK(derive_seed(42, 0) != derive_seed(43, 0));
  std::unordered_set<std::uint64_t> seen;
  const std::uint64_t N = 1 << 20;
  seen.reserve(N);
  for (std::uint64_t i = 0; i < N; ++i) seen.insert(derive_seed(123456789, i));
  CHECK(seen.size() == N);
}

TEST_CASE("run_study with R=1 wraps run_trial") {
  StudyPlan plan;
  plan.cfg = equal_bernoulli(500);
  plan.replicates = 1;
  plan.base_seed = 321;
  StudyReport rep = run_study(plan, 1);
  REQUIRE(rep.per_replicate.size() == 1);
  TruthSet truth = truth_from(plan.cfg);
  TrialPath path = run_trial(plan.cfg, derive_seed(321, 0), &truth);
  REQUIRE(path.snapshots.size() == 1);
  CHECK(rep.per_replicate[0][0].n_B == path.snapshots[0].n_B);
  CHECK(rep.per_replicate[0][0].z_n == path.snapshots[0].z_n);
  CHECK(rep.aggregates[0].z.mean == path.snapshots[0].z_n);
}

TEST_CASE("run_study is invariant to worker count") {
  StudyPlan plan;
  plan.cfg = equal_bernoulli(1000);
  plan.cfg.checkpoints = {100, 1000};
  plan.replicates = 64;
  plan.base_seed = 5150;
  plan.subsequence_check = true;
  StudyReport a = run_study(plan, 1);
  StudyReport b = run_study(plan, 3);
  StudyReport c = run_study(plan, 8);
  CHECK(study_aggregate_json(a) == study_aggregate_json(b));
  CHECK(study_aggregate_json(a) == study_aggregate_json(c));
  CHECK(study_csv(a) == study_csv(b));
}

TEST_CASE("Polya degenerate case follows the Beta limit law") {
  StudyPlan plan;
  plan.cfg.arm_B = ResponseModel::point_mass(1.0);
  plan.cfg.arm_W = ResponseModel::point_mass(1.0);
  plan.cfg.utility = UtilityTransform::identity(1.0);
  plan.cfg.b = 2.0;
  plan.cfg.w = 1.0;
  plan.cfg.horizon = 1000;
  plan.cfg.checkpoints = {1000};
  plan.replicates = 500;
  plan.base_seed = 2718;
  plan.z_beta_reference = {{2.0, 1.0}};
  StudyReport rep = run_study(plan);
  REQUIRE(rep.z_beta_ks.has_value());
  CHECK(rep.z_beta_ks->p_value > 0.001);
}

TEST_CASE("h0_suite on degenerate equal point-mass arms reports absent zeta0") {
  StudyPlan plan;
  plan.cfg.arm_B = ResponseModel::point_mass(1.0);
  plan.cfg.arm_W = ResponseModel::point_mass(1.0);
  plan.cfg.utility = UtilityTransform::identity(1.0);
  plan.cfg.b = 1.0;
  plan.cfg.w = 1.0;
  plan.cfg.horizon = 200;
  plan.cfg.checkpoints = {200};
  plan.replicates = 50;
  plan.base_seed = 1;
  H0SuiteResult res = h0_suite(plan, 2);
  for (const auto& check : res.checks) {
    if (check.name == "zeta0_ks_d") CHECK_FALSE(check.defined);
  }
  CHECK_FALSE(res.report.zeta0_ks.has_value());
}

TEST_CASE("h0_suite empirical size near nominal") {
  StudyPlan plan;
  plan.cfg = equal_bernoulli(2000);
  plan.replicates = 400;
  plan.base_seed = 31415;
  plan.alpha = 0.05;
  H0SuiteResult res = h0_suite(plan);
  double size = res.report.rejection_rate.value_or(-1.0);
  CHECK(size >= 0.02);
  CHECK(size <= 0.08);
  REQUIRE(res.report.corr_std_means.has_value());
  CHECK(std::fabs(*res.report.corr_std_means) <= 2.5 / std::sqrt(400.0) + 0.05);
}

TEST_CASE("h0_suite rejects unequal transformed means") {
  StudyPlan plan;
  plan.cfg = equal_bernoulli(100);
  plan.cfg.arm_B = ResponseModel::bernoulli(0.9);
  plan.replicates = 10;
  CHECK_THROWS_AS(h0_suite(plan), std::logic_error);
}

TEST_CASE("h1_suite rate exponent from closed-form moments") {
  StudyPlan plan;
  plan.cfg.arm_B = ResponseModel::point_mass(2.0);
  plan.cfg.arm_W = ResponseModel::point_mass(1.0);
  plan.cfg.utility = UtilityTransform::identity(2.0);
  plan.cfg.b = 1.0;
  plan.cfg.w = 1.0;
  plan.cfg.horizon = 1000;
  plan.cfg.checkpoints = {100, 1000};
  plan.replicates = 40;
  plan.base_seed = 161803;
  H1SuiteResult res = h1_suite(plan, 2);
  // m_W/m_B = 0.5 exactly
  for (const auto& reps : res.report.per_replicate) {
    REQUIRE(reps.back().rate_exponent.has_value());
    CHECK(*reps.back().rate_exponent == 0.5);
  }
  for (const auto& check : res.checks) {
    if (check.name == "mean_terminal_NB_share") CHECK(check.value > 0.8);
  }
}

TEST_CASE("h1_suite requires m_B > m_W") {
  StudyPlan plan;
  plan.cfg = equal_bernoulli(100);
  plan.replicates = 10;
  CHECK_THROWS_AS(h1_suite(plan), std::logic_error);
}

TEST_CASE("power_curve") {
  StudyPlan plan;
  plan.cfg = equal_bernoulli(2000);
  plan.replicates = 200;
  plan.base_seed = 60221;
  plan.alpha = 0.05;
  auto rows = power_curve(plan, {0.4, 0.0, 0.2});
  REQUIRE(rows.size() == 3);
  // sorted ascending by effect
  CHECK(rows[0].effect == 0.0);
  CHECK(rows[1].effect == 0.2);
  CHECK(rows[2].effect == 0.4);
  // effect 0 reproduces the H0 size row
  CHECK(rows[0].empirical_power >= 0.01);
  CHECK(rows[0].empirical_power <= 0.10);
  // monotone in effect up to Monte Carlo slack
  CHECK(rows[2].empirical_power >= rows[1].empirical_power - 0.03);
  CHECK(rows[1].empirical_power >= rows[0].empirical_power - 0.03);
  CHECK(rows[2].empirical_power >= 0.9);

  CHECK_THROWS_AS(power_curve(plan, {0.7}), ConfigError);  // p_B would exceed 1
}
