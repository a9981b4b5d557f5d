#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "rru/inference.hpp"
#include "rru/rng.hpp"
#include "rru/urn.hpp"

using namespace rru;

namespace {
ArmSums sums_of(std::initializer_list<double> ys) {
  ArmSums s;
  for (double y : ys) {
    s.count += 1;
    s.sum_y += y;
    s.sum_y2 += y * y;
  }
  return s;
}
}  // namespace

TEST_CASE("adaptive means") {
  ArmSums b = sums_of({1.0, 0.0, 1.0});
  ArmSums w;
  CHECK(*arm_mean(b) == Catch::Approx(2.0 / 3.0).margin(1e-15));
  CHECK_FALSE(arm_mean(w).has_value());
  CHECK(*arm_mean(sums_of({4.25})) == Catch::Approx(4.25).margin(1e-15));
}

TEST_CASE("adaptive variances use divisor N and clamp at zero") {
  CHECK(*arm_variance(sums_of({0.0, 1.0})) == Catch::Approx(0.25).margin(1e-15));
  CHECK(*arm_variance(sums_of({7.0})) == 0.0);
  CHECK(*arm_variance(sums_of({2.0, 2.0, 2.0})) == 0.0);
  CHECK_FALSE(arm_variance(ArmSums{}).has_value());
}

TEST_CASE("zeta0 examples") {
  // equal means -> 0
  ArmSums b = sums_of({0.0, 1.0, 0.0, 1.0});
  ArmSums w = sums_of({1.0, 0.0, 1.0, 0.0});
  auto z = zeta0_statistic(b.count, w.count, arm_mean(b), arm_mean(w), arm_variance(b),
                           arm_variance(w));
  CHECK(*z == Catch::Approx(0.0).margin(1e-15));

  // diff 0.2, var 1, counts 100 -> sqrt(2)
  auto z2 = zeta0_statistic(100, 100, 0.7, 0.5, 1.0, 1.0);
  CHECK(*z2 == Catch::Approx(std::sqrt(2.0)).margin(1e-9));

  // zero pooled variance -> undefined
  CHECK_FALSE(zeta0_statistic(10, 10, 1.0, 1.0, 0.0, 0.0).has_value());
  CHECK_FALSE(zeta0_statistic(0, 10, std::nullopt, 1.0, std::nullopt, 1.0).has_value());
}

TEST_CASE("zeta examples") {
  // estimates equal to true means -> 0
  auto z = zeta_statistic(50, 50, 0.3, 0.7, 0.3, 0.7, 1.0, 1.0);
  CHECK(*z == Catch::Approx(0.0).margin(1e-15));
  // same numeric case as zeta0 with true diff 0
  auto z2 = zeta_statistic(100, 100, 0.7, 0.5, 0.0, 0.0, 1.0, 1.0);
  CHECK(*z2 == Catch::Approx(std::sqrt(2.0)).margin(1e-9));
  CHECK_FALSE(zeta_statistic(0, 100, std::nullopt, 0.5, 0.0, 0.0, 1.0, 1.0).has_value());
}

TEST_CASE("lambda weight") {
  CHECK(*lambda_weight(200, 100, 100, 1.0, 1.0) == Catch::Approx(0.5).margin(1e-15));
  CHECK(*lambda_weight(100, 100, 0, 1.0, 1.0) == Catch::Approx(0.0).margin(1e-15));
  CHECK(*lambda_weight(10, 8, 2, 2.0, 1.0) == Catch::Approx(0.5).margin(1e-12));
  CHECK_FALSE(lambda_weight(10, 10, 0, 1.0, 0.0).has_value());
  // finite-n plug-in coincides with lambda_inf evaluated at Z = n_B/n
  for (auto [nb, nw, sb, sw] : {std::tuple{30ull, 70ull, 1.3, 0.7},
                                std::tuple{99ull, 1ull, 0.5, 2.0}}) {
    double z = double(nb) / double(nb + nw);
    double lam_inf = sb * sb * (1.0 - z) / (sb * sb * (1.0 - z) + sw * sw * z);
    CHECK(*lambda_weight(nb + nw, nb, nw, sb, sw) == Catch::Approx(lam_inf).margin(1e-12));
  }
}

TEST_CASE("noncentrality phi") {
  CHECK(noncentrality_phi(100, 0.5, 0.5, 1.0) == 0.0);
  CHECK(noncentrality_phi(100, 0.8, 0.5, 1.0) == Catch::Approx(3.0).margin(1e-12));
}

TEST_CASE("eta_sq estimate") {
  CHECK(eta_sq_estimate(1000, 250, 0.5, 0.5) == Catch::Approx(0.25).margin(1e-15));
  CHECK(eta_sq_estimate(10000, 50, 1.0, 0.5) == Catch::Approx(0.5).margin(1e-12));
  // definitional round trip
  for (auto [n, nw, mb, mw] : {std::tuple{12345ull, 321ull, 0.9, 0.5},
                               std::tuple{100000ull, 77ull, 1.0, 0.25}}) {
    double eta = eta_sq_estimate(n, nw, mb, mw);
    CHECK(eta * std::pow(double(n), mw / mb) == Catch::Approx(double(nw)).epsilon(1e-12));
  }
}

TEST_CASE("psi estimate and the equal-means identity") {
  CHECK(psi_estimate(4.0, 4.0, 0.5, 0.5) == Catch::Approx(1.0).margin(1e-15));
  CHECK(psi_estimate(8.0, 4.0, 1.5, 1.0) == Catch::Approx(1.0).margin(1e-12));
  // m_B = m_W: Z = psi/(psi+1) exactly
  for (auto [bm, wm] : {std::pair{3.7, 1.1}, std::pair{0.4, 9.0}}) {
    double psi = psi_estimate(bm, wm, 0.5, 0.5);
    CHECK(psi / (psi + 1.0) == Catch::Approx(bm / (bm + wm)).margin(1e-9));
  }
}

TEST_CASE("remark2 residual vanishes at the defining asymptote") {
  double m_B = 0.9, m_W = 0.5;
  std::uint64_t n = 100000, n_W = 400;
  // choose masses so that psi-hat equals m_B n / (m_W n_W)^{m_B/m_W}
  double w_mass = 10.0;
  double target_psi = m_B * double(n) / std::pow(m_W * double(n_W), m_B / m_W);
  double b_mass = target_psi * std::pow(w_mass, m_B / m_W);
  auto res = remark2_residual(n, n_W, b_mass, w_mass, m_B, m_W);
  REQUIRE(res.has_value());
  CHECK(*res == Catch::Approx(0.0).margin(1e-12));
  CHECK_FALSE(remark2_residual(100, 0, 1.0, 1.0, m_B, m_W).has_value());
}

TEST_CASE("corollary2 ratio algebraic case") {
  double m_B = 0.9, m_W = 0.5;
  std::uint64_t n = 100000, n_W = 300;
  double b_mass = m_B * double(n);
  double w_mass = m_W * double(n_W);
  auto ratio = corollary2_ratio(n, n_W, b_mass, w_mass, m_B, m_W);
  REQUIRE(ratio.has_value());
  double expected = m_B * double(n) / (m_B * double(n) + m_W * double(n_W));
  CHECK(*ratio == Catch::Approx(expected).margin(1e-9));
  CHECK_FALSE(corollary2_ratio(100, 0, 1.0, 1.0, m_B, m_W).has_value());
}

TEST_CASE("reject_h0 boundary convention") {
  CHECK_FALSE(reject_h0(0.0, 0.05));
  CHECK(reject_h0(2.0, 0.05));
  double z95 = normal_quantile(0.95);
  CHECK(z95 == Catch::Approx(1.6449).margin(1e-4));
  CHECK_FALSE(reject_h0(z95, 0.05));  // strict inequality at the boundary
  CHECK(reject_h0(std::nextafter(z95, 10.0), 0.05));
}

TEST_CASE("zeta0 is scale free") {
  RngStream rng(4242);
  for (int trial = 0; trial < 200; ++trial) {
    ArmSums b, w;
    int nb = 2 + int(rng.next_uniform() * 40), nw = 2 + int(rng.next_uniform() * 40);
    for (int i = 0; i < nb; ++i) {
      double y = rng.next_normal() + 0.3;
      b.count++, b.sum_y += y, b.sum_y2 += y * y;
    }
    for (int i = 0; i < nw; ++i) {
      double y = rng.next_normal();
      w.count++, w.sum_y += y, w.sum_y2 += y * y;
    }
    auto z = zeta0_statistic(b.count, w.count, arm_mean(b), arm_mean(w), arm_variance(b),
                             arm_variance(w));
    double c = 0.1 + rng.next_uniform() * 10.0;
    ArmSums bs{b.count, c * b.sum_y, c * c * b.sum_y2};
    ArmSums ws{w.count, c * w.sum_y, c * c * w.sum_y2};
    auto zs = zeta0_statistic(bs.count, ws.count, arm_mean(bs), arm_mean(ws), arm_variance(bs),
                              arm_variance(ws));
    REQUIRE(z.has_value());
    REQUIRE(zs.has_value());
    CHECK(*zs == Catch::Approx(*z).margin(1e-9));
    CHECK(reject_h0(*zs, 0.05) == reject_h0(*z, 0.05));
  }
}

TEST_CASE("zeta with estimated variances equals zeta times gamma(n)") {
  RngStream rng(777);
  for (int trial = 0; trial < 200; ++trial) {
    ArmSums b, w;
    int nb = 3 + int(rng.next_uniform() * 50), nw = 3 + int(rng.next_uniform() * 50);
    for (int i = 0; i < nb; ++i) {
      double y = 2.0 * rng.next_normal() + 1.0;
      b.count++, b.sum_y += y, b.sum_y2 += y * y;
    }
    for (int i = 0; i < nw; ++i) {
      double y = 0.5 * rng.next_normal();
      w.count++, w.sum_y += y, w.sum_y2 += y * y;
    }
    double mu_B = 1.0, mu_W = 0.0, sigma_B = 2.0, sigma_W = 0.5;
    std::uint64_t n = b.count + w.count;
    auto zeta_true = zeta_statistic(b.count, w.count, arm_mean(b), arm_mean(w), mu_B, mu_W,
                                    sigma_B, sigma_W);
    double sb_hat = std::sqrt(*arm_variance(b));
    double sw_hat = std::sqrt(*arm_variance(w));
    auto zeta_est = zeta_statistic(b.count, w.count, arm_mean(b), arm_mean(w), mu_B, mu_W,
                                   sb_hat, sw_hat);
    double num = sigma_B * sigma_B * double(w.count) / double(n) +
                 sigma_W * sigma_W * double(b.count) / double(n);
    double den = sb_hat * sb_hat * double(w.count) / double(n) +
                 sw_hat * sw_hat * double(b.count) / double(n);
    double gamma_n = std::sqrt(num / den);
    REQUIRE(zeta_true.has_value());
    REQUIRE(zeta_est.has_value());
    CHECK(*zeta_est == Catch::Approx(*zeta_true * gamma_n).margin(1e-12));
  }
}

TEST_CASE("zeta0 is antisymmetric under arm swap") {
  ArmSums b = sums_of({0.1, 0.9, 0.3});
  ArmSums w = sums_of({0.6, 0.2, 0.8, 0.4});
  auto z = zeta0_statistic(b.count, w.count, arm_mean(b), arm_mean(w), arm_variance(b),
                           arm_variance(w));
  auto zswap = zeta0_statistic(w.count, b.count, arm_mean(w), arm_mean(b), arm_variance(w),
                               arm_variance(b));
  CHECK(*zswap == -*z);
}

TEST_CASE("compute_checkpoint wires everything together") {
  DesignConfig cfg;
  cfg.arm_B = ResponseModel::bernoulli(0.9);
  cfg.arm_W = ResponseModel::bernoulli(0.5);
  cfg.utility = UtilityTransform::identity(1.0);
  cfg.b = 1.0;
  cfg.w = 1.0;
  cfg.horizon = 2000;
  cfg.checkpoints = {2000};
  TruthSet truth = truth_from(cfg);
  CHECK(truth.m_B == Catch::Approx(0.9));
  CHECK(truth.m_W == Catch::Approx(0.5));
  TrialPath path = run_trial(cfg, 11, &truth);
  REQUIRE(path.snapshots.size() == 1);
  const CheckpointStats& s = path.snapshots.front();
  CHECK(s.n == 2000);
  CHECK(s.n_B + s.n_W == s.n);
  CHECK(*s.rate_exponent == Catch::Approx(5.0 / 9.0));
  REQUIRE(s.eta_sq_hat.has_value());
  CHECK(*s.eta_sq_hat == Catch::Approx(double(s.n_W) / std::pow(2000.0, 5.0 / 9.0)).margin(1e-12));
  REQUIRE(s.lambda_n.has_value());
  CHECK(*s.lambda_n >= 0.0);
  CHECK(*s.lambda_n <= 1.0);
}

TEST_CASE("adaptive estimators are consistent at moderate n") {
  DesignConfig cfg;
  cfg.arm_B = ResponseModel::bernoulli(0.5);
  cfg.arm_W = ResponseModel::bernoulli(0.5);
  cfg.utility = UtilityTransform::identity(1.0);
  cfg.b = 1.0;
  cfg.w = 1.0;
  cfg.horizon = 10000;
  cfg.checkpoints = {10000};
  const int R = 200;
  int within = 0;
  for (int r = 0; r < R; ++r) {
    TrialPath path = run_trial(cfg, derive_seed(9001, std::uint64_t(r)), nullptr, false);
    const CheckpointStats& s = path.snapshots.front();
    if (s.ybar_B && s.ybar_W && std::fabs(*s.ybar_B - 0.5) < 0.05 &&
        std::fabs(*s.ybar_W - 0.5) < 0.05)
      ++within;
  }
  CHECK(double(within) / R >= 0.95);
}
