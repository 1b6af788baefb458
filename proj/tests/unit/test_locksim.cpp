#include <cmath>
#include <algorithm>
#include <numeric>

#include "core/allan.hpp"
#include "core/constants.hpp"
#include "core/error.hpp"
#include "core/locksim.hpp"
#include "doctest.h"

using namespace csclock;

namespace {
SimConfig desk(double duration = 100.0) {
  SimConfig c;
  c.clock.f_s = 1e3;
  c.clock.f_m = 1e5;
  c.detection_rate_per_s = 2.3e5;
  c.duration_s = duration;
  c.time_step_s = 1e-6;
  c.record_interval_s = 0.01;
  c.seed = 42;
  return c;
}

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()); }

double stat_error(const SimConfig& c) { return analytic_shot_noise_sigma(c) / std::sqrt(c.duration_s); }
}  // namespace

TEST_SUITE("locksim") {
  TEST_CASE("noise-free lock stays at zero") {
    auto c = desk(1.0);
    c.shot_noise = false;
    const auto t = simulate(c);
    REQUIRE(t.y.size() == 100);
    for (double v : t.y) CHECK(v == 0.0);
    for (double v : t.correction_hz) CHECK(v == 0.0);
  }

  TEST_CASE("traces are reproducible from the seed") {
    auto c = desk(5.0);
    const auto a = simulate(c), b = simulate(c);
    CHECK(a.y == b.y);
    CHECK(a.correction_hz == b.correction_hz);
    CHECK(a.seed == 42);
    c.seed = 43;
    CHECK(simulate(c).y != a.y);
    c.keep_counts = true;
    const auto k = simulate(c);
    CHECK(k.counts.size() == 5000);
  }

  TEST_CASE("alternating probing cancels a static field") {
    auto c = desk(20.0);
    c.shot_noise = false;
    c.bias_b_t = 1e-8;
    const auto t = simulate(c);
    CHECK(std::abs(mean(t.y)) < 1e-2 * stat_error(c));
    c.shot_noise = true;
    const auto n = simulate(c);
    CHECK(std::abs(mean(n.y)) < 3.0 * stat_error(c));
  }

  TEST_CASE("single-transition lock follows the Zeeman offset") {
    auto c = desk(20.0);
    c.shot_noise = false;
    c.alternate = false;
    c.bias_b_t = 1e-8;
    const auto t = simulate(c);
    const std::vector<double> tail(t.y.begin() + static_cast<long>(t.y.size() / 2), t.y.end());
    const double want = 2.0 * kPhys.bohr_magneton / kPhys.planck_h * 1e-8 / c.clock.nu_c;
    CHECK(std::abs(mean(tail) - want) <= 0.10 * want);
    CHECK(std::abs(mean(tail) * c.clock.nu_c - 280.0) <= 0.10 * 280.0);
  }

  TEST_CASE("shot-noise ADEV matches the analytic coefficient") {
    const auto c = desk(200.0);
    const auto r = run_campaign(c, 4, 2024, {1.0, 10.0}, 1);
    const double a = analytic_shot_noise_sigma(c);
    CHECK(std::abs(r.mean_sigma[0] - a) <= 0.2 * a);
    CHECK(std::abs(r.mean_sigma[1] - a / std::sqrt(10.0)) <= 0.3 * a / std::sqrt(10.0));
  }

  TEST_CASE("ADEV scales as 1/sqrt(Ndot)") {
    // Below a few counts per window the discriminator leaves its linear range; stay above it.
    std::vector<double> rates, sig;
    for (double nd : {1e5, 1e6, 1e7}) {
      auto c = desk(100.0);
      c.detection_rate_per_s = nd;
      const auto r = run_campaign(c, 4, 99, {1.0}, 1);
      rates.push_back(nd);
      sig.push_back(r.mean_sigma[0]);
    }
    CHECK(std::abs(fit_loglog_slope(rates, sig) + 0.5) <= 0.05);
  }

  TEST_CASE("static field does not change long-term stability") {
    auto c = desk(100.0);
    c.bias_b_t = 1e-8;
    const auto lo = run_campaign(c, 4, 5, {10.0}, 1);
    c.bias_b_t = 1e-7;
    const auto hi = run_campaign(c, 4, 5, {10.0}, 1);
    const auto& s = lo.per_seed[0];
    const double w = (s.ci_hi[0] - s.ci_lo[0]) / (2.0 * s.sigma[0]);
    CHECK(std::abs(hi.mean_sigma[0] / lo.mean_sigma[0] - 1.0) <= 2.0 * w * std::sqrt(2.0 / 4.0));
  }

  TEST_CASE("campaign with one seed equals simulate plus allan") {
    auto c = desk(20.0);
    const auto r = run_campaign(c, 1, 777, {0.1, 1.0}, 1);
    c.seed = campaign_seeds(777, 1)[0];
    const auto t = simulate(c);
    const auto s = allan_deviation(t.y, t.record_interval_s, {0.1, 1.0});
    CHECK(r.mean_sigma == s.sigma);
    CHECK(r.per_seed_mean_y[0] == mean(t.y));
  }

  TEST_CASE("campaigns are deterministic and order independent") {
    const auto c = desk(10.0);
    const auto a = run_campaign(c, 6, 31, {0.1, 1.0}, 1);
    const auto b = run_campaign(c, 6, 31, {0.1, 1.0}, 3);
    CHECK(a.mean_sigma == b.mean_sigma);
    CHECK(a.spread == b.spread);
    CHECK(a.per_seed_mean_y == b.per_seed_mean_y);
    CHECK(a.seeds == campaign_seeds(31, 6));
    CHECK(campaign_csv(a) == campaign_csv(b));
  }

  TEST_CASE("campaign mean is unbiased") {
    const auto c = desk(20.0);
    const auto r = run_campaign(c, 8, 8, {1.0}, 1);
    const double m = mean(r.per_seed_mean_y);
    double ss = 0.0;
    for (double v : r.per_seed_mean_y) ss += (v - m) * (v - m);
    const double se = std::sqrt(ss / 7.0) / std::sqrt(8.0);
    CHECK(std::abs(m) < 3.0 * se);
  }

  TEST_CASE("spread shrinks with the number of seeds") {
    const auto c = desk(20.0);
    const auto one = run_campaign(c, 1, 3, {0.1, 0.2, 0.5}, 1);
    const auto many = run_campaign(c, 16, 3, {0.1, 0.2, 0.5}, 1);
    for (std::size_t k = 0; k < one.tau.size(); ++k) {
      const double ratio = many.spread[k] / one.spread[k];
      INFO("tau=" << one.tau[k] << " ratio=" << ratio);
      CHECK(ratio > 0.25 / 2.0);
      CHECK(ratio < 0.25 * 2.0);
    }
  }

  TEST_CASE("configuration invariants") {
    auto c = desk();
    c.time_step_s = 1e-5;
    CHECK_THROWS_AS(simulate(c), Error);
    c = desk();
    c.duration_s = 0.05;
    CHECK_THROWS_AS(simulate(c), Error);
    c = desk();
    c.duty = 0.0;
    CHECK_THROWS_AS(simulate(c), Error);
    c = desk();
    c.servo_gain = 2.0;
    CHECK_THROWS_AS(simulate(c), Error);
    c = desk();
    c.record_interval_s = 1e-4;
    CHECK_THROWS_AS(simulate(c), Error);
    CHECK_THROWS_AS(run_campaign(desk(), 0, 1, {1.0}), Error);
  }

  TEST_CASE("a diverging servo is reported") {
    auto c = desk(100.0);
    c.detection_rate_per_s = 0.1;
    try {
      simulate(c);
      FAIL("expected UnstableServo");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::UnstableServo);
    }
  }

  TEST_CASE("trace export") {
    const auto t = simulate(desk(1.0));
    const auto csv = trace_csv(t);
    CHECK(csv.rfind("time_s,y,correction_Hz\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 101);
  }
}
