#include <algorithm>
#include <cmath>

#include "core/error.hpp"
#include "core/stability.hpp"
#include "doctest.h"

using namespace csclock;

namespace {
constexpr double kPiT = 3.14159265358979323846;
constexpr double kE = 1.602176634e-19;

bool within(double got, double want, double frac) { return std::abs(got - want) <= frac * std::abs(want); }

ClockParams rb() {
  ClockParams p;
  p.nu_c = 5.8025e14;
  p.tau_a = 89e-9;
  return p;
}
}  // namespace

TEST_SUITE("stability") {
  TEST_CASE("linewidth") {
    CHECK(within(linewidth(1.28e-6, 1.0), 1.75e5, 0.01));
    CHECK(linewidth(1.28e-6, 1.0) == doctest::Approx(std::sqrt(2.0) / (2 * kPiT * 1.28e-6)).epsilon(1e-14));
    CHECK(within(linewidth(1.28e-6, 0.0), 124e3, 0.01));
    double prev = 0.0;
    for (double s : {0.0, 0.1, 0.5, 1.0, 3.0, 10.0}) {
      CHECK(linewidth(1.28e-6, s) > prev);
      prev = linewidth(1.28e-6, s);
    }
    CHECK_THROWS_AS(linewidth(0.0, 1.0), Error);
  }

  TEST_CASE("detection rate, photocurrent and SNR") {
    const ClockParams p;
    const auto r = detection_rate(p);
    CHECK(r.ndot == doctest::Approx(0.2 * 0.9 * 6.6e6 / (4 * 1.28e-6)).epsilon(1e-14));
    CHECK(within(r.ndot, 2.3e11, 0.02));
    CHECK(within(r.photocurrent_a, 37e-9, 0.03));
    CHECK(r.photocurrent_a == doctest::Approx(kE * r.ndot).epsilon(1e-14));
    CHECK(within(r.snr, 3.4e5, 0.03));
    // shot-noise SNR of a current I in 1 Hz: I / sqrt(2 e I)
    CHECK(r.snr == doctest::Approx(r.photocurrent_a / std::sqrt(2 * kE * r.photocurrent_a)).epsilon(1e-12));
    ClockParams z;
    z.atom_number = 0.0;
    const auto r0 = detection_rate(z);
    CHECK(r0.ndot == 0.0);
    CHECK(r0.photocurrent_a == 0.0);
    CHECK(r0.snr == 0.0);
  }

  TEST_CASE("projection-noise limit") {
    const ClockParams p;
    const auto b = total_budget(p);
    CHECK(within(b.sigma_qpn, 8.4e-16, 0.02));
    CHECK(within(b.sigma_qpn * p.nu_c, 0.37, 0.02));
    CHECK(b.sigma_qpn == doctest::Approx(b.delta_nu / p.nu_c / std::sqrt(b.ndot)).epsilon(1e-14));
    const auto r = total_budget(rb());
    CHECK(within(r.sigma_qpn, 2.4e-15, 0.02));
    CHECK(within(r.sigma_qpn / b.sigma_qpn, 2.9, 0.02));
    CHECK_THROWS_AS(qpn_stability(0.0, 1.0, 1.0), Error);
  }

  TEST_CASE("intermodulation") {
    const ClockParams p;
    const auto im = intermodulation(p, 1.75e5, 3.4e5);
    CHECK(within(im.lo, 1.1e-15, 0.05));
    CHECK(within(im.shot, 8.2e-16, 0.05));
    CHECK(im.lo == std::max(im.lo_2fs, im.lo_2fm));
    ClockParams q;
    q.lo_psd_2fs = 0.0;
    q.lo_psd_2fm = 0.0;
    CHECK(intermodulation(q, 1.75e5, 3.4e5).lo == 0.0);
    q.lo_psd_2fm = 4.0;
    const auto im4 = intermodulation(q, 1.75e5, 3.4e5);
    CHECK(im4.lo_2fs == 0.0);
    CHECK(im4.lo == doctest::Approx(2.0 * im.lo));
  }

  TEST_CASE("total budget") {
    const ClockParams p;
    const auto b = total_budget(p);
    CHECK(within(b.sigma_total, 1.6e-15, 0.05));
    CHECK(b.sigma_total * b.sigma_total ==
          doctest::Approx(b.sigma_qpn * b.sigma_qpn + b.sigma_im_lo * b.sigma_im_lo + b.sigma_im_shot * b.sigma_im_shot)
              .epsilon(1e-14));
    CHECK(b.sigma_total >= std::max({b.sigma_qpn, b.sigma_im_lo, b.sigma_im_shot}));
    CHECK(b.sigma_total <= b.sigma_qpn + b.sigma_im_lo + b.sigma_im_shot);
    CHECK(b.sigma_qpn >= 0.0);
    CHECK(b.sigma_im_lo >= 0.0);
    CHECK(b.sigma_im_shot >= 0.0);
  }

  TEST_CASE("a single nonzero component sets the total") {
    ClockParams p;
    p.lo_psd_2fs = 0.0;
    p.lo_psd_2fm = 0.0;
    const auto b = total_budget(p);
    CHECK(b.sigma_im_lo == 0.0);
    CHECK(b.sigma_total == doctest::Approx(std::hypot(b.sigma_qpn, b.sigma_im_shot)).epsilon(1e-14));
    const auto im = intermodulation(p, 1.75e5, 1e300);
    CHECK(im.shot < 1e-150);
    CHECK(std::hypot(b.sigma_qpn, im.lo, im.shot) == doctest::Approx(b.sigma_qpn).epsilon(1e-14));
  }

  TEST_CASE("projection noise scales as 1/sqrt(N) and 1/sqrt(eta)") {
    ClockParams p;
    const double s0 = total_budget(p).sigma_qpn;
    p.atom_number *= 4.0;
    CHECK(std::abs(total_budget(p).sigma_qpn / s0 - 0.5) <= 1e-12 * 0.5);
    ClockParams q;
    q.eta_col = 0.8;
    q.eta_det = 0.225;
    CHECK(std::abs(total_budget(q).sigma_qpn / s0 - 1.0) <= 1e-12);
    q.eta_col = 0.2;
    CHECK(std::abs(total_budget(q).sigma_qpn / s0 - 2.0) <= 1e-12 * 2.0);
  }

  TEST_CASE("budget is deterministic and exported") {
    const ClockParams p;
    const auto a = total_budget(p), b = total_budget(p);
    CHECK(budget_json(a) == budget_json(b));
    CHECK(budget_text(a) == budget_text(b));
    CHECK(budget_json(a).find("\"sigma_total\"") != std::string::npos);
    CHECK(budget_text(a).find("sigma_QPN") != std::string::npos);
  }

  TEST_CASE("parameter invariants") {
    ClockParams p;
    p.eta_col = 1.2;
    CHECK_THROWS_AS(total_budget(p), Error);
    p = ClockParams{};
    p.tau_a = -1.0;
    CHECK_THROWS_AS(total_budget(p), Error);
    p = ClockParams{};
    p.lo_psd_2fs = -1.0;
    CHECK_THROWS_AS(total_budget(p), Error);
    p = ClockParams{};
    p.atom_number = -1.0;
    CHECK_THROWS_AS(detection_rate(p), Error);
  }
}
