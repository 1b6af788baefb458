#include <cmath>
#include <sstream>

#include "core/error.hpp"
#include "core/systematics.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace csclock;

namespace {
constexpr double kNu = 4.376e14;

SensitivityInputs inputs() {
  SensitivityInputs in;
  in.nu_c = kNu;
  in.probe_delta_alpha_a3 = -57.70;
  in.probe_saturation_intensity_w_m2 = 5700.0;
  in.magic_slope_a3_per_mhz = 1.4e-4;
  in.lattice_alpha0_a3 = -374.0;
  in.atom_temperature_k = 1e-6;
  in.dc_field_beta_hz_per_v_m = -4.7;
  in.bbr_sensitivity_hz_per_k = 0.1187;
  return in;
}

bool within(double got, double want, double frac) { return std::abs(got - want) <= frac * std::abs(want); }

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::InvalidArgument;
}
}  // namespace

TEST_SUITE("systematics") {
  TEST_CASE("five rows in table order") {
    const auto rows = sensitivity_coefficients(inputs());
    REQUIRE(rows.size() == 5);
    CHECK(rows[0].name == "probe beam power");
    CHECK(rows[1].name == "lattice laser frequency");
    CHECK(rows[2].name == "magnetic field spatial variation");
    CHECK(rows[3].name == "dc electric field");
    CHECK(rows[4].name == "blackbody radiation");
    for (const auto& r : rows) CHECK(std::abs(r.fractional - r.beta / kNu) <= 1e-12 * std::abs(r.beta / kNu));
  }

  TEST_CASE("sensitivity coefficients") {
    const auto rows = sensitivity_coefficients(inputs());
    CHECK(within(rows[2].beta * 1e5, 1400.0, 0.01));  // per 1e-7 T
    CHECK(within(rows[1].beta, 0.0078, 0.10));
    CHECK(within(rows[4].beta, 0.12, 0.02));
    CHECK(within(rows[0].beta, 0.11, 0.10));
    CHECK(rows[3].beta == -4.7);
    // reference fractional sensitivities
    CHECK(within(rows[0].fractional, 2.4e-16, 0.10));
    CHECK(within(rows[1].fractional, 1.8e-17, 0.10));
    CHECK(within(rows[2].fractional * 1e5, 3.2e-12, 0.10));
    CHECK(within(rows[3].fractional, -1.1e-14, 0.10));
    CHECK(within(rows[4].fractional, 2.7e-16, 0.10));
  }

  TEST_CASE("lattice row chain") {
    // (slope / |alpha0|) * kB T / h with slope per MHz
    const double kb = 1.380649e-23, h = 6.62607015e-34;
    const auto rows = sensitivity_coefficients(inputs());
    CHECK(rows[1].beta == doctest::Approx(1.4e-4 / 374.0 * kb * 1e-6 / h).epsilon(1e-12));
    auto in = inputs();
    in.atom_temperature_k = 2e-6;
    CHECK(sensitivity_coefficients(in)[1].beta == doctest::Approx(2 * rows[1].beta));
  }

  TEST_CASE("missing model input") {
    auto in = inputs();
    in.magic_slope_a3_per_mhz.reset();
    CHECK(kind_of([&] { sensitivity_coefficients(in); }) == ErrorKind::MissingModelInput);
    in = inputs();
    in.dc_field_beta_hz_per_v_m.reset();
    CHECK(kind_of([&] { sensitivity_coefficients(in); }) == ErrorKind::MissingModelInput);
  }

  TEST_CASE("timing targets") {
    const auto t = TimingTarget::parse("1ns@30d");
    CHECK(t.dt_s == doctest::Approx(1e-9));
    CHECK(t.tau_s == doctest::Approx(30 * 86400.0));
    CHECK(within(fractional_target(t), 3.9e-16, 0.02));
    CHECK(within(fractional_target(TimingTarget::parse("1ns@1d")), 1.16e-14, 0.005));
    CHECK(fractional_target(TimingTarget{0.0, 86400.0}) == 0.0);
    CHECK(TimingTarget::parse("500ps@12h").dt_s == doctest::Approx(5e-10));
    CHECK(TimingTarget::parse("2us@90min").tau_s == doctest::Approx(5400.0));
    for (const char* bad : {"1ns", "1xs@30d", "1ns@30y", "@30d", "0ns@30d", "1ns@0d"})
      CHECK_THROWS_AS(TimingTarget::parse(bad), Error);
  }

  TEST_CASE("requirements reproduce the table") {
    const auto rows = requirements(sensitivity_coefficients(inputs()), kNu, TimingTarget::parse("1ns@30d"));
    const double want[] = {1.6, 21.6, 12.0, 0.036, 1.4};
    for (std::size_t i = 0; i < 5; ++i) {
      REQUIRE(rows[i].requirement);
      INFO(rows[i].name);
      CHECK(within(std::abs(*rows[i].requirement), want[i], 0.05));
    }
    CHECK(*rows[3].requirement < 0.0);
  }

  TEST_CASE("requirement decreases with sensitivity") {
    std::vector<BudgetRow> rows(1);
    rows[0].name = "x";
    double prev = 1e300;
    for (double b : {1e-3, 1e-1, 1.0, 1e3, 1e9}) {
      rows[0].beta = b;
      const double r = *requirements(rows, kNu, {})[0].requirement;
      CHECK(r > 0.0);
      CHECK(r < prev);
      prev = r;
    }
    rows[0].beta = 0.0;
    CHECK(kind_of([&] { requirements(rows, kNu, {}); }) == ErrorKind::ZeroSensitivity);
  }

  TEST_CASE("round trip through the budget") {
    const TimingTarget t{1e-9, 30 * 86400.0};
    auto rows = requirements(sensitivity_coefficients(inputs()), kNu, t);
    for (auto& r : rows) {
      std::vector<BudgetRow> one{r};
      one[0].delta_a = r.requirement;
      const auto b = budget(one, kNu);
      CHECK(std::abs(timing_error_s(b.linear_hz, kNu, t.tau_s) - t.dt_s) <= 1e-9 * t.dt_s);
    }
    for (auto& r : rows) r.delta_a = std::abs(*r.requirement);
    const auto b = budget(rows, kNu);
    CHECK(timing_error_s(b.worst_case_hz, kNu, t.tau_s) == doctest::Approx(5e-9).epsilon(1e-9));
    CHECK(b.quadrature_hz == doctest::Approx(std::sqrt(5.0) * b.worst_case_hz / 5.0).epsilon(1e-9));
  }

  TEST_CASE("equal split allocation") {
    const TimingTarget t{1e-9, 30 * 86400.0};
    const auto full = requirements(sensitivity_coefficients(inputs()), kNu, t);
    auto split = requirements(sensitivity_coefficients(inputs()), kNu, t, Allocation::EqualSplit);
    for (std::size_t i = 0; i < 5; ++i) CHECK(*split[i].requirement == doctest::Approx(*full[i].requirement / 5.0));
    for (auto& r : split) r.delta_a = std::abs(*r.requirement);
    CHECK(timing_error_s(budget(split, kNu).worst_case_hz, kNu, t.tau_s) == doctest::Approx(1e-9).epsilon(1e-9));
    CHECK(parse_allocation("equal-split") == Allocation::EqualSplit);
    CHECK(parse_allocation("full-per-row") == Allocation::FullPerRow);
    CHECK_THROWS_AS(parse_allocation("random"), Error);
  }

  TEST_CASE("budget linearity and trivial cases") {
    auto rows = sensitivity_coefficients(inputs());
    for (auto& r : rows) r.delta_a = 0.0;
    CHECK(budget(rows, kNu).linear_hz == 0.0);
    const double da[] = {0.3, 2.0, 7.0, 0.01, 0.5};
    for (std::size_t i = 0; i < 5; ++i) rows[i].delta_a = da[i];
    const auto b1 = budget(rows, kNu);
    for (double k : {0.0, 0.5, 3.0, 1e4}) {
      auto scaled = rows;
      for (auto& r : scaled) r.delta_a = *r.delta_a * k;
      const auto bk = budget(scaled, kNu);
      CHECK(bk.linear_hz == doctest::Approx(k * b1.linear_hz).epsilon(1e-12));
      CHECK(bk.worst_case_hz == doctest::Approx(k * b1.worst_case_hz).epsilon(1e-12));
      CHECK(bk.quadrature_hz == doctest::Approx(k * b1.quadrature_hz).epsilon(1e-12));
    }
    std::vector<BudgetRow> one{rows[2]};
    CHECK(budget(one, kNu).linear_hz == rows[2].beta * *rows[2].delta_a);
    rows[0].delta_a.reset();
    CHECK_THROWS_AS(budget(rows, kNu), Error);
  }

  TEST_CASE("exports") {
    const auto t = TimingTarget::parse("1ns@30d");
    const auto rows = requirements(sensitivity_coefficients(inputs()), kNu, t);
    const auto csv = systematics_csv(rows);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "name,beta,unit,fractional,requirement");
    std::vector<std::string> names;
    while (std::getline(in, line)) names.push_back(line.substr(0, line.find(',')));
    CHECK(names == std::vector<std::string>{"probe beam power", "lattice laser frequency",
                                            "magnetic field spatial variation", "dc electric field",
                                            "blackbody radiation"});
    const auto j = nlohmann::json::parse(systematics_json(rows, t, kNu));
    REQUIRE(j["rows"].size() == 5);
    CHECK(j["rows"][3]["name"] == "dc electric field");
    CHECK(j["rows"][3]["requirement"].get<double>() > 0.0);
    CHECK(j["target"]["fractional"].get<double>() == doctest::Approx(fractional_target(t)));
    const auto ordered = nlohmann::ordered_json::parse(systematics_json(rows, t, kNu));
    std::vector<std::string> okeys;
    for (auto it = ordered["rows"][0].begin(); it != ordered["rows"][0].end(); ++it) okeys.push_back(it.key());
    CHECK(okeys == std::vector<std::string>{"name", "beta", "unit", "fractional", "requirement"});
    CHECK(systematics_csv(rows) == csv);
  }
}
