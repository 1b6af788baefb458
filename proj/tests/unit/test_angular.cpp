#include <cmath>
#include <complex>

#include "core/angular.hpp"
#include "core/error.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace csclock;

namespace {
HalfInt t(int twice) { return HalfInt::from_twice(twice); }

double w3(int a, int b, int c, int d, int e, int f) { return wigner3j(t(a), t(b), t(c), t(d), t(e), t(f)).approx(); }
double w6(int a, int b, int c, int d, int e, int f) { return wigner6j(t(a), t(b), t(c), t(d), t(e), t(f)).approx(); }

bool triad(int a, int b, int c) { return c >= std::abs(a - b) && c <= a + b && (a + b + c) % 2 == 0; }

LevelId g_state(int f, int m) { return {Species::Cs, FineLevel::parse("6s1/2"), f, m}; }
LevelId e_state(int f, int m) { return {Species::Cs, FineLevel::parse("5d5/2"), f, m}; }
}  // namespace

TEST_SUITE("angular") {
  TEST_CASE("3j closed forms and selection rules") {
    const auto v = wigner3j(t(2), t(2), t(0), t(0), t(0), t(0));
    CHECK(v.coefficient() == Rational(-1, 3));
    CHECK(v.radicand() == 3);
    CHECK(v.approx() == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-15));
    CHECK(wigner3j(t(2), t(2), t(2), t(2), t(0), t(0)).is_zero());  // m sum != 0
    CHECK(wigner3j(t(2), t(2), t(6), t(0), t(0), t(0)).is_zero());  // triangle
    CHECK_THROWS_AS(wigner3j(t(2), t(2), t(2), t(4), t(-4), t(0)), Error);  // |m| > j
    CHECK_THROWS_AS(wigner3j(t(2), t(2), t(2), t(1), t(-1), t(0)), Error);  // parity
  }

  TEST_CASE("3j matches the factorial oracle") {
    CHECK(w3(8, 4, 12, 8, 4, -12) == doctest::Approx(static_cast<double>(oracle::three_j(8, 4, 12, 8, 4, -12))).epsilon(1e-12));
    for (int j1 = 0; j1 <= 6; ++j1)
      for (int j2 = 0; j2 <= 6; ++j2)
        for (int j3 = std::abs(j1 - j2); j3 <= j1 + j2; j3 += 2)
          for (int m1 = -j1; m1 <= j1; m1 += 2)
            for (int m2 = -j2; m2 <= j2; m2 += 2) {
              const int m3 = -m1 - m2;
              if (std::abs(m3) > j3) continue;
              const double lib = w3(j1, j2, j3, m1, m2, m3);
              const double ref = static_cast<double>(oracle::three_j(j1, j2, j3, m1, m2, m3));
              CHECK(std::abs(lib - ref) < 1e-12);
            }
  }

  TEST_CASE("6j closed forms, selection rules and oracle") {
    const auto v = wigner6j(t(2), t(2), t(2), t(2), t(2), t(2));
    CHECK(v.coefficient() == Rational(1, 6));
    CHECK(v.radicand() == 1);
    CHECK(wigner6j(t(2), t(2), t(8), t(2), t(2), t(2)).is_zero());
    CHECK(static_cast<double>(oracle::six_j(2, 2, 2, 2, 2, 2)) == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
    // Recoupling sets used by the Cs 5d5/2 (j = 5/2, I = 7/2) hyperfine mapping.
    for (int f = 1; f <= 6; ++f) {
      const double lib = w6(2 * f, 5, 7, 5, 2 * f, 4);
      const double ref = static_cast<double>(oracle::six_j(2 * f, 5, 7, 5, 2 * f, 4));
      CHECK(std::abs(lib - ref) < 1e-12);
    }
    for (int j1 = 0; j1 <= 4; ++j1)
      for (int j2 = 0; j2 <= 4; ++j2)
        for (int j3 = 0; j3 <= 4; ++j3)
          for (int j4 = 0; j4 <= 3; ++j4)
            for (int j5 = 0; j5 <= 3; ++j5)
              for (int j6 = 0; j6 <= 3; ++j6) {
                if (!triad(j1, j2, j3) || !triad(j1, j5, j6) || !triad(j4, j2, j6) || !triad(j4, j5, j3)) continue;
                const double ref = static_cast<double>(oracle::six_j(j1, j2, j3, j4, j5, j6));
                CHECK(std::abs(w6(j1, j2, j3, j4, j5, j6) - ref) < 1e-12);
              }
  }

  TEST_CASE("3j orthogonality up to j = 8") {
    for (int j1 = 0; j1 <= 16; j1 += 3)
      for (int j2 = 0; j2 <= 16; j2 += 5)
        for (int j3 = std::abs(j1 - j2); j3 <= std::min(16, j1 + j2); j3 += 2) {
          for (int m3 = -j3; m3 <= j3; m3 += 2) {
            long double s = 0.0L;
            for (int m1 = -j1; m1 <= j1; m1 += 2) {
              const int m2 = -m1 - m3;
              if (std::abs(m2) > j2) continue;
              const auto sq = wigner3j(t(j1), t(j2), t(j3), t(m1), t(m2), t(m3)).squared();
              s += static_cast<long double>(sq.convert_to<double>());
            }
            CHECK(static_cast<double>(s) * (j3 + 1) == doctest::Approx(1.0).epsilon(1e-12));
          }
        }
  }

  TEST_CASE("3j permutation and reflection symmetry") {
    for (int j1 = 0; j1 <= 4; ++j1)
      for (int j2 = 0; j2 <= 4; ++j2)
        for (int j3 = std::abs(j1 - j2); j3 <= std::min(4, j1 + j2); j3 += 2)
          for (int m1 = -j1; m1 <= j1; m1 += 2)
            for (int m2 = -j2; m2 <= j2; m2 += 2) {
              const int m3 = -m1 - m2;
              if (std::abs(m3) > j3) continue;
              const auto v = wigner3j(t(j1), t(j2), t(j3), t(m1), t(m2), t(m3));
              const int odd = ((j1 + j2 + j3) / 2) % 2 ? -1 : 1;
              CHECK(wigner3j(t(j2), t(j3), t(j1), t(m2), t(m3), t(m1)) == v);
              const auto sw = wigner3j(t(j2), t(j1), t(j3), t(m2), t(m1), t(m3));
              CHECK((odd > 0 ? sw == v : sw == -v));
              const auto rf = wigner3j(t(j1), t(j2), t(j3), t(-m1), t(-m2), t(-m3));
              CHECK((odd > 0 ? rf == v : rf == -v));
            }
  }

  TEST_CASE("Clebsch-Gordan stretched and oracle") {
    CHECK(clebsch_gordan(t(8), t(8), t(4), t(4), t(12), t(12)).approx() == doctest::Approx(1.0).epsilon(1e-15));
    const double lib = clebsch_gordan(t(8), t(4), t(4), t(0), t(12), t(4)).approx();
    CHECK(lib == doctest::Approx(static_cast<double>(oracle::clebsch(8, 4, 4, 0, 12, 4))).epsilon(1e-12));
  }

  TEST_CASE("E2 geometry validation") {
    CHECK_NOTHROW(E2Geometry::make({1, 0, 0}, {0, 1, 0}, {0, 0, 1}));
    CHECK_THROWS_AS(E2Geometry::make({1, 0, 0}, {1, 0, 0}, {0, 0, 1}), Error);
    CHECK_THROWS_AS(E2Geometry::make({2, 0, 0}, {0, 1, 0}, {0, 0, 1}), Error);
  }

  TEST_CASE("E2 amplitudes in the clock geometry") {
    const auto geom = E2Geometry::clock();
    const auto top = e2_relative_amplitude(g_state(4, 4), e_state(6, 6), geom);
    CHECK(std::abs(top.value - std::complex<double>(1.0, 0.0)) < 1e-15);
    const auto low = e2_relative_amplitude(g_state(4, 4), e_state(6, 2), geom);
    const double ratio = std::abs(top.value) / std::abs(low.value);
    CHECK(std::abs(ratio - 3.0 * std::sqrt(55.0)) < 1e-12);
    // The exact Clebsch ratio squared is 495.
    CHECK((top.clebsch / low.clebsch).squared() == Rational(495));

    CHECK(std::abs(e2_relative_amplitude(g_state(4, 4), e_state(6, 5), geom).value) == 0.0);
    CHECK(std::abs(e2_relative_amplitude(g_state(4, 0), e_state(6, -1), geom).value) == 0.0);
    CHECK(std::abs(e2_relative_amplitude(g_state(4, -4), e_state(6, -6), geom).value) ==
          doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(e2_relative_amplitude(g_state(4, 0), e_state(6, 3), geom), Error);
    CHECK_THROWS_AS(e2_relative_amplitude(g_state(4, 0), e_state(1, 0), geom), Error);
  }

  TEST_CASE("E2 sum rule: total strength independent of ground m") {
    const auto geoms = {E2Geometry::clock(),
                        E2Geometry::make({0, 0, 1}, {1, 0, 0}, {0, 0, 1}),
                        E2Geometry::make({1 / std::sqrt(2.0), 1 / std::sqrt(2.0), 0}, {0, 0, 1}, {0, 0, 1})};
    for (const auto& geom : geoms) {
      double first = -1.0;
      for (int m = -4; m <= 4; ++m) {
        double s = 0.0;
        for (int f = 2; f <= 6; ++f)
          for (int mp = -f; mp <= f; ++mp) {
            if (std::abs(mp - m) > 2) continue;
            s += std::norm(e2_relative_amplitude(g_state(4, m), e_state(f, mp), geom).value);
          }
        if (first < 0) first = s;
        CHECK(s == doctest::Approx(first).epsilon(1e-12));
      }
    }
  }
}
