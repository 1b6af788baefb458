#include <cmath>

#include "core/dataset.hpp"
#include "core/error.hpp"
#include "core/polarizability.hpp"
#include "doctest.h"
#include "oracles.hpp"
#include "test_paths.hpp"

using namespace csclock;

namespace {
const AtomicDataset& cs() {
  static const AtomicDataset d = load_dataset(testing_paths::data("cs.dat"));
  return d;
}
const FineLevel g6s = FineLevel::parse("6s1/2");
const FineLevel e5d = FineLevel::parse("5d5/2");
const HyperfineState kGround{g6s, 4, 4};
const HyperfineState kExcited{e5d, 6, 6};

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
}  // namespace

TEST_SUITE("polarizability") {
  TEST_CASE("ground-state anchors") {
    const auto lattice = dynamic_polarizability(cs(), g6s, 803.0);
    CHECK(rel(lattice.alpha0.angstrom3(), -374.0) < 0.03);
    CHECK(lattice.core_included);
    const auto st = dynamic_polarizability(cs(), g6s, std::nullopt);
    CHECK(rel(st.alpha0.angstrom3(), 59.4) < 0.03);
  }

  TEST_CASE("j = 1/2 has no tensor part") {
    for (double wl : {700.0, 803.0, 1064.0}) CHECK(dynamic_polarizability(cs(), g6s, wl).alpha2.angstrom3() == 0.0);
    const auto rec = dynamic_polarizability(cs(), g6s, 803.0);
    for (int f : {3, 4})
      for (int m = -f; m <= f; ++m)
        CHECK(hyperfine_polarizability(rec, cs().nuclear_spin, f, m).alpha.angstrom3() == rec.alpha0.angstrom3());
  }

  TEST_CASE("alpha(f, m) = alpha(f, -m)") {
    const auto rec = dynamic_polarizability(cs(), e5d, 803.0);
    for (int f = 1; f <= 6; ++f)
      for (int m = 1; m <= f; ++m)
        CHECK(hyperfine_polarizability(rec, cs().nuclear_spin, f, m).alpha.angstrom3() ==
              doctest::Approx(hyperfine_polarizability(rec, cs().nuclear_spin, f, -m).alpha.angstrom3()));
  }

  TEST_CASE("tensor recoupling matches the Clebsch-Gordan projection") {
    const auto I = cs().nuclear_spin;
    for (int tj : {3, 5}) {
      const HalfInt J = HalfInt::from_twice(tj);
      for (int f = 0; f <= 7; ++f) {
        if (!f_allowed(J, I, f)) continue;
        for (int m = -f; m <= f; ++m) {
          const double w = f == 0 ? 0.0 : (3.0 * m * m - f * (f + 1.0)) / (f * (2.0 * f - 1.0));
          const double got = w * tensor_recoupling_factor(J, I, f);
          const double want = static_cast<double>(oracle::tensor_projection(tj, I.twice, f, m));
          INFO("2j=" << tj << " f=" << f << " m=" << m);
          CHECK(got == doctest::Approx(want).epsilon(1e-10).scale(1.0));
        }
      }
    }
    CHECK(tensor_recoupling_factor(HalfInt::from_twice(1), I, 4) == 0.0);
  }

  TEST_CASE("hyperfine state errors") {
    const auto rec = dynamic_polarizability(cs(), e5d, 803.0);
    CHECK_THROWS_AS(hyperfine_polarizability(rec, cs().nuclear_spin, 7, 0), Error);
    try {
      hyperfine_polarizability(rec, cs().nuclear_spin, 0, 0);
      FAIL("expected InvalidF");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::InvalidF);
    }
    try {
      hyperfine_polarizability(rec, cs().nuclear_spin, 6, 7);
      FAIL("expected InvalidM");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::InvalidM);
    }
  }

  TEST_CASE("evaluating on a resonance is rejected") {
    for (const auto& t : cs().transitions) {
      if (!(t.lower == g6s || t.upper == g6s)) continue;
      try {
        dynamic_polarizability(cs(), g6s, t.wavelength_nm() + 0.001);
        FAIL("expected TooCloseToResonance");
      } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::TooCloseToResonance);
      }
    }
  }

  TEST_CASE("magic wavelength near 803 nm") {
    const auto roots = find_magic_wavelengths(cs(), kGround, kExcited, {795.0, 807.0, 0.05});
    REQUIRE(roots.size() == 1);
    CHECK(std::abs(roots[0].wavelength_nm - 803.3) <= 0.5);
    CHECK(std::abs(roots[0].slope_a3_per_mhz - 1.4e-4) <= 0.3 * 1.4e-4);
    CHECK(std::abs(roots[0].residual_a3) < 1e-6);
    CHECK(roots[0].bracket_lo_nm <= roots[0].wavelength_nm);
    CHECK(roots[0].wavelength_nm <= roots[0].bracket_hi_nm);
  }

  TEST_CASE("a window without a sign change returns no roots") {
    const auto roots = find_magic_wavelengths(cs(), kGround, kExcited, {795.0, 800.0, 0.05});
    CHECK(roots.empty());
  }

  TEST_CASE("a window inside an exclusion zone is an error") {
    const double r = 808.116;
    try {
      find_magic_wavelengths(cs(), kGround, kExcited, {r - 0.005, r + 0.005, 0.001});
      FAIL("expected EmptyWindow");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::EmptyWindow);
    }
  }

  TEST_CASE("root does not depend on the grid step") {
    const auto a = find_magic_wavelengths(cs(), kGround, kExcited, {795.0, 807.0, 0.05});
    const auto b = find_magic_wavelengths(cs(), kGround, kExcited, {795.0, 807.0, 0.02});
    const auto c = find_magic_wavelengths(cs(), kGround, kExcited, {795.0, 807.0, 0.01});
    REQUIRE(a.size() == 1);
    REQUIRE(b.size() == 1);
    REQUIRE(c.size() == 1);
    CHECK(std::abs(a[0].wavelength_nm - b[0].wavelength_nm) < 1e-4);
    CHECK(std::abs(a[0].wavelength_nm - c[0].wavelength_nm) < 1e-4);
  }

  TEST_CASE("sum truncation converges") {
    const auto n9 = load_dataset(testing_paths::data("cs_n9.dat"));
    for (double wl : {700.0, 803.0, 1064.0}) {
      CHECK(rel(dynamic_polarizability(n9, g6s, wl).alpha0.angstrom3(),
                dynamic_polarizability(cs(), g6s, wl).alpha0.angstrom3()) < 0.01);
    }
    CHECK(rel(dynamic_polarizability(n9, g6s, std::nullopt).alpha0.angstrom3(),
              dynamic_polarizability(cs(), g6s, std::nullopt).alpha0.angstrom3()) < 0.01);
  }

  TEST_CASE("differential polarizability changes sign across coupled resonances") {
    // Fine-structure doublets of the f series sit within a few pm of each other; treat each as one cluster.
    std::vector<std::pair<double, double>> clusters;
    std::vector<double> p32;
    for (const auto& t : cs().transitions) {
      if (t.lower != e5d) continue;
      const double w = t.wavelength_nm();
      if (w < 600.0 || w > 1100.0) continue;
      if (t.upper.l == 1) {
        p32.push_back(w);
        continue;
      }
      bool merged = false;
      for (auto& c : clusters)
        if (std::abs(c.first - w) < 0.05 || std::abs(c.second - w) < 0.05) {
          c.first = std::min(c.first, w);
          c.second = std::max(c.second, w);
          merged = true;
        }
      if (!merged) clusters.push_back({w, w});
    }
    REQUIRE(clusters.size() >= 5);
    const PolarizabilityOptions close{1e-7};
    const double d = 1e-5;
    for (const auto& [lo_r, hi_r] : clusters) {
      const double lo = differential_polarizability(cs(), kGround, kExcited, lo_r - 0.05, close);
      const double hi = differential_polarizability(cs(), kGround, kExcited, hi_r + 0.05, close);
      INFO("cluster " << lo_r << ".." << hi_r);
      CHECK(lo * hi < 0.0);
    }
    // |6,6> is pure m_j = 5/2, which has no pi-coupling to j' = 3/2.
    REQUIRE(!p32.empty());
    for (double r : p32) {
      const double lo = differential_polarizability(cs(), kGround, kExcited, r - d, close);
      const double hi = differential_polarizability(cs(), kGround, kExcited, r + d, close);
      INFO("p3/2 line " << r);
      CHECK(lo * hi > 0.0);
      CHECK(std::abs(hi - lo) < 1.0);
    }
    for (const auto& t : cs().transitions) {
      if (t.lower != g6s) continue;
      const double w = t.wavelength_nm();
      const double lo = dynamic_polarizability(cs(), g6s, w - d, close).alpha0.angstrom3();
      const double hi = dynamic_polarizability(cs(), g6s, w + d, close).alpha0.angstrom3();
      INFO("ground line " << w);
      CHECK(lo * hi < 0.0);
    }
  }

  TEST_CASE("far-red tail approaches the static value monotonically") {
    const double st = dynamic_polarizability(cs(), g6s, std::nullopt).alpha0.angstrom3();
    double prev = 1e300;
    for (double wl : {1000.0, 1500.0, 3000.0, 1e4, 1e5, 1e6}) {
      const double a = dynamic_polarizability(cs(), g6s, wl).alpha0.angstrom3();
      CHECK(a > st);
      CHECK(a < prev);
      prev = a;
    }
    CHECK(rel(prev, st) < 1e-4);
  }

  TEST_CASE("blackbody shift") {
    const auto b = bbr_shift(-3.589, 5.315, 300.0);
    CHECK(b.shift_hz == doctest::Approx(8.904).epsilon(1e-9));
    CHECK(b.sensitivity_hz_per_k == doctest::Approx(0.1187).epsilon(1e-3));
    CHECK(bbr_shift(-3.589, 5.315, 0.0).shift_hz == 0.0);
    CHECK(bbr_shift(-3.589, 5.315, 600.0).shift_hz == doctest::Approx(16.0 * 8.904));
    try {
      bbr_shift(-3.589, 5.315, -1.0);
      FAIL("expected NegativeTemperature");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NegativeTemperature);
    }
  }

  TEST_CASE("scan output") {
    const auto rows = polarizability_scan(cs(), kGround, kExcited, {800.0, 801.0, 0.25});
    CHECK(rows.size() == 5);
    const auto csv = scan_csv(rows);
    CHECK(csv.rfind("wavelength_nm,alpha0_ground,alpha0_excited,alpha2_excited,delta_alpha\n", 0) == 0);
    for (const auto& r : rows)
      CHECK(r.delta_alpha == doctest::Approx(differential_polarizability(cs(), kGround, kExcited, r.wavelength_nm)));
    const auto skipped = polarizability_scan(cs(), kGround, kExcited, {808.0, 808.2, 0.005});
    for (const auto& r : skipped) CHECK(std::abs(r.wavelength_nm - 808.116) >= 0.01);
  }
}
