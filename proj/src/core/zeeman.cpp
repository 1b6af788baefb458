#include "core/zeeman.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <fmt/format.h>

#include "core/constants.hpp"
#include "core/error.hpp"

namespace csclock {

double lande_gj(const FineLevel& level) {
  const double j = level.j.value(), l = level.l, s = 0.5;
  const double jj = j * (j + 1), ll = l * (l + 1), ss = s * (s + 1);
  return (jj - ss + ll) / (2 * jj) + kPhys.electron_g * (jj + ss - ll) / (2 * jj);
}

double lande_gf(double g_j, HalfInt J, HalfInt I, int f) {
  if (f == 0) return 0.0;
  const double j = J.value(), i = I.value(), ff = f * (f + 1.0);
  return g_j * (ff + j * (j + 1) - i * (i + 1)) / (2 * ff);
}

HyperfineHamiltonian HyperfineHamiltonian::from(const AtomicDataset& d, const FineLevel& level) {
  const auto* hf = d.hyperfine_for(level);
  if (!hf) fail(ErrorKind::MissingHyperfineConstants, "no hyperfine constants for " + level.label());
  return {level, d.nuclear_spin, hf->a_hz, hf->b_hz, lande_gj(level)};
}

int HyperfineHamiltonian::f_min() const { return std::abs(level.j.twice - I.twice) / 2; }
int HyperfineHamiltonian::f_max() const { return (level.j.twice + I.twice) / 2; }

namespace {

struct Block {
  Eigen::VectorXd energies;
  Eigen::VectorXd mj;
};

Block solve_block(const HyperfineHamiltonian& h, int m, double b) {
  const int tj = h.level.j.twice, ti = h.I.twice, tm = 2 * m;
  std::vector<int> tmj;
  for (int x = -tj; x <= tj; x += 2)
    if (std::abs(tm - x) <= ti) tmj.push_back(x);
  const auto n = static_cast<Eigen::Index>(tmj.size());
  if (n == 0) fail(ErrorKind::InvalidM, fmt::format("m={} not present in {}", m, h.level.label()));

  const double j = h.level.j.value(), i = h.I.value();
  Eigen::MatrixXd ij = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    const double mj = 0.5 * tmj[static_cast<std::size_t>(a)], mi = m - mj;
    ij(a, a) = mj * mi;
    if (a + 1 < n) {
      // |mj, mi> -> |mj+1, mi-1> via J+ I-
      const double v = 0.5 * std::sqrt(j * (j + 1) - mj * (mj + 1)) * std::sqrt(i * (i + 1) - mi * (mi - 1));
      ij(a + 1, a) = v;
      ij(a, a + 1) = v;
    }
  }
  Eigen::MatrixXd H = h.a_hz * ij;
  if (h.I.twice >= 2 && h.level.j.twice >= 2 && h.b_hz != 0.0) {
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd q = 3.0 * ij * ij + 1.5 * ij - i * (i + 1) * j * (j + 1) * id;
    H += h.b_hz * q / (2.0 * i * (2 * i - 1) * j * (2 * j - 1));
  }
  Eigen::VectorXd mjv(n);
  const double zee = h.g_j * kPhys.bohr_magneton * b / kPhys.planck_h;
  for (Eigen::Index a = 0; a < n; ++a) {
    mjv(a) = 0.5 * tmj[static_cast<std::size_t>(a)];
    H(a, a) += zee * mjv(a);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H, Eigen::EigenvaluesOnly);
  return {es.eigenvalues(), mjv};
}

}  // namespace

std::vector<std::pair<int, double>> HyperfineHamiltonian::block(int m, double b) const {
  const Block blk = solve_block(*this, m, b);
  // Non-crossing within a block: adiabatic labels follow the B=0 energy rank of the f present.
  std::vector<std::pair<double, int>> zero;
  for (int f = std::max(f_min(), std::abs(m)); f <= f_max(); ++f)
    zero.push_back({hyperfine_energy_hz(a_hz, b_hz, I, level.j, f), f});
  std::sort(zero.begin(), zero.end());
  std::vector<std::pair<int, double>> out;
  for (std::size_t k = 0; k < zero.size(); ++k) out.push_back({zero[k].second, blk.energies(static_cast<Eigen::Index>(k))});
  return out;
}

double HyperfineHamiltonian::energy(int f, int m, double b) const {
  if (f < f_min() || f > f_max()) fail(ErrorKind::InvalidF, fmt::format("f={} not in {}", f, level.label()));
  if (std::abs(m) > f) fail(ErrorKind::InvalidM, fmt::format("|m|={} exceeds f={}", std::abs(m), f));
  for (const auto& [ff, e] : block(m, b))
    if (ff == f) return e;
  fail(ErrorKind::InvalidF, "branch not found");
}

double HyperfineHamiltonian::block_trace(int m, double b) const { return solve_block(*this, m, b).energies.sum(); }

std::string ZeemanBranch::label() const { return fmt::format("f={} m={}", f, m); }

const ZeemanBranch& ZeemanMap::branch(int f, int m) const {
  for (const auto& br : branches)
    if (br.f == f && br.m == m) return br;
  fail(ErrorKind::InvalidF, fmt::format("no branch f={} m={} in map of {}", f, m, hamiltonian.level.label()));
}

ZeemanMap zeeman_map(const AtomicDataset& d, const FineLevel& level, double b_min, double b_max, std::size_t steps) {
  if (steps < 2 || !(b_max > b_min)) fail(ErrorKind::InvalidArgument, "Zeeman map needs b_max > b_min and >= 2 steps");
  ZeemanMap map;
  map.hamiltonian = HyperfineHamiltonian::from(d, level);
  const auto& h = map.hamiltonian;
  for (std::size_t k = 0; k < steps; ++k)
    map.b_tesla.push_back(b_min + (b_max - b_min) * static_cast<double>(k) / static_cast<double>(steps - 1));
  const int mmax = h.f_max();
  for (int f = h.f_max(); f >= h.f_min(); --f)
    for (int m = f; m >= -f; --m) map.branches.push_back({f, m, std::vector<double>(steps)});
  auto index_of = [&](int f, int m) {
    std::size_t idx = 0;
    for (int ff = h.f_max(); ff > f; --ff) idx += static_cast<std::size_t>(2 * ff + 1);
    return idx + static_cast<std::size_t>(f - m);
  };
  for (std::size_t k = 0; k < steps; ++k)
    for (int m = -mmax; m <= mmax; ++m)
      for (const auto& [f, e] : h.block(m, map.b_tesla[k])) map.branches[index_of(f, m)].energy_hz[k] = e;
  return map;
}

std::string zeeman_csv(const ZeemanMap& map) {
  std::string s = "B_T,branch,energy_Hz\n";
  for (std::size_t k = 0; k < map.b_tesla.size(); ++k)
    for (const auto& br : map.branches)
      s += fmt::format("{:.9e},\"{}\",{:.9e}\n", map.b_tesla[k], br.label(), br.energy_hz[k]);
  return s;
}

StretchedShift stretched_shift(double b, double g_excited, double g_ground, int m_excited, int m_ground) {
  if (b < 0.0) fail(ErrorKind::InvalidArgument, "field magnitude must be >= 0");
  const double d = (m_excited * g_excited - m_ground * g_ground) * kPhys.bohr_magneton * b / kPhys.planck_h;
  return {d, -d};
}

std::vector<MagicField> find_magic_b(const ZeemanMap& ground, const ZeemanMap& excited, const BranchPair& pair,
                                     double b_lo, double b_hi) {
  if (ground.b_tesla != excited.b_tesla) fail(ErrorKind::GridMismatch, "ground and excited maps use different B grids");
  const auto& hg = ground.hamiltonian;
  const auto& he = excited.hamiltonian;
  if (hg.level == he.level && hg.a_hz == he.a_hz && hg.b_hz == he.b_hz && hg.g_j == he.g_j &&
      pair.ground_f == pair.excited_f && pair.ground_m == pair.excited_m)
    fail(ErrorKind::DegenerateInput, "identical ground and excited branches: every field is magic");

  const auto& g = ground.branch(pair.ground_f, pair.ground_m).energy_hz;
  const auto& e = excited.branch(pair.excited_f, pair.excited_m).energy_hz;
  const auto& B = ground.b_tesla;
  const std::size_t n = B.size();
  if (n < 4) fail(ErrorKind::InvalidArgument, "magic-field search needs at least 4 grid points");
  std::vector<double> diff(n);
  for (std::size_t k = 0; k < n; ++k) diff[k] = e[k] - g[k];
  const double h = B[1] - B[0];
  boost::math::interpolators::cardinal_cubic_b_spline<double> spline(diff.begin(), diff.end(), B[0], h);

  auto fresh_slope = [&](double b) {
    const double db = std::max(1e-9, 1e-4 * std::abs(b));
    auto nu = [&](double x) {
      return he.energy(pair.excited_f, pair.excited_m, x) - hg.energy(pair.ground_f, pair.ground_m, x);
    };
    return (nu(b + db) - nu(b - db)) / (2 * db);
  };

  const double lo = std::max(b_lo, B.front()), hi = std::min(b_hi, B.back());
  std::vector<MagicField> out;
  if (!(hi > lo)) return out;
  const std::size_t samples = 4 * n;
  double prev_b = lo, prev_d = spline.prime(lo);
  for (std::size_t k = 1; k <= samples; ++k) {
    const double b = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(samples);
    const double dv = spline.prime(b);
    if (prev_d == 0.0 || prev_d * dv < 0.0) {
      double a = prev_b, c = b, fa = prev_d;
      double mid = a;
      if (fa != 0.0) {
        for (int it = 0; it < 200 && c - a > 1e-15; ++it) {
          mid = 0.5 * (a + c);
          const double fm = spline.prime(mid);
          if (fm == 0.0) break;
          if ((fm < 0) == (fa < 0)) {
            a = mid;
            fa = fm;
          } else {
            c = mid;
          }
        }
      }
      out.push_back({mid, fresh_slope(mid), spline.prime(mid)});
    }
    prev_b = b;
    prev_d = dv;
  }
  return out;
}

}  // namespace csclock
