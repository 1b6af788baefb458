#include "core/allan.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/chi_squared.hpp>
#include <fmt/format.h>

#include "core/error.hpp"

namespace csclock {

namespace {

// White FM approximation for overlapping samples (Howe, Allan, Barnes).
double edf_white_fm(double n_phase, double m) {
  const double e = (3.0 * (n_phase - 1.0) / (2.0 * m) - 2.0 * (n_phase - 2.0) / n_phase) * 4.0 * m * m / (4.0 * m * m + 5.0);
  return std::max(e, 1.0);
}

}  // namespace

AllanSeries allan_deviation(const std::vector<double>& y, double tau0, const std::vector<double>& taus) {
  if (!(tau0 > 0.0)) fail(ErrorKind::InvalidArgument, "sample interval must be positive");
  const std::size_t n = y.size();
  std::vector<std::size_t> ms;
  for (double t : taus) {
    if (!(t > 0.0)) fail(ErrorKind::InvalidArgument, "tau must be positive");
    const auto m = static_cast<std::size_t>(std::max(1.0, std::round(t / tau0)));
    if (2 * m > n)
      fail(ErrorKind::TooShortTrace, fmt::format("trace of {} samples is too short for tau = {} s", n, t));
    ms.push_back(m);
  }
  std::sort(ms.begin(), ms.end());
  ms.erase(std::unique(ms.begin(), ms.end()), ms.end());

  // Phase x_k = tau0 * sum_{i<k} y_i, k = 0..n
  std::vector<long double> x(n + 1, 0.0L);
  for (std::size_t i = 0; i < n; ++i) x[i + 1] = x[i] + static_cast<long double>(y[i]) * tau0;

  AllanSeries s;
  const double p = 0.6827;
  for (std::size_t m : ms) {
    const std::size_t terms = n + 1 - 2 * m;
    long double acc = 0.0L;
    for (std::size_t k = 0; k < terms; ++k) {
      const long double d = x[k + 2 * m] - 2.0L * x[k + m] + x[k];
      acc += d * d;
    }
    const double tau = static_cast<double>(m) * tau0;
    const double var = static_cast<double>(acc / (2.0L * tau * tau * static_cast<long double>(terms)));
    const double sigma = std::sqrt(var);
    const double edf = edf_white_fm(static_cast<double>(n + 1), static_cast<double>(m));
    boost::math::chi_squared dist(edf);
    const double lo = sigma * std::sqrt(edf / boost::math::quantile(dist, 0.5 + p / 2.0));
    const double hi = sigma * std::sqrt(edf / boost::math::quantile(dist, 0.5 - p / 2.0));
    s.tau.push_back(tau);
    s.sigma.push_back(sigma);
    s.ci_lo.push_back(lo);
    s.ci_hi.push_back(hi);
    s.edf.push_back(edf);
  }
  return s;
}

std::vector<double> octave_taus(std::size_t n, double tau0) {
  std::vector<double> out;
  for (std::size_t m = 1; 2 * m <= n; m *= 2) out.push_back(static_cast<double>(m) * tau0);
  return out;
}

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) fail(ErrorKind::InvalidArgument, "slope fit needs >= 2 matched points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) fail(ErrorKind::InvalidArgument, "log-log fit needs positive values");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::string allan_csv(const AllanSeries& s) {
  std::string out = "tau_s,sigma,ci_lo,ci_hi,edf\n";
  for (std::size_t i = 0; i < s.tau.size(); ++i)
    out += fmt::format("{:.6e},{:.6e},{:.6e},{:.6e},{:.4f}\n", s.tau[i], s.sigma[i], s.ci_lo[i], s.ci_hi[i], s.edf[i]);
  return out;
}

}  // namespace csclock
