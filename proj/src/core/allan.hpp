#pragma once

#include <string>
#include <vector>

namespace csclock {

struct AllanSeries {
  std::vector<double> tau;
  std::vector<double> sigma;
  std::vector<double> ci_lo;  // 68.3 % chi-square interval
  std::vector<double> ci_hi;
  std::vector<double> edf;
};

// Overlapping Allan deviation of fractional frequency samples y spaced tau0.
// tau values are rounded to multiples of tau0; duplicates are dropped.
AllanSeries allan_deviation(const std::vector<double>& y, double tau0, const std::vector<double>& taus);

// Octave-spaced grid m = 1, 2, 4, ... while 2m <= n.
std::vector<double> octave_taus(std::size_t n, double tau0);

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

std::string allan_csv(const AllanSeries& s);

}  // namespace csclock
