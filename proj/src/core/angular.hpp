#pragma once

#include <array>
#include <complex>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "core/quantum.hpp"

namespace csclock {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// coefficient * sqrt(radicand), radicand a square-free positive integer.
class ExactValue {
 public:
  ExactValue() = default;
  ExactValue(Rational coefficient, BigInt radicand);
  static ExactValue rational(Rational r) { return ExactValue(std::move(r), 1); }
  // sqrt of a non-negative rational with small numerator and denominator.
  static ExactValue sqrt_of(const Rational& r);

  const Rational& coefficient() const { return coef_; }
  const BigInt& radicand() const { return rad_; }
  bool is_zero() const { return coef_ == 0; }
  int sign() const { return coef_ > 0 ? 1 : (coef_ < 0 ? -1 : 0); }
  Rational squared() const { return coef_ * coef_ * Rational(rad_); }
  double approx() const;
  std::string str() const;

  ExactValue operator*(const ExactValue& o) const;
  ExactValue operator/(const ExactValue& o) const;
  ExactValue operator-() const { return ExactValue(-coef_, rad_); }
  bool operator==(const ExactValue& o) const { return coef_ == o.coef_ && rad_ == o.rad_; }

 private:
  Rational coef_ = 0;
  BigInt rad_ = 1;
};

ExactValue wigner3j(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt m1, HalfInt m2, HalfInt m3);
ExactValue wigner6j(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt j4, HalfInt j5, HalfInt j6);
// <j1 m1; j2 m2 | J M>
ExactValue clebsch_gordan(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2, HalfInt J, HalfInt M);

using Vec3 = std::array<double, 3>;

struct E2Geometry {
  Vec3 propagation{1, 0, 0};
  Vec3 polarization{0, 1, 0};
  Vec3 quantization{0, 0, 1};

  // Validates unit length and orthogonality within 1e-12.
  static E2Geometry make(Vec3 propagation, Vec3 polarization, Vec3 quantization);
  static E2Geometry clock() { return {}; }

  // Spherical rank-2 components of sym(eps (x) k) in the quantization frame, index q+2.
  std::array<std::complex<double>, 5> rank2_components() const;
};

struct E2Amplitude {
  std::complex<double> value;
  ExactValue clebsch;  // <f m; 2 q | f' m'>
  int q = 0;
};

// g and e carry f and m. Normalized so that (4,4)->(6,6) is 1 in the clock geometry.
E2Amplitude e2_relative_amplitude(const LevelId& g, const LevelId& e, const E2Geometry& geom);

}  // namespace csclock
