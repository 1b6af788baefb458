#include "core/angular.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "core/error.hpp"

namespace csclock {

namespace {

std::vector<int> primes_upto(int n) {
  std::vector<bool> composite(static_cast<std::size_t>(std::max(n, 1) + 1), false);
  std::vector<int> out;
  for (int i = 2; i <= n; ++i) {
    if (composite[static_cast<std::size_t>(i)]) continue;
    out.push_back(i);
    for (long k = static_cast<long>(i) * i; k <= n; k += i) composite[static_cast<std::size_t>(k)] = true;
  }
  return out;
}

// Product of factorials with integer exponents, kept as prime exponents.
class Factored {
 public:
  explicit Factored(int max_arg) : primes_(primes_upto(max_arg)), exp_(primes_.size(), 0) {}

  void factorial(int n, int power) {
    for (std::size_t i = 0; i < primes_.size() && primes_[i] <= n; ++i) {
      int count = 0;
      for (long pk = primes_[i]; pk <= n; pk *= primes_[i]) count += static_cast<int>(n / pk);
      exp_[i] += power * count;
    }
  }

  ExactValue sqrt() const {
    BigInt num = 1, den = 1, rad = 1;
    for (std::size_t i = 0; i < primes_.size(); ++i) {
      const int e = exp_[i];
      const int half = e >= 0 ? e / 2 : -((-e + 1) / 2);
      const int odd = e - 2 * half;
      BigInt p = primes_[i];
      if (half > 0) num *= boost::multiprecision::pow(p, static_cast<unsigned>(half));
      if (half < 0) den *= boost::multiprecision::pow(p, static_cast<unsigned>(-half));
      if (odd) rad *= p;
    }
    return ExactValue(Rational(num, den), rad);
  }

 private:
  std::vector<int> primes_;
  std::vector<int> exp_;
};

BigInt factorial(int n) {
  BigInt r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

bool triangle(int ta, int tb, int tc) {
  return (ta + tb + tc) % 2 == 0 && tc >= std::abs(ta - tb) && tc <= ta + tb;
}

void check_jm(HalfInt j, HalfInt m) {
  if (j.twice < 0) fail(ErrorKind::InvalidQuantumNumbers, "negative angular momentum " + j.str());
  if (std::abs(m.twice) > j.twice)
    fail(ErrorKind::InvalidQuantumNumbers, "|m|=" + m.str() + " exceeds j=" + j.str());
  if ((j.twice - m.twice) % 2 != 0)
    fail(ErrorKind::InvalidQuantumNumbers, "j=" + j.str() + " and m=" + m.str() + " differ by a half-integer");
}

void add_delta(Factored& f, int ta, int tb, int tc) {
  f.factorial((ta + tb - tc) / 2, 1);
  f.factorial((ta - tb + tc) / 2, 1);
  f.factorial((-ta + tb + tc) / 2, 1);
  f.factorial((ta + tb + tc) / 2 + 1, -1);
}

void factor_into(BigInt n, int power, std::vector<std::pair<BigInt, int>>& out) {
  if (n > BigInt(1) << 80) fail(ErrorKind::InvalidArgument, "radicand too large to factor");
  for (BigInt p = 2; p * p <= n; ++p) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e) out.push_back({p, power * e});
  }
  if (n > 1) out.push_back({n, power});
}

}  // namespace

ExactValue::ExactValue(Rational coefficient, BigInt radicand) : coef_(std::move(coefficient)), rad_(std::move(radicand)) {
  if (rad_ <= 0) fail(ErrorKind::InvalidArgument, "radicand must be positive");
  if (coef_ == 0) rad_ = 1;
}

ExactValue ExactValue::sqrt_of(const Rational& r) {
  if (r < 0) fail(ErrorKind::InvalidArgument, "sqrt of negative rational");
  if (r == 0) return {};
  std::vector<std::pair<BigInt, int>> fs;
  factor_into(boost::multiprecision::numerator(r), 1, fs);
  factor_into(boost::multiprecision::denominator(r), -1, fs);
  BigInt num = 1, den = 1, rad = 1;
  for (const auto& [p, e] : fs) {
    const int half = e >= 0 ? e / 2 : -((-e + 1) / 2);
    const int odd = e - 2 * half;
    if (half > 0) num *= boost::multiprecision::pow(p, static_cast<unsigned>(half));
    if (half < 0) den *= boost::multiprecision::pow(p, static_cast<unsigned>(-half));
    if (odd) rad *= p;
  }
  return ExactValue(Rational(num, den), rad);
}

double ExactValue::approx() const {
  return coef_.convert_to<double>() * std::sqrt(rad_.convert_to<double>());
}

std::string ExactValue::str() const {
  std::ostringstream os;
  os << coef_;
  if (rad_ != 1) os << "*sqrt(" << rad_ << ")";
  return os.str();
}

ExactValue ExactValue::operator*(const ExactValue& o) const {
  if (is_zero() || o.is_zero()) return {};
  BigInt g = boost::multiprecision::gcd(rad_, o.rad_);
  return ExactValue(coef_ * o.coef_ * Rational(g), (rad_ / g) * (o.rad_ / g));
}

ExactValue ExactValue::operator/(const ExactValue& o) const {
  if (o.is_zero()) fail(ErrorKind::InvalidArgument, "division by zero exact value");
  // a sqrt(r) / (b sqrt(s)) = a/(b s) sqrt(r s)
  ExactValue inv(Rational(1) / (o.coef_ * Rational(o.rad_)), o.rad_);
  return *this * inv;
}

ExactValue wigner3j(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt m1, HalfInt m2, HalfInt m3) {
  check_jm(j1, m1);
  check_jm(j2, m2);
  check_jm(j3, m3);
  if (m1.twice + m2.twice + m3.twice != 0) return {};
  if (!triangle(j1.twice, j2.twice, j3.twice)) return {};

  const int a = j1.twice, b = j2.twice, c = j3.twice;
  const int p1 = (a + m1.twice) / 2, q1 = (a - m1.twice) / 2;
  const int p2 = (b + m2.twice) / 2, q2 = (b - m2.twice) / 2;
  const int p3 = (c + m3.twice) / 2, q3 = (c - m3.twice) / 2;

  Factored pre((a + b + c) / 2 + 2);
  add_delta(pre, a, b, c);
  for (int n : {p1, q1, p2, q2, p3, q3}) pre.factorial(n, 1);

  // k bounds from non-negative factorial arguments.
  const int c_b_m1 = (c - b + m1.twice) / 2;
  const int c_a_m2 = (c - a - m2.twice) / 2;
  const int kmin = std::max({0, -c_b_m1, -c_a_m2});
  const int kmax = std::min({(a + b - c) / 2, q1, p2});
  Rational sum = 0;
  for (int k = kmin; k <= kmax; ++k) {
    BigInt den = factorial(k) * factorial(c_b_m1 + k) * factorial(c_a_m2 + k) * factorial((a + b - c) / 2 - k) *
                 factorial(q1 - k) * factorial(p2 - k);
    sum += Rational((k % 2) ? -1 : 1, den);
  }
  if (sum == 0) return {};
  const int phase = (a - b - m3.twice) / 2;
  if (phase % 2) sum = -sum;
  return pre.sqrt() * ExactValue::rational(sum);
}

ExactValue wigner6j(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt j4, HalfInt j5, HalfInt j6) {
  for (HalfInt j : {j1, j2, j3, j4, j5, j6})
    if (j.twice < 0) fail(ErrorKind::InvalidQuantumNumbers, "negative angular momentum " + j.str());
  const int t1 = j1.twice, t2 = j2.twice, t3 = j3.twice, t4 = j4.twice, t5 = j5.twice, t6 = j6.twice;
  if (!triangle(t1, t2, t3) || !triangle(t1, t5, t6) || !triangle(t4, t2, t6) || !triangle(t4, t5, t3)) return {};

  const int a1 = (t1 + t2 + t3) / 2, a2 = (t1 + t5 + t6) / 2, a3 = (t4 + t2 + t6) / 2, a4 = (t4 + t5 + t3) / 2;
  const int b1 = (t1 + t2 + t4 + t5) / 2, b2 = (t2 + t3 + t5 + t6) / 2, b3 = (t3 + t1 + t6 + t4) / 2;

  Factored pre(std::max({a1, a2, a3, a4}) + 2);
  add_delta(pre, t1, t2, t3);
  add_delta(pre, t1, t5, t6);
  add_delta(pre, t4, t2, t6);
  add_delta(pre, t4, t5, t3);

  const int tmin = std::max({a1, a2, a3, a4});
  const int tmax = std::min({b1, b2, b3});
  Rational sum = 0;
  for (int t = tmin; t <= tmax; ++t) {
    BigInt den = factorial(t - a1) * factorial(t - a2) * factorial(t - a3) * factorial(t - a4) * factorial(b1 - t) *
                 factorial(b2 - t) * factorial(b3 - t);
    BigInt num = factorial(t + 1);
    sum += Rational((t % 2) ? BigInt(-num) : num, den);
  }
  if (sum == 0) return {};
  return pre.sqrt() * ExactValue::rational(sum);
}

ExactValue clebsch_gordan(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2, HalfInt J, HalfInt M) {
  ExactValue w = wigner3j(j1, j2, J, m1, m2, -M);
  if (w.is_zero()) return w;
  const int phase = (j1.twice - j2.twice + M.twice) / 2;
  ExactValue r = ExactValue::sqrt_of(Rational(J.twice + 1)) * w;
  return (phase % 2) ? -r : r;
}

namespace {

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
Vec3 scaled(const Vec3& a, double k) { return {a[0] * k, a[1] * k, a[2] * k}; }
Vec3 minus(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

}  // namespace

E2Geometry E2Geometry::make(Vec3 propagation, Vec3 polarization, Vec3 quantization) {
  for (const Vec3* v : {&propagation, &polarization, &quantization})
    if (std::abs(dot(*v, *v) - 1.0) > 1e-12) fail(ErrorKind::InvalidArgument, "E2 geometry axes must be unit vectors");
  if (std::abs(dot(propagation, polarization)) > 1e-12)
    fail(ErrorKind::InvalidArgument, "propagation must be perpendicular to polarization");
  return E2Geometry{propagation, polarization, quantization};
}

std::array<std::complex<double>, 5> E2Geometry::rank2_components() const {
  const Vec3& z = quantization;
  Vec3 x = minus(propagation, scaled(z, dot(propagation, z)));
  if (dot(x, x) < 1e-20) x = minus(polarization, scaled(z, dot(polarization, z)));
  x = scaled(x, 1.0 / std::sqrt(dot(x, x)));
  const Vec3 y = cross(z, x);

  using C = std::complex<double>;
  auto spherical = [&](const Vec3& v) {
    const double vx = dot(v, x), vy = dot(v, y), vz = dot(v, z);
    const double r = 1.0 / std::sqrt(2.0);
    // index q+1
    return std::array<C, 3>{C(vx, -vy) * r, C(vz, 0.0), -C(vx, vy) * r};
  };
  const auto e = spherical(polarization);
  const auto k = spherical(propagation);
  std::array<C, 5> t{};
  const HalfInt one = HalfInt::integer(1), two = HalfInt::integer(2);
  for (int q1 = -1; q1 <= 1; ++q1)
    for (int q2 = -1; q2 <= 1; ++q2) {
      const int q = q1 + q2;
      if (std::abs(q) > 2) continue;
      const double cg =
          clebsch_gordan(one, HalfInt::integer(q1), one, HalfInt::integer(q2), two, HalfInt::integer(q)).approx();
      t[static_cast<std::size_t>(q + 2)] += cg * e[static_cast<std::size_t>(q1 + 1)] * k[static_cast<std::size_t>(q2 + 1)];
    }
  return t;
}

E2Amplitude e2_relative_amplitude(const LevelId& g, const LevelId& e, const E2Geometry& geom) {
  if (!g.f || !g.m || !e.f || !e.m)
    fail(ErrorKind::InvalidQuantumNumbers, "E2 amplitude needs f and m on both states");
  g.check();
  e.check();
  const int q = *e.m - *g.m;
  const int fg = *g.f, fe = *e.f;
  if (std::abs(q) > 2 || std::abs(fe - fg) > 2 || fe + fg < 2)
    fail(ErrorKind::ForbiddenTransition, "rank-2 coupling cannot connect f=" + std::to_string(fg) + ",m=" +
                                             std::to_string(*g.m) + " to f'=" + std::to_string(fe) + ",m'=" +
                                             std::to_string(*e.m));

  const auto t = geom.rank2_components();
  // Coupling to Q^(2)_q carries (-1)^q T_{-q}.
  auto weight = [&](int qq) {
    std::complex<double> w = t[static_cast<std::size_t>(2 - qq)];
    return (qq % 2) ? -w : w;
  };
  std::complex<double> norm = weight(2);
  if (std::abs(norm) < 1e-12) {
    norm = 0.0;
    for (int qq = -2; qq <= 2; ++qq)
      if (std::abs(weight(qq)) > std::abs(norm)) norm = weight(qq);
  }
  if (std::abs(norm) < 1e-12) fail(ErrorKind::ForbiddenTransition, "geometry has no rank-2 component");

  E2Amplitude a;
  a.q = q;
  a.clebsch = clebsch_gordan(HalfInt::integer(fg), HalfInt::integer(*g.m), HalfInt::integer(2), HalfInt::integer(q),
                             HalfInt::integer(fe), HalfInt::integer(*e.m));
  std::complex<double> w = weight(q) / norm;
  if (std::abs(w) < 1e-14) w = 0.0;
  a.value = a.clebsch.approx() * w;
  return a;
}

}  // namespace csclock
