#pragma once

#include <string>
#include <string_view>

namespace csclock {

enum class PolUnit { Angstrom3, Bohr3, SI };

PolUnit parse_pol_unit(std::string_view text);
std::string_view pol_unit_name(PolUnit u);

// Polarizability volume in m^3 per unit; SI values are C m^2/V = 4 pi eps0 * volume.
double convert_polarizability(double value, PolUnit from, PolUnit to);
double convert_polarizability(double value, std::string_view from, std::string_view to);

// Stored in SI (C m^2/V).
class Polarizability {
 public:
  constexpr Polarizability() = default;
  static Polarizability from(double value, PolUnit unit) {
    Polarizability p;
    p.si_ = convert_polarizability(value, unit, PolUnit::SI);
    return p;
  }
  static Polarizability angstrom3(double v) { return from(v, PolUnit::Angstrom3); }
  static Polarizability bohr3(double v) { return from(v, PolUnit::Bohr3); }

  double si() const { return si_; }
  double in(PolUnit unit) const { return convert_polarizability(si_, PolUnit::SI, unit); }
  double angstrom3() const { return in(PolUnit::Angstrom3); }
  double bohr3() const { return in(PolUnit::Bohr3); }

  Polarizability operator+(Polarizability o) const { return raw(si_ + o.si_); }
  Polarizability operator-(Polarizability o) const { return raw(si_ - o.si_); }
  Polarizability operator*(double k) const { return raw(si_ * k); }
  bool operator==(const Polarizability&) const = default;

 private:
  static Polarizability raw(double si) {
    Polarizability p;
    p.si_ = si;
    return p;
  }
  double si_ = 0.0;
};

}  // namespace csclock
