#include "core/units.hpp"

#include <algorithm>
#include <cctype>

#include "core/constants.hpp"
#include "core/error.hpp"

namespace csclock {

namespace {

std::string normalize(std::string_view text) {
  std::string out;
  for (char ch : text) {
    if (ch == ' ' || ch == '_' || ch == '^') continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  }
  return out;
}

// m^3 represented by one unit of each kind (SI handled separately).
double volume_of(PolUnit u) {
  switch (u) {
    case PolUnit::Angstrom3: return 1e-30;
    case PolUnit::Bohr3: {
      const double a0 = kPhys.bohr_radius;
      return a0 * a0 * a0;
    }
    case PolUnit::SI: return 1.0 / (4.0 * kPi * kPhys.vacuum_permittivity);
  }
  return 1.0;
}

}  // namespace

PolUnit parse_pol_unit(std::string_view text) {
  const std::string n = normalize(text);
  if (n == "a3" || n == "angstrom3" || n == "\xc3\xa5" "3" || n == "\xc3\xa5\xc2\xb3" ||
      n == "\xc3\x85" "3" || n == "\xc3\x85\xc2\xb3" || n == "\xe2\x84\xab\xc2\xb3" || n == "\xe2\x84\xab" "3" || n == "ang3")
    return PolUnit::Angstrom3;
  if (n == "a03" || n == "a0\xc2\xb3" || n == "bohr3" || n == "au")
    return PolUnit::Bohr3;
  if (n == "si" || n == "cm2/v" || n == "c\xc2\xb7m2/v" || n == "c\xc2\xb7m\xc2\xb2/v" || n == "cm\xc2\xb2/v")
    return PolUnit::SI;
  fail(ErrorKind::UnknownUnit, "unknown polarizability unit '" + std::string(text) + "'");
}

std::string_view pol_unit_name(PolUnit u) {
  switch (u) {
    case PolUnit::Angstrom3: return "A^3";
    case PolUnit::Bohr3: return "a0^3";
    case PolUnit::SI: return "C m^2/V";
  }
  return "?";
}

double convert_polarizability(double value, PolUnit from, PolUnit to) {
  if (from == to) return value;
  return value * (volume_of(from) / volume_of(to));
}

double convert_polarizability(double value, std::string_view from, std::string_view to) {
  return convert_polarizability(value, parse_pol_unit(from), parse_pol_unit(to));
}

}  // namespace csclock
