#include "core/quantum.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>

#include "core/constants.hpp"
#include "core/error.hpp"

namespace csclock {

namespace {

constexpr std::string_view kOrbitals = "spdfghik";

int parse_int(std::string_view s, std::string_view what) {
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    fail(ErrorKind::InvalidQuantumNumbers, "bad " + std::string(what) + " '" + std::string(s) + "'");
  return v;
}

}  // namespace

std::string HalfInt::str() const {
  if (is_integer()) return std::to_string(twice / 2);
  return std::to_string(twice) + "/2";
}

HalfInt HalfInt::parse(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return integer(parse_int(text, "quantum number"));
  if (text.substr(slash + 1) != "2")
    fail(ErrorKind::InvalidQuantumNumbers, "half-integer must be written k/2: '" + std::string(text) + "'");
  return from_twice(parse_int(text.substr(0, slash), "quantum number"));
}

std::string_view species_name(Species s) { return s == Species::Cs ? "Cs" : "Rb87"; }

Species parse_species(std::string_view text) {
  if (text == "Cs" || text == "Cs-133" || text == "Cs133" || text == "cs") return Species::Cs;
  if (text == "Rb87" || text == "Rb-87" || text == "rb87") return Species::Rb87;
  fail(ErrorKind::ParseError, "unknown species '" + std::string(text) + "'");
}

HalfInt nuclear_spin_of(Species s) { return s == Species::Cs ? HalfInt::from_twice(7) : HalfInt::from_twice(3); }

double mass_of(Species s) { return s == Species::Cs ? kPhys.cs_mass : kPhys.rb87_mass; }

std::string FineLevel::label() const {
  return std::to_string(n) + kOrbitals[static_cast<std::size_t>(l)] + j.str();
}

FineLevel FineLevel::parse(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
  if (i == 0 || i >= text.size())
    fail(ErrorKind::UnknownLevel, "malformed level label '" + std::string(text) + "'");
  FineLevel lv;
  lv.n = parse_int(text.substr(0, i), "principal quantum number");
  auto orb = kOrbitals.find(static_cast<char>(std::tolower(static_cast<unsigned char>(text[i]))));
  if (orb == std::string_view::npos)
    fail(ErrorKind::UnknownLevel, "unknown orbital letter in '" + std::string(text) + "'");
  lv.l = static_cast<int>(orb);
  lv.j = HalfInt::parse(text.substr(i + 1));
  if (lv.j.is_integer() || lv.j.twice <= 0 || std::abs(lv.j.twice - 2 * lv.l) != 1 || lv.l >= lv.n)
    fail(ErrorKind::InvalidQuantumNumbers, "inconsistent l, j in '" + std::string(text) + "'");
  return lv;
}

bool f_allowed(HalfInt j, HalfInt I, int f) {
  const int tf = 2 * f;
  return tf >= std::abs(j.twice - I.twice) && tf <= j.twice + I.twice;
}

void LevelId::check() const {
  const HalfInt I = nuclear_spin_of(species);
  if (f && !f_allowed(level.j, I, *f))
    fail(ErrorKind::InvalidQuantumNumbers,
         "f=" + std::to_string(*f) + " not allowed for " + level.label());
  if (m && !f) fail(ErrorKind::InvalidQuantumNumbers, "m given without f");
  if (m && f && std::abs(*m) > *f)
    fail(ErrorKind::InvalidQuantumNumbers, "|m| > f for " + level.label());
}

}  // namespace csclock
