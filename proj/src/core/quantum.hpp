#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace csclock {

struct HalfInt {
  int twice = 0;

  static constexpr HalfInt from_twice(int t) { return HalfInt{t}; }
  static constexpr HalfInt integer(int v) { return HalfInt{2 * v}; }

  constexpr double value() const { return 0.5 * twice; }
  constexpr bool is_integer() const { return twice % 2 == 0; }
  constexpr HalfInt operator+(HalfInt o) const { return {twice + o.twice}; }
  constexpr HalfInt operator-(HalfInt o) const { return {twice - o.twice}; }
  constexpr HalfInt operator-() const { return {-twice}; }
  constexpr auto operator<=>(const HalfInt&) const = default;

  std::string str() const;
  static HalfInt parse(std::string_view text);
};

enum class Species { Cs, Rb87 };

std::string_view species_name(Species s);
Species parse_species(std::string_view text);
HalfInt nuclear_spin_of(Species s);
double mass_of(Species s);

// Fine-structure level, e.g. 6s1/2.
struct FineLevel {
  int n = 0;
  int l = 0;
  HalfInt j;

  std::string label() const;
  static FineLevel parse(std::string_view text);
  auto operator<=>(const FineLevel&) const = default;
};

struct LevelId {
  Species species = Species::Cs;
  FineLevel level;
  std::optional<int> f;
  std::optional<int> m;

  // Throws InvalidQuantumNumbers when f or m are inconsistent with j and I.
  void check() const;
};

// f must be an integer in |j-I|..j+I.
bool f_allowed(HalfInt j, HalfInt I, int f);

}  // namespace csclock
