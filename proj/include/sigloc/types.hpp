#pragma once

#include <cstdint>
#include <string>

#include "sigloc/angle.hpp"
#include "sigloc/errors.hpp"

namespace sigloc {

/// Spin measurement outcome in units of hbar/2. Exactly two inhabitants;
/// there is no "no outcome" state.
enum class Outcome : std::int8_t { minus = -1, plus = +1 };

constexpr int sign_of(Outcome o) { return static_cast<int>(o); }

constexpr Outcome flipped(Outcome o) {
  return o == Outcome::plus ? Outcome::minus : Outcome::plus;
}

inline Outcome outcome_from_sign(int s) {
  if (s == +1) return Outcome::plus;
  if (s == -1) return Outcome::minus;
  throw UsageError("outcome sign must be +1 or -1");
}

enum class Wing : std::uint8_t { a, b };

constexpr Wing other_wing(Wing w) { return w == Wing::a ? Wing::b : Wing::a; }

inline std::string to_string(Wing w) { return w == Wing::a ? "A" : "B"; }

inline Wing wing_from_string(const std::string& s) {
  if (s == "A" || s == "a") return Wing::a;
  if (s == "B" || s == "b") return Wing::b;
  throw UsageError("wing must be A or B, got '" + s + "'");
}

enum class TransitionDirection : std::uint8_t { plus_to_minus, minus_to_plus };

inline std::string to_string(TransitionDirection d) {
  return d == TransitionDirection::plus_to_minus ? "plus_to_minus"
                                                 : "minus_to_plus";
}

inline TransitionDirection direction_from_string(const std::string& s) {
  if (s == "plus_to_minus" || s == "+-") return TransitionDirection::plus_to_minus;
  if (s == "minus_to_plus" || s == "-+") return TransitionDirection::minus_to_plus;
  throw UsageError("direction must be plus_to_minus or minus_to_plus, got '" + s + "'");
}

/// The experiment configuration: one measurement angle per wing.
struct SettingsPair {
  Angle theta_a;
  Angle theta_b;

  friend bool operator==(const SettingsPair&, const SettingsPair&) = default;
};

/// A setting change at exactly one wing.
struct Shift {
  Wing wing = Wing::b;
  Angle new_angle;

  friend bool operator==(const Shift&, const Shift&) = default;
};

inline SettingsPair apply_shift(const SettingsPair& settings, const Shift& shift) {
  SettingsPair out = settings;
  (shift.wing == Wing::a ? out.theta_a : out.theta_b) = shift.new_angle;
  return out;
}

}  // namespace sigloc
