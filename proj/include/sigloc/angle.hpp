#pragma once

#include <cmath>
#include <numbers>

#include "sigloc/errors.hpp"

namespace sigloc {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Measurement-axis orientation, stored canonically in [0, 2*pi).
/// Construction canonicalizes any finite real by mod 2*pi; equality is exact
/// comparison of the canonical representation.
class Angle {
 public:
  constexpr Angle() = default;
  explicit Angle(double radians) : radians_(canonical(radians)) {}

  double radians() const { return radians_; }

  friend bool operator==(Angle, Angle) = default;

 private:
  static double canonical(double raw) {
    if (!std::isfinite(raw)) {
      throw InvalidAngleError("angle must be a finite real (radians)");
    }
    double r = std::fmod(raw, two_pi);
    if (r < 0.0) r += two_pi;
    // adding two_pi to a tiny negative remainder can round up to two_pi
    if (r >= two_pi) r = 0.0;
    return r;
  }

  double radians_ = 0.0;
};

inline Angle canonicalize(double radians) { return Angle(radians); }

/// Distance between two canonical angles along the shorter arc.
inline double circular_distance(Angle x, Angle y) {
  const double d = std::fabs(x.radians() - y.radians());
  return std::min(d, two_pi - d);
}

}  // namespace sigloc
