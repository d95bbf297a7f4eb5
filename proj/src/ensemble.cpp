#include "sigloc/ensemble.hpp"

#include <cmath>
#include <utility>

#include "sigloc/errors.hpp"

namespace sigloc {
namespace {

// An estimate is treated as zero when it is statistically indistinguishable
// from zero (3 sigma) or below the exact-method floor.
bool vanishes(const Estimate& e) {
  return e.value <= std::max(3.0 * e.std_error, 1e-12);
}

}  // namespace

Ensemble equilibrium(const LambdaSpace& space) {
  Ensemble e;
  e.space = space;
  e.weight = [](const LambdaPoint&) { return 1.0; };
  e.weight_bound = 1.0;
  e.label = "equilibrium";
  e.is_equilibrium = true;
  return e;
}

Ensemble tilt(const Ensemble& base, const WeightFn& g, double g_bound,
              const IntegrationBudget& budget) {
  if (!g) throw UsageError("tilt needs a weight factor");
  if (!(g_bound > 0.0) || !std::isfinite(g_bound)) {
    throw UsageError("tilt factor must declare a finite positive bound");
  }
  const WeightFn base_weight = base.weight;
  const Estimate z = integrate(
      [&](const LambdaPoint& p) { return g(p) * (base_weight ? base_weight(p) : 1.0); },
      base.space, {}, budget);
  if (vanishes(z)) {
    throw ZeroMassError("tilt normalisation vanishes for ensemble '" + base.label + "'");
  }
  Ensemble e;
  e.space = base.space;
  e.weight = [g, base_weight, inv_z = 1.0 / z.value](const LambdaPoint& p) {
    return g(p) * (base_weight ? base_weight(p) : 1.0) * inv_z;
  };
  e.weight_bound = g_bound * base.weight_bound / z.value;
  e.label = "tilt(" + base.label + ")";
  return e;
}

Ensemble concentrate_on_transitions(const Model& model, Wing wing,
                                    const SettingsPair& settings,
                                    const Shift& shift,
                                    TransitionDirection direction,
                                    const IntegrationBudget& budget) {
  if (shift.wing == wing) {
    throw UsageError("the shift must be at the wing distant from the observed one");
  }
  const Outcome before = direction == TransitionDirection::plus_to_minus
                             ? Outcome::plus
                             : Outcome::minus;
  const Outcome after = flipped(before);
  const SettingsPair shifted = apply_shift(settings, shift);
  const OutcomeFn sigma = outcome_map(model, wing);
  auto member = [sigma, settings, shifted, before, after](const LambdaPoint& p) {
    return sigma(settings, p) == before && sigma(shifted, p) == after;
  };

  const Estimate nu = integrate(
      [&member](const LambdaPoint& p) { return member(p) ? 1.0 : 0.0; },
      model.space, {}, budget);
  if (vanishes(nu)) {
    throw ZeroMeasureTransitionError(
        "transition set T_" + to_string(wing) + "(" + to_string(direction) +
        ") has vanishing equilibrium measure; cannot concentrate on it");
  }

  Ensemble e;
  e.space = model.space;
  e.weight = [member, inv_nu = 1.0 / nu.value](const LambdaPoint& p) {
    return member(p) ? inv_nu : 0.0;
  };
  e.weight_bound = 1.0 / nu.value;
  e.label = "concentrate:" + to_string(wing) + ":" + to_string(direction);
  return e;
}

Ensemble mixture(const Ensemble& e1, const Ensemble& e2, double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw UsageError("mixture epsilon must lie in [0, 1]");
  }
  if (!same_space(e1.space, e2.space)) {
    throw DomainError("mixture components must share one lambda space");
  }
  if (epsilon == 0.0) return e1;
  if (epsilon == 1.0) return e2;

  Ensemble e;
  e.space = e1.space;
  e.weight = [w1 = e1.weight, w2 = e2.weight, epsilon](const LambdaPoint& p) {
    return (1.0 - epsilon) * (w1 ? w1(p) : 1.0) + epsilon * (w2 ? w2(p) : 1.0);
  };
  e.weight_bound = (1.0 - epsilon) * e1.weight_bound + epsilon * e2.weight_bound;
  e.label = "mixture(" + std::to_string(epsilon) + ";" + e1.label + "," + e2.label + ")";
  return e;
}

}  // namespace sigloc
