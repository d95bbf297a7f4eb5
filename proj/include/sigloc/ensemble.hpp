#pragma once

#include <string>

#include "sigloc/integrate.hpp"
#include "sigloc/model.hpp"

namespace sigloc {

/// A distribution rho over hidden variables, held as its density relative to
/// the equilibrium measure: weight = d(rho)/d(rho_eq). Equilibrium is weight
/// identically 1. Weight functions must be pure, non-negative and bounded by
/// weight_bound; constructors normalise so the weight integrates to 1 against
/// the equilibrium measure. Immutable after construction.
struct Ensemble {
  LambdaSpace space;
  WeightFn weight;
  double weight_bound = 1.0;
  std::string label;
  bool is_equilibrium = false;
};

/// The equilibrium ensemble itself: weight identically 1.
Ensemble equilibrium(const LambdaSpace& space);

/// Reweights `base` by the factor g (non-negative, bounded by g_bound):
/// new weight = g * base.weight / Z with Z = integral(g * base.weight dRho_eq)
/// computed once with `budget` and cached. Throws ZeroMassError when Z
/// vanishes within tolerance, UsageError when g_bound is not a positive
/// finite number.
Ensemble tilt(const Ensemble& base, const WeightFn& g, double g_bound,
              const IntegrationBudget& budget = {});

/// The nonequilibrium ensemble concentrated on one transition set: weight is
/// the indicator of the lambdas whose outcome at `wing` flips in the given
/// direction under the distant shift, normalised by the set's equilibrium
/// measure. Throws ZeroMeasureTransitionError when that measure vanishes
/// within tolerance (one-way locality in this direction).
Ensemble concentrate_on_transitions(const Model& model, Wing wing,
                                    const SettingsPair& settings,
                                    const Shift& shift,
                                    TransitionDirection direction,
                                    const IntegrationBudget& budget = {});

/// Convex mixture (1 - epsilon) * e1 + epsilon * e2 over a common space.
/// epsilon 0 or 1 returns the corresponding input unchanged.
Ensemble mixture(const Ensemble& e1, const Ensemble& e2, double epsilon);

}  // namespace sigloc
