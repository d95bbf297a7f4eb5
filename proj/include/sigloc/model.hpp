#pragma once

#include <functional>
#include <string>
#include <utility>

#include "sigloc/lambda_space.hpp"
#include "sigloc/types.hpp"

namespace sigloc {

/// Deterministic outcome map for one wing. Must be total and pure: every
/// in-domain (settings, lambda) yields exactly one Outcome, and identical
/// inputs always yield identical outputs. Either map may read both settings.
using OutcomeFn = std::function<Outcome(const SettingsPair&, const LambdaPoint&)>;

/// A deterministic hidden-variables model of the two-wing singlet experiment:
/// a lambda space carrying the equilibrium measure plus the two outcome maps.
/// Immutable after construction; evaluation is pure and thread-safe.
struct Model {
  LambdaSpace space;
  OutcomeFn sigma_a;
  OutcomeFn sigma_b;
  std::string name;
};

inline const OutcomeFn& outcome_map(const Model& model, Wing wing) {
  return wing == Wing::a ? model.sigma_a : model.sigma_b;
}

/// Evaluates both wings at one hidden-variable value.
/// Throws DomainError if the point does not belong to the model's space.
inline std::pair<Outcome, Outcome> evaluate_pair(const Model& model,
                                                 const SettingsPair& settings,
                                                 const LambdaPoint& lambda) {
  if (!model.space.contains(lambda)) {
    throw DomainError("lambda point outside the model's space");
  }
  return {model.sigma_a(settings, lambda), model.sigma_b(settings, lambda)};
}

inline Outcome evaluate_wing(const Model& model, Wing wing,
                             const SettingsPair& settings,
                             const LambdaPoint& lambda) {
  if (!model.space.contains(lambda)) {
    throw DomainError("lambda point outside the model's space");
  }
  return outcome_map(model, wing)(settings, lambda);
}

}  // namespace sigloc
