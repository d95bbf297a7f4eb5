#pragma once

#include <array>
#include <optional>
#include <vector>

#include "sigloc/ensemble.hpp"
#include "sigloc/estimate.hpp"
#include "sigloc/model.hpp"

namespace sigloc {

/// Measured transition-set fractions for one wing under one distant setting
/// shift, all evaluated on a single draw stream so that the arithmetic
/// identities (degree = nu+ + nu-, signal = |nu- - nu+|) hold exactly.
struct TransitionReport {
  Wing wing = Wing::a;
  SettingsPair settings;
  Shift shift;
  Estimate nu_plus_minus;  // measure of T(+,-) under the ensemble
  Estimate nu_minus_plus;  // measure of T(-,+)
  Estimate degree;         // nu(+,-) + nu(-,+)
  Estimate signal;         // |nu(-,+) - nu(+,-)|
  /// Equals degree; the bits-per-pair reading is only meaningful for the
  /// equilibrium ensemble and is reported only then.
  std::optional<Estimate> bits_per_pair;
};

struct EquilibriumCell {
  SettingsPair settings;
  double expected_correlation = 0.0;  // -cos(theta_a - theta_b)
  Estimate correlation;
  Estimate marginal_a;
  Estimate marginal_b;
  bool pass = true;
};

struct EquilibriumReport {
  std::vector<EquilibriumCell> cells;
  bool all_pass = true;
  double worst_deviation = 0.0;  // max |observed - expected| over all checks
  SettingsPair worst_settings;
};

/// Mean and maximum of alpha + beta over the uniform settings grid.
struct NonlocalityAverage {
  Estimate mean;
  Estimate max;
  std::array<Angle, 4> max_at;  // theta_a, theta_b, theta_a', theta_b'
};

/// Per-cell degrees of nonlocality over an m^3 settings grid, row-major in
/// (theta_a, theta_b, shifted angle). Cells integrate with derived seeds so
/// their errors are independent.
struct DegreeGrid {
  std::size_t points_per_angle = 0;
  std::vector<Estimate> alpha;
  std::vector<Estimate> beta;
};

/// E[sigma_A sigma_B] under rho. The raw estimate is never clamped; callers
/// that report a correlation may clamp to [-1, 1] for display.
Estimate correlation(const Model& model, const Ensemble& rho,
                     const SettingsPair& settings,
                     const IntegrationBudget& budget = {});

/// P(sigma_wing = +1) under rho.
Estimate marginal(const Model& model, const Ensemble& rho,
                  const SettingsPair& settings, Wing wing,
                  const IntegrationBudget& budget = {});

/// Measures both transition sets at `wing` under a shift at the distant wing,
/// per-lambda (common random numbers), under the given ensemble.
/// Throws UsageError when the shift is at the observed wing.
TransitionReport transition_fractions(const Model& model, const Ensemble& rho,
                                      Wing wing, const SettingsPair& settings,
                                      const Shift& shift,
                                      const IntegrationBudget& budget = {});

/// nu_eq(+,-) - nu_eq(-,+) under the equilibrium ensemble (regardless of any
/// user ensemble). Statistically zero for quantum-reproducing models.
Estimate detailed_balance_residual(const Model& model, Wing wing,
                                   const SettingsPair& settings,
                                   const Shift& shift,
                                   const IntegrationBudget& budget = {});

/// Equilibrium fraction of outcomes at A changed by theta_b -> theta_b_prime:
/// (1/2) integral |sigma_A(tA, tB', l) - sigma_A(tA, tB, l)| dRho_eq.
Estimate degree_alpha(const Model& model, Angle theta_a, Angle theta_b,
                      Angle theta_b_prime, const IntegrationBudget& budget = {});

/// Mirror of degree_alpha: fraction at B changed by theta_a -> theta_a_prime.
Estimate degree_beta(const Model& model, Angle theta_a, Angle theta_b,
                     Angle theta_a_prime, const IntegrationBudget& budget = {});

DegreeGrid degree_grids(const Model& model, std::size_t points_per_angle,
                        const IntegrationBudget& budget = {});

/// Mean of alpha + beta over the uniform product grid on [0, 2pi)^4 with the
/// given points per angle (alpha ignores theta_a', beta ignores theta_b', so
/// the mean reduces to two m^3 sweeps); also reports the maximum encountered.
NonlocalityAverage average_nonlocality(const Model& model,
                                       std::size_t grid_points_per_angle,
                                       const IntegrationBudget& budget = {});

/// |P(sigma_wing = +1 | shifted) - P(sigma_wing = +1 | base)| under rho, from
/// per-lambda differences on one stream; equals |nu(-,+) - nu(+,-)|.
Estimate signal(const Model& model, const Ensemble& rho, Wing wing,
                const SettingsPair& settings, const Shift& shift,
                const IntegrationBudget& budget = {});

/// |S| with S = E(a,b) - E(a,b') + E(a',b) + E(a',b'), all four correlations
/// on one stream.
Estimate chsh(const Model& model, const Ensemble& rho, Angle a, Angle a_prime,
              Angle b, Angle b_prime, const IntegrationBudget& budget = {});

/// Checks E = -cos(theta_a - theta_b) and both marginals = 1/2 on an m x m
/// settings grid under equilibrium. Monte Carlo cells pass within
/// tolerance_sigma * std_error; exact methods within 1e-12. Failures are
/// data, not errors.
EquilibriumReport verify_equilibrium(const Model& model,
                                     std::size_t grid_points_per_angle,
                                     double tolerance_sigma,
                                     const IntegrationBudget& budget = {});

}  // namespace sigloc
