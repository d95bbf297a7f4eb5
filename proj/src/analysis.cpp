#include "sigloc/analysis.hpp"

#include <cmath>
#include <utility>

#include "sigloc/errors.hpp"

namespace sigloc {
namespace {

void require_same_space(const Model& model, const Ensemble& rho) {
  if (!same_space(model.space, rho.space)) {
    throw DomainError("ensemble was built over a different lambda space than the model");
  }
}

// Equilibrium ensembles integrate with no weight callback at all; the two
// paths are numerically identical (scale 1 either way).
const WeightFn& effective_weight(const Ensemble& rho) {
  static const WeightFn none{};
  return rho.is_equilibrium ? none : rho.weight;
}

double plus_indicator(Outcome o) { return o == Outcome::plus ? 1.0 : 0.0; }

std::vector<Angle> uniform_grid(std::size_t points) {
  std::vector<Angle> grid;
  grid.reserve(points);
  for (std::size_t k = 0; k < points; ++k) {
    grid.emplace_back(two_pi * static_cast<double>(k) / static_cast<double>(points));
  }
  return grid;
}

Estimate flip_fraction(const Model& model, Wing wing, const SettingsPair& base,
                       const SettingsPair& shifted, const IntegrationBudget& budget) {
  const OutcomeFn& sigma = outcome_map(model, wing);
  return integrate(
      [&](const LambdaPoint& p) {
        return 0.5 * std::fabs(static_cast<double>(sign_of(sigma(shifted, p)) -
                                                   sign_of(sigma(base, p))));
      },
      model.space, {}, budget);
}

}  // namespace

Estimate correlation(const Model& model, const Ensemble& rho,
                     const SettingsPair& settings, const IntegrationBudget& budget) {
  require_same_space(model, rho);
  return integrate(
      [&](const LambdaPoint& p) {
        return static_cast<double>(sign_of(model.sigma_a(settings, p)) *
                                   sign_of(model.sigma_b(settings, p)));
      },
      model.space, effective_weight(rho), budget);
}

Estimate marginal(const Model& model, const Ensemble& rho,
                  const SettingsPair& settings, Wing wing,
                  const IntegrationBudget& budget) {
  require_same_space(model, rho);
  const OutcomeFn& sigma = outcome_map(model, wing);
  return integrate(
      [&](const LambdaPoint& p) { return plus_indicator(sigma(settings, p)); },
      model.space, effective_weight(rho), budget);
}

TransitionReport transition_fractions(const Model& model, const Ensemble& rho,
                                      Wing wing, const SettingsPair& settings,
                                      const Shift& shift,
                                      const IntegrationBudget& budget) {
  require_same_space(model, rho);
  if (shift.wing == wing) {
    throw UsageError("transition fractions need the shift at the distant wing");
  }
  const SettingsPair shifted = apply_shift(settings, shift);
  const OutcomeFn& sigma = outcome_map(model, wing);

  // Components: T(+,-) and T(-,+) indicators, their sum (degree std error)
  // and their difference (signal std error), all on one stream.
  auto fractions = [&](const LambdaPoint& p, std::span<double> out) {
    const Outcome before = sigma(settings, p);
    const Outcome after = sigma(shifted, p);
    out[0] = before == Outcome::plus && after == Outcome::minus ? 1.0 : 0.0;
    out[1] = before == Outcome::minus && after == Outcome::plus ? 1.0 : 0.0;
    out[2] = out[0] + out[1];
    out[3] = out[1] - out[0];
  };
  auto parts = integrate_vector(fractions, 4, model.space, effective_weight(rho), budget);

  TransitionReport report;
  report.wing = wing;
  report.settings = settings;
  report.shift = shift;
  report.nu_plus_minus = parts[0];
  report.nu_minus_plus = parts[1];
  report.degree = {parts[0].value + parts[1].value, parts[2].std_error,
                   parts[2].method, parts[2].samples};
  report.signal = {std::fabs(parts[1].value - parts[0].value), parts[3].std_error,
                   parts[3].method, parts[3].samples};
  if (rho.is_equilibrium) report.bits_per_pair = report.degree;
  return report;
}

Estimate detailed_balance_residual(const Model& model, Wing wing,
                                   const SettingsPair& settings,
                                   const Shift& shift,
                                   const IntegrationBudget& budget) {
  if (shift.wing == wing) {
    throw UsageError("detailed balance needs the shift at the distant wing");
  }
  const SettingsPair shifted = apply_shift(settings, shift);
  const OutcomeFn& sigma = outcome_map(model, wing);
  return integrate(
      [&](const LambdaPoint& p) {
        const Outcome before = sigma(settings, p);
        const Outcome after = sigma(shifted, p);
        if (before == after) return 0.0;
        return before == Outcome::plus ? 1.0 : -1.0;
      },
      model.space, {}, budget);
}

Estimate degree_alpha(const Model& model, Angle theta_a, Angle theta_b,
                      Angle theta_b_prime, const IntegrationBudget& budget) {
  const SettingsPair base{theta_a, theta_b};
  const SettingsPair shifted{theta_a, theta_b_prime};
  return flip_fraction(model, Wing::a, base, shifted, budget);
}

Estimate degree_beta(const Model& model, Angle theta_a, Angle theta_b,
                     Angle theta_a_prime, const IntegrationBudget& budget) {
  const SettingsPair base{theta_a, theta_b};
  const SettingsPair shifted{theta_a_prime, theta_b};
  return flip_fraction(model, Wing::b, base, shifted, budget);
}

DegreeGrid degree_grids(const Model& model, std::size_t points_per_angle,
                        const IntegrationBudget& budget) {
  if (points_per_angle < 2) {
    throw UsageError("settings grid needs at least 2 points per angle");
  }
  const auto grid = uniform_grid(points_per_angle);
  const std::size_t m = points_per_angle;
  DegreeGrid out;
  out.points_per_angle = m;
  out.alpha.reserve(m * m * m);
  out.beta.reserve(m * m * m);
  std::uint64_t cell = 0;
  for (std::size_t ia = 0; ia < m; ++ia) {
    for (std::size_t ib = 0; ib < m; ++ib) {
      for (std::size_t ip = 0; ip < m; ++ip) {
        IntegrationBudget cell_budget = budget;
        cell_budget.seed = derive_seed(budget.seed, cell++);
        out.alpha.push_back(
            degree_alpha(model, grid[ia], grid[ib], grid[ip], cell_budget));
      }
    }
  }
  for (std::size_t ia = 0; ia < m; ++ia) {
    for (std::size_t ib = 0; ib < m; ++ib) {
      for (std::size_t ip = 0; ip < m; ++ip) {
        IntegrationBudget cell_budget = budget;
        cell_budget.seed = derive_seed(budget.seed, cell++);
        out.beta.push_back(
            degree_beta(model, grid[ia], grid[ib], grid[ip], cell_budget));
      }
    }
  }
  return out;
}

NonlocalityAverage average_nonlocality(const Model& model,
                                       std::size_t grid_points_per_angle,
                                       const IntegrationBudget& budget) {
  const DegreeGrid grids = degree_grids(model, grid_points_per_angle, budget);
  const std::size_t m = grids.points_per_angle;
  const auto angles = uniform_grid(m);
  const auto cells = static_cast<double>(m * m * m);

  double mean = 0.0;
  double mean_var = 0.0;
  std::uint64_t samples = 0;
  Method method = Method::exact_enumeration;
  auto fold = [&](const Estimate& e) {
    mean += e.value / cells;
    mean_var += e.std_error * e.std_error / (cells * cells);
    samples += e.samples;
    if (e.method == Method::monte_carlo) method = Method::monte_carlo;
    else if (e.method == Method::quadrature && method != Method::monte_carlo)
      method = Method::quadrature;
  };
  for (const auto& e : grids.alpha) fold(e);
  for (const auto& e : grids.beta) fold(e);

  NonlocalityAverage out;
  out.mean = {mean, std::sqrt(mean_var), method, samples};

  // max over the full 4d grid decomposes per (theta_a, theta_b) into the best
  // alpha shift plus the best beta shift.
  double best = -1.0;
  for (std::size_t ia = 0; ia < m; ++ia) {
    for (std::size_t ib = 0; ib < m; ++ib) {
      const std::size_t row = (ia * m + ib) * m;
      std::size_t best_bp = 0, best_ap = 0;
      for (std::size_t ip = 1; ip < m; ++ip) {
        if (grids.alpha[row + ip].value > grids.alpha[row + best_bp].value) best_bp = ip;
        if (grids.beta[row + ip].value > grids.beta[row + best_ap].value) best_ap = ip;
      }
      const Estimate& a = grids.alpha[row + best_bp];
      const Estimate& b = grids.beta[row + best_ap];
      const double total = a.value + b.value;
      if (total > best) {
        best = total;
        out.max = {total,
                   std::hypot(a.std_error, b.std_error),
                   method,
                   a.samples + b.samples};
        out.max_at = {angles[ia], angles[ib], angles[best_ap], angles[best_bp]};
      }
    }
  }
  return out;
}

Estimate signal(const Model& model, const Ensemble& rho, Wing wing,
                const SettingsPair& settings, const Shift& shift,
                const IntegrationBudget& budget) {
  require_same_space(model, rho);
  if (shift.wing == wing) {
    throw UsageError("signal needs the shift at the distant wing");
  }
  const SettingsPair shifted = apply_shift(settings, shift);
  const OutcomeFn& sigma = outcome_map(model, wing);
  const Estimate diff = integrate(
      [&](const LambdaPoint& p) {
        return plus_indicator(sigma(shifted, p)) - plus_indicator(sigma(settings, p));
      },
      model.space, effective_weight(rho), budget);
  return {std::fabs(diff.value), diff.std_error, diff.method, diff.samples};
}

Estimate chsh(const Model& model, const Ensemble& rho, Angle a, Angle a_prime,
              Angle b, Angle b_prime, const IntegrationBudget& budget) {
  require_same_space(model, rho);
  const std::array<SettingsPair, 4> configs = {
      SettingsPair{a, b}, SettingsPair{a, b_prime}, SettingsPair{a_prime, b},
      SettingsPair{a_prime, b_prime}};
  const Estimate s = integrate(
      [&](const LambdaPoint& p) {
        double product[4];
        for (std::size_t i = 0; i < 4; ++i) {
          product[i] = static_cast<double>(sign_of(model.sigma_a(configs[i], p)) *
                                           sign_of(model.sigma_b(configs[i], p)));
        }
        return product[0] - product[1] + product[2] + product[3];
      },
      model.space, effective_weight(rho), budget);
  return {std::fabs(s.value), s.std_error, s.method, s.samples};
}

EquilibriumReport verify_equilibrium(const Model& model,
                                     std::size_t grid_points_per_angle,
                                     double tolerance_sigma,
                                     const IntegrationBudget& budget) {
  if (grid_points_per_angle < 2) {
    throw UsageError("settings grid needs at least 2 points per angle");
  }
  const auto grid = uniform_grid(grid_points_per_angle);

  EquilibriumReport report;
  report.cells.reserve(grid.size() * grid.size());
  std::uint64_t cell_index = 0;
  for (const Angle& ta : grid) {
    for (const Angle& tb : grid) {
      const SettingsPair settings{ta, tb};
      IntegrationBudget cell_budget = budget;
      cell_budget.seed = derive_seed(budget.seed, cell_index++);

      auto stats = [&](const LambdaPoint& p, std::span<double> out) {
        const Outcome oa = model.sigma_a(settings, p);
        const Outcome ob = model.sigma_b(settings, p);
        out[0] = static_cast<double>(sign_of(oa) * sign_of(ob));
        out[1] = plus_indicator(oa);
        out[2] = plus_indicator(ob);
      };
      auto estimates = integrate_vector(stats, 3, model.space, {}, cell_budget);

      EquilibriumCell cell;
      cell.settings = settings;
      cell.expected_correlation = -std::cos(ta.radians() - tb.radians());
      cell.correlation = estimates[0];
      cell.marginal_a = estimates[1];
      cell.marginal_b = estimates[2];

      auto check = [&](const Estimate& e, double expected) {
        const double deviation = std::fabs(e.value - expected);
        const double tolerance = e.method == Method::monte_carlo
                                     ? tolerance_sigma * e.std_error
                                     : 1e-12;
        if (deviation > report.worst_deviation) {
          report.worst_deviation = deviation;
          report.worst_settings = settings;
        }
        return deviation <= tolerance;
      };
      cell.pass = check(cell.correlation, cell.expected_correlation);
      cell.pass = check(cell.marginal_a, 0.5) && cell.pass;
      cell.pass = check(cell.marginal_b, 0.5) && cell.pass;
      report.all_pass = report.all_pass && cell.pass;
      report.cells.push_back(std::move(cell));
    }
  }
  return report;
}

}  // namespace sigloc
