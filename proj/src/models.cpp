#include "sigloc/models.hpp"

#include <cmath>
#include <memory>
#include <utility>

namespace sigloc {
namespace {

// Probability that the wings anti-align: cos^2((theta_a - theta_b)/2),
// computed as (1 + cos(delta))/2. fabs keeps the expression exactly even in
// delta, so mirror-symmetric settings give bit-identical breakpoints.
double anti_align_prob(const SettingsPair& s) {
  const double delta = std::fabs(s.theta_a.radians() - s.theta_b.radians());
  return 0.5 * (1.0 + std::cos(delta));
}

Outcome sign_outcome(bool plus) {
  return plus ? Outcome::plus : Outcome::minus;
}

// one_way branches: 0 <-> s = +1, 1 <-> s = -1.
Outcome one_way_spin(std::uint32_t branch) {
  return branch == 0 ? Outcome::plus : Outcome::minus;
}

// two_way branches: (dir, s) pairs laid out as 2*dir + (s == +1 ? 0 : 1).
Outcome two_way_spin(std::uint32_t branch) {
  return (branch & 1u) == 0 ? Outcome::plus : Outcome::minus;
}

bool two_way_mirrored(std::uint32_t branch) { return branch >= 2; }

}  // namespace

Model local_hemisphere() {
  Model m;
  m.space = LambdaSpace({1.0}, 1);
  m.name = "local";
  m.sigma_a = [](const SettingsPair& s, const LambdaPoint& p) {
    const double phi = two_pi * p.coords[0];
    return sign_outcome(std::cos(phi - s.theta_a.radians()) >= 0.0);
  };
  m.sigma_b = [](const SettingsPair& s, const LambdaPoint& p) {
    const double phi = two_pi * p.coords[0];
    return sign_outcome(!(std::cos(phi - s.theta_b.radians()) >= 0.0));
  };
  return m;
}

Model one_way_singlet() {
  Model m;
  m.space = LambdaSpace({0.5, 0.5}, 1);
  m.name = "one-way";
  m.sigma_a = [](const SettingsPair&, const LambdaPoint& p) {
    return one_way_spin(p.branch);
  };
  m.sigma_b = [](const SettingsPair& s, const LambdaPoint& p) {
    const Outcome spin = one_way_spin(p.branch);
    return p.coords[0] < anti_align_prob(s) ? flipped(spin) : spin;
  };
  return m;
}

Model two_way_singlet() {
  Model m;
  m.space = LambdaSpace({0.25, 0.25, 0.25, 0.25}, 1);
  m.name = "two-way";
  m.sigma_a = [](const SettingsPair& s, const LambdaPoint& p) {
    const Outcome spin = two_way_spin(p.branch);
    if (!two_way_mirrored(p.branch)) return spin;
    return p.coords[0] < anti_align_prob(s) ? flipped(spin) : spin;
  };
  m.sigma_b = [](const SettingsPair& s, const LambdaPoint& p) {
    const Outcome spin = two_way_spin(p.branch);
    if (two_way_mirrored(p.branch)) return spin;
    return p.coords[0] < anti_align_prob(s) ? flipped(spin) : spin;
  };
  return m;
}

void validate_finite_table(const FiniteTable& table) {
  if (table.grid_a.empty() || table.grid_b.empty()) {
    throw DomainError("finite table needs non-empty settings grids");
  }
  if (table.weights.empty()) {
    throw DomainError("finite table needs at least one lambda value");
  }
  double sum = 0.0;
  for (double w : table.weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw DomainError("finite table weights must be finite and non-negative");
    }
    sum += w;
  }
  if (std::fabs(sum - 1.0) > 1e-12) {
    throw DomainError("finite table weights must sum to 1 within 1e-12");
  }
  const std::size_t expected =
      table.grid_a.size() * table.grid_b.size() * table.weights.size();
  if (table.table_a.size() != expected || table.table_b.size() != expected) {
    throw DomainError("finite table outcome arrays must cover every (setting, lambda) index");
  }
}

std::size_t snap_to_grid(const std::vector<Angle>& grid, Angle angle) {
  std::size_t best = 0;
  double best_dist = circular_distance(grid[0], angle);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double dist = circular_distance(grid[i], angle);
    if (dist < best_dist ||
        (dist == best_dist && grid[i].radians() < grid[best].radians())) {
      best = i;
      best_dist = dist;
    }
  }
  return best;
}

Model finite_table_model(FiniteTable table) {
  validate_finite_table(table);
  auto shared = std::make_shared<const FiniteTable>(std::move(table));
  Model m;
  m.space = LambdaSpace(shared->weights, 0);
  m.name = "table";
  m.sigma_a = [shared](const SettingsPair& s, const LambdaPoint& p) {
    const std::size_t ia = snap_to_grid(shared->grid_a, s.theta_a);
    const std::size_t ib = snap_to_grid(shared->grid_b, s.theta_b);
    return shared->table_a[shared->flat_index(ia, ib, p.branch)];
  };
  m.sigma_b = [shared](const SettingsPair& s, const LambdaPoint& p) {
    const std::size_t ia = snap_to_grid(shared->grid_a, s.theta_a);
    const std::size_t ib = snap_to_grid(shared->grid_b, s.theta_b);
    return shared->table_b[shared->flat_index(ia, ib, p.branch)];
  };
  return m;
}

}  // namespace sigloc
