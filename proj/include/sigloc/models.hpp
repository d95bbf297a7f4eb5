#pragma once

#include <filesystem>
#include <string_view>
#include <vector>

#include "sigloc/model.hpp"

namespace sigloc {

/// Local control model: lambda is an angle phi uniform on the circle
/// (encoded as d = 1), each wing takes the sign of cos(phi - theta) at its
/// own setting, and B negates. Perfectly anticorrelated at equal settings but
/// E(delta) is the sawtooth -1 + 2|delta|/pi, not -cos(delta), so it fails
/// quantum reproduction and respects the Bell bound.
Model local_hemisphere();

/// Singlet-reproducing model that is nonlocal in one direction only.
/// lambda = (s, u) with s = +-1 on two equally weighted branches and u
/// uniform on [0,1). sigma_A = s; sigma_B = -s when u < cos^2((tA - tB)/2),
/// else +s. sigma_A never reads theta_B: all transition sets at A are empty.
Model one_way_singlet();

/// Singlet-reproducing model with nonzero transition sets in both directions:
/// an equal mixture of the one-way construction and its mirror image.
/// lambda = (dir, s, u), four branches of weight 1/4. At tA = tB = 0 and a
/// distant shift to pi/2 the equilibrium transition fractions at the quiet
/// wing are exactly 1/8 + 1/8 = 1/4.
Model two_way_singlet();

/// Finite lookup-table model over a settings grid: d = 0, one branch per
/// lambda value. Enables exact enumeration oracles.
struct FiniteTable {
  std::vector<Angle> grid_a;
  std::vector<Angle> grid_b;
  std::vector<double> weights;     // one per lambda value, sums to 1
  std::vector<Outcome> table_a;    // flattened [ia][ib][k]
  std::vector<Outcome> table_b;

  std::size_t lambda_count() const { return weights.size(); }

  std::size_t flat_index(std::size_t ia, std::size_t ib, std::size_t k) const {
    return (ia * grid_b.size() + ib) * weights.size() + k;
  }
};

/// Throws DomainError when the table shape or weights are inconsistent.
void validate_finite_table(const FiniteTable& table);

/// Nearest grid angle by circular distance; exact ties break toward the
/// smaller canonical angle.
std::size_t snap_to_grid(const std::vector<Angle>& grid, Angle angle);

/// Wraps a validated table as a Model. Settings are snapped to the grid
/// before lookup, so the model is total over continuous settings.
Model finite_table_model(FiniteTable table);

/// Parses a finite-table JSON document:
///   {"grid_a": [radians...], "grid_b": [radians...], "weights": [...],
///    "table_a": [[[+1|-1,...],...],...], "table_b": ...}
/// with table_x indexed [grid_a index][grid_b index][lambda index].
/// Strict: unknown keys, wrong shapes, non +-1 entries and weight sums off by
/// more than 1e-12 are SchemaErrors carrying the JSON path.
FiniteTable parse_finite_table(std::string_view json_text);

/// Reads and parses a finite-table JSON file. IoError if unreadable.
FiniteTable load_finite_table(const std::filesystem::path& path);

}  // namespace sigloc
