#pragma once

#include <cstdint>

namespace sigloc {

/// How integrate() spends its effort. `automatic` resolves to exact
/// enumeration on finite spaces (d = 0) and Monte Carlo otherwise.
enum class MethodChoice : std::uint8_t {
  automatic,
  exact_enumeration,
  quadrature,
  monte_carlo,
};

struct IntegrationBudget {
  MethodChoice method = MethodChoice::automatic;
  std::uint64_t samples = 1'000'000;       // Monte Carlo draws
  std::uint32_t quadrature_points = 4096;  // midpoint points per dimension
  std::uint64_t seed = 0;
};

/// Decorrelated child seed for grid sweeps: each cell integrates with its own
/// stream so that cell estimates are independent and error bars combine.
/// splitmix64 of (seed, index).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace sigloc
