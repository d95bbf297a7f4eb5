#pragma once

// Independent reference implementations used as test oracles. Everything here
// is computed without going through sigloc's integrate/analysis paths:
// closed-form expressions, direct Monte Carlo with the standard library
// generator, and exhaustive sums over finite tables.

#include <cstdint>
#include <random>
#include <vector>

#include "sigloc/models.hpp"
#include "sigloc/types.hpp"

namespace oracles {

// Local hemisphere model: E(delta) is the sawtooth -1 + 2|delta|/pi on
// [-pi, pi], extended periodically.
double sawtooth_correlation(double delta);

inline double singlet_correlation(double delta) { return -std::cos(delta); }

// cos^2((a - b)/2), written differently from the library's (1 + cos)/2 form.
double anti_align_prob(double theta_a, double theta_b);

// Closed-form degrees of nonlocality for the builtin models.
double two_way_alpha(double theta_a, double theta_b, double theta_b_prime);
double two_way_beta(double theta_a, double theta_b, double theta_a_prime);
double one_way_beta(double theta_a, double theta_b, double theta_a_prime);

// S built from a correlation function E(a, b).
template <typename Correlation>
double chsh_value(Correlation&& corr, double a, double a_prime, double b,
                  double b_prime) {
  return corr(a, b) - corr(a, b_prime) + corr(a_prime, b) + corr(a_prime, b_prime);
}

// Direct Monte Carlo of the local hemisphere model (std::mt19937_64).
double mc_local_correlation(double theta_a, double theta_b, std::size_t n,
                            std::uint64_t seed);

// Mean of alpha + beta for the two-way model over the uniform m^4 settings
// grid, from the closed forms.
double two_way_grid_mean(std::size_t m);

// The 8-lambda finite table reproducing singlet statistics exactly on the
// grid {0, pi/2, pi, 3pi/2}: lambda = (direction, spin, u-cell).
sigloc::FiniteTable make_singlet_table();

// Random table: outcomes are +-1 coin flips, weights random and normalised.
sigloc::FiniteTable make_random_table(std::size_t na, std::size_t nb,
                                      std::size_t n_lambda, std::uint64_t seed);

// Exhaustive-enumeration oracle over a finite table. `rho` holds one relative
// weight per lambda (1.0 everywhere = equilibrium); snapping is reimplemented
// here independently of the library.
class TableOracle {
 public:
  explicit TableOracle(const sigloc::FiniteTable& table) : table_(table) {}

  std::size_t snap_a(double theta) const { return snap(table_.grid_a, theta); }
  std::size_t snap_b(double theta) const { return snap(table_.grid_b, theta); }

  double correlation(double ta, double tb, const std::vector<double>& rho) const;
  double marginal(sigloc::Wing wing, double ta, double tb,
                  const std::vector<double>& rho) const;
  // nu(+,-) and nu(-,+) at `wing` when the distant setting moves to prime.
  std::pair<double, double> transition_nu(sigloc::Wing wing, double ta, double tb,
                                          double prime,
                                          const std::vector<double>& rho) const;
  double alpha(double ta, double tb, double tbp) const;
  double beta(double ta, double tb, double tap) const;
  double chsh(double a, double ap, double b, double bp,
              const std::vector<double>& rho) const;

  std::vector<double> equilibrium_weights() const {
    return std::vector<double>(table_.lambda_count(), 1.0);
  }

 private:
  static std::size_t snap(const std::vector<sigloc::Angle>& grid, double theta);
  int outcome(const std::vector<sigloc::Outcome>& t, std::size_t ia,
              std::size_t ib, std::size_t k) const;

  const sigloc::FiniteTable& table_;
};

// Random (settings, shift, wing) draws for the statistical suites.
struct ExperimentDraw {
  sigloc::Wing wing;
  sigloc::SettingsPair settings;
  sigloc::Shift shift;
};

std::vector<ExperimentDraw> random_experiments(std::size_t count, std::uint64_t seed);

}  // namespace oracles
