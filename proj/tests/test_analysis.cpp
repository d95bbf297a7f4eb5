#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "sigloc/analysis.hpp"
#include "sigloc/models.hpp"

using namespace sigloc;
namespace {
constexpr double pi = std::numbers::pi;

IntegrationBudget mc_budget(std::uint64_t samples, std::uint64_t seed) {
  IntegrationBudget b;
  b.samples = samples;
  b.seed = seed;
  return b;
}

IntegrationBudget quad_budget() {
  IntegrationBudget b;
  b.method = MethodChoice::quadrature;
  return b;
}

}  // namespace

TEST_SUITE_BEGIN("analysis");

TEST_CASE("transition fractions at the headline settings") {
  const Model model = two_way_singlet();
  const Ensemble eq = equilibrium(model.space);
  const SettingsPair settings{Angle(0.0), Angle(0.0)};
  const Shift shift{Wing::b, Angle(pi / 2)};

  const TransitionReport mc = transition_fractions(model, eq, Wing::a, settings,
                                                   shift, mc_budget(400'000, 3));
  CHECK(std::fabs(mc.nu_plus_minus.value - 0.125) < 3.0 * mc.nu_plus_minus.std_error);
  CHECK(std::fabs(mc.nu_minus_plus.value - 0.125) < 3.0 * mc.nu_minus_plus.std_error);
  CHECK(std::fabs(mc.degree.value - 0.25) < 3.0 * mc.degree.std_error);
  REQUIRE(mc.bits_per_pair.has_value());
  CHECK(mc.bits_per_pair->value == mc.degree.value);

  // breakpoints 1/2 and 1 align with the quadrature grid: exact values
  const TransitionReport exact = transition_fractions(model, eq, Wing::a, settings,
                                                      shift, quad_budget());
  CHECK(std::fabs(exact.nu_plus_minus.value - 0.125) < 1e-12);
  CHECK(std::fabs(exact.nu_minus_plus.value - 0.125) < 1e-12);
  CHECK(std::fabs(exact.degree.value - 0.25) < 1e-12);
  CHECK(exact.signal.value < 1e-12);
  CHECK(exact.nu_plus_minus.std_error == 0.0);
}

TEST_CASE("one-way model: all-zero report at A, full flip at B") {
  const Model model = one_way_singlet();
  const Ensemble eq = equilibrium(model.space);

  const TransitionReport at_a =
      transition_fractions(model, eq, Wing::a, {Angle(0.4), Angle(2.2)},
                           Shift{Wing::b, Angle(1.0)}, mc_budget(100'000, 5));
  CHECK(at_a.nu_plus_minus.value == 0.0);
  CHECK(at_a.nu_minus_plus.value == 0.0);
  CHECK(at_a.degree.value == 0.0);
  CHECK(at_a.signal.value == 0.0);

  // theta_a: 0 -> pi with theta_b = 0 flips every outcome at B, split by spin
  const TransitionReport at_b =
      transition_fractions(model, eq, Wing::b, {Angle(0.0), Angle(0.0)},
                           Shift{Wing::a, Angle(pi)}, quad_budget());
  CHECK(std::fabs(at_b.nu_plus_minus.value - 0.5) < 1e-12);
  CHECK(std::fabs(at_b.nu_minus_plus.value - 0.5) < 1e-12);
  CHECK(std::fabs(at_b.degree.value - 1.0) < 1e-12);
}

TEST_CASE("transition fractions reject a same-wing shift") {
  const Model model = two_way_singlet();
  const Ensemble eq = equilibrium(model.space);
  CHECK_THROWS_AS(transition_fractions(model, eq, Wing::b, {Angle(0), Angle(0)},
                                       Shift{Wing::b, Angle(1)}, {}),
                  UsageError);
  CHECK_THROWS_AS(signal(model, eq, Wing::a, {Angle(0), Angle(0)},
                         Shift{Wing::a, Angle(1)}, {}),
                  UsageError);
}

TEST_CASE("bits-per-pair is only reported in equilibrium") {
  const Model model = two_way_singlet();
  const Ensemble focused = concentrate_on_transitions(
      model, Wing::a, {Angle(0.0), Angle(0.0)}, Shift{Wing::b, Angle(pi / 2)},
      TransitionDirection::plus_to_minus, quad_budget());
  const TransitionReport report =
      transition_fractions(model, focused, Wing::a, {Angle(0.0), Angle(0.0)},
                           Shift{Wing::b, Angle(pi / 2)}, mc_budget(50'000, 1));
  CHECK(!report.bits_per_pair.has_value());
}

TEST_CASE("same-stream identities hold to machine precision") {
  const Model model = two_way_singlet();
  const SettingsPair settings{Angle(1.1), Angle(0.3)};
  const Shift shift{Wing::b, Angle(2.9)};
  const auto budget = mc_budget(200'000, 11);

  const Ensemble eq = equilibrium(model.space);
  const Ensemble focused = concentrate_on_transitions(
      model, Wing::a, settings, shift, TransitionDirection::minus_to_plus,
      quad_budget());
  const Ensemble blend = mixture(eq, focused, 0.35);

  for (const Ensemble* rho : {&eq, &blend}) {
    const TransitionReport report =
        transition_fractions(model, *rho, Wing::a, settings, shift, budget);
    // degree = nu+ + nu- and signal = |nu- - nu+| by construction
    CHECK(report.degree.value ==
          report.nu_plus_minus.value + report.nu_minus_plus.value);
    CHECK(report.signal.value ==
          std::fabs(report.nu_minus_plus.value - report.nu_plus_minus.value));
    // the signal operation on the same stream gives the same number
    const Estimate direct = signal(model, *rho, Wing::a, settings, shift, budget);
    CHECK(std::fabs(direct.value - report.signal.value) < 1e-12);
    // alpha equals the equilibrium degree on the same stream
    if (rho == &eq) {
      const Estimate alpha = degree_alpha(model, settings.theta_a,
                                          settings.theta_b, shift.new_angle, budget);
      CHECK(std::fabs(alpha.value - report.degree.value) < 1e-12);
    }
    // ranges
    CHECK(report.nu_plus_minus.value >= 0.0);
    CHECK(report.nu_minus_plus.value >= 0.0);
    CHECK(report.degree.value <= 1.0 + 1e-12);
    CHECK(report.signal.value <= report.degree.value + 1e-15);
  }
}

TEST_CASE("detailed balance at equilibrium") {
  const auto draws = oracles::random_experiments(50, 2026);
  for (const Model& model : {one_way_singlet(), two_way_singlet()}) {
    CAPTURE(model.name);
    std::uint64_t seed = 100;
    for (const auto& d : draws) {
      const Estimate residual = detailed_balance_residual(
          model, d.wing, d.settings, d.shift, mc_budget(50'000, seed++));
      CHECK(std::fabs(residual.value) <= 3.0 * residual.std_error + 1e-12);
    }
  }

  // local model: both transition sets are empty, residual is exactly zero
  const Estimate local = detailed_balance_residual(
      local_hemisphere(), Wing::a, {Angle(0.3), Angle(1.0)},
      Shift{Wing::b, Angle(2.0)}, mc_budget(50'000, 9));
  CHECK(local.value == 0.0);
  CHECK(local.std_error == 0.0);

  // finite-table singlet model: exactly zero by enumeration
  const Model table_model = finite_table_model(oracles::make_singlet_table());
  for (int ia = 0; ia < 4; ++ia) {
    for (int ip = 0; ip < 4; ++ip) {
      const SettingsPair settings{Angle(two_pi * ia / 4.0), Angle(0.0)};
      const Estimate residual = detailed_balance_residual(
          table_model, Wing::a, settings, Shift{Wing::b, Angle(two_pi * ip / 4.0)}, {});
      CHECK(residual.method == Method::exact_enumeration);
      CHECK(residual.value == 0.0);
    }
  }
}

TEST_CASE("signals: zero in equilibrium, epsilon under mixtures, one when concentrated") {
  const Model model = two_way_singlet();
  const SettingsPair settings{Angle(0.0), Angle(0.0)};
  const Shift shift{Wing::b, Angle(pi / 2)};
  const Ensemble eq = equilibrium(model.space);

  const Estimate quiet = signal(model, eq, Wing::a, settings, shift,
                                mc_budget(200'000, 31));
  CHECK(quiet.value <= 3.0 * quiet.std_error);

  const Ensemble focused = concentrate_on_transitions(
      model, Wing::a, settings, shift, TransitionDirection::plus_to_minus,
      quad_budget());
  const Estimate loud = signal(model, focused, Wing::a, settings, shift, quad_budget());
  CHECK(std::fabs(loud.value - 1.0) < 1e-12);

  for (double eps : {0.1, 0.25, 0.5}) {
    const Ensemble blend = mixture(eq, focused, eps);
    const Estimate mixed = signal(model, blend, Wing::a, settings, shift, quad_budget());
    CHECK(std::fabs(mixed.value - eps) < 1e-12);
    const Estimate mixed_mc =
        signal(model, blend, Wing::a, settings, shift, mc_budget(200'000, 37));
    CHECK(std::fabs(mixed_mc.value - eps) < 3.0 * mixed_mc.std_error);
  }
}

TEST_CASE("chsh witness") {
  const Model model = two_way_singlet();
  const Ensemble eq = equilibrium(model.space);

  // closed form: plugging E = -cos into S at the standard settings gives 2*sqrt(2)
  const double s_closed = oracles::chsh_value(
      [](double x, double y) { return oracles::singlet_correlation(x - y); }, 0.0,
      pi / 2, pi / 4, 3 * pi / 4);
  CHECK(std::fabs(std::fabs(s_closed) - 2.0 * std::sqrt(2.0)) < 1e-12);

  const Estimate est = chsh(model, eq, Angle(0.0), Angle(pi / 2), Angle(pi / 4),
                            Angle(3 * pi / 4), mc_budget(400'000, 12));
  CHECK(std::fabs(est.value - 2.0 * std::sqrt(2.0)) < 3.0 * est.std_error);

  // degenerate settings: every sample contributes exactly -2
  const Estimate degenerate = chsh(model, eq, Angle(0.7), Angle(0.7), Angle(0.7),
                                   Angle(0.7), mc_budget(10'000, 1));
  CHECK(degenerate.value == 2.0);
  CHECK(degenerate.std_error == 0.0);
}

TEST_CASE("verify_equilibrium") {
  IntegrationBudget budget = mc_budget(100'000, 8);
  for (const Model& model : {one_way_singlet(), two_way_singlet()}) {
    CAPTURE(model.name);
    const EquilibriumReport report = verify_equilibrium(model, 8, 3.0, budget);
    CHECK(report.cells.size() == 64);
    CHECK(report.all_pass);
  }

  const EquilibriumReport local = verify_equilibrium(local_hemisphere(), 8, 3.0, budget);
  CHECK(!local.all_pass);
  CHECK(local.worst_deviation >= 0.2);
  CHECK(local.worst_deviation <= 0.22);

  CHECK_THROWS_AS(verify_equilibrium(one_way_singlet(), 1, 3.0, budget), UsageError);
}

TEST_CASE("average nonlocality") {
  // local model: exactly zero, mean and max alike
  const NonlocalityAverage local =
      average_nonlocality(local_hemisphere(), 4, mc_budget(5'000, 2));
  CHECK(local.mean.value == 0.0);
  CHECK(local.mean.std_error == 0.0);
  CHECK(local.max.value == 0.0);

  // two-way model against the closed-form grid mean; m = 4 gives exactly 3/8
  CHECK(oracles::two_way_grid_mean(4) == doctest::Approx(0.375).epsilon(1e-12));
  const NonlocalityAverage avg =
      average_nonlocality(two_way_singlet(), 4, mc_budget(20'000, 6));
  CHECK(std::fabs(avg.mean.value - 0.375) < 4.0 * avg.mean.std_error);
  CHECK(avg.mean.value > 5.0 * avg.mean.std_error);
  // the maximum is alpha = beta = 1/2 at delta 0 -> pi on both wings; the
  // flip indicator is constant per branch there, so the estimate is exact
  CHECK(std::fabs(avg.max.value - 1.0) <= 4.0 * avg.max.std_error + 1e-12);
}

TEST_CASE("every quantity matches exhaustive enumeration on finite tables") {
  for (std::uint64_t seed : {1001ull, 2002ull}) {
    const FiniteTable table = oracles::make_random_table(4, 3, 50, seed);
    const Model model = finite_table_model(table);
    const oracles::TableOracle oracle(table);
    const Ensemble eq = equilibrium(model.space);
    const auto rho_eq = oracle.equilibrium_weights();

    const double ta = 1.7, tb = 0.2, prime = 4.0;
    CHECK(std::fabs(correlation(model, eq, {Angle(ta), Angle(tb)}, {}).value -
                    oracle.correlation(ta, tb, rho_eq)) < 1e-12);
    CHECK(std::fabs(marginal(model, eq, {Angle(ta), Angle(tb)}, Wing::a, {}).value -
                    oracle.marginal(Wing::a, ta, tb, rho_eq)) < 1e-12);

    const auto [pm, mp] = oracle.transition_nu(Wing::a, ta, tb, prime, rho_eq);
    const TransitionReport report = transition_fractions(
        model, eq, Wing::a, {Angle(ta), Angle(tb)}, Shift{Wing::b, Angle(prime)}, {});
    CHECK(report.nu_plus_minus.method == Method::exact_enumeration);
    CHECK(std::fabs(report.nu_plus_minus.value - pm) < 1e-12);
    CHECK(std::fabs(report.nu_minus_plus.value - mp) < 1e-12);
    CHECK(std::fabs(degree_alpha(model, Angle(ta), Angle(tb), Angle(prime), {}).value -
                    oracle.alpha(ta, tb, prime)) < 1e-12);
    CHECK(std::fabs(degree_beta(model, Angle(ta), Angle(tb), Angle(prime), {}).value -
                    oracle.beta(ta, tb, prime)) < 1e-12);
    CHECK(std::fabs(chsh(model, eq, Angle(0.1), Angle(1.2), Angle(2.3), Angle(3.4), {}).value -
                    std::fabs(oracle.chsh(0.1, 1.2, 2.3, 3.4, rho_eq))) < 1e-12);
    CHECK(std::fabs(signal(model, eq, Wing::a, {Angle(ta), Angle(tb)},
                           Shift{Wing::b, Angle(prime)}, {})
                        .value -
                    std::fabs(mp - pm)) < 1e-12);
    CHECK(std::fabs(detailed_balance_residual(model, Wing::a, {Angle(ta), Angle(tb)},
                                              Shift{Wing::b, Angle(prime)}, {})
                        .value -
                    (pm - mp)) < 1e-12);
  }
}

TEST_CASE("analysis rejects ensembles over a different space") {
  const Model model = two_way_singlet();
  const Ensemble wrong = equilibrium(one_way_singlet().space);
  CHECK_THROWS_AS(correlation(model, wrong, {Angle(0), Angle(0)}, {}), DomainError);
}

TEST_SUITE_END();
