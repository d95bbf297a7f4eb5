#include "sigloc/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sigloc/analysis.hpp"
#include "sigloc/ensemble.hpp"
#include "sigloc/integrate.hpp"
#include "sigloc/models.hpp"
#include "sigloc/run_record.hpp"
#include "sigloc/version.hpp"

namespace sigloc::cli {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

Model make_model(const std::string& spec) {
  if (spec == "local") return local_hemisphere();
  if (spec == "one-way") return one_way_singlet();
  if (spec == "two-way") return two_way_singlet();
  if (spec.rfind("table:", 0) == 0) {
    return finite_table_model(load_finite_table(spec.substr(6)));
  }
  throw UsageError("unknown model '" + spec +
                   "' (expected local, one-way, two-way or table:<path.json>)");
}

struct BudgetOptions {
  std::uint64_t seed = 0;
  std::uint64_t samples = 1'000'000;
  std::string method = "auto";
  std::uint32_t quad_points = 4096;
  unsigned workers = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--seed", seed, "random stream seed");
    cmd->add_option("--samples", samples,
                    "Monte Carlo draws (sweep/average default to 20000 per cell)")
        ->capture_default_str();
    cmd->add_option("--method", method, "auto, mc, quadrature or enum")
        ->capture_default_str();
    cmd->add_option("--quad-points", quad_points, "quadrature points per dimension")
        ->capture_default_str();
    cmd->add_option("--workers", workers,
                    "worker threads (0 = hardware default; never affects results)");
  }

  IntegrationBudget budget() const {
    IntegrationBudget b;
    b.method = method_choice_from_string(method);
    b.samples = samples;
    b.quadrature_points = quad_points;
    b.seed = seed;
    return b;
  }
};

struct EnsembleContext {
  const Model& model;
  SettingsPair settings;
  std::optional<Wing> wing;
  std::optional<Shift> shift;
  IntegrationBudget budget;  // used for normalisation integrals
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return parts;
}

Shift require_shift(const EnsembleContext& ctx, const std::string& why) {
  if (!ctx.shift) {
    throw UsageError(why + " needs a --shift-a or --shift-b flag for the transition set");
  }
  return *ctx.shift;
}

Ensemble concentrated_from_spec(const std::vector<std::string>& parts,
                                std::size_t wing_idx,
                                const EnsembleContext& ctx) {
  Wing wing = wing_idx < parts.size() && !parts[wing_idx].empty()
                  ? wing_from_string(parts[wing_idx])
                  : (ctx.wing ? *ctx.wing
                              : throw UsageError("ensemble spec needs a wing "
                                                 "(give --wing or concentrate:<wing>:...)"));
  TransitionDirection direction =
      wing_idx + 1 < parts.size() && !parts[wing_idx + 1].empty()
          ? direction_from_string(parts[wing_idx + 1])
          : TransitionDirection::plus_to_minus;
  const Shift shift = require_shift(ctx, "concentrated ensemble");
  IntegrationBudget construction = ctx.budget;
  construction.seed = derive_seed(ctx.budget.seed, 0xE15Eull);
  return concentrate_on_transitions(ctx.model, wing, ctx.settings, shift,
                                    direction, construction);
}

Ensemble ensemble_from_json_spec(const nlohmann::json& doc, const EnsembleContext& ctx) {
  if (!doc.is_object() || !doc.contains("family") || !doc["family"].is_string()) {
    throw UsageError("ensemble JSON spec needs a string 'family' key");
  }
  const std::string family = doc["family"].get<std::string>();
  IntegrationBudget construction = ctx.budget;
  construction.seed = derive_seed(ctx.budget.seed, 0xE15Eull);
  const Ensemble eq = equilibrium(ctx.model.space);

  if (family == "branch") {
    if (!doc.contains("branches") || !doc["branches"].is_array() || doc["branches"].empty()) {
      throw UsageError("branch ensemble spec needs a non-empty 'branches' array");
    }
    std::vector<std::uint32_t> branches;
    for (const auto& b : doc["branches"]) {
      if (!b.is_number_integer()) {
        throw UsageError("branch ensemble spec: branch indices must be integers");
      }
      const auto idx = b.get<std::int64_t>();
      if (idx < 0 || static_cast<std::size_t>(idx) >= ctx.model.space.branch_count()) {
        throw UsageError("branch index out of range in ensemble spec");
      }
      branches.push_back(static_cast<std::uint32_t>(idx));
    }
    auto g = [branches](const LambdaPoint& p) {
      return std::find(branches.begin(), branches.end(), p.branch) != branches.end()
                 ? 1.0
                 : 0.0;
    };
    return tilt(eq, g, 1.0, construction);
  }
  if (family == "coord_power") {
    if ((doc.contains("dim") && !doc["dim"].is_number_integer()) ||
        (doc.contains("exponent") && !doc["exponent"].is_number_integer())) {
      throw UsageError("coord_power ensemble spec: 'dim' and 'exponent' must be integers");
    }
    const auto dim = doc.value("dim", std::int64_t{0});
    const auto exponent = doc.value("exponent", std::int64_t{1});
    if (dim < 0 || static_cast<std::size_t>(dim) >= ctx.model.space.dim()) {
      throw UsageError("coord_power ensemble spec: 'dim' out of range");
    }
    if (exponent < 0) throw UsageError("coord_power ensemble spec: 'exponent' must be >= 0");
    auto g = [dim, exponent](const LambdaPoint& p) {
      return std::pow(p.coords[static_cast<std::size_t>(dim)],
                      static_cast<double>(exponent));
    };
    return tilt(eq, g, 1.0, construction);
  }
  throw UsageError("unknown ensemble family '" + family +
                   "' (expected branch or coord_power)");
}

Ensemble make_ensemble(const std::string& spec, const EnsembleContext& ctx) {
  if (spec.empty() || spec == "equilibrium") return equilibrium(ctx.model.space);

  if (spec.front() == '{' || spec.front() == '@') {
    std::string text = spec;
    if (spec.front() == '@') {
      std::ifstream in(spec.substr(1), std::ios::binary);
      if (!in) throw IoError("cannot open ensemble spec file: " + spec.substr(1));
      std::ostringstream buffer;
      buffer << in.rdbuf();
      text = buffer.str();
    }
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw UsageError(std::string("invalid ensemble JSON spec: ") + e.what());
    }
    return ensemble_from_json_spec(doc, ctx);
  }

  const auto parts = split(spec, ':');
  if (parts[0] == "concentrate") {
    return concentrated_from_spec(parts, 1, ctx);
  }
  if (parts[0] == "mixture") {
    if (parts.size() < 2) throw UsageError("mixture ensemble spec: mixture:<epsilon>");
    double epsilon = 0.0;
    try {
      epsilon = std::stod(parts[1]);
    } catch (const std::exception&) {
      throw UsageError("mixture ensemble spec: bad epsilon '" + parts[1] + "'");
    }
    const Ensemble concentrated = concentrated_from_spec(parts, 2, ctx);
    return mixture(equilibrium(ctx.model.space), concentrated, epsilon);
  }
  throw UsageError("unknown ensemble spec '" + spec +
                   "' (expected equilibrium, concentrate:<wing>:<direction>, "
                   "mixture:<epsilon>, a JSON object or @file.json)");
}

RunRecord base_record(const std::string& command, const std::string& model,
                      const std::string& ensemble, const IntegrationBudget& budget) {
  RunRecord record;
  record.command = command;
  record.model = model;
  record.ensemble = ensemble;
  record.budget = budget;
  record.tool_version = std::string(kToolVersion);
  record.timestamp = utc_timestamp();
  return record;
}

void emit(std::ostream& out, const RunRecord& record) {
  out << to_json(record).dump() << "\n";
}

// ---------------------------------------------------------------------------
// sweep helpers

struct SweepRow {
  std::vector<double> angles;
  Estimate est;
};

void write_sweep_csv(std::ostream& os, const std::vector<std::string>& angle_columns,
                     const std::vector<SweepRow>& rows) {
  os << "kind";
  for (const auto& c : angle_columns) os << "," << c;
  os << ",value,std_error\n";
  for (const auto& row : rows) {
    os << "cell";
    for (double a : row.angles) os << "," << format_double(a);
    os << "," << format_double(row.est.value) << ","
       << format_double(row.est.std_error) << "\n";
  }
  double mean = 0.0, var = 0.0;
  std::size_t best = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    mean += rows[i].est.value;
    var += rows[i].est.std_error * rows[i].est.std_error;
    if (rows[i].est.value > rows[best].est.value) best = i;
  }
  const auto n = static_cast<double>(rows.size());
  mean /= n;
  const double mean_se = std::sqrt(var) / n;
  os << "mean";
  for (std::size_t c = 0; c < angle_columns.size(); ++c) os << ",";
  os << "," << format_double(mean) << "," << format_double(mean_se) << "\n";
  os << "max";
  for (double a : rows[best].angles) os << "," << format_double(a);
  os << "," << format_double(rows[best].est.value) << ","
     << format_double(rows[best].est.std_error) << "\n";
}

std::vector<Angle> uniform_angles(std::size_t m) {
  std::vector<Angle> grid;
  grid.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    grid.emplace_back(two_pi * static_cast<double>(k) / static_cast<double>(m));
  }
  return grid;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"deterministic hidden-variables models of the two-wing singlet "
               "experiment: equilibrium verification, transition sets, "
               "nonequilibrium signals"};
  app.require_subcommand(1);

  std::string model_spec;
  std::string ensemble_spec = "equilibrium";
  std::string format = "json";
  double theta_a = 0.0, theta_b = 0.0;
  std::optional<double> shift_a, shift_b;
  std::string wing_name;
  std::size_t grid = 8;
  double sigma = 3.0;
  std::string quantity;
  std::string output = "-";
  double chsh_a = 0.0, chsh_ap = 0.0, chsh_b = 0.0, chsh_bp = 0.0;
  BudgetOptions budget_opts;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--model", model_spec,
                    "local, one-way, two-way or table:<path.json>")
        ->required();
    cmd->add_option("--format", format, "json or csv")->capture_default_str();
    budget_opts.attach(cmd);
  };
  auto add_settings = [&](CLI::App* cmd) {
    cmd->add_option("--theta-a", theta_a, "setting at A (radians)");
    cmd->add_option("--theta-b", theta_b, "setting at B (radians)");
  };
  auto add_shift = [&](CLI::App* cmd) {
    cmd->add_option("--shift-a", shift_a, "shift the setting at A to this angle");
    cmd->add_option("--shift-b", shift_b, "shift the setting at B to this angle");
  };
  auto add_ensemble = [&](CLI::App* cmd) {
    cmd->add_option("--ensemble", ensemble_spec,
                    "equilibrium, concentrate:<wing>:<direction>, mixture:<epsilon>, "
                    "inline JSON or @file.json")
        ->capture_default_str();
  };
  auto add_wing = [&](CLI::App* cmd, bool required) {
    auto* opt = cmd->add_option("--wing", wing_name, "observed wing, A or B");
    if (required) opt->required();
  };

  CLI::App* cmd_verify = app.add_subcommand("verify", "check quantum reproduction on a settings grid");
  add_common(cmd_verify);
  cmd_verify->add_option("--grid", grid, "points per angle")->capture_default_str();
  cmd_verify->add_option("--sigma", sigma, "pass tolerance in standard errors")
      ->capture_default_str();

  CLI::App* cmd_correlation = app.add_subcommand("correlation", "E[sigma_A sigma_B] at one settings pair");
  add_common(cmd_correlation);
  add_settings(cmd_correlation);
  add_shift(cmd_correlation);
  add_ensemble(cmd_correlation);
  add_wing(cmd_correlation, false);

  CLI::App* cmd_marginal = app.add_subcommand("marginal", "P(sigma_wing = +1) at one settings pair");
  add_common(cmd_marginal);
  add_settings(cmd_marginal);
  add_shift(cmd_marginal);
  add_ensemble(cmd_marginal);
  add_wing(cmd_marginal, true);

  CLI::App* cmd_transition = app.add_subcommand("transition", "transition-set fractions under a distant shift");
  add_common(cmd_transition);
  add_settings(cmd_transition);
  add_shift(cmd_transition);
  add_ensemble(cmd_transition);
  add_wing(cmd_transition, true);

  CLI::App* cmd_signal = app.add_subcommand("signal", "marginal change at one wing under a distant shift");
  add_common(cmd_signal);
  add_settings(cmd_signal);
  add_shift(cmd_signal);
  add_ensemble(cmd_signal);
  add_wing(cmd_signal, true);

  CLI::App* cmd_chsh = app.add_subcommand("chsh", "Bell witness |S| for four settings");
  add_common(cmd_chsh);
  cmd_chsh->add_option("--a", chsh_a, "first setting at A (radians)");
  cmd_chsh->add_option("--a-prime", chsh_ap, "second setting at A");
  cmd_chsh->add_option("--b", chsh_b, "first setting at B");
  cmd_chsh->add_option("--b-prime", chsh_bp, "second setting at B");
  add_settings(cmd_chsh);
  add_shift(cmd_chsh);
  add_ensemble(cmd_chsh);
  add_wing(cmd_chsh, false);

  CLI::App* cmd_sweep = app.add_subcommand("sweep", "tabulate a quantity over a settings grid (CSV)");
  add_common(cmd_sweep);
  cmd_sweep->add_option("--quantity", quantity, "alpha, beta, alpha+beta, chsh or signal")
      ->required();
  cmd_sweep->add_option("--grid", grid, "points per angle")->capture_default_str();
  cmd_sweep->add_option("--output", output, "output CSV path, '-' for stdout")
      ->capture_default_str();
  add_ensemble(cmd_sweep);
  add_wing(cmd_sweep, false);

  CLI::App* cmd_average = app.add_subcommand("average", "mean and max of alpha+beta over the settings grid");
  add_common(cmd_average);
  cmd_average->add_option("--grid", grid, "points per angle")->capture_default_str();

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("sigloc");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    set_max_workers(budget_opts.workers);
    const IntegrationBudget budget = budget_opts.budget();
    if (format != "json" && format != "csv") {
      throw UsageError("format must be json or csv");
    }
    const Model model = make_model(model_spec);

    const SettingsPair settings{Angle(theta_a), Angle(theta_b)};
    std::optional<Shift> shift;
    if (shift_a && shift_b) {
      throw UsageError("give at most one of --shift-a / --shift-b");
    }
    if (shift_a) shift = Shift{Wing::a, Angle(*shift_a)};
    if (shift_b) shift = Shift{Wing::b, Angle(*shift_b)};
    std::optional<Wing> wing;
    if (!wing_name.empty()) wing = wing_from_string(wing_name);

    const EnsembleContext ctx{model, settings, wing, shift, budget};

    if (app.got_subcommand(cmd_verify)) {
      const EquilibriumReport report = verify_equilibrium(model, grid, sigma, budget);
      if (format == "csv") {
        out << "theta_a,theta_b,expected,correlation,corr_std_error,"
               "marginal_a,ma_std_error,marginal_b,mb_std_error,pass\n";
        for (const auto& cell : report.cells) {
          out << format_double(cell.settings.theta_a.radians()) << ","
              << format_double(cell.settings.theta_b.radians()) << ","
              << format_double(cell.expected_correlation) << ","
              << format_double(cell.correlation.value) << ","
              << format_double(cell.correlation.std_error) << ","
              << format_double(cell.marginal_a.value) << ","
              << format_double(cell.marginal_a.std_error) << ","
              << format_double(cell.marginal_b.value) << ","
              << format_double(cell.marginal_b.std_error) << ","
              << (cell.pass ? "true" : "false") << "\n";
        }
      } else {
        RunRecord record = base_record("verify", model_spec, "equilibrium", budget);
        record.params = {{"grid", grid}, {"tolerance_sigma", sigma}};
        OrderedJson cells = OrderedJson::array();
        for (const auto& cell : report.cells) {
          cells.push_back({{"theta_a", cell.settings.theta_a.radians()},
                           {"theta_b", cell.settings.theta_b.radians()},
                           {"expected", cell.expected_correlation},
                           {"correlation", to_json(cell.correlation)},
                           {"marginal_a", to_json(cell.marginal_a)},
                           {"marginal_b", to_json(cell.marginal_b)},
                           {"pass", cell.pass}});
        }
        record.result = {{"all_pass", report.all_pass},
                         {"worst_deviation", report.worst_deviation},
                         {"worst_theta_a", report.worst_settings.theta_a.radians()},
                         {"worst_theta_b", report.worst_settings.theta_b.radians()},
                         {"cells", cells}};
        emit(out, record);
      }
      return report.all_pass ? kExitOk : kExitCheckFailed;
    }

    if (app.got_subcommand(cmd_correlation)) {
      const Ensemble rho = make_ensemble(ensemble_spec, ctx);
      const Estimate est = correlation(model, rho, settings, budget);
      RunRecord record = base_record("correlation", model_spec, ensemble_spec, budget);
      record.params = {{"theta_a", settings.theta_a.radians()},
                       {"theta_b", settings.theta_b.radians()}};
      Estimate reported = est;
      reported.value = std::clamp(reported.value, -1.0, 1.0);
      record.result = to_json(reported);
      emit(out, record);
      return kExitOk;
    }

    if (app.got_subcommand(cmd_marginal)) {
      const Ensemble rho = make_ensemble(ensemble_spec, ctx);
      const Estimate est = marginal(model, rho, settings, *wing, budget);
      RunRecord record = base_record("marginal", model_spec, ensemble_spec, budget);
      record.params = {{"theta_a", settings.theta_a.radians()},
                       {"theta_b", settings.theta_b.radians()},
                       {"wing", to_string(*wing)}};
      record.result = to_json(est);
      emit(out, record);
      return kExitOk;
    }

    if (app.got_subcommand(cmd_transition) || app.got_subcommand(cmd_signal)) {
      if (!shift) throw UsageError("give exactly one of --shift-a / --shift-b");
      const Ensemble rho = make_ensemble(ensemble_spec, ctx);
      const bool is_transition = app.got_subcommand(cmd_transition);
      RunRecord record = base_record(is_transition ? "transition" : "signal",
                                     model_spec, ensemble_spec, budget);
      record.params = {{"wing", to_string(*wing)},
                       {"theta_a", settings.theta_a.radians()},
                       {"theta_b", settings.theta_b.radians()},
                       {"shift_wing", to_string(shift->wing)},
                       {"shift_to", shift->new_angle.radians()}};
      if (is_transition) {
        const TransitionReport report =
            transition_fractions(model, rho, *wing, settings, *shift, budget);
        record.result = to_json(report);
      } else {
        record.result = to_json(signal(model, rho, *wing, settings, *shift, budget));
      }
      emit(out, record);
      return kExitOk;
    }

    if (app.got_subcommand(cmd_chsh)) {
      const Ensemble rho = make_ensemble(ensemble_spec, ctx);
      const Estimate est = chsh(model, rho, Angle(chsh_a), Angle(chsh_ap),
                                Angle(chsh_b), Angle(chsh_bp), budget);
      RunRecord record = base_record("chsh", model_spec, ensemble_spec, budget);
      record.params = {{"a", Angle(chsh_a).radians()},
                       {"a_prime", Angle(chsh_ap).radians()},
                       {"b", Angle(chsh_b).radians()},
                       {"b_prime", Angle(chsh_bp).radians()}};
      record.result = to_json(est);
      emit(out, record);
      return kExitOk;
    }

    if (app.got_subcommand(cmd_average)) {
      IntegrationBudget cell_budget = budget;
      if (cmd_average->count("--samples") == 0) cell_budget.samples = 20'000;
      const NonlocalityAverage avg = average_nonlocality(model, grid, cell_budget);
      RunRecord record = base_record("average", model_spec, "equilibrium", cell_budget);
      record.params = {{"grid", grid}};
      record.result = {{"mean", to_json(avg.mean)},
                       {"max", to_json(avg.max)},
                       {"max_theta_a", avg.max_at[0].radians()},
                       {"max_theta_b", avg.max_at[1].radians()},
                       {"max_theta_a_prime", avg.max_at[2].radians()},
                       {"max_theta_b_prime", avg.max_at[3].radians()}};
      emit(out, record);
      return kExitOk;
    }

    if (app.got_subcommand(cmd_sweep)) {
      if (grid < 2) throw UsageError("sweep needs --grid >= 2");
      IntegrationBudget budget = ctx.budget;
      if (cmd_sweep->count("--samples") == 0) budget.samples = 20'000;
      const auto angles = uniform_angles(grid);
      const std::size_t m = angles.size();
      std::vector<SweepRow> rows;
      std::vector<std::string> columns;

      if (quantity == "alpha" || quantity == "beta") {
        if (ensemble_spec != "equilibrium") {
          throw UsageError("degrees of nonlocality are equilibrium quantities; "
                           "drop --ensemble for quantity " + quantity);
        }
        const bool is_alpha = quantity == "alpha";
        columns = is_alpha
                      ? std::vector<std::string>{"theta_a", "theta_b", "theta_b_prime"}
                      : std::vector<std::string>{"theta_a", "theta_b", "theta_a_prime"};
        std::uint64_t cell = 0;
        for (std::size_t ia = 0; ia < m; ++ia)
          for (std::size_t ib = 0; ib < m; ++ib)
            for (std::size_t ip = 0; ip < m; ++ip) {
              IntegrationBudget cb = budget;
              cb.seed = derive_seed(budget.seed, cell++);
              const Estimate est =
                  is_alpha ? degree_alpha(model, angles[ia], angles[ib], angles[ip], cb)
                           : degree_beta(model, angles[ia], angles[ib], angles[ip], cb);
              rows.push_back({{angles[ia].radians(), angles[ib].radians(),
                               angles[ip].radians()},
                              est});
            }
      } else if (quantity == "alpha+beta") {
        if (ensemble_spec != "equilibrium") {
          throw UsageError("degrees of nonlocality are equilibrium quantities; "
                           "drop --ensemble for quantity alpha+beta");
        }
        const DegreeGrid grids = degree_grids(model, m, budget);
        columns = {"theta_a", "theta_b", "theta_a_prime", "theta_b_prime"};
        for (std::size_t ia = 0; ia < m; ++ia)
          for (std::size_t ib = 0; ib < m; ++ib)
            for (std::size_t iap = 0; iap < m; ++iap)
              for (std::size_t ibp = 0; ibp < m; ++ibp) {
                const Estimate& a = grids.alpha[(ia * m + ib) * m + ibp];
                const Estimate& b = grids.beta[(ia * m + ib) * m + iap];
                rows.push_back({{angles[ia].radians(), angles[ib].radians(),
                                 angles[iap].radians(), angles[ibp].radians()},
                                {a.value + b.value, std::hypot(a.std_error, b.std_error),
                                 a.method, a.samples + b.samples}});
              }
      } else if (quantity == "chsh") {
        columns = {"a", "a_prime", "b", "b_prime"};
        std::uint64_t cell = 0;
        for (std::size_t i0 = 0; i0 < m; ++i0)
          for (std::size_t i1 = 0; i1 < m; ++i1)
            for (std::size_t i2 = 0; i2 < m; ++i2)
              for (std::size_t i3 = 0; i3 < m; ++i3) {
                IntegrationBudget cb = budget;
                cb.seed = derive_seed(budget.seed, cell++);
                EnsembleContext cell_ctx{model, settings, wing, shift, cb};
                const Ensemble rho = make_ensemble(ensemble_spec, cell_ctx);
                const Estimate est = chsh(model, rho, angles[i0], angles[i1],
                                          angles[i2], angles[i3], cb);
                rows.push_back({{angles[i0].radians(), angles[i1].radians(),
                                 angles[i2].radians(), angles[i3].radians()},
                                est});
              }
      } else if (quantity == "signal") {
        if (!wing) throw UsageError("sweep --quantity signal needs --wing");
        columns = {"theta_a", "theta_b", "theta_prime"};
        const Wing shift_wing = other_wing(*wing);
        std::uint64_t cell = 0;
        for (std::size_t ia = 0; ia < m; ++ia)
          for (std::size_t ib = 0; ib < m; ++ib)
            for (std::size_t ip = 0; ip < m; ++ip) {
              IntegrationBudget cb = budget;
              cb.seed = derive_seed(budget.seed, cell++);
              const SettingsPair cell_settings{angles[ia], angles[ib]};
              const Shift cell_shift{shift_wing, angles[ip]};
              EnsembleContext cell_ctx{model, cell_settings, wing, cell_shift, cb};
              const Ensemble rho = make_ensemble(ensemble_spec, cell_ctx);
              const Estimate est =
                  signal(model, rho, *wing, cell_settings, cell_shift, cb);
              rows.push_back({{angles[ia].radians(), angles[ib].radians(),
                               angles[ip].radians()},
                              est});
            }
      } else {
        throw UsageError("unknown sweep quantity '" + quantity +
                         "' (expected alpha, beta, alpha+beta, chsh or signal)");
      }

      if (output == "-") {
        write_sweep_csv(out, columns, rows);
      } else {
        std::ofstream file(output, std::ios::binary);
        if (!file) throw IoError("cannot open output file: " + output);
        write_sweep_csv(file, columns, rows);
        if (!file.good()) throw IoError("failed writing output file: " + output);
      }
      return kExitOk;
    }

    throw UsageError("no subcommand given");
  } catch (const IoError& e) {
    err << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ZeroMeasureTransitionError& e) {
    err << "check failed: " << e.what() << "\n";
    return kExitCheckFailed;
  } catch (const ZeroMassError& e) {
    err << "check failed: " << e.what() << "\n";
    return kExitCheckFailed;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SchemaError& e) {
    err << "schema error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace sigloc::cli
