#include "sigloc/run_record.hpp"

#include <charconv>
#include <cstdlib>
#include <ctime>

#include "sigloc/errors.hpp"

namespace sigloc {

OrderedJson to_json(const Estimate& estimate) {
  return OrderedJson{{"value", estimate.value},
                     {"std_error", estimate.std_error},
                     {"method", to_string(estimate.method)},
                     {"samples", estimate.samples}};
}

OrderedJson to_json(const TransitionReport& report) {
  OrderedJson j{{"wing", to_string(report.wing)},
                {"theta_a", report.settings.theta_a.radians()},
                {"theta_b", report.settings.theta_b.radians()},
                {"shift_wing", to_string(report.shift.wing)},
                {"shift_to", report.shift.new_angle.radians()},
                {"nu_plus_minus", to_json(report.nu_plus_minus)},
                {"nu_minus_plus", to_json(report.nu_minus_plus)},
                {"degree", to_json(report.degree)},
                {"signal", to_json(report.signal)}};
  j["bits_per_pair"] =
      report.bits_per_pair ? to_json(*report.bits_per_pair) : OrderedJson(nullptr);
  return j;
}

OrderedJson to_json(const IntegrationBudget& budget) {
  return OrderedJson{{"method", method_choice_name(budget.method)},
                     {"samples", budget.samples},
                     {"quadrature_points", budget.quadrature_points},
                     {"seed", budget.seed}};
}

OrderedJson to_json(const RunRecord& record) {
  return OrderedJson{{"command", record.command},
                     {"model", record.model},
                     {"ensemble", record.ensemble},
                     {"params", record.params},
                     {"budget", to_json(record.budget)},
                     {"result", record.result},
                     {"tool_version", record.tool_version},
                     {"timestamp", record.timestamp}};
}

std::string method_choice_name(MethodChoice method) {
  switch (method) {
    case MethodChoice::automatic: return "auto";
    case MethodChoice::exact_enumeration: return "enum";
    case MethodChoice::quadrature: return "quadrature";
    case MethodChoice::monte_carlo: return "mc";
  }
  return "auto";
}

MethodChoice method_choice_from_string(const std::string& name) {
  if (name == "auto") return MethodChoice::automatic;
  if (name == "enum" || name == "enumeration") return MethodChoice::exact_enumeration;
  if (name == "quadrature" || name == "quad") return MethodChoice::quadrature;
  if (name == "mc" || name == "monte-carlo") return MethodChoice::monte_carlo;
  throw UsageError("unknown method '" + name + "' (expected auto, mc, quadrature or enum)");
}

std::string utc_timestamp() {
  std::time_t now = std::time(nullptr);
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
    now = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
  }
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

std::string format_double(double value) {
  char buffer[32];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

}  // namespace sigloc
