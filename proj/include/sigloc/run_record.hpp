#pragma once

#include <string>

#include <json.hpp>

#include "sigloc/analysis.hpp"
#include "sigloc/budget.hpp"

namespace sigloc {

using OrderedJson = nlohmann::ordered_json;

/// One CLI invocation's inputs and result. Serializes to a single JSON object
/// (one line); every numeric field round-trips losslessly.
struct RunRecord {
  std::string command;
  std::string model;
  std::string ensemble;
  OrderedJson params;
  IntegrationBudget budget;
  OrderedJson result;
  std::string tool_version;
  std::string timestamp;  // UTC ISO-8601
};

OrderedJson to_json(const Estimate& estimate);
OrderedJson to_json(const TransitionReport& report);
OrderedJson to_json(const IntegrationBudget& budget);
OrderedJson to_json(const RunRecord& record);

std::string method_choice_name(MethodChoice method);
MethodChoice method_choice_from_string(const std::string& name);

/// Current UTC time as ISO-8601. Honors SOURCE_DATE_EPOCH so record output
/// can be made byte-reproducible.
std::string utc_timestamp();

/// Shortest round-trip decimal form of a double (used for CSV fields).
std::string format_double(double value);

}  // namespace sigloc
