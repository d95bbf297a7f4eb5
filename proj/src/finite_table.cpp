#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "sigloc/models.hpp"

namespace sigloc {
namespace {

using Json = nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw SchemaError(path + ": " + what);
}

std::vector<Angle> parse_grid(const Json& node, const std::string& path) {
  if (!node.is_array() || node.empty()) fail(path, "expected a non-empty array of radians");
  std::vector<Angle> grid;
  grid.reserve(node.size());
  for (std::size_t i = 0; i < node.size(); ++i) {
    const auto& v = node[i];
    if (!v.is_number() || !std::isfinite(v.get<double>())) {
      fail(path + "/" + std::to_string(i), "expected a finite number (radians)");
    }
    grid.emplace_back(v.get<double>());
  }
  return grid;
}

std::vector<double> parse_weights(const Json& node, const std::string& path) {
  if (!node.is_array() || node.empty()) fail(path, "expected a non-empty array of weights");
  std::vector<double> weights;
  weights.reserve(node.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < node.size(); ++i) {
    const auto& v = node[i];
    if (!v.is_number() || !std::isfinite(v.get<double>()) || v.get<double>() < 0.0) {
      fail(path + "/" + std::to_string(i), "expected a finite non-negative weight");
    }
    weights.push_back(v.get<double>());
    sum += weights.back();
  }
  if (std::fabs(sum - 1.0) > 1e-12) {
    std::ostringstream os;
    os << "weights must sum to 1 within 1e-12, got " << sum;
    fail(path, os.str());
  }
  return weights;
}

std::vector<Outcome> parse_table(const Json& node, const std::string& path,
                                 std::size_t na, std::size_t nb, std::size_t nl) {
  if (!node.is_array() || node.size() != na) {
    fail(path, "expected an array with one entry per grid_a angle (" + std::to_string(na) + ")");
  }
  std::vector<Outcome> flat;
  flat.reserve(na * nb * nl);
  for (std::size_t ia = 0; ia < na; ++ia) {
    const auto& row = node[ia];
    const std::string row_path = path + "/" + std::to_string(ia);
    if (!row.is_array() || row.size() != nb) {
      fail(row_path, "expected an array with one entry per grid_b angle (" + std::to_string(nb) + ")");
    }
    for (std::size_t ib = 0; ib < nb; ++ib) {
      const auto& cell = row[ib];
      const std::string cell_path = row_path + "/" + std::to_string(ib);
      if (!cell.is_array() || cell.size() != nl) {
        fail(cell_path, "expected an array with one outcome per lambda value (" + std::to_string(nl) + ")");
      }
      for (std::size_t k = 0; k < nl; ++k) {
        const auto& v = cell[k];
        if (!v.is_number_integer()) {
          fail(cell_path + "/" + std::to_string(k), "expected +1 or -1");
        }
        const auto s = v.get<std::int64_t>();
        if (s != 1 && s != -1) {
          fail(cell_path + "/" + std::to_string(k),
               "expected +1 or -1, got " + std::to_string(s));
        }
        flat.push_back(s == 1 ? Outcome::plus : Outcome::minus);
      }
    }
  }
  return flat;
}

}  // namespace

FiniteTable parse_finite_table(std::string_view json_text) {
  Json doc;
  try {
    doc = Json::parse(json_text);
  } catch (const Json::parse_error& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("/", "expected a JSON object");

  static const char* const kKeys[] = {"grid_a", "grid_b", "weights", "table_a", "table_b"};
  for (const char* key : kKeys) {
    if (!doc.contains(key)) fail("/", std::string("missing required key '") + key + "'");
  }
  for (const auto& [key, _] : doc.items()) {
    bool known = false;
    for (const char* k : kKeys) known = known || key == k;
    if (!known) fail("/" + key, "unknown key");
  }

  FiniteTable table;
  table.grid_a = parse_grid(doc["grid_a"], "/grid_a");
  table.grid_b = parse_grid(doc["grid_b"], "/grid_b");
  table.weights = parse_weights(doc["weights"], "/weights");
  const std::size_t na = table.grid_a.size();
  const std::size_t nb = table.grid_b.size();
  const std::size_t nl = table.weights.size();
  table.table_a = parse_table(doc["table_a"], "/table_a", na, nb, nl);
  table.table_b = parse_table(doc["table_b"], "/table_b", na, nb, nl);
  validate_finite_table(table);
  return table;
}

FiniteTable load_finite_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open finite-table file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("failed reading finite-table file: " + path.string());
  return parse_finite_table(buffer.str());
}

}  // namespace sigloc
