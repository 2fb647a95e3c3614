#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "crn/history.hpp"
#include "crn/network.hpp"

namespace crn {

/// Named initial function: a constant vector or a knot list.
struct HistorySpec {
  bool is_constant = true;
  Vec constant;
  std::vector<double> knot_times;
  std::vector<Vec> knot_values;
};

/// Parsed model file: species with transforms, reactions with rates and
/// delays, named histories, free-form metadata.
struct ModelFile {
  std::string name;
  NetworkSpec spec;
  std::map<std::string, HistorySpec> histories;
  nlohmann::json metadata;
};

/// Reads and schema-checks a UTF-8 JSON model file. Errors carry the file
/// name and the offending field path.
ModelFile parse_model(const std::string& path);
ModelFile parse_model_json(const nlohmann::json& j, const std::string& origin);
nlohmann::ordered_json model_to_json(const ModelFile& model);

/// Builds the initial history named by a CLI flag: "v1,v2,..." for a
/// constant function on [-tau_max, 0], or "@name" for a history in the
/// model file.
History make_history(const ModelFile& model, const Network& net,
                     const std::string& flag_value);

/// Parses "v1,v2,..." into a vector of doubles.
Vec parse_vector(const std::string& text);

/// Shortest-round-trip decimal formatting (17 significant digits, C locale).
std::string format_double(double v);

/// Writes a CSV table with '\n' line endings and format_double cells.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<Vec>& rows);

/// Reads a CSV written by write_csv (header plus numeric rows).
void read_csv(const std::string& path, std::vector<std::string>& header,
              std::vector<Vec>& rows);

} // namespace crn
