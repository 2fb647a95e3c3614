#include "crn/model_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "crn/errors.hpp"

namespace crn {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& origin, const std::string& what) {
  throw ModelError(origin + ": " + what);
}

double number_at(const json& j, const std::string& origin, const std::string& path) {
  if (!j.is_number()) fail(origin, path + ": expected a number");
  return j.get<double>();
}

int count_at(const json& j, const std::string& origin, const std::string& path) {
  if (!j.is_number_integer()) fail(origin, path + ": expected an integer count");
  return j.get<int>();
}

RateTransform transform_at(const json& j, const std::string& origin,
                           const std::string& path) {
  if (!j.is_object()) fail(origin, path + ": expected an object");
  RateTransform tr;
  tr.alpha = j.contains("alpha") ? number_at(j["alpha"], origin, path + ".alpha") : 1.0;
  tr.p = j.contains("p") ? number_at(j["p"], origin, path + ".p") : 1.0;
  tr.c = j.contains("c") ? number_at(j["c"], origin, path + ".c") : 0.0;
  tr.q = j.contains("q") ? number_at(j["q"], origin, path + ".q") : 0.0;
  try {
    tr.validate();
  } catch (const ModelError& e) {
    fail(origin, path + ": " + e.what());
  }
  return tr;
}

std::map<std::string, int> side_at(const json& j, const std::string& origin,
                                   const std::string& path) {
  if (!j.is_object()) fail(origin, path + ": expected an object of species counts");
  std::map<std::string, int> side;
  for (const auto& [name, count] : j.items()) {
    const int c = count_at(count, origin, path + "." + name);
    if (c <= 0) fail(origin, path + "." + name + ": count must be positive");
    side[name] = c;
  }
  return side;
}

Vec vector_at(const json& j, const std::string& origin, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(origin, path + ": expected a nonempty array");
  Vec v;
  for (std::size_t i = 0; i < j.size(); ++i)
    v.push_back(number_at(j[i], origin, path + "[" + std::to_string(i) + "]"));
  return v;
}

} // namespace

ModelFile parse_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError(path + ": cannot open file");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ModelError(path + ": " + e.what());
  }
  return parse_model_json(j, path);
}

ModelFile parse_model_json(const json& j, const std::string& origin) {
  if (!j.is_object()) fail(origin, "model must be a JSON object");
  ModelFile model;
  model.name = j.value("name", "");
  if (j.contains("metadata")) model.metadata = j["metadata"];

  if (!j.contains("species") || !j["species"].is_array() || j["species"].empty())
    fail(origin, "species: expected a nonempty array");
  std::size_t si = 0;
  for (const auto& sj : j["species"]) {
    const std::string path = "species[" + std::to_string(si++) + "]";
    if (!sj.is_object() || !sj.contains("name") || !sj["name"].is_string())
      fail(origin, path + ".name: expected a string");
    SpeciesDef def;
    def.name = sj["name"].get<std::string>();
    def.transform = sj.contains("gamma") ? transform_at(sj["gamma"], origin, path + ".gamma")
                                         : RateTransform::identity();
    model.spec.species.push_back(def);
  }

  if (!j.contains("reactions") || !j["reactions"].is_array() || j["reactions"].empty())
    fail(origin, "reactions: expected a nonempty array");
  std::size_t ri = 0;
  for (const auto& rj : j["reactions"]) {
    const std::string path = "reactions[" + std::to_string(ri++) + "]";
    if (!rj.is_object()) fail(origin, path + ": expected an object");
    ReactionInput in;
    if (!rj.contains("reactants")) fail(origin, path + ".reactants: missing field");
    if (!rj.contains("products")) fail(origin, path + ".products: missing field");
    if (!rj.contains("rate")) fail(origin, path + ".rate: missing field");
    in.reactants = side_at(rj["reactants"], origin, path + ".reactants");
    in.products = side_at(rj["products"], origin, path + ".products");
    in.rate = number_at(rj["rate"], origin, path + ".rate");
    in.delay = rj.contains("delay") ? number_at(rj["delay"], origin, path + ".delay") : 0.0;
    model.spec.reactions.push_back(in);
  }

  if (j.contains("histories")) {
    if (!j["histories"].is_object()) fail(origin, "histories: expected an object");
    for (const auto& [name, hj] : j["histories"].items()) {
      HistorySpec hs;
      if (hj.is_array()) {
        hs.is_constant = true;
        hs.constant = vector_at(hj, origin, "histories." + name);
      } else if (hj.is_object() && hj.contains("knots")) {
        hs.is_constant = false;
        const auto& knots = hj["knots"];
        if (!knots.is_array() || knots.size() < 2)
          fail(origin, "histories." + name + ".knots: expected at least two knots");
        for (std::size_t ki = 0; ki < knots.size(); ++ki) {
          const std::string path = "histories." + name + ".knots[" + std::to_string(ki) + "]";
          if (!knots[ki].is_array() || knots[ki].size() != 2)
            fail(origin, path + ": expected [time, [values...]]");
          hs.knot_times.push_back(number_at(knots[ki][0], origin, path + "[0]"));
          hs.knot_values.push_back(vector_at(knots[ki][1], origin, path + "[1]"));
        }
      } else {
        fail(origin, "histories." + name + ": expected an array or {\"knots\": ...}");
      }
      model.histories[name] = hs;
    }
  }

  // full validation happens in build_network; surface those errors with the origin
  try {
    build_network(model.spec);
  } catch (const ModelError& e) {
    fail(origin, e.what());
  }
  return model;
}

nlohmann::ordered_json model_to_json(const ModelFile& model) {
  nlohmann::ordered_json j;
  if (!model.name.empty()) j["name"] = model.name;
  j["species"] = nlohmann::ordered_json::array();
  for (const auto& sp : model.spec.species) {
    nlohmann::ordered_json sj;
    sj["name"] = sp.name;
    sj["gamma"] = {{"alpha", sp.transform.alpha},
                   {"p", sp.transform.p},
                   {"c", sp.transform.c},
                   {"q", sp.transform.q}};
    j["species"].push_back(sj);
  }
  j["reactions"] = nlohmann::ordered_json::array();
  for (const auto& r : model.spec.reactions) {
    nlohmann::ordered_json rj;
    rj["reactants"] = r.reactants;
    rj["products"] = r.products;
    rj["rate"] = r.rate;
    rj["delay"] = r.delay;
    j["reactions"].push_back(rj);
  }
  if (!model.histories.empty()) {
    nlohmann::ordered_json hj;
    for (const auto& [name, hs] : model.histories) {
      if (hs.is_constant) {
        hj[name] = hs.constant;
      } else {
        nlohmann::ordered_json knots = nlohmann::ordered_json::array();
        for (std::size_t ki = 0; ki < hs.knot_times.size(); ++ki)
          knots.push_back({hs.knot_times[ki], hs.knot_values[ki]});
        hj[name] = {{"knots", knots}};
      }
    }
    j["histories"] = hj;
  }
  if (!model.metadata.is_null()) j["metadata"] = model.metadata;
  return j;
}

Vec parse_vector(const std::string& text) {
  Vec v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      v.push_back(std::stod(item, &pos));
      while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ModelError("expected a comma-separated list of numbers, got '" + text + "'");
    }
  }
  if (v.empty()) throw ModelError("expected a comma-separated list of numbers");
  return v;
}

History make_history(const ModelFile& model, const Network& net,
                     const std::string& flag_value) {
  const double tau_max = net.tau_max();
  const double t_lo = tau_max > 0.0 ? -tau_max : -1.0;
  if (!flag_value.empty() && flag_value[0] == '@') {
    const std::string name = flag_value.substr(1);
    const auto it = model.histories.find(name);
    if (it == model.histories.end())
      throw ModelError("model defines no history named '" + name + "'");
    const HistorySpec& hs = it->second;
    if (hs.is_constant) {
      if (hs.constant.size() != net.species_count())
        throw ModelError("history '" + name + "' has wrong dimension");
      return History::constant(hs.constant, t_lo, 0.0);
    }
    for (const Vec& v : hs.knot_values)
      if (v.size() != net.species_count())
        throw ModelError("history '" + name + "' has wrong dimension");
    if (std::abs(hs.knot_times.back()) > 1e-12)
      throw ModelError("history '" + name + "' must end at time 0");
    return History::from_knots(hs.knot_times, hs.knot_values);
  }
  const Vec v = parse_vector(flag_value);
  if (v.size() != net.species_count())
    throw ModelError("history vector has wrong dimension (expected " +
                     std::to_string(net.species_count()) + " components)");
  return History::constant(v, t_lo, 0.0);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<Vec>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ModelError(path + ": cannot open for writing");
  for (std::size_t i = 0; i < header.size(); ++i)
    out << (i ? "," : "") << header[i];
  out << '\n';
  for (const Vec& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << format_double(row[i]);
    out << '\n';
  }
}

void read_csv(const std::string& path, std::vector<std::string>& header,
              std::vector<Vec>& rows) {
  std::ifstream in(path);
  if (!in) throw ModelError(path + ": cannot open file");
  header.clear();
  rows.clear();
  std::string line;
  if (!std::getline(in, line)) throw ModelError(path + ": empty file");
  std::stringstream hs(line);
  std::string cell;
  while (std::getline(hs, cell, ',')) header.push_back(cell);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ls(line);
    Vec row;
    while (std::getline(ls, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ModelError(path + ": malformed number '" + cell + "'");
      }
    }
    if (row.size() != header.size())
      throw ModelError(path + ": row width does not match header");
    rows.push_back(std::move(row));
  }
}

} // namespace crn
