#include "cascade/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace cascade {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& origin, const std::string& what) {
  throw std::runtime_error(origin + ": " + what);
}

void reject_unknown(const json& object, std::initializer_list<const char*> known,
                    const std::string& origin, const std::string& where) {
  if (!object.is_object()) fail(origin, where + " must be an object");
  for (auto it = object.begin(); it != object.end(); ++it) {
    if (std::find_if(known.begin(), known.end(), [&](const char* k) {
          return it.key() == k;
        }) == known.end()) {
      fail(origin, "unknown field \"" + it.key() + "\" in " + where);
    }
  }
}

double require_number(const json& j, const char* field,
                      const std::string& origin) {
  if (!j.contains(field) || !j[field].is_number()) {
    fail(origin, std::string("missing or non-numeric field \"") + field + "\"");
  }
  return j[field].get<double>();
}

ShapeFn parse_shape(const json& j, const std::string& origin) {
  if (!j.is_object() || !j.contains("kind")) {
    fail(origin, "each shape must be an object with a \"kind\"");
  }
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "indicator") {
    reject_unknown(j, {"kind", "a", "b"}, origin, "shape");
    IndicatorShape shape;
    shape.a = require_number(j, "a", origin);
    shape.b = require_number(j, "b", origin);
    return shape;
  }
  if (kind == "sampled") {
    reject_unknown(j, {"kind", "values"}, origin, "shape");
    SampledShape shape;
    if (!j.contains("values") || !j["values"].is_array()) {
      fail(origin, "sampled shape needs a \"values\" array");
    }
    for (const auto& v : j["values"]) shape.values.push_back(v.get<double>());
    return shape;
  }
  fail(origin, "shape kind must be \"indicator\" or \"sampled\"");
}

ComponentSignal parse_signal(const json& j, const std::string& origin) {
  ComponentSignal signal;
  if (j.is_array()) {
    for (const auto& term_json : j) {
      reject_unknown(term_json, {"kind", "amplitude", "frequency"}, origin,
                     "initial-condition term");
      const std::string kind = term_json["kind"].get<std::string>();
      TrigTerm term;
      term.amplitude = require_number(term_json, "amplitude", origin);
      if (kind == "const") {
        term.frequency = 0.0;
        term.sine = false;
      } else if (kind == "cos" || kind == "sin") {
        term.frequency = require_number(term_json, "frequency", origin);
        term.sine = kind == "sin";
      } else {
        fail(origin, "initial-condition term kind must be const/cos/sin");
      }
      signal.terms.push_back(term);
    }
    return signal;
  }
  if (j.is_object()) {
    reject_unknown(j, {"kind", "values"}, origin, "initial-condition component");
    if (j["kind"].get<std::string>() != "sampled") {
      fail(origin, "initial-condition component object must be sampled");
    }
    for (const auto& v : j["values"]) signal.samples.push_back(v.get<double>());
    return signal;
  }
  fail(origin, "initial-condition component must be a term array or sampled object");
}

double parse_boundary_gamma(const json& j, const char* field,
                            const std::string& origin) {
  if (!j.contains(field) || !j[field].is_string()) {
    fail(origin, std::string("missing boundary field \"") + field + "\"");
  }
  const std::string value = j[field].get<std::string>();
  if (value == "dirichlet") return 1.0;
  if (value == "neumann") return 0.0;
  fail(origin, std::string(field) + " must be \"dirichlet\" or \"neumann\"");
}

}  // namespace

int RunConfig::effective_n_sim(int n_modes_selected) const {
  if (n_sim) return *n_sim;
  return std::max(60, 4 * n_modes_selected);
}

namespace {

RunConfig parse_config_impl(const json& root, const std::string& origin) {
  if (!root.is_object()) fail(origin, "top level must be an object");

  reject_unknown(root,
                 {"mode", "m", "length", "diffusion", "reaction",
                  "boundary_left", "boundary_right", "shapes", "delta",
                  "delta0", "k_q", "initial_condition", "overrides",
                  "output_dir"},
                 origin, "the top level");

  RunConfig config;
  PlantSpec& plant = config.plant;

  const std::string mode = root.value("mode", std::string());
  if (mode == "internal") {
    plant.mode = ActuationMode::Internal;
  } else if (mode == "boundary") {
    plant.mode = ActuationMode::Boundary;
  } else {
    fail(origin, "\"mode\" must be \"internal\" or \"boundary\"");
  }

  plant.m = static_cast<int>(require_number(root, "m", origin));
  plant.length = require_number(root, "length", origin);

  if (!root.contains("diffusion") || !root["diffusion"].is_array()) {
    fail(origin, "missing \"diffusion\" array");
  }
  plant.diffusion.resize(root["diffusion"].size());
  for (std::size_t i = 0; i < root["diffusion"].size(); ++i) {
    plant.diffusion[static_cast<Eigen::Index>(i)] =
        root["diffusion"][i].get<double>();
  }

  if (!root.contains("reaction") || !root["reaction"].is_array()) {
    fail(origin, "missing \"reaction\" matrix");
  }
  const auto& rows = root["reaction"];
  plant.reaction.resize(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].is_array() || rows[i].size() != rows.size()) {
      fail(origin, "\"reaction\" must be a square array of arrays");
    }
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      plant.reaction(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rows[i][j].get<double>();
    }
  }

  plant.gamma11 = parse_boundary_gamma(root, "boundary_left", origin);
  plant.gamma21 = parse_boundary_gamma(root, "boundary_right", origin);
  plant.gamma12 = 1.0 - plant.gamma11;
  plant.gamma22 = 1.0 - plant.gamma21;

  if (root.contains("shapes")) {
    for (const auto& shape : root["shapes"]) {
      plant.shapes.push_back(parse_shape(shape, origin));
    }
  }

  const bool internal = plant.mode == ActuationMode::Internal;
  if (internal) {
    if (!root.contains("delta") || root.contains("delta0") || root.contains("k_q")) {
      fail(origin, "internal mode takes exactly the goal field \"delta\"");
    }
    config.rate = require_number(root, "delta", origin);
  } else {
    if (!root.contains("delta0") || root.contains("delta")) {
      fail(origin, "boundary mode takes exactly the goal field \"delta0\"");
    }
    config.rate = require_number(root, "delta0", origin);
    if (root.contains("k_q")) config.k_q = require_number(root, "k_q", origin);
  }

  if (!root.contains("initial_condition") || !root["initial_condition"].is_array()) {
    fail(origin, "missing \"initial_condition\" array (one entry per state)");
  }
  for (const auto& component : root["initial_condition"]) {
    config.initial.push_back(parse_signal(component, origin));
  }
  if (static_cast<int>(config.initial.size()) != plant.m) {
    fail(origin, "initial_condition must have exactly m components");
  }

  if (root.contains("overrides")) {
    const json& ov = root["overrides"];
    reject_unknown(ov,
                   {"n_modes", "n_sim", "mu0", "pole_gap", "dt", "t_final",
                    "x_grid"},
                   origin, "\"overrides\"");
    if (ov.contains("n_modes")) {
      config.n_modes = static_cast<int>(require_number(ov, "n_modes", origin));
      if (*config.n_modes < 1) fail(origin, "n_modes override must be >= 1");
    }
    if (ov.contains("n_sim")) {
      config.n_sim = static_cast<int>(require_number(ov, "n_sim", origin));
      if (*config.n_sim < 1) fail(origin, "n_sim override must be >= 1");
    }
    if (ov.contains("mu0")) {
      config.mu0 = static_cast<int>(require_number(ov, "mu0", origin));
      if (*config.mu0 < 1) fail(origin, "mu0 override must be >= 1");
      if (internal) fail(origin, "mu0 applies to boundary mode only");
    }
    if (ov.contains("pole_gap")) {
      config.pole_gap = require_number(ov, "pole_gap", origin);
      if (!(config.pole_gap > 0.0)) fail(origin, "pole_gap must be positive");
    }
    if (ov.contains("dt")) {
      config.dt = require_number(ov, "dt", origin);
      if (!(config.dt > 0.0)) fail(origin, "dt must be positive");
    }
    if (ov.contains("t_final")) {
      config.t_final = require_number(ov, "t_final", origin);
      if (!(config.t_final > 0.0)) fail(origin, "t_final must be positive");
    }
    if (ov.contains("x_grid")) {
      config.x_grid = static_cast<int>(require_number(ov, "x_grid", origin));
      if (config.x_grid < 2) fail(origin, "x_grid must be >= 2");
    }
  }

  if (root.contains("output_dir")) {
    config.output_dir = root["output_dir"].get<std::string>();
  }
  return config;
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& err) {
    fail(origin, std::string("parse error: ") + err.what());
  }
  try {
    return parse_config_impl(root, origin);
  } catch (const json::exception& err) {
    fail(origin, std::string("malformed config: ") + err.what());
  }
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error(path + ": cannot open config file");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path);
}

}  // namespace cascade
