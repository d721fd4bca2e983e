#include "hypocns/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

#include "hypocns/errors.hpp"

namespace hypocns {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::string& where,
                    std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed) known = known || item.key() == key;
    if (!known) throw ConfigError("unknown key '" + where + "." + item.key() + "'");
  }
}

template <class T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

json model_json(const ModelParams& m) {
  return {{"beta", m.beta},         {"gamma", m.gamma},   {"k_cross", m.k_cross},
          {"c2_split", m.c2_split}, {"s_reg", m.s_reg},   {"large_data", m.large_data}};
}

ModelParams model_from(const json& j) {
  reject_unknown(j, "model", {"beta", "gamma", "k_cross", "c2_split", "s_reg", "large_data"});
  ModelParams m;
  read(j, "beta", m.beta, "model");
  read(j, "gamma", m.gamma, "model");
  read(j, "k_cross", m.k_cross, "model");
  read(j, "c2_split", m.c2_split, "model");
  read(j, "large_data", m.large_data, "model");
  m.s_reg = default_regularity(m.beta, m.large_data);
  read(j, "s_reg", m.s_reg, "model");
  return m;
}

json data_json(const InitialDataSpec& d) {
  json modes = json::array();
  for (const auto& m : d.modes) modes.push_back({{"mode", m.mode}, {"a", m.a}, {"u", m.u}});
  json j = {{"kind", to_string(d.kind)}, {"amplitude", d.amplitude}, {"width", d.width},
            {"seed", d.seed},            {"modes", modes},          {"target_norms", d.target_norms}};
  j["center"] = d.center ? json(*d.center) : json(nullptr);
  return j;
}

InitialDataSpec data_from(const json& j) {
  reject_unknown(j, "data", {"kind", "amplitude", "width", "seed", "center", "modes", "target_norms"});
  InitialDataSpec d;
  std::string kind = to_string(d.kind);
  read(j, "kind", kind, "data");
  try {
    d.kind = data_kind_from_string(kind);
  } catch (const SpecError& e) {
    throw ConfigError(e.what());
  }
  read(j, "amplitude", d.amplitude, "data");
  read(j, "width", d.width, "data");
  read(j, "seed", d.seed, "data");
  if (j.contains("center") && !j.at("center").is_null()) {
    double c = 0.0;
    read(j, "center", c, "data");
    d.center = c;
  }
  if (j.contains("modes")) {
    if (!j.at("modes").is_array()) throw ConfigError("data.modes must be an array");
    for (const auto& m : j.at("modes")) {
      reject_unknown(m, "data.modes[]", {"mode", "a", "u"});
      ModeAmplitude ma;
      read(m, "mode", ma.mode, "data.modes[]");
      read(m, "a", ma.a, "data.modes[]");
      read(m, "u", ma.u, "data.modes[]");
      d.modes.push_back(ma);
    }
  }
  read(j, "target_norms", d.target_norms, "data");
  return d;
}

}  // namespace

std::string config_to_string(const RunConfig& c) {
  json j;
  j["model"] = model_json(c.model);
  j["grid"] = {{"n_points", c.grid.n_points}, {"domain_length", c.grid.domain_length}};
  const auto& s = c.stepper;
  j["stepper"] = {{"dt", s.dt},
                  {"t_end", s.t_end},
                  {"cfl_safety", s.cfl_safety},
                  {"sample_interval", s.sample_interval},
                  {"nonlinear", s.nonlinear},
                  {"rho_min", s.rho_min},
                  {"rho_max", s.rho_max}};
  j["data"] = data_json(c.data);
  json outputs = {{"directory", c.outputs.directory}, {"s1", c.outputs.s1}, {"plots", c.outputs.plots}};
  outputs["fit_window"] = c.outputs.fit_window
                              ? json::array({c.outputs.fit_window->first, c.outputs.fit_window->second})
                              : json(nullptr);
  j["outputs"] = outputs;
  const auto& o = c.oracle;
  j["oracle"] = {{"times", o.times},
                 {"s1", o.s1},
                 {"threshold", o.threshold},
                 {"reference", {{"c0", o.ref_c0}, {"eta", o.ref_eta}, {"s1", o.ref_s1}, {"beta", o.ref_beta}}}};
  j["sweep"] = {{"beta", c.sweep.beta},
                {"gamma", c.sweep.gamma},
                {"amplitude", c.sweep.amplitude},
                {"s1", c.sweep.s1}};
  j["guards"] = {{"enforce", c.guards.enforce},
                 {"small_delta", c.guards.small_delta},
                 {"large_gradient", c.guards.large_gradient}};
  return j.dump(2) + "\n";
}

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  reject_unknown(j, "config", {"model", "grid", "stepper", "data", "outputs", "oracle", "sweep", "guards"});
  RunConfig c;
  if (j.contains("model")) c.model = model_from(j.at("model"));
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    reject_unknown(g, "grid", {"n_points", "domain_length"});
    read(g, "n_points", c.grid.n_points, "grid");
    read(g, "domain_length", c.grid.domain_length, "grid");
  }
  if (j.contains("stepper")) {
    const auto& s = j.at("stepper");
    reject_unknown(s, "stepper",
                   {"dt", "t_end", "cfl_safety", "sample_interval", "nonlinear", "rho_min", "rho_max"});
    read(s, "dt", c.stepper.dt, "stepper");
    read(s, "t_end", c.stepper.t_end, "stepper");
    read(s, "cfl_safety", c.stepper.cfl_safety, "stepper");
    read(s, "sample_interval", c.stepper.sample_interval, "stepper");
    read(s, "nonlinear", c.stepper.nonlinear, "stepper");
    read(s, "rho_min", c.stepper.rho_min, "stepper");
    read(s, "rho_max", c.stepper.rho_max, "stepper");
  }
  if (j.contains("data")) c.data = data_from(j.at("data"));
  if (j.contains("outputs")) {
    const auto& o = j.at("outputs");
    reject_unknown(o, "outputs", {"directory", "s1", "plots", "fit_window"});
    read(o, "directory", c.outputs.directory, "outputs");
    read(o, "s1", c.outputs.s1, "outputs");
    read(o, "plots", c.outputs.plots, "outputs");
    if (o.contains("fit_window") && !o.at("fit_window").is_null()) {
      std::vector<double> w;
      read(o, "fit_window", w, "outputs");
      if (w.size() != 2) throw ConfigError("outputs.fit_window must hold two numbers");
      c.outputs.fit_window = std::make_pair(w[0], w[1]);
    }
  }
  if (j.contains("oracle")) {
    const auto& o = j.at("oracle");
    reject_unknown(o, "oracle", {"times", "s1", "threshold", "reference"});
    read(o, "times", c.oracle.times, "oracle");
    read(o, "s1", c.oracle.s1, "oracle");
    read(o, "threshold", c.oracle.threshold, "oracle");
    if (o.contains("reference")) {
      const auto& r = o.at("reference");
      reject_unknown(r, "oracle.reference", {"c0", "eta", "s1", "beta"});
      read(r, "c0", c.oracle.ref_c0, "oracle.reference");
      read(r, "eta", c.oracle.ref_eta, "oracle.reference");
      read(r, "s1", c.oracle.ref_s1, "oracle.reference");
      read(r, "beta", c.oracle.ref_beta, "oracle.reference");
    }
  }
  if (j.contains("sweep")) {
    const auto& s = j.at("sweep");
    reject_unknown(s, "sweep", {"beta", "gamma", "amplitude", "s1"});
    read(s, "beta", c.sweep.beta, "sweep");
    read(s, "gamma", c.sweep.gamma, "sweep");
    read(s, "amplitude", c.sweep.amplitude, "sweep");
    read(s, "s1", c.sweep.s1, "sweep");
  }
  if (j.contains("guards")) {
    const auto& g = j.at("guards");
    reject_unknown(g, "guards", {"enforce", "small_delta", "large_gradient"});
    read(g, "enforce", c.guards.enforce, "guards");
    read(g, "small_delta", c.guards.small_delta, "guards");
    read(g, "large_gradient", c.guards.large_gradient, "guards");
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void save_config(const RunConfig& config, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << config_to_string(config);
}

}  // namespace hypocns
