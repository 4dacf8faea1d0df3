#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "admflow/admissible.hpp"
#include "admflow/errors.hpp"
#include "admflow/flow.hpp"
#include "admflow/rational.hpp"

namespace admflow {

struct OutputSpec {
  std::string dir = ".";
  double interval = 0.05;  // trajectory recording interval (flow time)
};

struct RunConfig {
  AdmissibleData data;
  FlowConfig flow;
  InitialSpec initial;
  OutputSpec outputs;
  std::vector<Rational> sweep_scales;  // empty when no sweep requested
};

namespace detail {

using json = nlohmann::ordered_json;

[[noreturn]] inline void config_error(const std::string& path,
                                      const std::string& what) {
  throw Error(ErrorKind::InvalidInput, "config error at " + path + ": " + what);
}

inline Rational rational_field(const json& v, const std::string& path) {
  try {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<long>());
    if (v.is_number_float()) return rational_from_double(v.get<double>());
  } catch (const Error& e) {
    config_error(path, e.what());
  }
  config_error(path, "expected a rational (\"p/q\" string or number)");
}

inline double double_field(const json& v, const std::string& path) {
  if (!v.is_number()) config_error(path, "expected a number");
  return v.get<double>();
}

inline int int_field(const json& v, const std::string& path) {
  if (!v.is_number_integer()) config_error(path, "expected an integer");
  return v.get<int>();
}

}  // namespace detail

inline RunConfig parse_config(const std::string& text) {
  using detail::config_error;
  detail::json root;
  try {
    root = detail::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidInput,
                std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) config_error("$", "expected a JSON object");

  RunConfig cfg;
  if (!root.contains("factors") || !root["factors"].is_array())
    config_error("factors", "required array of {d, s, x}");
  std::size_t idx = 0;
  for (const auto& f : root["factors"]) {
    std::string where = "factors[" + std::to_string(idx) + "]";
    if (!f.is_object()) config_error(where, "expected an object");
    for (const char* key : {"d", "s", "x"})
      if (!f.contains(key)) config_error(where + "." + key, "missing");
    BaseFactor bf;
    bf.d = detail::int_field(f["d"], where + ".d");
    bf.s = detail::rational_field(f["s"], where + ".s");
    bf.x = detail::rational_field(f["x"], where + ".x");
    cfg.data.factors.push_back(bf);
    ++idx;
  }
  if (!root.contains("d0")) config_error("d0", "missing");
  if (!root.contains("dinf")) config_error("dinf", "missing");
  cfg.data.d0 = detail::int_field(root["d0"], "d0");
  cfg.data.dinf = detail::int_field(root["dinf"], "dinf");
  {
    auto issues = validate(cfg.data);
    if (!issues.empty()) {
      std::string msg = "invalid admissible data:";
      for (const auto& s : issues) msg += "\n  " + s;
      throw Error(ErrorKind::InvalidInput, msg);
    }
  }

  if (root.contains("grid")) {
    const auto& g = root["grid"];
    if (!g.is_object()) config_error("grid", "expected an object");
    if (g.contains("n")) cfg.flow.n = detail::int_field(g["n"], "grid.n");
  }
  if (root.contains("flow")) {
    const auto& fl = root["flow"];
    if (!fl.is_object()) config_error("flow", "expected an object");
    if (fl.contains("cfl")) cfg.flow.cfl = detail::double_field(fl["cfl"], "flow.cfl");
    if (fl.contains("dt_max"))
      cfg.flow.dt_max = detail::double_field(fl["dt_max"], "flow.dt_max");
    if (fl.contains("t_end"))
      cfg.flow.t_end = detail::double_field(fl["t_end"], "flow.t_end");
    if (fl.contains("tol_conv"))
      cfg.flow.tol_conv = detail::double_field(fl["tol_conv"], "flow.tol_conv");
  }
  if (root.contains("initial")) {
    const auto& in = root["initial"];
    if (!in.is_object()) config_error("initial", "expected an object");
    if (in.contains("type")) {
      std::string t = in["type"].is_string() ? in["type"].get<std::string>() : "";
      if (t == "canonical")
        cfg.initial.type = InitialSpec::Type::Canonical;
      else if (t == "perturbed")
        cfg.initial.type = InitialSpec::Type::Perturbed;
      else
        config_error("initial.type", "expected \"canonical\" or \"perturbed\"");
    }
    if (in.contains("amplitude"))
      cfg.initial.amplitude =
          detail::double_field(in["amplitude"], "initial.amplitude");
    if (in.contains("power"))
      cfg.initial.power = detail::int_field(in["power"], "initial.power");
  }
  if (root.contains("sweep")) {
    const auto& sw = root["sweep"];
    if (!sw.is_object() || !sw.contains("scales") || !sw["scales"].is_array())
      config_error("sweep", "expected an object with a scales array");
    std::size_t i = 0;
    for (const auto& s : sw["scales"]) {
      Rational eps =
          detail::rational_field(s, "sweep.scales[" + std::to_string(i) + "]");
      if (!(eps > 0 && eps <= 1))
        config_error("sweep.scales[" + std::to_string(i) + "]",
                     "scale must lie in (0, 1]");
      cfg.sweep_scales.push_back(eps);
      ++i;
    }
  }
  if (root.contains("outputs")) {
    const auto& o = root["outputs"];
    if (!o.is_object()) config_error("outputs", "expected an object");
    if (o.contains("dir")) {
      if (!o["dir"].is_string()) config_error("outputs.dir", "expected a string");
      cfg.outputs.dir = o["dir"].get<std::string>();
    }
    if (o.contains("interval"))
      cfg.outputs.interval = detail::double_field(o["interval"], "outputs.interval");
  }
  cfg.flow.output_interval = cfg.outputs.interval;
  validate(cfg.flow);
  return cfg;
}

inline std::string serialize_config(const RunConfig& cfg) {
  detail::json root;
  root["factors"] = detail::json::array();
  for (const auto& f : cfg.data.factors)
    root["factors"].push_back({{"d", f.d},
                               {"s", format_rational(f.s)},
                               {"x", format_rational(f.x)}});
  root["d0"] = cfg.data.d0;
  root["dinf"] = cfg.data.dinf;
  root["grid"] = {{"n", cfg.flow.n}};
  root["flow"] = {{"cfl", cfg.flow.cfl},
                  {"dt_max", cfg.flow.dt_max},
                  {"t_end", cfg.flow.t_end},
                  {"tol_conv", cfg.flow.tol_conv}};
  root["initial"] = {
      {"type",
       cfg.initial.type == InitialSpec::Type::Canonical ? "canonical"
                                                        : "perturbed"},
      {"amplitude", cfg.initial.amplitude},
      {"power", cfg.initial.power}};
  if (!cfg.sweep_scales.empty()) {
    detail::json scales = detail::json::array();
    for (const auto& s : cfg.sweep_scales) scales.push_back(format_rational(s));
    root["sweep"] = {{"scales", scales}};
  }
  root["outputs"] = {{"dir", cfg.outputs.dir}, {"interval", cfg.outputs.interval}};
  return root.dump(2) + "\n";
}

}  // namespace admflow
