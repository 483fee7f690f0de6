#include "closedweigh/config.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include <json.hpp>

namespace closedweigh {

using nlohmann::json;

namespace {

constexpr const char* kMeasurement = "internal-measurement";
constexpr const char* kWeighing = "weighing";
constexpr const char* kDisc = "disc";

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

std::string position_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i + 1 < byte; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

void reject_unknown(const json& obj, const std::vector<std::string>& allowed, const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      fail("unknown key '" + key + "' in " + where);
    }
  }
}

const json& require_object(const json& v, const std::string& where) {
  if (!v.is_object()) fail(where + " must be an object");
  return v;
}

double read_number(const json& obj, const std::string& key, double fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number()) fail("'" + key + "' must be a number");
  const double v = it->get<double>();
  if (!std::isfinite(v)) fail("'" + key + "' must be finite");
  return v;
}

std::uint64_t read_unsigned(const json& obj, const std::string& key, std::uint64_t fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number_unsigned()) fail("'" + key + "' must be a non-negative integer");
  return it->get<std::uint64_t>();
}

std::string read_string(const json& obj, const std::string& key, const std::string& fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_string()) fail("'" + key + "' must be a string");
  return it->get<std::string>();
}

// Accessors for every sweepable scalar, keyed by the name used in configs.
using Field = std::function<double&(RunConfig&)>;

const std::map<std::string, Field>& fields(Experiment e) {
  static const std::map<std::string, Field> measurement{
      {"box_energy", [](RunConfig& c) -> double& { return c.measurement.box_energy; }},
      {"total_energy", [](RunConfig& c) -> double& { return c.measurement.total_energy; }},
      {"t_start", [](RunConfig& c) -> double& { return c.measurement.t_start; }},
      {"duration", [](RunConfig& c) -> double& { return c.measurement.duration; }},
      {"pointer_center", [](RunConfig& c) -> double& { return c.measurement.pointer_center; }},
      {"pointer_width", [](RunConfig& c) -> double& { return c.measurement.pointer_width; }},
      {"hbar", [](RunConfig& c) -> double& { return c.measurement.hbar; }},
  };
  static const std::map<std::string, Field> weigh{
      {"M", [](RunConfig& c) -> double& { return c.weighing.shell.M; }},
      {"R", [](RunConfig& c) -> double& { return c.weighing.shell.R; }},
      {"m", [](RunConfig& c) -> double& { return c.weighing.shell.m; }},
      {"v0", [](RunConfig& c) -> double& { return c.weighing.shell.v0; }},
      {"G", [](RunConfig& c) -> double& { return c.weighing.shell.G; }},
      {"c", [](RunConfig& c) -> double& { return c.weighing.shell.c; }},
      {"hbar", [](RunConfig& c) -> double& { return c.weighing.shell.hbar; }},
      {"dz", [](RunConfig& c) -> double& { return c.weighing.dz; }},
  };
  static const std::map<std::string, Field> spin{
      {"I", [](RunConfig& c) -> double& { return c.disc.disc.I; }},
      {"omega", [](RunConfig& c) -> double& { return c.disc.disc.omega; }},
      {"m", [](RunConfig& c) -> double& { return c.disc.disc.m; }},
      {"r", [](RunConfig& c) -> double& { return c.disc.disc.r; }},
      {"T", [](RunConfig& c) -> double& { return c.disc.disc.T; }},
      {"hbar", [](RunConfig& c) -> double& { return c.disc.disc.hbar; }},
      {"dr", [](RunConfig& c) -> double& { return c.disc.dr; }},
  };
  switch (e) {
    case Experiment::internal_measurement: return measurement;
    case Experiment::weighing: return weigh;
    case Experiment::disc: return spin;
  }
  return measurement;
}

std::vector<std::string> parameter_keys(Experiment e) {
  std::vector<std::string> keys = sweep_parameters(e);
  switch (e) {
    case Experiment::internal_measurement:
      keys.insert(keys.end(), {"shape", "tau_points", "z_points"});
      break;
    case Experiment::weighing:
    case Experiment::disc:
      keys.push_back("samples");
      break;
  }
  return keys;
}

SweepAxis parse_axis(const json& v, std::size_t index) {
  const std::string where = "sweep[" + std::to_string(index) + "]";
  require_object(v, where);
  reject_unknown(v, {"name", "min", "max", "n", "spacing"}, where);
  for (const char* key : {"name", "min", "max", "n"}) {
    if (!v.contains(key)) fail(where + " is missing '" + key + "'");
  }
  SweepAxis axis;
  axis.name = read_string(v, "name", "");
  axis.min = read_number(v, "min", 0.0);
  axis.max = read_number(v, "max", 0.0);
  axis.n = read_unsigned(v, "n", 1);
  if (v.contains("spacing")) {
    const std::string s = read_string(v, "spacing", "");
    if (s == "linear") {
      axis.spacing = Spacing::linear;
    } else if (s == "log") {
      axis.spacing = Spacing::log;
    } else {
      fail(where + ".spacing must be 'linear' or 'log', got '" + s + "'");
    }
  } else {
    axis.spacing = (axis.min > 0.0 && axis.max >= 100.0 * axis.min) ? Spacing::log : Spacing::linear;
  }
  return axis;
}

void validate_axes(const RunConfig& c) {
  if (c.sweep.size() > 2) fail("at most two sweep axes are supported");
  const auto names = sweep_parameters(c.experiment);
  for (std::size_t i = 0; i < c.sweep.size(); ++i) {
    const SweepAxis& a = c.sweep[i];
    const std::string where = "sweep axis '" + a.name + "'";
    if (std::find(names.begin(), names.end(), a.name) == names.end()) {
      fail(where + " is not a sweepable parameter of " + to_string(c.experiment));
    }
    if (i == 1 && c.sweep[0].name == a.name) fail(where + " appears twice");
    if (a.n < 1) fail(where + ": n >= 1 required");
    if (!std::isfinite(a.min) || !std::isfinite(a.max)) fail(where + ": bounds must be finite");
    if (a.min > a.max) fail(where + ": min <= max required");
    if (a.spacing == Spacing::log && !(a.min > 0.0)) fail(where + ": log spacing requires min > 0");
  }
}

std::string point_label(const RunConfig& c, const std::vector<double>& at) {
  std::ostringstream out;
  out.precision(17);
  for (std::size_t i = 0; i < at.size(); ++i) out << (i ? ", " : "") << c.sweep[i].name << "=" << at[i];
  return out.str();
}

void validate_point(const RunConfig& c) {
  switch (c.experiment) {
    case Experiment::internal_measurement: {
      const ScenarioParams& p = c.measurement;
      for (std::size_t n : {p.tau_points, p.z_points}) {
        if (n < 16 || n % 16 != 0) fail("grid sizes must be multiples of 16 (support endpoints on grid nodes)");
      }
      if (!(p.duration > 0.0)) fail("duration > 0 required");
      if (!(p.pointer_width > 0.0)) fail("pointer_width > 0 required");
      try {
        make_scenario(p);
      } catch (const SingularityError&) {
        // Admissible input: the point is reported as an invalid record.
      } catch (const Error& e) {
        fail(e.what());
      }
      break;
    }
    case Experiment::weighing:
      try {
        c.weighing.shell.validate();
      } catch (const Error& e) {
        fail(e.what());
      }
      if (!(c.weighing.dz > 0.0)) fail("dz > 0 required");
      if (c.weighing.samples < 1000) fail("samples >= 1000 required");
      break;
    case Experiment::disc:
      try {
        c.disc.disc.validate();
      } catch (const Error& e) {
        fail(e.what());
      }
      if (!(c.disc.dr > 0.0)) fail("dr > 0 required");
      if (c.disc.samples < 1000) fail("samples >= 1000 required");
      break;
  }
}

}  // namespace

std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::internal_measurement: return kMeasurement;
    case Experiment::weighing: return kWeighing;
    case Experiment::disc: return kDisc;
  }
  return kMeasurement;
}

std::string to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

std::string to_string(Spacing s) { return s == Spacing::linear ? "linear" : "log"; }

Experiment parse_experiment(std::string_view text) {
  if (text == kMeasurement) return Experiment::internal_measurement;
  if (text == kWeighing) return Experiment::weighing;
  if (text == kDisc) return Experiment::disc;
  fail("unknown experiment '" + std::string(text) + "' (expected internal-measurement, weighing or disc)");
}

OutputFormat parse_format(std::string_view text) {
  if (text == "csv") return OutputFormat::csv;
  if (text == "json") return OutputFormat::json;
  fail("unknown output format '" + std::string(text) + "' (expected csv or json)");
}

std::vector<double> SweepAxis::values() const {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = min;
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(n - 1);
    out[i] = spacing == Spacing::log ? std::exp(std::log(min) + f * (std::log(max) - std::log(min)))
                                     : min + f * (max - min);
  }
  out.front() = min;
  out.back() = max;
  return out;
}

std::vector<std::string> sweep_parameters(Experiment e) {
  std::vector<std::string> names;
  for (const auto& [name, _] : fields(e)) names.push_back(name);
  return names;
}

RunConfig with_parameter(const RunConfig& config, const std::string& name, double value) {
  const auto& table = fields(config.experiment);
  auto it = table.find(name);
  if (it == table.end()) fail("'" + name + "' is not a parameter of " + to_string(config.experiment));
  RunConfig out = config;
  it->second(out) = value;
  return out;
}

void validate(const RunConfig& config) {
  validate_axes(config);
  validate_point(config);
  if (config.sweep.empty()) return;
  const auto first = config.sweep[0].values();
  const auto second = config.sweep.size() > 1 ? config.sweep[1].values() : std::vector<double>{};
  for (double a : first) {
    RunConfig at = with_parameter(config, config.sweep[0].name, a);
    if (second.empty()) {
      try {
        validate_point(at);
      } catch (const ConfigError& e) {
        fail("sweep point " + point_label(config, {a}) + ": " + e.what());
      }
      continue;
    }
    for (double b : second) {
      try {
        validate_point(with_parameter(at, config.sweep[1].name, b));
      } catch (const ConfigError& e) {
        fail("sweep point " + point_label(config, {a, b}) + ": " + e.what());
      }
    }
  }
}

RunConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    fail("config parse error at " + position_of(text, e.byte) + ": " + e.what());
  }
  require_object(doc, "config");
  reject_unknown(doc, {"experiment", "seed", "output", "parameters", "sweep"}, "config");
  if (!doc.contains("experiment")) fail("config is missing 'experiment'");

  RunConfig c;
  c.experiment = parse_experiment(read_string(doc, "experiment", ""));
  c.seed = read_unsigned(doc, "seed", 0);

  if (doc.contains("output")) {
    const json& out = require_object(doc["output"], "output");
    reject_unknown(out, {"path", "format"}, "output");
    c.output_path = read_string(out, "path", "");
    c.format = parse_format(read_string(out, "format", "csv"));
  }

  if (doc.contains("parameters")) {
    const json& p = require_object(doc["parameters"], "parameters");
    reject_unknown(p, parameter_keys(c.experiment), "parameters of " + to_string(c.experiment));
    for (const auto& [name, field] : fields(c.experiment)) {
      double& slot = field(c);
      slot = read_number(p, name, slot);
    }
    switch (c.experiment) {
      case Experiment::internal_measurement:
        if (p.contains("shape")) {
          try {
            c.measurement.shape = parse_shape(read_string(p, "shape", ""));
          } catch (const ContractViolation& e) {
            fail(e.what());
          }
        }
        c.measurement.tau_points = read_unsigned(p, "tau_points", c.measurement.tau_points);
        c.measurement.z_points = read_unsigned(p, "z_points", c.measurement.z_points);
        break;
      case Experiment::weighing:
        c.weighing.samples = read_unsigned(p, "samples", c.weighing.samples);
        break;
      case Experiment::disc:
        c.disc.samples = read_unsigned(p, "samples", c.disc.samples);
        break;
    }
  }

  if (doc.contains("sweep")) {
    const json& s = doc["sweep"];
    if (!s.is_array()) fail("'sweep' must be an array of axes");
    for (std::size_t i = 0; i < s.size(); ++i) c.sweep.push_back(parse_axis(s[i], i));
  }

  validate(c);
  return c;
}

std::string serialize_config(const RunConfig& config) {
  RunConfig copy = config;
  json params = json::object();
  for (const auto& [name, field] : fields(config.experiment)) params[name] = field(copy);
  switch (config.experiment) {
    case Experiment::internal_measurement:
      params["shape"] = std::string(to_string(config.measurement.shape));
      params["tau_points"] = config.measurement.tau_points;
      params["z_points"] = config.measurement.z_points;
      break;
    case Experiment::weighing:
      params["samples"] = config.weighing.samples;
      break;
    case Experiment::disc:
      params["samples"] = config.disc.samples;
      break;
  }
  json sweep = json::array();
  for (const SweepAxis& a : config.sweep) {
    sweep.push_back({{"name", a.name}, {"min", a.min}, {"max", a.max}, {"n", a.n}, {"spacing", to_string(a.spacing)}});
  }
  json doc{{"experiment", to_string(config.experiment)},
           {"seed", config.seed},
           {"output", {{"path", config.output_path}, {"format", to_string(config.format)}}},
           {"parameters", params},
           {"sweep", sweep}};
  return doc.dump(2);
}

}  // namespace closedweigh
