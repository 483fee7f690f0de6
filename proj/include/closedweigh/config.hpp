#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "closedweigh/disc.hpp"
#include "closedweigh/errors.hpp"
#include "closedweigh/measurement.hpp"
#include "closedweigh/weighing.hpp"

namespace closedweigh {

/// Malformed or out-of-range configuration. Parse errors carry the position.
class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class Experiment { internal_measurement, weighing, disc };
enum class OutputFormat { csv, json };
enum class Spacing { linear, log };

std::string to_string(Experiment e);
std::string to_string(OutputFormat f);
std::string to_string(Spacing s);
Experiment parse_experiment(std::string_view text);
OutputFormat parse_format(std::string_view text);

struct SweepAxis {
  std::string name;
  double min = 0.0;
  double max = 0.0;
  std::size_t n = 1;
  Spacing spacing = Spacing::linear;

  std::vector<double> values() const;
  bool operator==(const SweepAxis&) const = default;
};

struct WeighingParams {
  weighing::ShellExperiment shell{1e12, 1e4, 1e9, 100.0, 1.0, 1e6, 1.0};
  double dz = 1e-7;
  std::size_t samples = 10000;
  bool operator==(const WeighingParams&) const = default;
};

struct DiscParams {
  disc::DiscExperiment disc{1.0, 1.0, 1e-6, 1.0, 1.0, 1.0};
  double dr = 1e-3;
  std::size_t samples = 10000;
  bool operator==(const DiscParams&) const = default;
};

struct RunConfig {
  Experiment experiment = Experiment::internal_measurement;
  ScenarioParams measurement;
  WeighingParams weighing;
  DiscParams disc;
  std::vector<SweepAxis> sweep;  ///< at most two
  std::uint64_t seed = 0;
  std::string output_path;       ///< empty: standard output
  OutputFormat format = OutputFormat::csv;

  bool operator==(const RunConfig&) const = default;
};

/// Parameter names a sweep axis may use for the given experiment.
std::vector<std::string> sweep_parameters(Experiment e);

/// Copy of `config` with the named parameter set to `value`.
RunConfig with_parameter(const RunConfig& config, const std::string& name, double value);

/// Strict JSON parse: unknown keys, wrong types and out-of-range values are
/// ConfigErrors. Every sweep point is validated before returning.
RunConfig parse_config(std::string_view text);

/// JSON document that parse_config maps back to an equal RunConfig.
std::string serialize_config(const RunConfig& config);

/// Checks the invariants of the selected experiment at the base point and at
/// every sweep point.
void validate(const RunConfig& config);

}  // namespace closedweigh
