#pragma once

#include <cstddef>
#include <exception>
#include <iosfwd>
#include <string>
#include <vector>

#include "closedweigh/config.hpp"

namespace closedweigh {

/// Output file could not be written.
class IoError : public Error {
 public:
  using Error::Error;
};

inline constexpr const char* kSchemaVersion = "cwv1";

/// One sweep grid point. Axis values are NaN for unused axes; metric order
/// follows metric_names(experiment).
struct SweepRecord {
  double axis1 = 0.0;
  double axis2 = 0.0;
  bool valid = true;
  std::vector<double> metrics;
  std::string note;
  double wall_seconds = 0.0;  ///< not serialized, so outputs stay byte-stable
};

/// Fixed, versioned metric columns of an experiment (first is always "valid").
const std::vector<std::string>& metric_names(Experiment e);

/// Evaluates every grid point in axis-major order (first axis slowest).
/// Up to `threads` workers; the result does not depend on the thread count.
std::vector<SweepRecord> run_sweep(const RunConfig& config, std::size_t threads = 1);

void write_csv(std::ostream& out, const RunConfig& config, const std::vector<SweepRecord>& records);
void write_json(std::ostream& out, const RunConfig& config, const std::vector<SweepRecord>& records);

/// Renders in the configured format.
std::string render(const RunConfig& config, const std::vector<SweepRecord>& records);

/// Writes `contents` to `path` through a temporary file in the same directory
/// and a rename. Throws IoError.
void write_atomically(const std::string& path, const std::string& contents);

/// Runs the sweep and writes the result to config.output_path (standard
/// output when empty).
void run(const RunConfig& config, std::size_t threads, std::ostream& fallback_out);

/// 2 configuration, 3 numerical, 4 I/O, 1 anything else.
int exit_code_for(const std::exception& e);

/// Single-line JSON error record {"error", "exit_code", "message"}.
std::string error_record(const std::exception& e);

}  // namespace closedweigh
