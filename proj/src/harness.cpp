#include "closedweigh/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "closedweigh/parallel.hpp"

namespace closedweigh {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> measurement_metrics(const DurationSweepRecord& r) {
  return {r.valid ? 1.0 : 0.0, r.success ? 1.0 : 0.0, r.mean_shift, r.bias, r.spread, r.pointer_dp,
          r.clock_spread, r.duration_product, r.resolution_product, r.clock_product, r.max_abs_gz};
}

SweepRecord evaluate(const RunConfig& c, std::size_t threads) {
  SweepRecord rec;
  switch (c.experiment) {
    case Experiment::internal_measurement: {
      const DurationSweepRecord r = evaluate_duration_point(c.measurement);
      rec.valid = r.valid;
      rec.metrics = measurement_metrics(r);
      rec.note = r.note;
      break;
    }
    case Experiment::weighing: {
      const auto& w = c.weighing;
      const double tau = weighing::return_time(w.shell);
      const double dp = w.shell.hbar / (2.0 * w.dz);
      const auto mc = weighing::monte_carlo_weighing(w.shell, w.dz, w.samples, c.seed, threads);
      rec.metrics = {1.0,
                     tau,
                     weighing::dilation_spread(w.shell, w.dz, tau),
                     dp,
                     weighing::threshold_mass(w.shell, dp, tau),
                     weighing::product_identity(w.shell, w.dz, dp, tau),
                     mc.mean_mass,
                     mc.mass_spread,
                     mc.clock_spread,
                     mc.product,
                     mc.sampled_dz,
                     mc.sampled_dp};
      break;
    }
    case Experiment::disc: {
      const auto& d = c.disc;
      const double dp = d.disc.hbar / (2.0 * d.dr);
      const auto back = disc::back_reaction_spread(d.disc, d.dr);
      const auto report = disc::angular_product(d.disc, d.dr, dp);
      const auto mc = disc::monte_carlo_disc(d.disc, d.dr, d.samples, c.seed, threads);
      rec.metrics = {1.0,          back.d_omega,    back.d_theta,    dp,          report.d_L,     report.product,
                     mc.omega_spread, mc.theta_spread, mc.d_L,       mc.product,  mc.sampled_dr,  mc.sampled_dp};
      break;
    }
  }
  return rec;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

bool is_flag(const std::string& name) { return name == "valid" || name == "success"; }

// The echo omits the output location so that the same run written to two
// different paths produces identical bytes.
nlohmann::json config_echo(const RunConfig& config) {
  RunConfig echo = config;
  echo.output_path.clear();
  auto doc = nlohmann::json::parse(serialize_config(echo));
  doc["output"].erase("path");
  return doc;
}

}  // namespace

const std::vector<std::string>& metric_names(Experiment e) {
  static const std::vector<std::string> measurement{
      "valid", "success", "mean_shift", "bias", "spread", "pointer_dp", "clock_spread", "duration_product",
      "resolution_product", "clock_product", "max_abs_gz"};
  static const std::vector<std::string> weigh{
      "valid", "return_time", "dilation_spread", "pointer_dp", "threshold_mass", "identity_product",
      "mc_mean_mass", "mc_mass_spread", "mc_clock_spread", "mc_product", "mc_sampled_dz", "mc_sampled_dp"};
  static const std::vector<std::string> spin{
      "valid", "d_omega", "d_theta", "pointer_dp", "d_L", "identity_product",
      "mc_omega_spread", "mc_theta_spread", "mc_d_L", "mc_product", "mc_sampled_dr", "mc_sampled_dp"};
  switch (e) {
    case Experiment::internal_measurement: return measurement;
    case Experiment::weighing: return weigh;
    case Experiment::disc: return spin;
  }
  return measurement;
}

std::vector<SweepRecord> run_sweep(const RunConfig& config, std::size_t threads) {
  validate(config);
  const auto first = config.sweep.size() > 0 ? config.sweep[0].values() : std::vector<double>{kNaN};
  const auto second = config.sweep.size() > 1 ? config.sweep[1].values() : std::vector<double>{kNaN};
  const std::size_t total = first.size() * second.size();
  std::vector<SweepRecord> records(total);
  const std::size_t inner_threads = total == 1 ? threads : 1;

  parallel_for(total, threads, [&](std::size_t k) {
    const double a = first[k / second.size()];
    const double b = second[k % second.size()];
    RunConfig point = config;
    if (config.sweep.size() > 0) point = with_parameter(point, config.sweep[0].name, a);
    if (config.sweep.size() > 1) point = with_parameter(point, config.sweep[1].name, b);
    const auto start = std::chrono::steady_clock::now();
    SweepRecord rec = evaluate(point, inner_threads);
    rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    rec.axis1 = a;
    rec.axis2 = b;
    records[k] = std::move(rec);
  });
  return records;
}

void write_csv(std::ostream& out, const RunConfig& config, const std::vector<SweepRecord>& records) {
  const auto& names = metric_names(config.experiment);
  out << "schema,axis1,axis2";
  for (const auto& n : names) out << ',' << n;
  out << ",note\n";
  for (const auto& r : records) {
    out << kSchemaVersion << ',' << (config.sweep.size() > 0 ? format_number(r.axis1) : "") << ','
        << (config.sweep.size() > 1 ? format_number(r.axis2) : "");
    for (double v : r.metrics) out << ',' << format_number(v);
    out << ',' << csv_field(r.note) << '\n';
  }
}

void write_json(std::ostream& out, const RunConfig& config, const std::vector<SweepRecord>& records) {
  const auto& names = metric_names(config.experiment);
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : records) {
    nlohmann::json row = nlohmann::json::object();
    if (config.sweep.size() > 0) row["axis1"] = r.axis1;
    if (config.sweep.size() > 1) row["axis2"] = r.axis2;
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (is_flag(names[i])) {
        row[names[i]] = r.metrics[i] != 0.0;
      } else {
        row[names[i]] = r.metrics[i];  // NaN is emitted as null
      }
    }
    row["note"] = r.note;
    rows.push_back(std::move(row));
  }
  nlohmann::json doc{{"schema", kSchemaVersion}, {"config", config_echo(config)}, {"records", rows}};
  out << doc.dump(2) << '\n';
}

std::string render(const RunConfig& config, const std::vector<SweepRecord>& records) {
  std::ostringstream out;
  if (config.format == OutputFormat::csv) {
    write_csv(out, config, records);
  } else {
    write_json(out, config, records);
  }
  return out.str();
}

void write_atomically(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path temp = target;
  temp += ".tmp";
  {
    std::ofstream file(temp, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError("cannot open '" + temp.string() + "' for writing");
    file.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    file.flush();
    if (!file) throw IoError("failed writing '" + temp.string() + "'");
  }
  std::error_code ec;
  fs::rename(temp, target, ec);
  if (ec) {
    fs::remove(temp, ec);
    throw IoError("cannot move result into '" + path + "'");
  }
}

void run(const RunConfig& config, std::size_t threads, std::ostream& fallback_out) {
  const std::string text = render(config, run_sweep(config, threads));
  if (config.output_path.empty()) {
    fallback_out << text;
    fallback_out.flush();
    if (!fallback_out) throw IoError("failed writing to standard output");
  } else {
    write_atomically(config.output_path, text);
  }
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const InvariantViolation*>(&e)) return 2;
  if (dynamic_cast<const IoError*>(&e)) return 4;
  if (dynamic_cast<const Error*>(&e)) return 3;
  return 1;
}

std::string error_record(const std::exception& e) {
  const int code = exit_code_for(e);
  const char* kind = code == 2 ? "config" : code == 3 ? "numerical" : code == 4 ? "io" : "internal";
  return nlohmann::json{{"error", kind}, {"exit_code", code}, {"message", e.what()}}.dump();
}

}  // namespace closedweigh
