#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "closedweigh/config.hpp"
#include "closedweigh/harness.hpp"

namespace cw = closedweigh;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw cw::ConfigError("cannot read config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Closed-system measurement simulations"};
  std::string experiment;
  std::string config_path;
  std::uint64_t seed = 0;
  std::string out_path;
  std::string format;
  std::size_t threads = 1;

  app.add_option("experiment", experiment, "internal-measurement | weighing | disc")->required();
  app.add_option("--config", config_path, "JSON run configuration")->required();
  auto* seed_opt = app.add_option("--seed", seed, "overrides the config seed");
  app.add_option("--out", out_path, "result file (default: config output path, else stdout)");
  app.add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    cw::RunConfig config = cw::parse_config(read_file(config_path));
    if (cw::parse_experiment(experiment) != config.experiment) {
      throw cw::ConfigError("command selects '" + experiment + "' but the config describes '" +
                            cw::to_string(config.experiment) + "'");
    }
    if (*seed_opt) config.seed = seed;
    if (!out_path.empty()) config.output_path = out_path;
    if (!format.empty()) config.format = cw::parse_format(format);
    cw::run(config, threads, std::cout);
  } catch (const std::exception& e) {
    std::cerr << cw::error_record(e) << '\n';
    return cw::exit_code_for(e);
  }
  return 0;
}
