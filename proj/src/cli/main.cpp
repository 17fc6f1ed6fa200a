#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "maser/cli.hpp"

namespace maser::cli {

void write_outputs(const RunConfig& config, const CsvTable& table, const std::string& out_path) {
  const std::string csv = table.to_string();
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + out_path + " for writing");
  out << csv;
  if (!out) throw std::runtime_error("failed writing " + out_path);

  nlohmann::ordered_json meta;
  meta["tool"] = kToolName;
  meta["version"] = kToolVersion;
  meta["rows"] = table.rows.size();
  meta["columns"] = table.header;
  meta["config"] = config.resolved();
  std::ofstream side(out_path + ".meta.json", std::ios::binary);
  if (!side) throw std::runtime_error("cannot open " + out_path + ".meta.json for writing");
  side << meta.dump(2) << '\n';
}

int main(int argc, char** argv) {
  CLI::App app{"Stationary thermodynamics, heat decomposition and power fluctuations of a driven three-level maser"};
  app.set_version_flag("--version", std::string(kToolVersion));
  std::string mode_name;
  std::string config_path;
  std::string out_path;
  int workers = 0;
  app.add_option("mode", mode_name, "stationary | sweep | dynamics | fcs | flows | tur-scan")->required();
  app.add_option("--config", config_path, "JSON configuration file")->required();
  app.add_option("--out", out_path, "CSV output path")->required();
  app.add_option("--workers", workers, "worker threads for grid evaluations")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  RunConfig config;
  try {
    config = load_config(config_path, parse_mode(mode_name));
    if (workers > 0) config.workers = workers;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }

  try {
    write_outputs(config, run(config), out_path);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const InvariantError& e) {
    std::cerr << "invariant failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace maser::cli
