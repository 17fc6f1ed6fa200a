#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "maser/dissipator.hpp"
#include "maser/dynamics.hpp"
#include "maser/error.hpp"

namespace maser::cli {

inline constexpr const char* kToolName = "maser";
inline constexpr const char* kToolVersion = "1.0.0";

// Raised for malformed or inconsistent configuration. `where` is either
// "line N, column M" (syntax) or the dotted field path (semantics).
class ConfigError : public Error {
 public:
  ConfigError(const std::string& where, const std::string& what)
      : Error(where + ": " + what), where_(where) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

enum class Mode { Stationary, Sweep, Dynamics, Fcs, Flows, TurScan };

Mode parse_mode(const std::string& name);
const char* to_string(Mode mode);

struct Axis {
  std::string name;  // "omega20", "lambda" or "omega"
  double min = 0.0;
  double max = 0.0;
  int count = 0;

  double value(int i) const;
};

struct InitialState {
  enum class Kind { Ground, Stationary, Rotating, BareMatrix } kind = Kind::Ground;
  Vector5 core = Vector5::Zero();
  std::complex<double> coh01{0.0, 0.0};
  std::complex<double> coh02{0.0, 0.0};
  Eigen::Matrix3cd bare = Eigen::Matrix3cd::Zero();
};

// All energies are multiples of omega10 (omega0 = 0, omega1 = 1). When an
// absolute `omega10` is given, energies are divided by it and inverse
// temperatures multiplied by it before anything else happens.
struct RunConfig {
  Mode mode = Mode::Stationary;
  double omega10 = 1.0;
  double omega20 = 2.5;
  double lambda = 0.5;
  double beta_c = 5.0;
  double beta_h = 1.0;
  CouplingScheme scheme = CouplingScheme::resonant(2.0);
  std::optional<double> omega;  // empty means optimal frequency
  std::vector<Axis> axes;       // outer axis first
  IntegrationOptions integration;
  InitialState initial;
  int workers = 1;

  bool optimal_frequency() const { return !omega.has_value(); }
  EngineParams params() const;
  EngineParams params_at(double omega20_ratio, double lambda_ratio, std::optional<double> drive) const;
  nlohmann::ordered_json resolved() const;
};

// Parses a JSON config document. `mode` overrides any "mode" key in the file.
RunConfig parse_config(const std::string& text, Mode mode);
RunConfig load_config(const std::string& path, Mode mode);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string to_string() const;
};

// Shortest round-trip decimal, "NA" for non-finite values.
std::string format_number(double x);

CsvTable run_stationary(const RunConfig& config);
CsvTable run_sweep(const RunConfig& config);
CsvTable run_dynamics(const RunConfig& config);
CsvTable run_fcs(const RunConfig& config);
CsvTable run_flows(const RunConfig& config);
CsvTable run_tur_scan(const RunConfig& config);
CsvTable run(const RunConfig& config);

// Writes the table and `<out>.meta.json`.
void write_outputs(const RunConfig& config, const CsvTable& table, const std::string& out_path);

// Entry point shared by the executable and the tests. Returns the exit code:
// 0 success, 1 usage or I/O error, 2 config error, 3 invariant failure.
int main(int argc, char** argv);

}  // namespace maser::cli
