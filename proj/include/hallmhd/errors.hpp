#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hallmhd {

struct DimensionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParameterError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Step was rejected because dt exceeds the admissible Hall-CFL bound.
struct CflError : std::runtime_error {
  double admissible_dt;
  CflError(const std::string& msg, double adm)
      : std::runtime_error(msg), admissible_dt(adm) {}
};

// Non-finite values appeared; carries the time of the last good state.
struct BlowUpError : std::runtime_error {
  double last_good_t;
  BlowUpError(const std::string& msg, double t)
      : std::runtime_error(msg), last_good_t(t) {}
};

// |B|^2 dropped below the admissibility floor of the regularized Ohm law.
struct MagneticNullError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The (B,j) formulation cannot recover j; caller should use (B,E).
struct FormulationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InsufficientDataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SnapshotError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StreamError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Collects every problem found while validating a config, not just the first.
struct ConfigError : std::runtime_error {
  std::vector<std::string> issues;
  explicit ConfigError(std::vector<std::string> list)
      : std::runtime_error(join(list)), issues(std::move(list)) {}
  explicit ConfigError(const std::string& one)
      : ConfigError(std::vector<std::string>{one}) {}

 private:
  static std::string join(const std::vector<std::string>& list) {
    std::string out;
    for (const auto& s : list) {
      if (!out.empty()) out += "\n";
      out += s;
    }
    return out;
  }
};

}  // namespace hallmhd
