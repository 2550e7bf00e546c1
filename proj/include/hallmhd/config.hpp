#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hallmhd/errors.hpp"
#include "hallmhd/scaling.hpp"

namespace hallmhd {

enum class RunMode {
  hall3d,
  coupled3d,
  axi,
  kmc,
  maxreg,
  eps_sweep,
  scaling,
  verify,
};

inline std::optional<RunMode> mode_from_string(const std::string& s) {
  if (s == "hall3d") return RunMode::hall3d;
  if (s == "coupled3d") return RunMode::coupled3d;
  if (s == "axi") return RunMode::axi;
  if (s == "kmc") return RunMode::kmc;
  if (s == "maxreg") return RunMode::maxreg;
  if (s == "eps-sweep") return RunMode::eps_sweep;
  if (s == "scaling") return RunMode::scaling;
  if (s == "verify") return RunMode::verify;
  return std::nullopt;
}

inline std::string to_string(RunMode m) {
  switch (m) {
    case RunMode::hall3d: return "hall3d";
    case RunMode::coupled3d: return "coupled3d";
    case RunMode::axi: return "axi";
    case RunMode::kmc: return "kmc";
    case RunMode::maxreg: return "maxreg";
    case RunMode::eps_sweep: return "eps-sweep";
    case RunMode::scaling: return "scaling";
    case RunMode::verify: return "verify";
  }
  return "?";
}

struct RunConfig {
  RunMode mode = RunMode::verify;

  // 3D solvers
  int n = 32;
  double t_end = 0.0;
  double dt = 0.0;  // 0 -> CFL-chosen
  std::string scheme;  // empty -> mode default
  double cfl_safety = 0.5;
  bool adapt = false;
  int diag_stride = 1;
  std::string ic;  // empty -> mode default preset
  double amplitude = 1.0;
  double k0 = 2.0;
  int kmax_ic = 0;  // 0 -> full retained band
  std::uint64_t seed = 1;

  // axisymmetric
  int nx = 256, nr = 256;
  double lx = 4.0, r_outer = 4.0;
  double ring_rc = 1.0, ring_sigma = 0.25, ring_mx = 0.0;

  // swirl-wave Riemann runs
  double b_left = 0.0, b_right = 0.0, r0 = 1.0;
  bool visc = false;

  // regularized runs
  double eps = 1e-2;
  std::vector<double> eps_list;

  // scaling
  PhysicalParams phys;
  double threshold = 0.1;

  std::string out_dir = ".";
  std::string resume;

  std::vector<std::string> warnings;
};

namespace cfgdetail {

inline std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

struct KeyVal {
  int line;
  std::string key, val;
};

inline bool parse_double(const std::string& s, double& out) {
  try {
    std::size_t pos = 0;
    out = std::stod(s, &pos);
    return pos == s.size();
  } catch (...) {
    return false;
  }
}

inline bool parse_int(const std::string& s, long long& out) {
  try {
    std::size_t pos = 0;
    out = std::stoll(s, &pos);
    return pos == s.size();
  } catch (...) {
    return false;
  }
}

inline bool parse_bool(const std::string& s, bool& out) {
  if (s == "true" || s == "yes" || s == "1") { out = true; return true; }
  if (s == "false" || s == "no" || s == "0") { out = false; return true; }
  return false;
}

}  // namespace cfgdetail

// key = value per line, '#' comments, every error reported with its line
// number; duplicate keys are last-wins with a recorded warning.
inline RunConfig parse_config(const std::string& text,
                              std::optional<RunMode> cli_mode = std::nullopt) {
  using namespace cfgdetail;
  std::vector<std::string> errors;
  std::vector<KeyVal> entries;
  std::map<std::string, int> first_line;

  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  RunConfig cfg;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back("line " + std::to_string(lineno) +
                       ": expected 'key = value'");
      continue;
    }
    KeyVal kv{lineno, trim(line.substr(0, eq)), trim(line.substr(eq + 1))};
    if (kv.key.empty()) {
      errors.push_back("line " + std::to_string(lineno) + ": empty key");
      continue;
    }
    auto it = first_line.find(kv.key);
    if (it != first_line.end())
      cfg.warnings.push_back("line " + std::to_string(lineno) +
                             ": duplicate key '" + kv.key +
                             "' overrides line " + std::to_string(it->second));
    first_line[kv.key] = lineno;
    entries.push_back(std::move(kv));
  }

  auto bad = [&](const KeyVal& kv, const std::string& why) {
    errors.push_back("line " + std::to_string(kv.line) + ": key '" + kv.key +
                     "': " + why);
  };

  std::optional<RunMode> file_mode;
  bool t_end_seen = false, b_left_seen = false, b_right_seen = false;

  for (const KeyVal& kv : entries) {
    const std::string& k = kv.key;
    const std::string& v = kv.val;
    double d;
    long long i;
    bool b;
    if (k == "mode") {
      auto m = mode_from_string(v);
      if (!m) { bad(kv, "unknown mode '" + v + "'"); continue; }
      file_mode = m;
    } else if (k == "n") {
      if (!parse_int(v, i)) { bad(kv, "not an integer"); continue; }
      if (i < 4 || i % 2 != 0) { bad(kv, "resolution must be even and >= 4"); continue; }
      cfg.n = static_cast<int>(i);
    } else if (k == "t_end") {
      if (!parse_double(v, d)) { bad(kv, "not a number"); continue; }
      if (d < 0) { bad(kv, "must be >= 0"); continue; }
      cfg.t_end = d;
      t_end_seen = true;
    } else if (k == "dt") {
      if (!parse_double(v, d) || d < 0) { bad(kv, "must be a number >= 0"); continue; }
      cfg.dt = d;
    } else if (k == "scheme") {
      if (v != "imex_euler" && v != "imex_rk2" && v != "integrating_factor_rk4" &&
          v != "if_rk4") { bad(kv, "unknown scheme '" + v + "'"); continue; }
      cfg.scheme = v;
    } else if (k == "cfl_safety") {
      if (!parse_double(v, d) || !(d > 0) || d > 1) { bad(kv, "must lie in (0,1]"); continue; }
      cfg.cfl_safety = d;
    } else if (k == "adapt") {
      if (!parse_bool(v, b)) { bad(kv, "not a boolean"); continue; }
      cfg.adapt = b;
    } else if (k == "diag_stride") {
      if (!parse_int(v, i) || i < 1) { bad(kv, "must be a positive integer"); continue; }
      cfg.diag_stride = static_cast<int>(i);
    } else if (k == "ic") {
      cfg.ic = v;
    } else if (k == "amplitude") {
      if (!parse_double(v, d)) { bad(kv, "not a number"); continue; }
      cfg.amplitude = d;
    } else if (k == "k0") {
      if (!parse_double(v, d) || !(d > 0)) { bad(kv, "must be > 0"); continue; }
      cfg.k0 = d;
    } else if (k == "kmax_ic") {
      if (!parse_int(v, i) || i < 0) { bad(kv, "must be a nonnegative integer"); continue; }
      cfg.kmax_ic = static_cast<int>(i);
    } else if (k == "seed") {
      unsigned long long u;
      try {
        std::size_t pos = 0;
        u = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
      } catch (...) { bad(kv, "not an unsigned integer"); continue; }
      cfg.seed = u;
    } else if (k == "nx") {
      if (!parse_int(v, i) || i < 8) { bad(kv, "must be an integer >= 8"); continue; }
      cfg.nx = static_cast<int>(i);
    } else if (k == "nr") {
      if (!parse_int(v, i) || i < 8) { bad(kv, "must be an integer >= 8"); continue; }
      cfg.nr = static_cast<int>(i);
    } else if (k == "lx") {
      if (!parse_double(v, d) || !(d > 0)) { bad(kv, "must be > 0"); continue; }
      cfg.lx = d;
    } else if (k == "r_outer") {
      if (!parse_double(v, d) || !(d > 0)) { bad(kv, "must be > 0"); continue; }
      cfg.r_outer = d;
    } else if (k == "ring_rc") {
      if (!parse_double(v, d) || !(d > 0)) { bad(kv, "must be > 0"); continue; }
      cfg.ring_rc = d;
    } else if (k == "ring_sigma") {
      if (!parse_double(v, d) || !(d > 0)) { bad(kv, "must be > 0"); continue; }
      cfg.ring_sigma = d;
    } else if (k == "ring_mx") {
      if (!parse_double(v, d)) { bad(kv, "not a number"); continue; }
      cfg.ring_mx = d;
    } else if (k == "b_left") {
      if (!parse_double(v, d)) { bad(kv, "not a number"); continue; }
      cfg.b_left = d;
      b_left_seen = true;
    } else if (k == "b_right") {
      if (!parse_double(v, d)) { bad(kv, "not a number"); continue; }
      cfg.b_right = d;
      b_right_seen = true;
    } else if (k == "r0") {
      if (!parse_double(v, d) || !(d > 0)) { bad(kv, "must be > 0"); continue; }
      cfg.r0 = d;
    } else if (k == "visc") {
      if (!parse_bool(v, b)) { bad(kv, "not a boolean"); continue; }
      cfg.visc = b;
    } else if (k == "eps") {
      if (!parse_double(v, d) || !(d > 0)) { bad(kv, "must be > 0"); continue; }
      cfg.eps = d;
    } else if (k == "eps_list") {
      std::vector<double> list;
      std::istringstream ss(v);
      std::string item;
      bool ok = true;
      while (std::getline(ss, item, ',')) {
        double e;
        if (!parse_double(trim(item), e) || !(e > 0)) { ok = false; break; }
        list.push_back(e);
      }
      if (!ok || list.empty()) { bad(kv, "expected comma-separated positive numbers"); continue; }
      cfg.eps_list = std::move(list);
    } else if (k == "m_e") {
      if (!parse_double(v, d) || !(d > 0)) { bad(kv, "must be > 0"); continue; }
      cfg.phys.m_e = d;
    } else if (k == "m_i") {
      if (!parse_double(v, d) || !(d > 0)) { bad(kv, "must be > 0"); continue; }
      cfg.phys.m_i = d;
    } else if (k == "temperature") {
      if (!parse_double(v, d) || !(d > 0)) { bad(kv, "must be > 0"); continue; }
      cfg.phys.T = d;
    } else if (k == "n0") {
      if (!parse_double(v, d) || !(d > 0)) { bad(kv, "must be > 0"); continue; }
      cfg.phys.n0 = d;
    } else if (k == "x0") {
      if (!parse_double(v, d) || !(d > 0)) { bad(kv, "must be > 0"); continue; }
      cfg.phys.x0 = d;
    } else if (k == "eta_phys") {
      if (!parse_double(v, d) || d < 0) { bad(kv, "must be >= 0"); continue; }
      cfg.phys.eta_phys = d;
    } else if (k == "j0") {
      if (!parse_double(v, d) || !(d > 0)) { bad(kv, "must be > 0"); continue; }
      cfg.phys.j0 = d;
    } else if (k == "threshold") {
      if (!parse_double(v, d) || !(d > 0) || !(d < 1)) { bad(kv, "must lie in (0,1)"); continue; }
      cfg.threshold = d;
    } else if (k == "out_dir") {
      cfg.out_dir = v;
    } else {
      bad(kv, "unknown key");
    }
  }

  if (cli_mode && file_mode && *cli_mode != *file_mode)
    errors.push_back("mode '" + to_string(*file_mode) +
                     "' in the config conflicts with the requested mode '" +
                     to_string(*cli_mode) + "'");
  if (cli_mode)
    cfg.mode = *cli_mode;
  else if (file_mode)
    cfg.mode = *file_mode;
  else
    errors.push_back("no mode given (CLI argument or 'mode = ...' line)");

  // mode-specific requirements
  switch (cfg.mode) {
    case RunMode::hall3d:
    case RunMode::coupled3d:
    case RunMode::maxreg:
      if (!t_end_seen) errors.push_back("missing required key 't_end'");
      break;
    case RunMode::eps_sweep:
      if (!t_end_seen) errors.push_back("missing required key 't_end'");
      if (cfg.eps_list.empty()) errors.push_back("missing required key 'eps_list'");
      break;
    case RunMode::axi:
      if (!t_end_seen) errors.push_back("missing required key 't_end'");
      break;
    case RunMode::kmc:
      if (!t_end_seen) errors.push_back("missing required key 't_end'");
      if (!b_left_seen) errors.push_back("missing required key 'b_left'");
      if (!b_right_seen) errors.push_back("missing required key 'b_right'");
      break;
    case RunMode::scaling:
      if (!(cfg.phys.T > 0)) errors.push_back("missing required key 'temperature'");
      if (!(cfg.phys.n0 > 0)) errors.push_back("missing required key 'n0'");
      if (!(cfg.phys.x0 > 0)) errors.push_back("missing required key 'x0'");
      if (!(cfg.phys.j0 > 0)) errors.push_back("missing required key 'j0'");
      break;
    case RunMode::verify:
      break;
  }

  if (!errors.empty()) throw ConfigError(std::move(errors));

  if (cfg.scheme.empty())
    cfg.scheme = cfg.mode == RunMode::hall3d ? "integrating_factor_rk4"
                                             : "imex_rk2";
  if (cfg.ic.empty()) {
    switch (cfg.mode) {
      case RunMode::hall3d: cfg.ic = "random"; break;
      case RunMode::coupled3d: cfg.ic = "random"; break;
      case RunMode::maxreg:
      case RunMode::eps_sweep: cfg.ic = "smooth_null_free"; break;
      case RunMode::axi: cfg.ic = "swirl_ring"; break;
      default: break;
    }
  }
  return cfg;
}

}  // namespace hallmhd
