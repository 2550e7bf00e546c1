#pragma once

#include <cstdio>
#include <optional>
#include <ostream>
#include <string>

#include "hallmhd/errors.hpp"
#include "hallmhd/hall_dynamics.hpp"

namespace hallmhd {

// Fixed-schema CSV time series shared by every run mode; columns a mode
// does not produce stay empty. Values carry 17 significant digits so the
// series round-trips through text exactly.
class DiagnosticsCsvWriter {
 public:
  static constexpr const char* header =
      "t,energy_paper,energy_sym,energy_u,energy_B,dissipation,hall_power,"
      "helicity,current_helicity,div_u_max,div_B_max";
  static constexpr int n_value_columns = 10;

  explicit DiagnosticsCsvWriter(std::ostream& out) : out_(out) {
    out_ << header << "\n";
  }

  void write(const DiagnosticsRecord& r) {
    std::optional<double> cols[n_value_columns] = {
        r.energy_paper, r.energy_sym,      r.energy_u,  r.energy_B,
        r.dissipation,  r.hall_power,      r.helicity,  r.current_helicity,
        r.div_u_max,    r.div_B_max,
    };
    write_row(r.t, cols);
  }

  void write_row(double t, const std::optional<double> (&cols)[n_value_columns]) {
    if (have_last_ && !(t > last_t_))
      throw StreamError("diagnostic times must be strictly increasing");
    have_last_ = true;
    last_t_ = t;
    out_ << fmt(t);
    for (int i = 0; i < n_value_columns; ++i) {
      out_ << ',';
      if (cols[i]) out_ << fmt(*cols[i]);
    }
    out_ << "\n";
  }

  static std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }

 private:
  std::ostream& out_;
  bool have_last_ = false;
  double last_t_ = 0.0;
};

}  // namespace hallmhd
