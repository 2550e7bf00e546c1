#pragma once

#include <cmath>
#include <string>

#include "hallmhd/errors.hpp"

namespace hallmhd {

// CODATA 2018 values.
namespace constants {
inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double electron_mass = 9.1093837015e-31;     // kg
inline constexpr double proton_mass = 1.67262192369e-27;      // kg
inline constexpr double vacuum_permittivity = 8.8541878128e-12;  // F/m
inline constexpr double vacuum_permeability = 1.25663706212e-6;  // H/m
inline constexpr double speed_of_light = 299792458.0;            // m/s
}  // namespace constants

// SI inputs; temperature in joules (Boltzmann constant folded in).
struct PhysicalParams {
  double m_e = constants::electron_mass;
  double m_i = constants::proton_mass;
  double T = 0.0;         // J
  double n0 = 0.0;        // m^-3
  double x0 = 0.0;        // m
  double eta_phys = 0.0;  // Ohm m, resistivity (may be zero)
  double j0 = 0.0;        // A m^-2
};

struct DimensionlessGroups {
  double eps2 = 0.0;       // m_e / m_i
  double alpha2 = 0.0;     // e E0 x0 / T
  double beta = 0.0;       // e^2 eta n0 u0 x0 / T
  double gamma = 0.0;      // u0 / c
  double lambda2 = 0.0;    // eps0 T / (e^2 n0 x0^2)
  double eta_ratio = 0.0;  // j0 / (e n0 u0); distinct from the resistivity
  // derived
  double inv_alpha2 = 0.0;
  double beta_over_alpha4 = 0.0;
  // closing scales
  double u0 = 0.0, B0 = 0.0, E0 = 0.0, t0 = 0.0;
};

enum class RegimeLabel {
  IdealMHD,
  ResistiveMHD,
  HallMHD,
  ResistiveHallMHD,
  Indeterminate,
};

inline std::string to_string(RegimeLabel r) {
  switch (r) {
    case RegimeLabel::IdealMHD: return "IdealMHD";
    case RegimeLabel::ResistiveMHD: return "ResistiveMHD";
    case RegimeLabel::HallMHD: return "HallMHD";
    case RegimeLabel::ResistiveHallMHD: return "ResistiveHallMHD";
    case RegimeLabel::Indeterminate: return "Indeterminate";
  }
  return "?";
}

// Unit relations: x0 = u0 t0, u0 = sqrt(T/m_i), E0 = u0 B0, rho0 = e n0.
// B0 is closed by the magnetostatic Ampere balance B0 = mu0 j0 x0, which
// makes gamma^2 eta / (alpha^2 lambda^2) = 1 exactly (the condition under
// which the displacement current drops out).
inline DimensionlessGroups compute_groups(const PhysicalParams& p) {
  using namespace constants;
  if (!(p.m_e > 0) || !(p.m_i > 0) || !(p.T > 0) || !(p.n0 > 0) ||
      !(p.x0 > 0) || !(p.j0 > 0) || p.eta_phys < 0)
    throw ParameterError("physical parameters must be strictly positive "
                         "(resistivity may be zero)");
  const double emc = vacuum_permittivity * vacuum_permeability *
                     speed_of_light * speed_of_light;
  if (std::abs(emc - 1.0) > 1e-9)
    throw ParameterError("eps0 mu0 c^2 != 1; inconsistent constants");

  DimensionlessGroups g;
  g.u0 = std::sqrt(p.T / p.m_i);
  g.t0 = p.x0 / g.u0;
  g.B0 = vacuum_permeability * p.j0 * p.x0;
  g.E0 = g.u0 * g.B0;
  const double e = elementary_charge;
  g.eps2 = p.m_e / p.m_i;
  g.alpha2 = e * g.E0 * p.x0 / p.T;
  g.beta = e * e * p.eta_phys * p.n0 * g.u0 * p.x0 / p.T;
  g.gamma = g.u0 / speed_of_light;
  g.lambda2 = vacuum_permittivity * p.T / (e * e * p.n0 * p.x0 * p.x0);
  g.eta_ratio = p.j0 / (e * p.n0 * g.u0);
  g.inv_alpha2 = 1.0 / g.alpha2;
  g.beta_over_alpha4 = g.beta / (g.alpha2 * g.alpha2);
  return g;
}

// Decade-band classifier for the asymptotic cases: "-> 0" reads as below
// threshold and "-> 1" as within [threshold, 1/threshold]; anything else
// is Indeterminate.
inline RegimeLabel classify_regime(const DimensionlessGroups& g,
                                   double threshold = 0.1) {
  if (!(threshold > 0.0) || !(threshold < 1.0))
    throw ParameterError("threshold must lie in (0,1)");
  const double hi = 1.0 / threshold;
  auto small = [&](double v) { return v < threshold; };
  auto order1 = [&](double v) { return v >= threshold && v <= hi; };
  const double a = g.inv_alpha2, b = g.beta_over_alpha4;
  if (small(a) && small(b)) return RegimeLabel::IdealMHD;
  if (small(a) && order1(b)) return RegimeLabel::ResistiveMHD;
  if (order1(a) && small(b)) return RegimeLabel::HallMHD;
  if (order1(a) && order1(b)) return RegimeLabel::ResistiveHallMHD;
  return RegimeLabel::Indeterminate;
}

}  // namespace hallmhd
