#pragma once

#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "hallmhd/hall_dynamics.hpp"
#include "hallmhd/integrator.hpp"

namespace hallmhd {

// State of the regularized non-resistive problem: Faraday plus Ampere with
// the displacement current restored,
//   dB/dt = -curl E,   -eps dE/dt + curl B = j,   E = j x B.
struct MaxwellRegState {
  SpectralVectorField B_hat;
  SpectralVectorField E_hat;
  double eps = 0.0;
  double t = 0.0;

  MaxwellRegState() = default;
  MaxwellRegState(SpectralVectorField B, SpectralVectorField E, double eps_,
                  double time = 0.0)
      : B_hat(std::move(B)), E_hat(std::move(E)), eps(eps_), t(time) {
    require_same_grid(B_hat.grid, E_hat.grid);
  }
};

namespace mrdetail {

struct PhysicalPair {
  RealVectorField B, E, curlB, curlE;
  double min_B2 = 0.0, mean_B2 = 0.0;
};

inline PhysicalPair to_physical(const MaxwellRegState& s) {
  PhysicalPair p{inverse_transform(s.B_hat), inverse_transform(s.E_hat),
                 inverse_transform(curl(s.B_hat)), inverse_transform(curl(s.E_hat))};
  const std::size_t m = s.B_hat.grid.npoints();
  double mn = std::numeric_limits<double>::max(), sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double b2 = p.B.v[i] * p.B.v[i] + p.B.v[i + m] * p.B.v[i + m] +
                      p.B.v[i + 2 * m] * p.B.v[i + 2 * m];
    mn = std::min(mn, b2);
    sum += b2;
  }
  p.min_B2 = mn;
  p.mean_B2 = sum / m;
  return p;
}

inline void require_no_null(const PhysicalPair& p) {
  if (p.min_B2 < 1e-8 * p.mean_B2)
    throw MagneticNullError(
        "the regularized Ohm law divides by |B|^2 and the field has a "
        "near-null; min|B|^2 = " + std::to_string(p.min_B2));
}

// lambda = (-eps (curl E).E + (curl B).B) / |B|^2 on the grid.
inline std::vector<double> lambda_pointwise(const PhysicalPair& p, double eps) {
  const std::size_t m = p.B.grid.npoints();
  std::vector<double> lam(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double cb_dot_b = p.curlB.v[i] * p.B.v[i] +
                            p.curlB.v[i + m] * p.B.v[i + m] +
                            p.curlB.v[i + 2 * m] * p.B.v[i + 2 * m];
    const double ce_dot_e = p.curlE.v[i] * p.E.v[i] +
                            p.curlE.v[i + m] * p.E.v[i + m] +
                            p.curlE.v[i + 2 * m] * p.E.v[i + 2 * m];
    const double b2 = p.B.v[i] * p.B.v[i] + p.B.v[i + m] * p.B.v[i + m] +
                      p.B.v[i + 2 * m] * p.B.v[i + 2 * m];
    lam[i] = (-eps * ce_dot_e + cb_dot_b) / b2;
  }
  return lam;
}

}  // namespace mrdetail

// Pointwise Lagrange multiplier of the constraint E.B = 0, dealiased.
inline RealScalarField lambda_multiplier(const MaxwellRegState& s) {
  if (s.eps < 0.0) throw ParameterError("eps must be nonnegative");
  mrdetail::PhysicalPair p = mrdetail::to_physical(s);
  mrdetail::require_no_null(p);
  std::vector<double> lam = mrdetail::lambda_pointwise(p, s.eps);
  // truncation applied by a forward/backward round trip through one
  // component of a vector container
  RealVectorField tmp(s.B_hat.grid);
  const std::size_t m = s.B_hat.grid.npoints();
  for (std::size_t i = 0; i < m; ++i) tmp.v[i] = lam[i];
  RealVectorField back = inverse_transform(forward_transform(tmp));
  RealScalarField out(s.B_hat.grid);
  for (std::size_t i = 0; i < m; ++i) out.v[i] = back.v[i];
  return out;
}

// (B,E) right-hand sides:
//   dB = -curl E
//   dE = (1/eps) (curl B - (B x E)/|B|^2 - lambda B)
inline void rhs_BE(const MaxwellRegState& s, SpectralVectorField& dB,
                   SpectralVectorField& dE) {
  if (s.eps <= 0.0) throw ParameterError("eps must be positive");
  mrdetail::PhysicalPair p = mrdetail::to_physical(s);
  mrdetail::require_no_null(p);
  std::vector<double> lam = mrdetail::lambda_pointwise(p, s.eps);

  const Grid3& g = s.B_hat.grid;
  const std::size_t m = g.npoints();
  RealVectorField ohm(g);
  for (std::size_t i = 0; i < m; ++i) {
    const double bx = p.B.v[i], by = p.B.v[i + m], bz = p.B.v[i + 2 * m];
    const double ex = p.E.v[i], ey = p.E.v[i + m], ez = p.E.v[i + 2 * m];
    const double b2 = bx * bx + by * by + bz * bz;
    ohm.v[i] = (by * ez - bz * ey) / b2 + lam[i] * bx;
    ohm.v[i + m] = (bz * ex - bx * ez) / b2 + lam[i] * by;
    ohm.v[i + 2 * m] = (bx * ey - by * ex) / b2 + lam[i] * bz;
  }
  dB = curl(s.E_hat);
  scale(dB, -1.0);
  dE = curl(s.B_hat) - forward_transform(ohm);
  scale(dE, 1.0 / s.eps);
}

// (B, G) cross-check formulation with G = j x B. Only the component of j
// perpendicular to B is stored in G; the parallel part is reconstructed as
// ((curl B).B/|B|^2) B, so trajectories agree with (B,E) to O(eps).
struct BjState {
  SpectralVectorField B_hat;
  SpectralVectorField G_hat;  // j x B
  double eps = 0.0;
  double t = 0.0;
};

inline void rhs_Bj(const BjState& s, SpectralVectorField& dB,
                   SpectralVectorField& dG) {
  if (s.eps <= 0.0) throw ParameterError("eps must be positive");
  const Grid3& g = s.B_hat.grid;
  const std::size_t m = g.npoints();
  RealVectorField Br = inverse_transform(s.B_hat);
  RealVectorField Gr = inverse_transform(s.G_hat);
  RealVectorField cBr = inverse_transform(curl(s.B_hat));

  double mn = std::numeric_limits<double>::max(), sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double b2 = Br.v[i] * Br.v[i] + Br.v[i + m] * Br.v[i + m] +
                      Br.v[i + 2 * m] * Br.v[i + 2 * m];
    mn = std::min(mn, b2);
    sum += b2;
  }
  if (mn < 1e-8 * (sum / m))
    throw FormulationError(
        "cannot recover j from G = j x B near a magnetic null; use the "
        "(B,E) formulation");

  // j = B x G / |B|^2 + ((curl B).B / |B|^2) B
  RealVectorField j(g);
  for (std::size_t i = 0; i < m; ++i) {
    const double bx = Br.v[i], by = Br.v[i + m], bz = Br.v[i + 2 * m];
    const double gx = Gr.v[i], gy = Gr.v[i + m], gz = Gr.v[i + 2 * m];
    const double b2 = bx * bx + by * by + bz * bz;
    const double par = (cBr.v[i] * bx + cBr.v[i + m] * by + cBr.v[i + 2 * m] * bz) / b2;
    j.v[i] = (by * gz - bz * gy) / b2 + par * bx;
    j.v[i + m] = (bz * gx - bx * gz) / b2 + par * by;
    j.v[i + 2 * m] = (bx * gy - by * gx) / b2 + par * bz;
  }
  dB = curl(s.G_hat);
  scale(dB, -1.0);
  dG = curl(s.B_hat) - forward_transform(j);
  scale(dG, 1.0 / s.eps);
}

// Well-prepared electric field E0 = (curl B0) x B0; satisfies E0.B0 = 0
// algebraically (exactly on the grid when the product fits the retained
// cube).
inline SpectralVectorField well_prepared_E(const SpectralVectorField& B0) {
  return cross_product_dealiased(curl(B0), B0);
}

inline double max_constraint_violation(const MaxwellRegState& s) {
  RealVectorField Br = inverse_transform(s.B_hat);
  RealVectorField Er = inverse_transform(s.E_hat);
  const std::size_t m = s.B_hat.grid.npoints();
  double worst = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    worst = std::max(worst,
                     std::abs(Br.v[i] * Er.v[i] + Br.v[i + m] * Er.v[i + m] +
                              Br.v[i + 2 * m] * Er.v[i + 2 * m]));
  return worst;
}

inline double maxreg_stable_dt(const MaxwellRegState& s, double safety = 0.8) {
  const double dx = s.B_hat.grid.dx();
  return std::min(0.5 * safety * s.eps * dx,
                  hall_cfl_dt(s.B_hat, safety));
}

struct MaxregRecord {
  double t;
  double energy_B;        // 1/2 ||B||^2
  double energy_E;        // 1/2 ||E||^2
  double energy_total;    // 1/2 ||B||^2 + eps/2 ||E||^2, conserved bookkeeping
  double max_EB;          // max_x |E.B|
  double div_B_max;
};

inline MaxregRecord maxreg_record(const MaxwellRegState& s) {
  const double b2 = norm_l2_sq(s.B_hat), e2 = norm_l2_sq(s.E_hat);
  return {s.t, 0.5 * b2, 0.5 * e2, 0.5 * b2 + 0.5 * s.eps * e2,
          max_constraint_violation(s), div_max(s.B_hat)};
}

using MaxregSink = std::function<void(const MaxregRecord&)>;

// Explicit RK2 run under the eps-CFL. dt = 0 picks the stable bound.
inline MaxwellRegState run_maxreg(MaxwellRegState s, double t_end, double dt = 0.0,
                                  const MaxregSink& sink = nullptr,
                                  int diag_stride = 8) {
  if (sink) sink(maxreg_record(s));
  long steps = 0;
  SpectralVectorField dB(s.B_hat.grid), dE(s.B_hat.grid);
  while (s.t < t_end - 1e-14 * std::max(1.0, t_end)) {
    double h = dt > 0.0 ? dt : maxreg_stable_dt(s);
    h = std::min(h, t_end - s.t);
    rhs_BE(s, dB, dE);
    MaxwellRegState mid = s;
    add_scaled(mid.B_hat, dB, 0.5 * h);
    add_scaled(mid.E_hat, dE, 0.5 * h);
    rhs_BE(mid, dB, dE);
    add_scaled(s.B_hat, dB, h);
    add_scaled(s.E_hat, dE, h);
    s.t += h;
    if (!s.B_hat.finite() || !s.E_hat.finite())
      throw BlowUpError("regularized run produced non-finite values", s.t);
    ++steps;
    if (sink && (steps % diag_stride == 0 || s.t >= t_end - 1e-14))
      sink(maxreg_record(s));
  }
  return s;
}

// Deviation of the regularized runs from the non-resistive Hall reference
// at matched resolution, dt and scheme (explicit RK2 for every member).
struct EpsStudyRow {
  double eps;
  double deviation = std::numeric_limits<double>::quiet_NaN();
  bool failed = false;
  std::string error;
};

struct EpsStudyResult {
  std::vector<EpsStudyRow> rows;
  double fitted_order = std::numeric_limits<double>::quiet_NaN();
};

inline SpectralVectorField hall_nonresistive_rk2(SpectralVectorField B,
                                                 double t_end, double dt) {
  const long nsteps = std::max<long>(1, std::lround(t_end / dt));
  dt = t_end / nsteps;
  for (long i = 0; i < nsteps; ++i) {
    SpectralVectorField k1 = rhs_hall_only(B, false);
    SpectralVectorField mid = B;
    add_scaled(mid, k1, 0.5 * dt);
    SpectralVectorField k2 = rhs_hall_only(mid, false);
    add_scaled(B, k2, dt);
  }
  return B;
}

inline EpsStudyResult eps_convergence_study(const SpectralVectorField& B0,
                                            const std::vector<double>& eps_list,
                                            double t_end, double dt = 0.0) {
  EpsStudyResult out;
  if (eps_list.empty()) return out;
  if (dt <= 0.0) {
    double eps_min = eps_list[0];
    for (double e : eps_list) eps_min = std::min(eps_min, e);
    dt = 0.4 * 0.5 * eps_min * B0.grid.dx();
  }
  const long nsteps = std::max<long>(1, std::lround(t_end / dt));
  dt = t_end / nsteps;

  SpectralVectorField ref = hall_nonresistive_rk2(B0, t_end, dt);

  for (double eps : eps_list) {
    EpsStudyRow row{eps};
    try {
      MaxwellRegState s(B0, well_prepared_E(B0), eps, 0.0);
      s = run_maxreg(std::move(s), t_end, dt);
      row.deviation = norm_l2(s.B_hat - ref);
    } catch (const std::exception& e) {
      row.failed = true;
      row.error = e.what();
    }
    out.rows.push_back(std::move(row));
  }

  // least-squares slope of log(deviation) vs log(eps) over successful rows
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const auto& r : out.rows) {
    if (r.failed || !(r.deviation > 0.0)) continue;
    const double x = std::log(r.eps), y = std::log(r.deviation);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n >= 2) {
    const double den = n * sxx - sx * sx;
    if (den != 0.0) out.fitted_order = (n * sxy - sx * sy) / den;
  }
  return out;
}

}  // namespace hallmhd
