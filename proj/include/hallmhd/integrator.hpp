#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hallmhd/hall_dynamics.hpp"

namespace hallmhd {

enum class Scheme { imex_euler, imex_rk2, if_rk4 };

inline Scheme scheme_from_string(const std::string& s) {
  if (s == "imex_euler") return Scheme::imex_euler;
  if (s == "imex_rk2") return Scheme::imex_rk2;
  if (s == "integrating_factor_rk4" || s == "if_rk4") return Scheme::if_rk4;
  throw ParameterError("unknown scheme '" + s + "'");
}

struct IntegratorConfig {
  double dt = 0.0;      // 0 -> choose from the CFL bound each step
  double t_end = 0.0;   // absolute final time
  Scheme scheme = Scheme::imex_rk2;
  double cfl_safety = 0.5;
  bool adapt = false;       // true: clamp dt to the admissible bound
  int diag_stride = 1;      // emit diagnostics every this many accepted steps
  double energy_tol = 1e-12;  // relative energy increase that triggers rejection
  int max_rejects = 20;
};

// Admissible explicit step for the Hall term, safety * dx^2 / (pi max|B| + 1).
// The whistler-like dispersion of the Hall term scales as |B| k^2, hence
// the dx^2 form; the +1 accounts for the unit diffusivity.
inline double hall_cfl_dt(const SpectralVectorField& B, double safety) {
  const double dx = B.grid.dx();
  return safety * dx * dx / (std::numbers::pi * max_abs_physical(B) + 1.0);
}

namespace detail {

// exp(-4 pi^2 |k|^2 theta) tables for the integrating factor; identity
// when the system is non-resistive.
inline std::vector<double> decay_table(const Grid3& g, double theta,
                                       bool resistive) {
  std::vector<double> e(g.npoints(), 1.0);
  if (!resistive || theta == 0.0) return e;
  std::size_t p = 0;
  for (int ix = 0; ix < g.n; ++ix) {
    const double kx = g.freq(ix);
    for (int iy = 0; iy < g.n; ++iy) {
      const double ky = g.freq(iy);
      for (int iz = 0; iz < g.n; ++iz, ++p) {
        const double k2 = kx * kx + ky * ky + g.freq(iz) * (double)g.freq(iz);
        e[p] = std::exp(-two_pi * two_pi * k2 * theta);
      }
    }
  }
  return e;
}

inline void apply_table(SpectralVectorField& f, const std::vector<double>& e) {
  const std::size_t m = f.grid.npoints();
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < m; ++i) f.a[c * m + i] *= e[i];
}

inline SpectralVectorField applied(const SpectralVectorField& f,
                                   const std::vector<double>& e) {
  SpectralVectorField out = f;
  apply_table(out, e);
  return out;
}

// (f + dt * g) / (1 + 4 pi^2 |k|^2 dt), the backward-Euler diffusion solve.
inline SpectralVectorField imex_euler_solve(const SpectralVectorField& f,
                                            const SpectralVectorField& g,
                                            double dt, bool resistive) {
  SpectralVectorField out(f.grid);
  const Grid3& gr = f.grid;
  const std::size_t m = gr.npoints();
  std::size_t p = 0;
  for (int ix = 0; ix < gr.n; ++ix) {
    const double kx = gr.freq(ix);
    for (int iy = 0; iy < gr.n; ++iy) {
      const double ky = gr.freq(iy);
      for (int iz = 0; iz < gr.n; ++iz, ++p) {
        const double k2 = kx * kx + ky * ky + gr.freq(iz) * (double)gr.freq(iz);
        const double den =
            resistive ? 1.0 + two_pi * two_pi * k2 * dt : 1.0;
        for (int c = 0; c < 3; ++c) {
          const std::size_t q = c * m + p;
          out.a[q] = (f.a[q] + dt * g.a[q]) / den;
        }
      }
    }
  }
  return out;
}

}  // namespace detail

// Generic integrating-factor stepper over a state made of one or more
// spectral fields, all sharing the unit diffusivity. The nonlinear part
// is supplied as a callable; diffusion is exact (if_rk4, imex_rk2) or
// backward-Euler (imex_euler).
template <typename State>
class Stepper {
 public:
  using Rhs = std::function<State(const State&)>;

  Stepper(Grid3 grid, Rhs nonlinear, bool resistive = true)
      : grid_(grid), nonlinear_(std::move(nonlinear)), resistive_(resistive) {}

  State step(const State& s, double dt, Scheme scheme) {
    refresh_tables(dt);
    switch (scheme) {
      case Scheme::imex_euler: {
        State n = nonlinear_(s);
        return State::zip(s, n, [&](const SpectralVectorField& f,
                                    const SpectralVectorField& g) {
          return detail::imex_euler_solve(f, g, dt, resistive_);
        });
      }
      case Scheme::imex_rk2: {
        // integrating-factor midpoint: exact diffusion, O(dt^2) nonlinearity
        State k1 = nonlinear_(s);
        State mid = State::zip(s, k1, [&](const SpectralVectorField& f,
                                          const SpectralVectorField& g) {
          SpectralVectorField h = lin_comb(f, 1.0, g, 0.5 * dt);
          detail::apply_table(h, half_);
          return h;
        });
        State k2 = nonlinear_(mid);
        return State::zip(s, k2, [&](const SpectralVectorField& f,
                                     const SpectralVectorField& g) {
          SpectralVectorField h = detail::applied(f, full_);
          add_scaled_tabled(h, g, dt, half_);
          return h;
        });
      }
      case Scheme::if_rk4: {
        State k1 = nonlinear_(s);
        State s1 = State::zip(s, k1, [&](const SpectralVectorField& f,
                                         const SpectralVectorField& g) {
          SpectralVectorField h = lin_comb(f, 1.0, g, 0.5 * dt);
          detail::apply_table(h, half_);
          return h;
        });
        State k2 = nonlinear_(s1);
        State s2 = State::zip(s, k2, [&](const SpectralVectorField& f,
                                         const SpectralVectorField& g) {
          SpectralVectorField h = detail::applied(f, half_);
          add_scaled(h, g, 0.5 * dt);
          return h;
        });
        State k3 = nonlinear_(s2);
        State s3 = State::zip(s, k3, [&](const SpectralVectorField& f,
                                         const SpectralVectorField& g) {
          SpectralVectorField h = detail::applied(f, full_);
          add_scaled_tabled(h, g, dt, half_);
          return h;
        });
        State k4 = nonlinear_(s3);
        return combine_rk4(s, k1, k2, k3, k4, dt);
      }
    }
    throw ParameterError("unreachable scheme");
  }

 private:
  Grid3 grid_;
  Rhs nonlinear_;
  bool resistive_;
  double table_dt_ = -1.0;
  std::vector<double> half_, full_;

  void refresh_tables(double dt) {
    if (dt == table_dt_) return;
    half_ = detail::decay_table(grid_, 0.5 * dt, resistive_);
    full_ = detail::decay_table(grid_, dt, resistive_);
    table_dt_ = dt;
  }

  static void add_scaled_tabled(SpectralVectorField& dst,
                                const SpectralVectorField& src, double s,
                                const std::vector<double>& e) {
    const std::size_t m = dst.grid.npoints();
    for (int c = 0; c < 3; ++c)
      for (std::size_t i = 0; i < m; ++i)
        dst.a[c * m + i] += s * e[i] * src.a[c * m + i];
  }

  State combine_rk4(const State& s, const State& k1, const State& k2,
                    const State& k3, const State& k4, double dt) {
    State acc = State::zip(s, k1, [&](const SpectralVectorField& f,
                                      const SpectralVectorField& g) {
      SpectralVectorField h = detail::applied(f, full_);
      SpectralVectorField g1 = detail::applied(g, full_);
      add_scaled(h, g1, dt / 6.0);
      return h;
    });
    acc = State::zip(acc, State::zip(k2, k3,
                                     [](const SpectralVectorField& x,
                                        const SpectralVectorField& y) {
                                       return x + y;
                                     }),
                     [&](const SpectralVectorField& f,
                         const SpectralVectorField& g) {
                       SpectralVectorField h = f;
                       add_scaled_tabled(h, g, dt / 3.0, half_);
                       return h;
                     });
    return State::zip(acc, k4, [&](const SpectralVectorField& f,
                                   const SpectralVectorField& g) {
      SpectralVectorField h = f;
      add_scaled(h, g, dt / 6.0);
      return h;
    });
  }
};

// State wrappers giving the stepper a uniform field-wise interface.
struct HallState {
  SpectralVectorField B;
  template <typename F>
  static HallState zip(const HallState& a, const HallState& b, F&& f) {
    return HallState{f(a.B, b.B)};
  }
};

struct CoupledState {
  SpectralVectorField u, B;
  template <typename F>
  static CoupledState zip(const CoupledState& a, const CoupledState& b, F&& f) {
    return CoupledState{f(a.u, b.u), f(a.B, b.B)};
  }
};

inline Stepper<HallState> make_hall_stepper(const Grid3& g,
                                            bool resistive = true) {
  return Stepper<HallState>(
      g,
      [](const HallState& s) {
        SpectralVectorField J = curl(s.B);
        SpectralVectorField hall = curl(cross_product_dealiased(J, s.B));
        scale(hall, -1.0);
        return HallState{std::move(hall)};
      },
      resistive);
}

inline Stepper<CoupledState> make_coupled_stepper(const Grid3& g) {
  return Stepper<CoupledState>(
      g,
      [](const CoupledState& s) {
        RealVectorField ur = inverse_transform(s.u);
        RealVectorField Br = inverse_transform(s.B);
        RealVectorField wr = inverse_transform(curl(s.u));
        RealVectorField Jr = inverse_transform(curl(s.B));
        const Grid3& g2 = s.u.grid;
        const std::size_t m = g2.npoints();
        RealVectorField mom(g2), tmp(g2), uxB(g2);
        cross_pointwise(Jr, Br, mom);
        cross_pointwise(wr, ur, tmp);
        for (std::size_t i = 0; i < 3 * m; ++i) mom.v[i] -= tmp.v[i];
        cross_pointwise(ur, Br, uxB);
        RealVectorField JxB(g2);
        cross_pointwise(Jr, Br, JxB);
        SpectralVectorField du = leray_project(forward_transform(mom));
        SpectralVectorField dB =
            curl(forward_transform(uxB) - forward_transform(JxB));
        return CoupledState{std::move(du), std::move(dB)};
      },
      true);
}

struct RunStats {
  long steps = 0;
  long rejections = 0;
};

using DiagnosticsSink = std::function<void(const DiagnosticsRecord&)>;

namespace detail {

// Shared driver: fixed or CFL-clamped dt, energy-increase rejection with
// per-step halving, blow-up detection, diagnostics at a stride.
template <typename State>
State run_loop(State s, double t0, Stepper<State>& stepper,
               const IntegratorConfig& cfg,
               const std::function<double(const State&)>& energy_sym,
               const std::function<const SpectralVectorField&(const State&)>& bfield,
               const std::function<bool(const State&)>& finite,
               const std::function<DiagnosticsRecord(const State&, double)>& diag,
               const DiagnosticsSink& sink, RunStats* stats = nullptr) {
  double t = t0;
  if (sink) sink(diag(s, t));
  const double eps_t = 1e-14 * std::max(1.0, std::abs(cfg.t_end));
  if (cfg.t_end <= t0 + eps_t) return s;
  long accepted = 0;
  while (t < cfg.t_end - eps_t) {
    const double admissible = hall_cfl_dt(bfield(s), cfg.cfl_safety);
    double dt = cfg.dt > 0.0 ? cfg.dt : admissible;
    if (dt > admissible) {
      if (!cfg.adapt)
        throw CflError("step size exceeds the Hall-CFL bound", admissible);
      dt = admissible;
    }
    dt = std::min(dt, cfg.t_end - t);
    const double e0 = energy_sym(s);
    State next = s;
    bool ok = false;
    for (int tries = 0; tries <= cfg.max_rejects; ++tries) {
      next = stepper.step(s, dt, cfg.scheme);
      if (!finite(next))
        throw BlowUpError("non-finite field values during time integration", t);
      if (energy_sym(next) <= e0 * (1.0 + cfg.energy_tol) + 1e-300) {
        ok = true;
        break;
      }
      dt *= 0.5;
      if (stats) ++stats->rejections;
    }
    if (!ok)
      throw BlowUpError(
          "energy kept increasing after repeated step halving", t);
    t += dt;
    s = std::move(next);
    ++accepted;
    if (stats) ++stats->steps;
    const bool last = t >= cfg.t_end - eps_t;
    if (sink && (accepted % cfg.diag_stride == 0 || last)) sink(diag(s, t));
  }
  return s;
}

}  // namespace detail

inline SpectralVectorField run_hall(const SpectralVectorField& B0, double t0,
                                    const IntegratorConfig& cfg,
                                    const DiagnosticsSink& sink = nullptr,
                                    bool resistive = true,
                                    RunStats* stats = nullptr) {
  auto stepper = make_hall_stepper(B0.grid, resistive);
  HallState out = detail::run_loop<HallState>(
      HallState{B0}, t0, stepper, cfg,
      [](const HallState& s) { return 0.5 * norm_l2_sq(s.B); },
      [](const HallState& s) -> const SpectralVectorField& { return s.B; },
      [](const HallState& s) { return s.B.finite(); },
      [](const HallState& s, double t) { return diagnostics_hall(s.B, t); },
      sink, stats);
  return out.B;
}

inline MhdState run_coupled(const MhdState& s0, const IntegratorConfig& cfg,
                            const DiagnosticsSink& sink = nullptr,
                            RunStats* stats = nullptr) {
  auto stepper = make_coupled_stepper(s0.u_hat.grid);
  CoupledState out = detail::run_loop<CoupledState>(
      CoupledState{s0.u_hat, s0.B_hat}, s0.t, stepper, cfg,
      [](const CoupledState& s) {
        return 0.5 * (norm_l2_sq(s.u) + norm_l2_sq(s.B));
      },
      [](const CoupledState& s) -> const SpectralVectorField& { return s.B; },
      [](const CoupledState& s) { return s.u.finite() && s.B.finite(); },
      [](const CoupledState& s, double t) {
        return diagnostics(MhdState(s.u, s.B, t));
      },
      sink, stats);
  return MhdState(out.u, out.B, std::max(s0.t, cfg.t_end));
}

}  // namespace hallmhd
