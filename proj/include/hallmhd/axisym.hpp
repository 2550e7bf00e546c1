#pragma once

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "hallmhd/errors.hpp"
#include "hallmhd/hall_dynamics.hpp"
#include "hallmhd/spectral_ops.hpp"

namespace hallmhd {

// (x, r) grid: x periodic on [0, Lx), r staggered on (0, R] with the first
// node at dr/2 so no node sits on the axis. Odd reflection across r = 0
// closes the axis; homogeneous Dirichlet at r = R closes the outer edge.
struct AxiGrid {
  int nx = 0, nr = 0;
  double Lx = 1.0, R = 1.0;

  AxiGrid() = default;
  AxiGrid(int nx_, int nr_, double Lx_, double R_)
      : nx(nx_), nr(nr_), Lx(Lx_), R(R_) {
    if (nx < 8 || nr < 8)
      throw DimensionError("axisymmetric grid needs nx, nr >= 8");
    if (Lx <= 0.0 || R <= 0.0)
      throw DimensionError("axisymmetric grid needs positive extents");
  }

  double dx() const { return Lx / nx; }
  double dr() const { return R / nr; }
  double x(int i) const { return i * dx(); }
  double r(int j) const { return (j + 0.5) * dr(); }  // valid for ghosts too

  friend bool operator==(const AxiGrid& a, const AxiGrid& b) {
    return a.nx == b.nx && a.nr == b.nr && a.Lx == b.Lx && a.R == b.R;
  }
};

// Scalar field on the (x, r) grid, layout (i, j) with j fastest.
struct AxiField {
  AxiGrid grid;
  std::vector<double> v;

  AxiField() = default;
  explicit AxiField(const AxiGrid& g)
      : grid(g), v(static_cast<std::size_t>(g.nx) * g.nr, 0.0) {}

  double& at(int i, int j) { return v[static_cast<std::size_t>(i) * grid.nr + j]; }
  double at(int i, int j) const {
    return v[static_cast<std::size_t>(i) * grid.nr + j];
  }

  // Access with periodic wrap in x, odd reflection across the axis and
  // odd reflection about r = R (Dirichlet at the outer edge).
  double ghosted(int i, int j) const {
    i = ((i % grid.nx) + grid.nx) % grid.nx;
    if (j < 0) return -at(i, -1 - j);
    if (j >= grid.nr) return -at(i, 2 * grid.nr - 1 - j);
    return at(i, j);
  }

  double max_abs() const {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  }
  bool finite() const {
    for (double x : v)
      if (!std::isfinite(x)) return false;
    return true;
  }
};

struct AxiState {
  AxiField psi, b;
  double t = 0.0;

  AxiState() = default;
  explicit AxiState(const AxiGrid& g) : psi(g), b(g) {}
};

namespace axidetail {

inline double ddx(const AxiField& f, int i, int j) {
  return (f.ghosted(i + 1, j) - f.ghosted(i - 1, j)) / (2.0 * f.grid.dx());
}
inline double ddr(const AxiField& f, int i, int j) {
  return (f.ghosted(i, j + 1) - f.ghosted(i, j - 1)) / (2.0 * f.grid.dr());
}

}  // namespace axidetail

// L = d^2/dx^2 + d^2/dr^2 + (1/r) d/dr - 1/r^2, the cylindrical scalar
// Laplacian of a theta-component; second-order centered stencils.
inline AxiField operator_L(const AxiField& f) {
  const AxiGrid& g = f.grid;
  AxiField out(g);
  const double idx2 = 1.0 / (g.dx() * g.dx());
  const double idr2 = 1.0 / (g.dr() * g.dr());
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.nr; ++j) {
      const double r = g.r(j);
      const double fx = (f.ghosted(i + 1, j) - 2.0 * f.at(i, j) + f.ghosted(i - 1, j)) * idx2;
      const double frr = (f.ghosted(i, j + 1) - 2.0 * f.at(i, j) + f.ghosted(i, j - 1)) * idr2;
      const double fr = (f.ghosted(i, j + 1) - f.ghosted(i, j - 1)) / (2.0 * g.dr());
      out.at(i, j) = fx + frr + fr / r - f.at(i, j) / (r * r);
    }
  return out;
}

// Poisson bracket {a,c} = da/dx dc/dr - dc/dx da/dr, centered differences.
// Composites such as r*b or b/r are built with ghost rows included so the
// bracket sees the correct parity across the axis.
inline AxiField poisson_bracket(const AxiField& a, const AxiField& c) {
  const AxiGrid& g = a.grid;
  AxiField out(g);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.nr; ++j)
      out.at(i, j) = axidetail::ddx(a, i, j) * axidetail::ddr(c, i, j) -
                     axidetail::ddx(c, i, j) * axidetail::ddr(a, i, j);
  return out;
}

namespace axidetail {

// Composite arrays carry their own ghost closure derived from the parent
// field: with f odd across the axis, r*f is even and f/r is even; both are
// realized by evaluating with the signed radius. To keep the centered
// stencils simple the composites are stored on an extended value table.
struct Ghosted {
  const AxiField* f;
  enum Kind { times_r, over_r } kind;
  double operator()(int i, int j) const {
    const double r = f->grid.r(j);
    const double val = f->ghosted(i, j);
    return kind == times_r ? r * val : val / r;
  }
};

inline AxiField bracket_of(const Ghosted& a, const Ghosted& c, const AxiGrid& g) {
  AxiField out(g);
  const double idx = 1.0 / (2.0 * g.dx());
  const double idr = 1.0 / (2.0 * g.dr());
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.nr; ++j) {
      const double ax = (a(i + 1, j) - a(i - 1, j)) * idx;
      const double ar = (a(i, j + 1) - a(i, j - 1)) * idr;
      const double cx = (c(i + 1, j) - c(i - 1, j)) * idx;
      const double cr = (c(i, j + 1) - c(i, j - 1)) * idr;
      out.at(i, j) = ax * cr - cx * ar;
    }
  return out;
}

}  // namespace axidetail

// Right-hand sides of the flux/swirl system:
//   dpsi/dt = -(1/r^2) {r b, r psi} + L psi
//   db/dt   = -{j/r, r psi} + {b/r, r b} + L b,   j = -L psi.
// With psi identically zero both bracket arguments of dpsi vanish, so
// dpsi is algebraically zero and purely swirling data stays purely
// swirling to round-off.
inline std::pair<AxiField, AxiField> rhs_axi(const AxiState& s) {
  const AxiGrid& g = s.psi.grid;
  AxiField j = operator_L(s.psi);
  for (double& x : j.v) x = -x;

  using axidetail::Ghosted;
  AxiField br_rpsi = axidetail::bracket_of({&s.b, Ghosted::times_r},
                                           {&s.psi, Ghosted::times_r}, g);
  AxiField jr_rpsi = axidetail::bracket_of({&j, Ghosted::over_r},
                                           {&s.psi, Ghosted::times_r}, g);
  AxiField br_rb = axidetail::bracket_of({&s.b, Ghosted::over_r},
                                         {&s.b, Ghosted::times_r}, g);

  AxiField dpsi = operator_L(s.psi);
  AxiField db = operator_L(s.b);
  for (int i = 0; i < g.nx; ++i)
    for (int j2 = 0; j2 < g.nr; ++j2) {
      const double r = g.r(j2);
      dpsi.at(i, j2) -= br_rpsi.at(i, j2) / (r * r);
      db.at(i, j2) += br_rb.at(i, j2) - jr_rpsi.at(i, j2);
    }
  return {std::move(dpsi), std::move(db)};
}

// Explicit stability bound: diffusive limit of L plus the swirl advection
// speed 2|b|/r.
inline double axi_stable_dt(const AxiState& s, double safety = 0.4) {
  const AxiGrid& g = s.psi.grid;
  const double dx = g.dx(), dr = g.dr();
  const double rmin = g.r(0);
  const double lam = 4.0 / (dx * dx) + 4.0 / (dr * dr) + 1.0 / (rmin * rmin);
  double speed = 0.0;
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.nr; ++j)
      speed = std::max(speed, 2.0 * std::abs(s.b.at(i, j)) / g.r(j));
  double dt = 2.0 / lam;
  if (speed > 0.0) dt = std::min(dt, std::min(dx, dr) / speed);
  return safety * dt;
}

inline AxiState axi_step_rk2(const AxiState& s, double dt) {
  auto [dpsi1, db1] = rhs_axi(s);
  AxiState mid = s;
  for (std::size_t i = 0; i < mid.psi.v.size(); ++i) {
    mid.psi.v[i] += 0.5 * dt * dpsi1.v[i];
    mid.b.v[i] += 0.5 * dt * db1.v[i];
  }
  auto [dpsi2, db2] = rhs_axi(mid);
  AxiState out = s;
  for (std::size_t i = 0; i < out.psi.v.size(); ++i) {
    out.psi.v[i] += dt * dpsi2.v[i];
    out.b.v[i] += dt * db2.v[i];
  }
  out.t = s.t + dt;
  return out;
}

struct AxiRunRecord {
  double t;
  double max_abs_psi;
  double max_abs_b;
  double swirl_energy;  // integral of b^2 * 2 pi r dx dr
};

using AxiSink = std::function<void(const AxiRunRecord&)>;

inline AxiRunRecord axi_record(const AxiState& s) {
  const AxiGrid& g = s.psi.grid;
  double e = 0.0;
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.nr; ++j)
      e += s.b.at(i, j) * s.b.at(i, j) * g.r(j);
  e *= 2.0 * std::numbers::pi * g.dx() * g.dr();
  return {s.t, s.psi.max_abs(), s.b.max_abs(), e};
}

inline AxiState run_axi(AxiState s, double t_end, const AxiSink& sink = nullptr,
                        int diag_stride = 16, double cfl_safety = 0.4) {
  if (sink) sink(axi_record(s));
  long steps = 0;
  while (s.t < t_end - 1e-14 * std::max(1.0, t_end)) {
    double dt = std::min(axi_stable_dt(s, cfl_safety), t_end - s.t);
    s = axi_step_rk2(s, dt);
    if (!s.psi.finite() || !s.b.finite())
      throw BlowUpError("axisymmetric run produced non-finite values", s.t);
    ++steps;
    if (sink && (steps % diag_stride == 0 || s.t >= t_end - 1e-14))
      sink(axi_record(s));
  }
  return s;
}

// Gaussian swirl ring, vanishing like r at the axis:
//   b(x, r) = amp * (r/rc) * exp(-((r - rc)/sigma)^2) * (1 + mx cos(2 pi x/Lx))
inline AxiState swirl_ring(const AxiGrid& g, double amp, double rc, double sigma,
                           double mx = 0.0) {
  AxiState s(g);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.nr; ++j) {
      const double r = g.r(j);
      const double d = (r - rc) / sigma;
      s.b.at(i, j) = amp * (r / rc) * std::exp(-d * d) *
                     (1.0 + mx * std::cos(two_pi * g.x(i) / g.Lx));
    }
  return s;
}

// ---------------------------------------------------------------------------
// Swirl waves at a frozen radius: b_t - (2/r0) b b_x = nu b_xx on a periodic
// x line, conservative centered flux f(b) = -b^2/r0 plus explicit viscosity.

struct KmcResult {
  std::vector<double> times;
  std::vector<double> positions;   // unwrapped midpoint level-set location
  std::vector<std::vector<double>> profiles;  // sampled b(x) snapshots
  double measured_speed = std::numeric_limits<double>::quiet_NaN();
  bool speed_defined = false;
  bool truncated = false;  // wave approached the companion structure
  double nu = 0.0;
};

namespace kmcdetail {

inline void rhs_1d(const std::vector<double>& b, double r0, double nu, double dx,
                   std::vector<double>& out) {
  const int n = static_cast<int>(b.size());
  for (int i = 0; i < n; ++i) {
    const int ip = (i + 1) % n, im = (i + n - 1) % n;
    const double flux = (b[ip] * b[ip] - b[im] * b[im]) / (2.0 * dx * r0);
    const double visc = nu * (b[ip] - 2.0 * b[i] + b[im]) / (dx * dx);
    out[i] = flux + visc;
  }
}

// Crossing of the mid level on the falling transition nearest (mod L) to
// the previous location.
inline double track_level(const std::vector<double>& b, double level, double dx,
                          double L, double prev, bool falling) {
  const int n = static_cast<int>(b.size());
  double best = prev;
  double best_dist = 1e300;
  for (int i = 0; i < n; ++i) {
    const int ip = (i + 1) % n;
    const double a = b[i] - level, c = b[ip] - level;
    const bool crosses = falling ? (a >= 0.0 && c < 0.0) : (a <= 0.0 && c > 0.0);
    if (!crosses || a == c) continue;
    double x = (i + a / (a - c)) * dx;
    double d = std::remainder(x - prev, L);
    if (std::abs(d) < best_dist) {
      best_dist = std::abs(d);
      best = prev + d;
    }
  }
  return best;
}

}  // namespace kmcdetail

// Riemann run for the swirl equation frozen at radius r0. The initial
// profile is a smoothed plateau b_R between two b_L tails on the periodic
// line; the tracked interface is the b_L -> b_R transition. Speed is the
// least-squares slope of the tracked level-set position over the second
// half of the run.
inline KmcResult run_kmc(double b_left, double b_right, double r0, bool visc,
                         int nx, double Lx, double t_end,
                         int samples = 200, double nu_override = 0.0) {
  if (r0 <= 0.0) throw ParameterError("run_kmc needs r0 > 0");
  const double dx = Lx / nx;
  const double nu =
      nu_override > 0.0 ? nu_override : (visc ? 1.0 : 2.0 * dx);

  std::vector<double> b(nx);
  const double x1 = 0.30 * Lx, x2 = 0.70 * Lx;
  const double delta = 6.0 * dx;
  for (int i = 0; i < nx; ++i) {
    const double x = i * dx;
    const double w = 0.5 * (std::tanh((x - x1) / delta) - std::tanh((x - x2) / delta));
    b[i] = b_left + (b_right - b_left) * w;
  }

  KmcResult res;
  res.nu = nu;
  const bool flat = b_left == b_right;
  const double level = 0.5 * (b_left + b_right);
  const bool falling = b_left > b_right;

  const double maxb = std::max(std::abs(b_left), std::abs(b_right));
  double dt = 0.4 * std::min(dx * dx / nu,
                             maxb > 0.0 ? dx * r0 / (2.0 * maxb) : 1e300);
  const long nsteps = std::max<long>(1, static_cast<long>(std::ceil(t_end / dt)));
  dt = t_end / nsteps;
  const long stride = std::max<long>(1, nsteps / samples);

  std::vector<double> k1(nx), k2(nx), tmp(nx);
  double pos = x1, opposite = x2;
  double t = 0.0;
  auto sample = [&](bool force) {
    if (!flat) {
      pos = kmcdetail::track_level(b, level, dx, Lx, pos, falling);
      opposite = kmcdetail::track_level(b, level, dx, Lx, opposite, !falling);
      if (std::abs(std::remainder(pos - opposite, Lx)) < 20.0 * dx)
        res.truncated = true;
    }
    res.times.push_back(t);
    res.positions.push_back(pos);
    if (force) res.profiles.push_back(b);
  };
  sample(true);

  for (long step = 0; step < nsteps; ++step) {
    if (res.truncated) break;
    kmcdetail::rhs_1d(b, r0, nu, dx, k1);
    for (int i = 0; i < nx; ++i) tmp[i] = b[i] + 0.5 * dt * k1[i];
    kmcdetail::rhs_1d(tmp, r0, nu, dx, k2);
    for (int i = 0; i < nx; ++i) b[i] += dt * k2[i];
    t += dt;
    if ((step + 1) % stride == 0 || step + 1 == nsteps)
      sample(step + 1 == nsteps);
  }

  if (!flat && res.times.size() >= 4) {
    // least squares over the second half of the collected samples
    const std::size_t lo = res.times.size() / 2;
    double st = 0, sx = 0, stt = 0, stx = 0;
    const double n = static_cast<double>(res.times.size() - lo);
    for (std::size_t i = lo; i < res.times.size(); ++i) {
      st += res.times[i];
      sx += res.positions[i];
      stt += res.times[i] * res.times[i];
      stx += res.times[i] * res.positions[i];
    }
    const double den = n * stt - st * st;
    if (den > 0.0) {
      res.measured_speed = (n * stx - st * sx) / den;
      res.speed_defined = true;
    }
  }
  return res;
}

inline double rankine_hugoniot_speed(double b_left, double b_right, double r0) {
  // flux f(b) = -b^2/r0: s = [f]/[b] = -(b_left + b_right)/r0
  return -(b_left + b_right) / r0;
}

// ---------------------------------------------------------------------------
// Cross-validation of the axisymmetric reduction against the 3D solver.

struct SwirlCheckParams {
  double r_window = 0.35;   // outer edge of the C-infinity window
  double window_start = 0.21;  // w == 1 for r <= window_start
  double r_inner = 0.05;    // interior annulus, lower edge
  double interior_gap = 0.03;  // keep this far inside window_start
};

namespace axidetail {

// C-infinity ramp: 1 for s <= 0, 0 for s >= 1.
inline double smooth_ramp(double s) {
  if (s <= 0.0) return 1.0;
  if (s >= 1.0) return 0.0;
  const double f1 = std::exp(-1.0 / (1.0 - s));
  const double f0 = std::exp(-1.0 / s);
  return f1 / (f1 + f0);
}

}  // namespace axidetail

// Embeds B = b e_theta (windowed in radius) into the periodic box with the
// symmetry axis along x through (y,z) = (1/2,1/2), evaluates the 3D
// Hall+diffusion right-hand side and the axisymmetric one, and returns the
// largest mismatch on the interior annulus relative to the global
// right-hand-side magnitude.
inline double swirl_consistency_check(
    const std::function<double(double, double)>& b0, const Grid3& g3,
    const AxiGrid& ga, const SwirlCheckParams& par = {}) {
  if (par.r_window > 0.375)
    throw ConfigError("window leaves less than a 25% margin to the box edge");
  if (par.window_start >= par.r_window)
    throw ConfigError("window must start inside its outer edge");

  auto windowed = [&](double x, double r) {
    const double s =
        (r - par.window_start) / (par.r_window - par.window_start);
    return b0(x, r) * axidetail::smooth_ramp(s);
  };

  // 3D side: sample, transform, evaluate the full RHS.
  RealVectorField Br(g3);
  const std::size_t m = g3.npoints();
  for (int ix = 0; ix < g3.n; ++ix)
    for (int iy = 0; iy < g3.n; ++iy)
      for (int iz = 0; iz < g3.n; ++iz) {
        const double x = static_cast<double>(ix) / g3.n;
        const double yy = static_cast<double>(iy) / g3.n - 0.5;
        const double zz = static_cast<double>(iz) / g3.n - 0.5;
        const double r = std::sqrt(yy * yy + zz * zz);
        const double bval = windowed(x, r);
        const std::size_t p = (static_cast<std::size_t>(ix) * g3.n + iy) * g3.n + iz;
        if (r > 0.0) {
          Br.v[p] = 0.0;
          Br.v[p + m] = -bval * zz / r;
          Br.v[p + 2 * m] = bval * yy / r;
        }
      }
  SpectralVectorField Bh = forward_transform(Br);
  RealVectorField rhs3 = inverse_transform(rhs_hall_only(Bh, true));

  // axisymmetric side at matching Lx = 1, R >= window edge
  AxiState sa(ga);
  for (int i = 0; i < ga.nx; ++i)
    for (int j = 0; j < ga.nr; ++j)
      sa.b.at(i, j) = windowed(ga.x(i), ga.r(j));
  AxiField db = rhs_axi(sa).second;

  auto interp_db = [&](double x, double r) {
    // bilinear on the staggered axi grid
    double fi = x / ga.dx();
    double fj = r / ga.dr() - 0.5;
    int i0 = static_cast<int>(std::floor(fi));
    int j0 = static_cast<int>(std::floor(fj));
    const double wi = fi - i0, wj = fj - j0;
    auto val = [&](int i, int j) {
      i = ((i % ga.nx) + ga.nx) % ga.nx;
      if (j < 0) return -db.at(i, 0);  // odd across axis
      if (j >= ga.nr) return 0.0;
      return db.at(i, j);
    };
    return (1 - wi) * ((1 - wj) * val(i0, j0) + wj * val(i0, j0 + 1)) +
           wi * ((1 - wj) * val(i0 + 1, j0) + wj * val(i0 + 1, j0 + 1));
  };

  double global = 0.0;
  for (std::size_t i = 0; i < 3 * m; ++i)
    global = std::max(global, std::abs(rhs3.v[i]));
  if (global == 0.0) return 0.0;

  const double r_hi = par.window_start - par.interior_gap;
  double worst = 0.0;
  for (int ix = 0; ix < g3.n; ++ix)
    for (int iy = 0; iy < g3.n; ++iy)
      for (int iz = 0; iz < g3.n; ++iz) {
        const double yy = static_cast<double>(iy) / g3.n - 0.5;
        const double zz = static_cast<double>(iz) / g3.n - 0.5;
        const double r = std::sqrt(yy * yy + zz * zz);
        if (r < par.r_inner || r > r_hi) continue;
        const double x = static_cast<double>(ix) / g3.n;
        const double dbv = interp_db(x, r);
        const std::size_t p = (static_cast<std::size_t>(ix) * g3.n + iy) * g3.n + iz;
        const double ex = rhs3.v[p] - 0.0;
        const double ey = rhs3.v[p + m] - dbv * (-zz / r);
        const double ez = rhs3.v[p + 2 * m] - dbv * (yy / r);
        worst = std::max(worst, std::sqrt(ex * ex + ey * ey + ez * ez));
      }
  return worst / global;
}

}  // namespace hallmhd
