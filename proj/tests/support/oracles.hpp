#pragma once

// Independent oracles used by the tests: finite-difference derivatives on
// the periodic grid, plain grid quadrature, and composite quadrature
// rules. None of these touch the spectral code paths they are used to
// check.

#include <cmath>
#include <functional>
#include <vector>

#include "hallmhd/field.hpp"

namespace oracle {

using hallmhd::Grid3;
using hallmhd::RealVectorField;

using FieldFn = std::function<double(int comp, double x, double y, double z)>;

inline RealVectorField sample(const Grid3& g, const FieldFn& f) {
  RealVectorField out(g);
  const double h = 1.0 / g.n;
  for (int c = 0; c < 3; ++c)
    for (int ix = 0; ix < g.n; ++ix)
      for (int iy = 0; iy < g.n; ++iy)
        for (int iz = 0; iz < g.n; ++iz)
          out.at(c, ix, iy, iz) = f(c, ix * h, iy * h, iz * h);
  return out;
}

// 6th-order centered first derivative along axis on the periodic grid.
inline double d1(const RealVectorField& f, int c, int ix, int iy, int iz,
                 int axis) {
  const int n = f.grid.n;
  auto at = [&](int o) {
    int jx = ix, jy = iy, jz = iz;
    (axis == 0 ? jx : axis == 1 ? jy : jz) += o;
    jx = (jx % n + n) % n;
    jy = (jy % n + n) % n;
    jz = (jz % n + n) % n;
    return f.at(c, jx, jy, jz);
  };
  const double h = 1.0 / n;
  return (-at(-3) + 9 * at(-2) - 45 * at(-1) + 45 * at(1) - 9 * at(2) +
          at(3)) /
         (60.0 * h);
}

// 6th-order centered second derivative.
inline double d2(const RealVectorField& f, int c, int ix, int iy, int iz,
                 int axis) {
  const int n = f.grid.n;
  auto at = [&](int o) {
    int jx = ix, jy = iy, jz = iz;
    (axis == 0 ? jx : axis == 1 ? jy : jz) += o;
    jx = (jx % n + n) % n;
    jy = (jy % n + n) % n;
    jz = (jz % n + n) % n;
    return f.at(c, jx, jy, jz);
  };
  const double h = 1.0 / n;
  return (2 * at(-3) - 27 * at(-2) + 270 * at(-1) - 490 * at(0) +
          270 * at(1) - 27 * at(2) + 2 * at(3)) /
         (180.0 * h * h);
}

inline RealVectorField curl_fd(const RealVectorField& f) {
  RealVectorField out(f.grid);
  const int n = f.grid.n;
  for (int ix = 0; ix < n; ++ix)
    for (int iy = 0; iy < n; ++iy)
      for (int iz = 0; iz < n; ++iz) {
        out.at(0, ix, iy, iz) =
            d1(f, 2, ix, iy, iz, 1) - d1(f, 1, ix, iy, iz, 2);
        out.at(1, ix, iy, iz) =
            d1(f, 0, ix, iy, iz, 2) - d1(f, 2, ix, iy, iz, 0);
        out.at(2, ix, iy, iz) =
            d1(f, 1, ix, iy, iz, 0) - d1(f, 0, ix, iy, iz, 1);
      }
  return out;
}

inline RealVectorField laplacian_fd(const RealVectorField& f) {
  RealVectorField out(f.grid);
  const int n = f.grid.n;
  for (int c = 0; c < 3; ++c)
    for (int ix = 0; ix < n; ++ix)
      for (int iy = 0; iy < n; ++iy)
        for (int iz = 0; iz < n; ++iz)
          out.at(c, ix, iy, iz) = d2(f, c, ix, iy, iz, 0) +
                                  d2(f, c, ix, iy, iz, 1) +
                                  d2(f, c, ix, iy, iz, 2);
  return out;
}

inline RealVectorField cross_fd(const RealVectorField& a,
                                const RealVectorField& b) {
  RealVectorField out(a.grid);
  const std::size_t m = a.grid.npoints();
  for (std::size_t i = 0; i < m; ++i) {
    out.v[i] = a.v[i + m] * b.v[i + 2 * m] - a.v[i + 2 * m] * b.v[i + m];
    out.v[i + m] = a.v[i + 2 * m] * b.v[i] - a.v[i] * b.v[i + 2 * m];
    out.v[i + 2 * m] = a.v[i] * b.v[i + m] - a.v[i + m] * b.v[i];
  }
  return out;
}

// -curl((curl B) x B) + lap B evaluated purely with finite differences.
inline RealVectorField hall_rhs_fd(const RealVectorField& B) {
  RealVectorField J = curl_fd(B);
  RealVectorField JxB = cross_fd(J, B);
  RealVectorField out = curl_fd(JxB);
  RealVectorField lap = laplacian_fd(B);
  for (std::size_t i = 0; i < out.v.size(); ++i)
    out.v[i] = -out.v[i] + lap.v[i];
  return out;
}

// Plain grid quadrature of a.b over the unit box.
inline double quad_inner(const RealVectorField& a, const RealVectorField& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.v.size(); ++i) s += a.v[i] * b.v[i];
  return s / a.grid.npoints();
}

inline double max_abs_diff(const RealVectorField& a, const RealVectorField& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.v.size(); ++i)
    worst = std::max(worst, std::abs(a.v[i] - b.v[i]));
  return worst;
}

inline double max_abs(const RealVectorField& a) {
  double worst = 0.0;
  for (double v : a.v) worst = std::max(worst, std::abs(v));
  return worst;
}

// Composite trapezoid over uniformly spaced samples.
inline double trapezoid(const std::vector<double>& f, double dt) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < f.size(); ++i) s += 0.5 * (f[i] + f[i + 1]);
  return s * dt;
}

// Composite Simpson; the last interval falls back to trapezoid when the
// sample count is even.
inline double simpson(const std::vector<double>& f, double dt) {
  if (f.size() < 3) return trapezoid(f, dt);
  double s = 0.0;
  std::size_t i = 0;
  for (; i + 2 < f.size(); i += 2) s += (f[i] + 4.0 * f[i + 1] + f[i + 2]) * dt / 3.0;
  if (i + 1 < f.size()) s += 0.5 * (f[i] + f[i + 1]) * dt;
  return s;
}

}  // namespace oracle
