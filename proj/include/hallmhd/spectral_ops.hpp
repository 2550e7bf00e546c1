#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hallmhd/fft.hpp"
#include "hallmhd/field.hpp"

namespace hallmhd {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Mode-wise orthogonal projection onto divergence-free fields,
// F(k) <- (I - k k^T/|k|^2) F(k); the k=0 mode is left unchanged.
inline SpectralVectorField leray_project(const SpectralVectorField& f) {
  const Grid3& g = f.grid;
  SpectralVectorField out = f;
  const std::size_t m = g.npoints();
  std::size_t p = 0;
  for (int ix = 0; ix < g.n; ++ix) {
    const double kx = g.freq(ix);
    for (int iy = 0; iy < g.n; ++iy) {
      const double ky = g.freq(iy);
      for (int iz = 0; iz < g.n; ++iz, ++p) {
        const double kz = g.freq(iz);
        const double k2 = kx * kx + ky * ky + kz * kz;
        if (k2 == 0.0) continue;
        const cplx d =
            (kx * out.a[p] + ky * out.a[p + m] + kz * out.a[p + 2 * m]) / k2;
        out.a[p] -= kx * d;
        out.a[p + m] -= ky * d;
        out.a[p + 2 * m] -= kz * d;
      }
    }
  }
  return out;
}

// Spectral curl, (2 pi i k) x F(k). Exact for retained modes.
inline SpectralVectorField curl(const SpectralVectorField& f) {
  const Grid3& g = f.grid;
  SpectralVectorField out(g);
  const std::size_t m = g.npoints();
  std::size_t p = 0;
  for (int ix = 0; ix < g.n; ++ix) {
    const double kx = g.freq(ix);
    for (int iy = 0; iy < g.n; ++iy) {
      const double ky = g.freq(iy);
      for (int iz = 0; iz < g.n; ++iz, ++p) {
        const double kz = g.freq(iz);
        const cplx fx = f.a[p], fy = f.a[p + m], fz = f.a[p + 2 * m];
        const cplx i2pi(0.0, two_pi);
        out.a[p] = i2pi * (ky * fz - kz * fy);
        out.a[p + m] = i2pi * (kz * fx - kx * fz);
        out.a[p + 2 * m] = i2pi * (kx * fy - ky * fx);
      }
    }
  }
  return out;
}

inline SpectralVectorField laplacian(const SpectralVectorField& f) {
  const Grid3& g = f.grid;
  SpectralVectorField out = f;
  const std::size_t m = g.npoints();
  std::size_t p = 0;
  for (int ix = 0; ix < g.n; ++ix) {
    const double kx = g.freq(ix);
    for (int iy = 0; iy < g.n; ++iy) {
      const double ky = g.freq(iy);
      for (int iz = 0; iz < g.n; ++iz, ++p) {
        const double fac =
            -two_pi * two_pi * (kx * kx + ky * ky + g.freq(iz) * (double)g.freq(iz));
        out.a[p] *= fac;
        out.a[p + m] *= fac;
        out.a[p + 2 * m] *= fac;
      }
    }
  }
  return out;
}

inline void cross_pointwise(const RealVectorField& f, const RealVectorField& gfield,
                            RealVectorField& out) {
  const std::size_t m = f.grid.npoints();
  for (std::size_t i = 0; i < m; ++i) {
    const double ax = f.v[i], ay = f.v[i + m], az = f.v[i + 2 * m];
    const double bx = gfield.v[i], by = gfield.v[i + m], bz = gfield.v[i + 2 * m];
    out.v[i] = ay * bz - az * by;
    out.v[i + m] = az * bx - ax * bz;
    out.v[i + 2 * m] = ax * by - ay * bx;
  }
}

// Pointwise physical-space cross product, re-transformed and truncated by
// the 2/3 rule. This is the only way quadratic terms enter the solvers.
inline SpectralVectorField cross_product_dealiased(const SpectralVectorField& f,
                                                   const SpectralVectorField& g) {
  require_same_grid(f.grid, g.grid);
  RealVectorField fr = inverse_transform(f);
  RealVectorField gr = inverse_transform(g);
  RealVectorField pr(f.grid);
  cross_pointwise(fr, gr, pr);
  return forward_transform(pr);
}

// <F,G> = integral of F.G over the unit box (Parseval over retained modes).
inline double inner_product(const SpectralVectorField& f,
                            const SpectralVectorField& g) {
  require_same_grid(f.grid, g.grid);
  double s = 0.0;
  for (std::size_t i = 0; i < f.a.size(); ++i)
    s += f.a[i].real() * g.a[i].real() + f.a[i].imag() * g.a[i].imag();
  return s;
}

inline double norm_l2_sq(const SpectralVectorField& f) {
  double s = 0.0;
  for (const cplx& z : f.a) s += std::norm(z);
  return s;
}

inline double norm_l2(const SpectralVectorField& f) {
  return std::sqrt(norm_l2_sq(f));
}

// |grad F|^2 = sum 4 pi^2 |k|^2 |F(k)|^2; equals |curl F|^2 for
// divergence-free F.
inline double h1_seminorm_sq(const SpectralVectorField& f) {
  const Grid3& g = f.grid;
  const std::size_t m = g.npoints();
  double s = 0.0;
  std::size_t p = 0;
  for (int ix = 0; ix < g.n; ++ix) {
    const double kx = g.freq(ix);
    for (int iy = 0; iy < g.n; ++iy) {
      const double ky = g.freq(iy);
      for (int iz = 0; iz < g.n; ++iz, ++p) {
        const double k2 = kx * kx + ky * ky + g.freq(iz) * (double)g.freq(iz);
        s += two_pi * two_pi * k2 *
             (std::norm(f.a[p]) + std::norm(f.a[p + m]) + std::norm(f.a[p + 2 * m]));
      }
    }
  }
  return s;
}

// max_k |2 pi k . F(k)|, the spectral divergence residual.
inline double div_max(const SpectralVectorField& f) {
  const Grid3& g = f.grid;
  const std::size_t m = g.npoints();
  double worst = 0.0;
  std::size_t p = 0;
  for (int ix = 0; ix < g.n; ++ix) {
    const double kx = g.freq(ix);
    for (int iy = 0; iy < g.n; ++iy) {
      const double ky = g.freq(iy);
      for (int iz = 0; iz < g.n; ++iz, ++p) {
        const double kz = g.freq(iz);
        const cplx d = kx * f.a[p] + ky * f.a[p + m] + kz * f.a[p + 2 * m];
        worst = std::max(worst, two_pi * std::abs(d));
      }
    }
  }
  return worst;
}

inline double hermitian_defect(const SpectralVectorField& f) {
  const Grid3& g = f.grid;
  double worst = 0.0;
  for (int c = 0; c < 3; ++c)
    for (int kx = -g.kmax_kept; kx <= g.kmax_kept; ++kx)
      for (int ky = -g.kmax_kept; ky <= g.kmax_kept; ++ky)
        for (int kz = -g.kmax_kept; kz <= g.kmax_kept; ++kz)
          worst = std::max(worst, std::abs(f.mode(c, kx, ky, kz) -
                                           std::conj(f.mode(c, -kx, -ky, -kz))));
  return worst;
}

// max_x |F(x)| of the physical field.
inline double max_abs_physical(const SpectralVectorField& f) {
  RealVectorField r = inverse_transform(f);
  const std::size_t m = f.grid.npoints();
  double worst = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double mag2 = r.v[i] * r.v[i] + r.v[i + m] * r.v[i + m] +
                        r.v[i + 2 * m] * r.v[i + 2 * m];
    worst = std::max(worst, mag2);
  }
  return std::sqrt(worst);
}

// Copies retained modes onto a finer grid (exact trigonometric
// interpolation when the fine grid resolves every retained mode).
inline SpectralVectorField spectral_pad(const SpectralVectorField& f,
                                        const Grid3& fine) {
  if (fine.kmax_kept < f.grid.kmax_kept)
    throw DimensionError("target grid cannot hold the retained modes");
  SpectralVectorField out(fine);
  const int K = f.grid.kmax_kept;
  for (int c = 0; c < 3; ++c)
    for (int kx = -K; kx <= K; ++kx)
      for (int ky = -K; ky <= K; ++ky)
        for (int kz = -K; kz <= K; ++kz)
          out.mode(c, kx, ky, kz) = f.mode(c, kx, ky, kz);
  return out;
}

}  // namespace hallmhd
