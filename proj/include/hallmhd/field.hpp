#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "hallmhd/grid.hpp"

namespace hallmhd {

using cplx = std::complex<double>;

// 3-component field in physical space, layout (component, ix, iy, iz),
// z fastest.
struct RealVectorField {
  Grid3 grid;
  std::vector<double> v;

  RealVectorField() = default;
  explicit RealVectorField(const Grid3& g) : grid(g), v(3 * g.npoints(), 0.0) {}

  std::size_t idx(int c, int ix, int iy, int iz) const {
    const std::size_t n = grid.n;
    return ((static_cast<std::size_t>(c) * n + ix) * n + iy) * n + iz;
  }
  double& at(int c, int ix, int iy, int iz) { return v[idx(c, ix, iy, iz)]; }
  double at(int c, int ix, int iy, int iz) const { return v[idx(c, ix, iy, iz)]; }
};

struct RealScalarField {
  Grid3 grid;
  std::vector<double> v;

  RealScalarField() = default;
  explicit RealScalarField(const Grid3& g) : grid(g), v(g.npoints(), 0.0) {}

  std::size_t idx(int ix, int iy, int iz) const {
    const std::size_t n = grid.n;
    return (static_cast<std::size_t>(ix) * n + iy) * n + iz;
  }
  double& at(int ix, int iy, int iz) { return v[idx(ix, iy, iz)]; }
  double at(int ix, int iy, int iz) const { return v[idx(ix, iy, iz)]; }
};

// 3-component field as complex Fourier coefficients, same layout as the
// real field but indexed by FFT bins. Coefficients outside the retained
// cube are kept identically zero; Hermitian symmetry makes the physical
// field real.
struct SpectralVectorField {
  Grid3 grid;
  std::vector<cplx> a;

  SpectralVectorField() = default;
  explicit SpectralVectorField(const Grid3& g) : grid(g), a(3 * g.npoints()) {}

  std::size_t idx(int c, int ix, int iy, int iz) const {
    const std::size_t n = grid.n;
    return ((static_cast<std::size_t>(c) * n + ix) * n + iy) * n + iz;
  }
  cplx& at(int c, int ix, int iy, int iz) { return a[idx(c, ix, iy, iz)]; }
  cplx at(int c, int ix, int iy, int iz) const { return a[idx(c, ix, iy, iz)]; }

  int wrap(int k) const { return k >= 0 ? k : k + grid.n; }
  // Coefficient of e^{2 pi i k.x}, k given as a signed integer triple.
  cplx& mode(int c, int kx, int ky, int kz) {
    return at(c, wrap(kx), wrap(ky), wrap(kz));
  }
  cplx mode(int c, int kx, int ky, int kz) const {
    return at(c, wrap(kx), wrap(ky), wrap(kz));
  }

  bool finite() const {
    for (const cplx& z : a)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
  }
};

inline SpectralVectorField zero_field(const Grid3& g) {
  return SpectralVectorField(g);
}

// In-place linear algebra used by the time steppers.
inline void add_scaled(SpectralVectorField& dst, const SpectralVectorField& src,
                       double s) {
  for (std::size_t i = 0; i < dst.a.size(); ++i) dst.a[i] += s * src.a[i];
}

inline void scale(SpectralVectorField& f, double s) {
  for (cplx& z : f.a) z *= s;
}

inline SpectralVectorField lin_comb(const SpectralVectorField& x, double a,
                                    const SpectralVectorField& y, double b) {
  SpectralVectorField out(x.grid);
  for (std::size_t i = 0; i < out.a.size(); ++i)
    out.a[i] = a * x.a[i] + b * y.a[i];
  return out;
}

inline SpectralVectorField operator+(const SpectralVectorField& x,
                                     const SpectralVectorField& y) {
  return lin_comb(x, 1.0, y, 1.0);
}

inline SpectralVectorField operator-(const SpectralVectorField& x,
                                     const SpectralVectorField& y) {
  return lin_comb(x, 1.0, y, -1.0);
}

inline SpectralVectorField operator*(double s, const SpectralVectorField& x) {
  SpectralVectorField out = x;
  scale(out, s);
  return out;
}

}  // namespace hallmhd
