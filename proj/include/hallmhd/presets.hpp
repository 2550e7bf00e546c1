#pragma once

#include <cstdint>
#include <random>

#include "hallmhd/spectral_ops.hpp"

namespace hallmhd {

// ABC-type Beltrami field with A=B=C: curl F = 2 pi F, so the Hall
// nonlinearity vanishes identically and diffusion gives exact decay
// exp(-4 pi^2 t). Coefficients are set analytically:
//   F = amp * (sin 2pi z + cos 2pi y, sin 2pi x + cos 2pi z,
//              sin 2pi y + cos 2pi x).
inline SpectralVectorField abc_field(const Grid3& g, double amp = 1.0) {
  SpectralVectorField f(g);
  const cplx half(0.5, 0.0), mih(0.0, -0.5), pih(0.0, 0.5);
  // sin k.x -> -i/2 at +k, +i/2 at -k;  cos k.x -> 1/2 at both.
  f.mode(0, 0, 0, 1) = amp * mih;
  f.mode(0, 0, 0, -1) = amp * pih;
  f.mode(0, 0, 1, 0) = amp * half;
  f.mode(0, 0, -1, 0) = amp * half;
  f.mode(1, 1, 0, 0) = amp * mih;
  f.mode(1, -1, 0, 0) = amp * pih;
  f.mode(1, 0, 0, 1) = amp * half;
  f.mode(1, 0, 0, -1) = amp * half;
  f.mode(2, 0, 1, 0) = amp * mih;
  f.mode(2, 0, -1, 0) = amp * pih;
  f.mode(2, 1, 0, 0) = amp * half;
  f.mode(2, -1, 0, 0) = amp * half;
  return f;
}

// Circularly polarized single-mode Beltrami field,
//   B = amp * (0, cos 2 pi x, -sign * sin 2 pi x),  curl B = sign * 2 pi B,
// with constant magnitude |B| = amp everywhere (no magnetic nulls), which
// the regularized Ohm law requires.
inline SpectralVectorField circular_beltrami(const Grid3& g, double amp,
                                             int sign = +1) {
  SpectralVectorField f(g);
  const cplx half(0.5, 0.0);
  const cplx mih(0.0, -0.5), pih(0.0, 0.5);
  f.mode(1, 1, 0, 0) = amp * half;
  f.mode(1, -1, 0, 0) = amp * half;
  f.mode(2, 1, 0, 0) = -double(sign) * amp * mih;
  f.mode(2, -1, 0, 0) = -double(sign) * amp * pih;
  return f;
}

// Seeded random divergence-free field. Coefficients are drawn as complex
// normals for every mode with 1 <= max|k_i| <= kmax_ic in a fixed
// lexicographic half-space order, weighted by exp(-|k|^2/k0^2), mirrored
// for Hermitian symmetry, Leray-projected and normalized to ||F|| = amp.
inline SpectralVectorField random_solenoidal(const Grid3& g, std::uint64_t seed,
                                             double amp, double k0,
                                             int kmax_ic) {
  if (kmax_ic > g.kmax_kept) kmax_ic = g.kmax_kept;
  SpectralVectorField f(g);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int kx = -kmax_ic; kx <= kmax_ic; ++kx)
    for (int ky = -kmax_ic; ky <= kmax_ic; ++ky)
      for (int kz = -kmax_ic; kz <= kmax_ic; ++kz) {
        const bool positive_half =
            (kz > 0) || (kz == 0 && ky > 0) || (kz == 0 && ky == 0 && kx > 0);
        if (!positive_half) continue;
        const double k2 = double(kx) * kx + double(ky) * ky + double(kz) * kz;
        const double w = std::exp(-k2 / (k0 * k0));
        for (int c = 0; c < 3; ++c) {
          const double re = normal(rng), im = normal(rng);
          f.mode(c, kx, ky, kz) = w * cplx(re, im);
          f.mode(c, -kx, -ky, -kz) = w * cplx(re, -im);
        }
      }
  f = leray_project(f);
  const double nrm = norm_l2(f);
  if (nrm > 0.0) scale(f, amp / nrm);
  return f;
}

// Orszag-Tang-like planar state embedded in the box:
//   u = amp * (-sin 2pi y, sin 2pi x, 0)
//   B = amp * (-sin 2pi y, sin 4pi x, 0)
inline void orszag_tang_like(const Grid3& g, double amp, SpectralVectorField& u,
                             SpectralVectorField& B) {
  u = SpectralVectorField(g);
  B = SpectralVectorField(g);
  const cplx mih(0.0, -0.5), pih(0.0, 0.5);
  u.mode(0, 0, 1, 0) = -amp * mih;
  u.mode(0, 0, -1, 0) = -amp * pih;
  u.mode(1, 1, 0, 0) = amp * mih;
  u.mode(1, -1, 0, 0) = amp * pih;
  B.mode(0, 0, 1, 0) = -amp * mih;
  B.mode(0, 0, -1, 0) = -amp * pih;
  B.mode(1, 2, 0, 0) = amp * mih;
  B.mode(1, -2, 0, 0) = amp * pih;
}

// Smooth null-free field for the regularized runs: a strong uniform
// component plus unit-wavenumber ripples,
//   B = (a(sin 2pi y + cos 2pi z), c + a(sin 2pi z + cos 2pi x),
//        a(sin 2pi x + cos 2pi y)),
// divergence-free by construction, min|B| >= c - 2a.
inline SpectralVectorField smooth_null_free(const Grid3& g, double c = 1.0,
                                            double a = 0.25) {
  SpectralVectorField f(g);
  const cplx half(0.5, 0.0), mih(0.0, -0.5), pih(0.0, 0.5);
  f.mode(0, 0, 1, 0) = a * mih;
  f.mode(0, 0, -1, 0) = a * pih;
  f.mode(0, 0, 0, 1) = a * half;
  f.mode(0, 0, 0, -1) = a * half;
  f.mode(1, 0, 0, 0) = c;
  f.mode(1, 0, 0, 1) = a * mih;
  f.mode(1, 0, 0, -1) = a * pih;
  f.mode(1, 1, 0, 0) = a * half;
  f.mode(1, -1, 0, 0) = a * half;
  f.mode(2, 1, 0, 0) = a * mih;
  f.mode(2, -1, 0, 0) = a * pih;
  f.mode(2, 0, 1, 0) = a * half;
  f.mode(2, 0, -1, 0) = a * half;
  return f;
}

// Single divergence-free Fourier mode pair at +-k with a polarization
// orthogonal to k (real field via the Hermitian mirror).
inline SpectralVectorField single_mode(const Grid3& g, int kx, int ky, int kz,
                                       cplx px, cplx py, cplx pz) {
  SpectralVectorField f(g);
  f.mode(0, kx, ky, kz) = px;
  f.mode(1, kx, ky, kz) = py;
  f.mode(2, kx, ky, kz) = pz;
  f.mode(0, -kx, -ky, -kz) = std::conj(px);
  f.mode(1, -kx, -ky, -kz) = std::conj(py);
  f.mode(2, -kx, -ky, -kz) = std::conj(pz);
  return leray_project(f);
}

}  // namespace hallmhd
