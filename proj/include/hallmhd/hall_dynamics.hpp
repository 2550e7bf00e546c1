#pragma once

#include <optional>
#include <vector>

#include "hallmhd/presets.hpp"
#include "hallmhd/spectral_ops.hpp"

namespace hallmhd {

// Truncated Fourier state of the coupled system; both fields stay
// divergence-free because every right-hand side below is a curl or a
// Leray projection.
struct MhdState {
  SpectralVectorField u_hat;
  SpectralVectorField B_hat;
  double t = 0.0;

  MhdState() = default;
  explicit MhdState(const Grid3& g) : u_hat(g), B_hat(g) {}
  MhdState(SpectralVectorField u, SpectralVectorField B, double time = 0.0)
      : u_hat(std::move(u)), B_hat(std::move(B)), t(time) {
    require_same_grid(u_hat.grid, B_hat.grid);
  }
};

// Magnetic-field equation of the standalone Hall problem,
//   dB/dt = -curl((curl B) x B) + Lap B,
// with the resistive Laplacian optional (the regularized studies need the
// non-resistive variant as a reference).
inline SpectralVectorField rhs_hall_only(const SpectralVectorField& B,
                                         bool resistive = true) {
  SpectralVectorField J = curl(B);
  SpectralVectorField hall = curl(cross_product_dealiased(J, B));
  if (resistive) {
    SpectralVectorField out = laplacian(B);
    add_scaled(out, hall, -1.0);
    return out;
  }
  scale(hall, -1.0);
  return hall;
}

// Term-by-term decomposition of the coupled equations. Stored with the
// signs they carry on the classical side of the equations:
//   du/dt = -advection + lorentz + diffusion_u
//   dB/dt =  induction - hall    + diffusion_B
struct RhsTerms {
  SpectralVectorField advection;    // P(u . grad u), realized as P(omega x u)
  SpectralVectorField lorentz;      // P((curl B) x B)
  SpectralVectorField induction;    // curl(u x B)
  SpectralVectorField hall;         // curl((curl B) x B)
  SpectralVectorField diffusion_u;  // Lap u
  SpectralVectorField diffusion_B;  // Lap B
};

inline RhsTerms rhs_terms(const MhdState& s) {
  const SpectralVectorField& u = s.u_hat;
  const SpectralVectorField& B = s.B_hat;
  SpectralVectorField omega = curl(u);
  SpectralVectorField J = curl(B);
  RhsTerms t{
      leray_project(cross_product_dealiased(omega, u)),
      leray_project(cross_product_dealiased(J, B)),
      curl(cross_product_dealiased(u, B)),
      curl(cross_product_dealiased(J, B)),
      laplacian(u),
      laplacian(B),
  };
  return t;
}

// Assembled right-hand sides of the coupled system. Shares the physical
// transforms of u, B, curl u, curl B across all quadratic terms.
inline void rhs_coupled(const MhdState& s, SpectralVectorField& du,
                        SpectralVectorField& dB) {
  const Grid3& g = s.u_hat.grid;
  RealVectorField ur = inverse_transform(s.u_hat);
  RealVectorField Br = inverse_transform(s.B_hat);
  RealVectorField wr = inverse_transform(curl(s.u_hat));
  RealVectorField Jr = inverse_transform(curl(s.B_hat));

  const std::size_t m = g.npoints();
  // momentum: J x B - omega x u in one product; u . grad u enters as
  // omega x u, identical to the convective form after projection.
  RealVectorField mom(g);
  cross_pointwise(Jr, Br, mom);
  RealVectorField wxu(g);
  cross_pointwise(wr, ur, wxu);
  for (std::size_t i = 0; i < 3 * m; ++i) mom.v[i] -= wxu.v[i];

  RealVectorField uxB(g);
  cross_pointwise(ur, Br, uxB);
  RealVectorField JxB(g);
  cross_pointwise(Jr, Br, JxB);

  du = leray_project(forward_transform(mom));
  add_scaled(du, laplacian(s.u_hat), 1.0);

  dB = curl(forward_transform(uxB) - forward_transform(JxB));
  add_scaled(dB, laplacian(s.B_hat), 1.0);
}

// Generalized Ohm electric field E = -u x B + (curl B) x B + curl B;
// Faraday's law dB/dt = -curl E reproduces the coupled B-equation exactly
// (term-wise identical truncations).
inline SpectralVectorField ohm_electric_field(const MhdState& s) {
  SpectralVectorField J = curl(s.B_hat);
  SpectralVectorField E = cross_product_dealiased(J, s.B_hat);
  add_scaled(E, cross_product_dealiased(s.u_hat, s.B_hat), -1.0);
  add_scaled(E, J, 1.0);
  return E;
}

// Zero-mean Coulomb-gauge vector potential, A(k) = i k x B(k) / (2 pi |k|^2).
// Unique on the torus once B has zero mean.
inline SpectralVectorField vector_potential(const SpectralVectorField& B) {
  const Grid3& g = B.grid;
  SpectralVectorField A(g);
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
        const cplx bx = B.a[p], by = B.a[p + m], bz = B.a[p + 2 * m];
        const cplx i_over(0.0, 1.0 / (two_pi * k2));
        A.a[p] = i_over * (ky * bz - kz * by);
        A.a[p + m] = i_over * (kz * bx - kx * bz);
        A.a[p + 2 * m] = i_over * (kx * by - ky * bx);
      }
    }
  }
  return A;
}

struct DiagnosticsRecord {
  double t = 0.0;
  double energy_paper = 0.0;  // 1/2 ||u||^2 + ||B||^2
  double energy_sym = 0.0;    // 1/2 (||u||^2 + ||B||^2), the balance that closes
  double energy_u = 0.0;
  double energy_B = 0.0;
  double dissipation = 0.0;  // ||grad u||^2 + ||grad B||^2
  double hall_power = 0.0;   // <curl B, (curl B) x B>, structurally zero
  std::optional<double> helicity;  // <A,B>; undefined when mean(B) != 0
  double current_helicity = 0.0;   // <B, curl B>
  double div_u_max = 0.0;
  double div_B_max = 0.0;
};

inline DiagnosticsRecord diagnostics(const MhdState& s) {
  DiagnosticsRecord r;
  r.t = s.t;
  const double u2 = norm_l2_sq(s.u_hat);
  const double B2 = norm_l2_sq(s.B_hat);
  r.energy_u = 0.5 * u2;
  r.energy_B = 0.5 * B2;
  r.energy_paper = 0.5 * u2 + B2;
  r.energy_sym = 0.5 * (u2 + B2);
  r.dissipation = h1_seminorm_sq(s.u_hat) + h1_seminorm_sq(s.B_hat);
  SpectralVectorField J = curl(s.B_hat);
  r.hall_power = inner_product(J, cross_product_dealiased(J, s.B_hat));
  r.current_helicity = inner_product(s.B_hat, J);
  double mean_mag = 0.0;
  for (int c = 0; c < 3; ++c) mean_mag += std::norm(s.B_hat.mode(c, 0, 0, 0));
  if (mean_mag <= 1e-28 * std::max(B2, 1e-300))
    r.helicity = inner_product(vector_potential(s.B_hat), s.B_hat);
  r.div_u_max = div_max(s.u_hat);
  r.div_B_max = div_max(s.B_hat);
  return r;
}

inline DiagnosticsRecord diagnostics_hall(const SpectralVectorField& B,
                                          double t) {
  MhdState s(SpectralVectorField(B.grid), B, t);
  return diagnostics(s);
}

// A-posteriori check of a sampled trajectory against the weak form
//   <A, dB/dt> + <curl A, (curl B) x B> + <curl A, curl B> = 0,
// with dB/dt replaced by centered differences. Returns the largest
// absolute residual over the interior sample times.
inline double weak_residual(const std::vector<SpectralVectorField>& traj,
                            double dt, const SpectralVectorField& A) {
  if (traj.size() < 3)
    throw InsufficientDataError("weak residual needs at least 3 samples");
  SpectralVectorField curlA = curl(A);
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < traj.size(); ++i) {
    SpectralVectorField dBdt = lin_comb(traj[i + 1], 0.5 / dt, traj[i - 1], -0.5 / dt);
    SpectralVectorField J = curl(traj[i]);
    const double res = inner_product(A, dBdt) +
                       inner_product(curlA, cross_product_dealiased(J, traj[i])) +
                       inner_product(curlA, J);
    worst = std::max(worst, std::abs(res));
  }
  return worst;
}

// Built-in test fields: the initial state, the divergence-free single
// modes with max|k_i| <= 2, and one seeded random field.
inline std::vector<SpectralVectorField> weak_test_fields(
    const SpectralVectorField& B0, std::uint64_t seed = 2024) {
  const Grid3& g = B0.grid;
  std::vector<SpectralVectorField> out;
  out.push_back(B0);
  for (int kx = 0; kx <= 2; ++kx)
    for (int ky = (kx == 0 ? 0 : -2); ky <= 2; ++ky)
      for (int kz = ((kx == 0 && ky == 0) ? 1 : -2); kz <= 2; ++kz) {
        SpectralVectorField f =
            single_mode(g, kx, ky, kz, cplx(0.3, 0.1), cplx(-0.2, 0.4), cplx(0.1, -0.3));
        if (norm_l2_sq(f) > 1e-12) out.push_back(std::move(f));
      }
  out.push_back(random_solenoidal(g, seed, 1.0, 2.0, g.kmax_kept));
  return out;
}

}  // namespace hallmhd
