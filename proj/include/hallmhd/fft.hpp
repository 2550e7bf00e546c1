#pragma once

#include <fftw3.h>

#include <complex>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>

#include "hallmhd/field.hpp"

namespace hallmhd {

namespace detail {

inline std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// Batched 3-component in-place c2c plans per resolution. Plan creation
// mutates FFTW's global planner and is serialized; execution on the
// thread-local scratch needs no lock. Small grids are worth a measured
// plan, large ones stick to estimate to keep planning time bounded.
struct FftPlans {
  int n;
  std::size_t m;  // points per component
  fftw_complex* buf;
  fftw_plan fwd;
  fftw_plan bwd;

  explicit FftPlans(int n_) : n(n_), m(static_cast<std::size_t>(n_) * n_ * n_) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    buf = fftw_alloc_complex(3 * m);
    const unsigned flags = n <= 64 ? FFTW_MEASURE : FFTW_ESTIMATE;
    const int dims[3] = {n, n, n};
    fwd = fftw_plan_many_dft(3, dims, 3, buf, nullptr, 1, static_cast<int>(m),
                             buf, nullptr, 1, static_cast<int>(m),
                             FFTW_FORWARD, flags);
    bwd = fftw_plan_many_dft(3, dims, 3, buf, nullptr, 1, static_cast<int>(m),
                             buf, nullptr, 1, static_cast<int>(m),
                             FFTW_BACKWARD, flags);
  }
  ~FftPlans() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
    fftw_free(buf);
  }
  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;
};

inline FftPlans& plans_for(int n) {
  thread_local std::map<int, std::unique_ptr<FftPlans>> cache;
  auto it = cache.find(n);
  if (it == cache.end())
    it = cache.emplace(n, std::make_unique<FftPlans>(n)).first;
  return *it->second;
}

}  // namespace detail

// Projects onto the retained cube: coefficients with max|k_i| > kmax_kept
// are zeroed. Applied after every forward transform, so all spectral
// fields in the code are dealiased by construction.
inline void dealias(SpectralVectorField& f) {
  const Grid3& g = f.grid;
  const std::size_t m = g.npoints();
  for (int ix = 0; ix < g.n; ++ix) {
    const bool keep_x = std::abs(g.freq(ix)) <= g.kmax_kept;
    for (int iy = 0; iy < g.n; ++iy) {
      const bool keep_xy = keep_x && std::abs(g.freq(iy)) <= g.kmax_kept;
      cplx* row = f.a.data() + (static_cast<std::size_t>(ix) * g.n + iy) * g.n;
      for (int iz = 0; iz < g.n; ++iz) {
        if (!keep_xy || std::abs(g.freq(iz)) > g.kmax_kept) {
          row[iz] = 0.0;
          row[iz + m] = 0.0;
          row[iz + 2 * m] = 0.0;
        }
      }
    }
  }
}

inline SpectralVectorField forward_transform(const RealVectorField& f) {
  const Grid3& g = f.grid;
  if (f.v.size() != 3 * g.npoints())
    throw DimensionError("real field extents do not match its grid");
  SpectralVectorField out(g);
  auto& plans = detail::plans_for(g.n);
  const std::size_t m = plans.m;
  for (std::size_t i = 0; i < 3 * m; ++i) {
    plans.buf[i][0] = f.v[i];
    plans.buf[i][1] = 0.0;
  }
  fftw_execute(plans.fwd);
  const double norm = 1.0 / static_cast<double>(m);
  for (std::size_t i = 0; i < 3 * m; ++i)
    out.a[i] = cplx(plans.buf[i][0] * norm, plans.buf[i][1] * norm);
  dealias(out);
  return out;
}

inline RealVectorField inverse_transform(const SpectralVectorField& f) {
  const Grid3& g = f.grid;
  RealVectorField out(g);
  auto& plans = detail::plans_for(g.n);
  const std::size_t m = plans.m;
  std::memcpy(plans.buf, f.a.data(), 3 * m * sizeof(fftw_complex));
  fftw_execute(plans.bwd);
  for (std::size_t i = 0; i < 3 * m; ++i) out.v[i] = plans.buf[i][0];
  return out;
}

}  // namespace hallmhd
