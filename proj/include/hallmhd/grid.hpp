#pragma once

#include <cmath>
#include <cstddef>
#include <string>

#include "hallmhd/errors.hpp"

namespace hallmhd {

// Uniform periodic grid on the unit box [0,1)^3 with the 2/3-rule cutoff.
// Wavenumbers are integer triples k; the physical wavenumber is 2*pi*k.
struct Grid3 {
  int n = 0;             // points per axis, even, >= 4
  double box = 1.0;      // side length, fixed to 1
  int kmax_kept = 0;     // retained modes satisfy max|k_i| <= kmax_kept

  Grid3() = default;
  explicit Grid3(int n_) : n(n_), kmax_kept(n_ / 3) {
    if (n < 4 || n % 2 != 0)
      throw DimensionError("grid resolution must be even and >= 4, got " +
                           std::to_string(n));
  }

  // FFT index -> signed integer wavenumber in [-n/2, n/2-1].
  int freq(int i) const { return i <= n / 2 - 1 ? i : i - n; }

  bool retained(int kx, int ky, int kz) const {
    int m = std::abs(kx);
    if (std::abs(ky) > m) m = std::abs(ky);
    if (std::abs(kz) > m) m = std::abs(kz);
    return m <= kmax_kept;
  }

  double dx() const { return box / n; }
  std::size_t npoints() const {
    return static_cast<std::size_t>(n) * n * n;
  }

  friend bool operator==(const Grid3& a, const Grid3& b) {
    return a.n == b.n && a.box == b.box;
  }
};

inline void require_same_grid(const Grid3& a, const Grid3& b) {
  if (!(a == b)) throw DimensionError("fields live on different grids");
}

}  // namespace hallmhd
