#include <catch2/catch_amalgamated.hpp>

#include "hallmhd/presets.hpp"
#include "hallmhd/spectral_ops.hpp"
#include "support/oracles.hpp"

using namespace hallmhd;

TEST_CASE("grid invariants") {
  CHECK_THROWS_AS(Grid3(3), DimensionError);
  CHECK_THROWS_AS(Grid3(33), DimensionError);
  Grid3 g(32);
  CHECK(g.kmax_kept == 10);
  CHECK(g.freq(0) == 0);
  CHECK(g.freq(1) == 1);
  CHECK(g.freq(31) == -1);
  CHECK(g.freq(16) == -16);
  CHECK(g.retained(10, -10, 10));
  CHECK_FALSE(g.retained(11, 0, 0));
}

TEST_CASE("forward transform of simple fields") {
  Grid3 g(16);

  SECTION("constant field keeps only the mean mode") {
    RealVectorField f(g);
    for (std::size_t i = 0; i < g.npoints(); ++i) f.v[i] = 1.0;
    SpectralVectorField F = forward_transform(f);
    CHECK(std::abs(F.mode(0, 0, 0, 0) - cplx(1.0, 0.0)) < 1e-14);
    double rest = 0.0;
    for (std::size_t i = 0; i < F.a.size(); ++i) rest += std::norm(F.a[i]);
    rest -= std::norm(F.mode(0, 0, 0, 0));
    CHECK(rest < 1e-26);
  }

  SECTION("sin 2 pi x lands on k = (+-1,0,0) with values -+ i/2") {
    RealVectorField f = oracle::sample(g, [](int c, double x, double, double) {
      return c == 0 ? std::sin(two_pi * x) : 0.0;
    });
    SpectralVectorField F = forward_transform(f);
    CHECK(std::abs(F.mode(0, 1, 0, 0) - cplx(0.0, -0.5)) < 1e-14);
    CHECK(std::abs(F.mode(0, -1, 0, 0) - cplx(0.0, 0.5)) < 1e-14);
    double rest = norm_l2_sq(F) - std::norm(F.mode(0, 1, 0, 0)) -
                  std::norm(F.mode(0, -1, 0, 0));
    CHECK(std::abs(rest) < 1e-26);
  }

  SECTION("extent mismatch is a dimension error") {
    RealVectorField f(g);
    f.v.pop_back();
    CHECK_THROWS_AS(forward_transform(f), DimensionError);
  }
}

TEST_CASE("round trip reproduces the dealiased part") {
  Grid3 g(32);
  // a field with content beyond the retained cube
  RealVectorField f = oracle::sample(g, [](int c, double x, double y, double z) {
    double v = std::sin(two_pi * (c + 1) * x) * std::cos(two_pi * y);
    v += 0.3 * std::cos(two_pi * 14 * z);  // above kmax = 10, must vanish
    return v;
  });
  SpectralVectorField F = forward_transform(f);
  RealVectorField back = inverse_transform(F);
  SpectralVectorField F2 = forward_transform(back);
  CHECK(norm_l2(F2 - F) <= 1e-12 * norm_l2(F));
  // the k = 14 line was removed
  CHECK(std::abs(F.mode(2, 0, 0, 14)) == 0.0);
}

TEST_CASE("hermitian symmetry after transform") {
  Grid3 g(16);
  RealVectorField f = oracle::sample(g, [](int c, double x, double y, double z) {
    return std::sin(two_pi * (x + 0.3 * c)) * std::cos(two_pi * (y - z));
  });
  CHECK(hermitian_defect(forward_transform(f)) < 1e-14);
}

TEST_CASE("leray projection") {
  Grid3 g(16);

  SECTION("gradients lie in the kernel") {
    // F = grad(sin 2 pi x) = (2 pi cos 2 pi x, 0, 0)
    RealVectorField f = oracle::sample(g, [](int c, double x, double, double) {
      return c == 0 ? two_pi * std::cos(two_pi * x) : 0.0;
    });
    SpectralVectorField F = leray_project(forward_transform(f));
    CHECK(norm_l2(F) < 1e-13);
  }

  SECTION("divergence-free fields are fixed points") {
    RealVectorField f = oracle::sample(g, [](int c, double x, double, double) {
      return c == 1 ? std::sin(two_pi * x) : 0.0;
    });
    SpectralVectorField F = forward_transform(f);
    CHECK(norm_l2(leray_project(F) - F) <= 1e-14 * norm_l2(F));
  }

  SECTION("idempotent and self-adjoint") {
    SpectralVectorField F = random_solenoidal(g, 3, 1.0, 2.0, g.kmax_kept);
    // break divergence-freeness
    F.mode(0, 2, 1, 0) += cplx(0.7, 0.2);
    F.mode(0, -2, -1, 0) += cplx(0.7, -0.2);
    SpectralVectorField G = random_solenoidal(g, 4, 1.0, 2.0, g.kmax_kept);
    G.mode(1, 1, 1, 1) += cplx(0.1, 0.4);
    G.mode(1, -1, -1, -1) += cplx(0.1, -0.4);
    SpectralVectorField PF = leray_project(F);
    CHECK(norm_l2(leray_project(PF) - PF) <= 1e-14 * norm_l2(PF));
    CHECK(std::abs(inner_product(PF, G) - inner_product(F, leray_project(G))) <=
          1e-12 * norm_l2(F) * norm_l2(G));
    CHECK(div_max(PF) <= 1e-12 * std::sqrt(h1_seminorm_sq(PF)));
  }

  SECTION("mean mode is untouched") {
    SpectralVectorField F(g);
    F.mode(0, 0, 0, 0) = 2.5;
    SpectralVectorField P = leray_project(F);
    CHECK(std::abs(P.mode(0, 0, 0, 0) - cplx(2.5, 0.0)) == 0.0);
  }
}

TEST_CASE("curl") {
  Grid3 g(16);

  SECTION("constants have zero curl") {
    SpectralVectorField F(g);
    F.mode(0, 0, 0, 0) = 1.0;
    F.mode(2, 0, 0, 0) = -0.5;
    CHECK(norm_l2(curl(F)) == 0.0);
  }

  SECTION("curl (0,0,sin 2 pi x) = (0,-2 pi cos 2 pi x,0)") {
    RealVectorField f = oracle::sample(g, [](int c, double x, double, double) {
      return c == 2 ? std::sin(two_pi * x) : 0.0;
    });
    SpectralVectorField C = curl(forward_transform(f));
    RealVectorField expect = oracle::sample(g, [](int c, double x, double, double) {
      return c == 1 ? -two_pi * std::cos(two_pi * x) : 0.0;
    });
    CHECK(oracle::max_abs_diff(inverse_transform(C), expect) < 1e-12);
  }

  SECTION("ABC field is a curl eigenfield (finite-difference oracle)") {
    Grid3 g64(64);
    SpectralVectorField F = abc_field(g64, 1.0);
    CHECK(norm_l2(curl(F) - two_pi * F) <= 1e-13 * norm_l2(F));
    // independent check of the same fact with 6th-order differences
    RealVectorField fr = inverse_transform(F);
    RealVectorField cfd = oracle::curl_fd(fr);
    RealVectorField expect = fr;
    for (double& v : expect.v) v *= two_pi;
    CHECK(oracle::max_abs_diff(cfd, expect) < 1e-6 * two_pi);
  }

  SECTION("divergence of curl vanishes") {
    SpectralVectorField F = random_solenoidal(g, 9, 1.0, 2.0, g.kmax_kept);
    F.mode(1, 1, 0, 2) += cplx(0.3, -0.1);
    F.mode(1, -1, 0, -2) += cplx(0.3, 0.1);
    CHECK(div_max(curl(F)) <= 1e-13 * std::sqrt(h1_seminorm_sq(F)));
  }
}

TEST_CASE("dealiased cross product") {
  Grid3 g(16);

  SECTION("self cross product vanishes") {
    SpectralVectorField F = random_solenoidal(g, 5, 1.0, 2.0, g.kmax_kept);
    CHECK(norm_l2(cross_product_dealiased(F, F)) <= 1e-14 * norm_l2_sq(F) * g.n);
  }

  SECTION("constant fields") {
    SpectralVectorField F(g), G(g);
    F.mode(0, 0, 0, 0) = 1.0;
    G.mode(1, 0, 0, 0) = 1.0;
    SpectralVectorField C = cross_product_dealiased(F, G);
    CHECK(std::abs(C.mode(2, 0, 0, 0) - cplx(1.0, 0.0)) < 1e-14);
    CHECK(norm_l2_sq(C) == Catch::Approx(1.0).margin(1e-14));
  }

  SECTION("(0,0,sin 2 pi x) x (0,cos 2 pi x,0) = (-sin 4 pi x / 2, 0, 0)") {
    RealVectorField fr = oracle::sample(g, [](int c, double x, double, double) {
      return c == 2 ? std::sin(two_pi * x) : 0.0;
    });
    RealVectorField gr = oracle::sample(g, [](int c, double x, double, double) {
      return c == 1 ? std::cos(two_pi * x) : 0.0;
    });
    SpectralVectorField C =
        cross_product_dealiased(forward_transform(fr), forward_transform(gr));
    // quadrature oracle: the pointwise product sampled directly
    RealVectorField expect = oracle::sample(g, [](int c, double x, double, double) {
      return c == 0 ? -0.5 * std::sin(2.0 * two_pi * x) : 0.0;
    });
    CHECK(oracle::max_abs_diff(inverse_transform(C), expect) < 1e-12);
  }

  SECTION("grid mismatch") {
    SpectralVectorField F{Grid3(16)}, G{Grid3(32)};
    CHECK_THROWS_AS(cross_product_dealiased(F, G), DimensionError);
  }
}

TEST_CASE("inner product and Parseval") {
  Grid3 g(16);

  SECTION("positivity") {
    SpectralVectorField F = random_solenoidal(g, 6, 0.7, 2.0, g.kmax_kept);
    CHECK(inner_product(F, F) > 0.0);
    CHECK(inner_product(SpectralVectorField{g}, SpectralVectorField{g}) == 0.0);
  }

  SECTION("analytic integral of sin^2") {
    RealVectorField f = oracle::sample(g, [](int c, double x, double, double) {
      return c == 0 ? std::sin(two_pi * x) : 0.0;
    });
    SpectralVectorField F = forward_transform(f);
    CHECK(inner_product(F, F) == Catch::Approx(0.5).epsilon(1e-13));
  }

  SECTION("spectral inner product equals grid quadrature") {
    auto fn1 = [](int c, double x, double y, double z) {
      return std::sin(two_pi * (x + c * 0.2)) * std::cos(two_pi * (2 * y - z)) +
             0.3 * std::cos(two_pi * z);
    };
    auto fn2 = [](int c, double x, double y, double z) {
      return std::cos(two_pi * (z + 0.1 * c)) + 0.5 * std::sin(two_pi * (x + y));
    };
    RealVectorField a = oracle::sample(g, fn1), b = oracle::sample(g, fn2);
    const double spectral = inner_product(forward_transform(a), forward_transform(b));
    const double quad = oracle::quad_inner(a, b);
    REQUIRE(std::abs(quad) > 0.1);  // the overlap is genuinely nonzero
    CHECK(spectral == Catch::Approx(quad).epsilon(1e-12));
  }

  SECTION("curl adjointness on random fields") {
    SpectralVectorField A = random_solenoidal(g, 7, 1.0, 2.0, g.kmax_kept);
    SpectralVectorField B = random_solenoidal(g, 8, 1.0, 2.0, g.kmax_kept);
    CHECK(std::abs(inner_product(curl(A), B) - inner_product(A, curl(B))) <=
          1e-12 * std::sqrt(h1_seminorm_sq(A)) * norm_l2(B));
  }
}

TEST_CASE("triple product orthogonality survives dealiasing") {
  Grid3 g(32);
  for (std::uint64_t seed : {21u, 22u, 23u}) {
    SpectralVectorField B = random_solenoidal(g, seed, 1.0, 3.0, g.kmax_kept);
    SpectralVectorField J = curl(B);
    const double val = inner_product(J, cross_product_dealiased(J, B));
    const double scale = std::pow(norm_l2_sq(B) + h1_seminorm_sq(B), 1.5);
    CHECK(std::abs(val) <= 1e-12 * scale);
  }
}

TEST_CASE("spectral padding interpolates exactly") {
  Grid3 coarse(16), fine(48);
  SpectralVectorField F = random_solenoidal(coarse, 9, 1.0, 2.0, coarse.kmax_kept);
  SpectralVectorField P = spectral_pad(F, fine);
  CHECK(norm_l2_sq(P) == Catch::Approx(norm_l2_sq(F)).epsilon(1e-14));
  RealVectorField fr = inverse_transform(F);
  RealVectorField pr = inverse_transform(P);
  // fine grid contains every third coarse point: compare collocated values
  for (int c = 0; c < 3; ++c)
    for (int i = 0; i < coarse.n; ++i)
      CHECK(pr.at(c, 3 * i, 0, 0) == Catch::Approx(fr.at(c, i, 0, 0)).margin(1e-12));
  CHECK_THROWS_AS(spectral_pad(P, coarse), DimensionError);
}
