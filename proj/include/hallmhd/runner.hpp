#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include "hallmhd/config.hpp"
#include "hallmhd/diagnostics_io.hpp"
#include "hallmhd/integrator.hpp"
#include "hallmhd/snapshot.hpp"

namespace hallmhd {

namespace rundetail {

inline int worker_cap() {
  if (const char* env = std::getenv("HALLMHD_THREADS")) {
    try {
      const int v = std::stoi(env);
      if (v >= 1) return v;
    } catch (...) {
    }
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc ? static_cast<int>(hc) : 1;
}

inline std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream f(p);
  if (!f) throw ConfigError("cannot open output file '" + p.string() + "'");
  return f;
}

inline IntegratorConfig integrator_config(const RunConfig& cfg) {
  IntegratorConfig ic;
  ic.dt = cfg.dt;
  ic.t_end = cfg.t_end;
  ic.scheme = scheme_from_string(cfg.scheme);
  ic.cfl_safety = cfg.cfl_safety;
  ic.adapt = cfg.adapt;
  ic.diag_stride = cfg.diag_stride;
  return ic;
}

inline SpectralVectorField make_B0(const RunConfig& cfg, const Grid3& g,
                                   std::uint64_t seed) {
  const int kic = cfg.kmax_ic > 0 ? cfg.kmax_ic : g.kmax_kept;
  if (cfg.ic == "abc") return abc_field(g, cfg.amplitude);
  if (cfg.ic == "random")
    return random_solenoidal(g, seed, cfg.amplitude, cfg.k0, kic);
  if (cfg.ic == "smooth_null_free")
    return smooth_null_free(g, cfg.amplitude, 0.25 * cfg.amplitude);
  throw ConfigError("unknown initial condition '" + cfg.ic + "' for this mode");
}

inline void write_log(const std::filesystem::path& dir, const RunConfig& cfg,
                      const std::vector<std::string>& extra) {
  std::ofstream log = open_out(dir / "run.log");
  log << "mode = " << to_string(cfg.mode) << "\n";
  log << "seed = " << cfg.seed << "\n";
  for (const std::string& w : cfg.warnings) log << "warning: " << w << "\n";
  for (const std::string& e : extra) log << e << "\n";
}

}  // namespace rundetail

inline void run_hall3d_mode(const RunConfig& cfg) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);
  Grid3 g(cfg.n);
  SpectralVectorField B0(g);
  double t0 = 0.0;
  if (!cfg.resume.empty()) {
    auto [B, t] = load_snapshot_hall(cfg.resume);
    B0 = std::move(B);
    t0 = t;
  } else {
    B0 = rundetail::make_B0(cfg, g, cfg.seed);
  }
  std::ofstream csv = rundetail::open_out(fs::path(cfg.out_dir) / "diagnostics.csv");
  DiagnosticsCsvWriter writer(csv);
  IntegratorConfig ic = rundetail::integrator_config(cfg);
  RunStats stats;
  SpectralVectorField B = run_hall(
      B0, t0, ic, [&](const DiagnosticsRecord& r) { writer.write(r); }, true,
      &stats);
  save_snapshot(B, ic.t_end, (fs::path(cfg.out_dir) / "final.snap").string());
  rundetail::write_log(cfg.out_dir, cfg,
                       {"steps = " + std::to_string(stats.steps),
                        "rejections = " + std::to_string(stats.rejections)});
}

inline void run_coupled3d_mode(const RunConfig& cfg) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);
  Grid3 g(cfg.n);
  MhdState s0(g);
  if (!cfg.resume.empty()) {
    s0 = load_snapshot_coupled(cfg.resume);
  } else if (cfg.ic == "orszag_tang") {
    orszag_tang_like(g, cfg.amplitude, s0.u_hat, s0.B_hat);
  } else if (cfg.ic == "random") {
    const int kic = cfg.kmax_ic > 0 ? cfg.kmax_ic : g.kmax_kept;
    s0.u_hat = random_solenoidal(g, cfg.seed, cfg.amplitude, cfg.k0, kic);
    s0.B_hat = random_solenoidal(g, cfg.seed + 1, cfg.amplitude, cfg.k0, kic);
  } else {
    throw ConfigError("unknown initial condition '" + cfg.ic + "' for coupled3d");
  }
  std::ofstream csv = rundetail::open_out(fs::path(cfg.out_dir) / "diagnostics.csv");
  DiagnosticsCsvWriter writer(csv);
  IntegratorConfig ic = rundetail::integrator_config(cfg);
  RunStats stats;
  MhdState s = run_coupled(
      s0, ic, [&](const DiagnosticsRecord& r) { writer.write(r); }, &stats);
  save_snapshot(s, (fs::path(cfg.out_dir) / "final.snap").string());
  rundetail::write_log(cfg.out_dir, cfg,
                       {"steps = " + std::to_string(stats.steps),
                        "rejections = " + std::to_string(stats.rejections)});
}

inline void run_axi_mode(const RunConfig& cfg) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);
  AxiGrid g(cfg.nx, cfg.nr, cfg.lx, cfg.r_outer);
  AxiState s0 = cfg.resume.empty()
                    ? swirl_ring(g, cfg.amplitude, cfg.ring_rc, cfg.ring_sigma,
                                 cfg.ring_mx)
                    : load_snapshot_axi(cfg.resume);
  std::ofstream csv = rundetail::open_out(fs::path(cfg.out_dir) / "diagnostics.csv");
  DiagnosticsCsvWriter writer(csv);
  std::ofstream track = rundetail::open_out(fs::path(cfg.out_dir) / "axi_track.csv");
  track << "t,max_abs_psi,max_abs_b\n";
  AxiState s = run_axi(
      std::move(s0), cfg.t_end,
      [&](const AxiRunRecord& r) {
        std::optional<double> cols[DiagnosticsCsvWriter::n_value_columns] = {};
        cols[1] = 0.5 * r.swirl_energy;  // energy_sym
        cols[3] = 0.5 * r.swirl_energy;  // energy_B
        writer.write_row(r.t, cols);
        track << DiagnosticsCsvWriter::fmt(r.t) << ','
              << DiagnosticsCsvWriter::fmt(r.max_abs_psi) << ','
              << DiagnosticsCsvWriter::fmt(r.max_abs_b) << "\n";
      },
      cfg.diag_stride);
  save_snapshot(s, (fs::path(cfg.out_dir) / "final.snap").string());
  rundetail::write_log(cfg.out_dir, cfg, {});
}

inline void run_kmc_mode(const RunConfig& cfg, std::ostream& out) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);
  KmcResult res = run_kmc(cfg.b_left, cfg.b_right, cfg.r0, cfg.visc, cfg.nx,
                          cfg.lx, cfg.t_end);
  std::ofstream csv = rundetail::open_out(fs::path(cfg.out_dir) / "diagnostics.csv");
  DiagnosticsCsvWriter writer(csv);  // header-only series; profiles go below
  (void)writer;
  std::ofstream track = rundetail::open_out(fs::path(cfg.out_dir) / "shock_track.csv");
  track << "t,position\n";
  for (std::size_t i = 0; i < res.times.size(); ++i)
    track << DiagnosticsCsvWriter::fmt(res.times[i]) << ','
          << DiagnosticsCsvWriter::fmt(res.positions[i]) << "\n";
  const double rh = rankine_hugoniot_speed(cfg.b_left, cfg.b_right, cfg.r0);
  std::vector<std::string> lines;
  lines.push_back("nu = " + DiagnosticsCsvWriter::fmt(res.nu));
  lines.push_back("rankine_hugoniot_speed = " + DiagnosticsCsvWriter::fmt(rh));
  if (res.speed_defined)
    lines.push_back("measured_speed = " +
                    DiagnosticsCsvWriter::fmt(res.measured_speed));
  else
    lines.push_back("measured_speed = undefined");
  if (res.truncated)
    lines.push_back("warning: wave approached the companion structure; "
                    "fit uses the truncated sample");
  rundetail::write_log(cfg.out_dir, cfg, lines);
  for (const std::string& l : lines) out << l << "\n";
}

inline void run_maxreg_mode(const RunConfig& cfg) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);
  Grid3 g(cfg.n);
  MaxwellRegState s0 =
      cfg.resume.empty()
          ? MaxwellRegState(rundetail::make_B0(cfg, g, cfg.seed),
                            SpectralVectorField(g), cfg.eps, 0.0)
          : load_snapshot_maxreg(cfg.resume);
  if (cfg.resume.empty()) s0.E_hat = well_prepared_E(s0.B_hat);
  std::ofstream csv = rundetail::open_out(fs::path(cfg.out_dir) / "diagnostics.csv");
  DiagnosticsCsvWriter writer(csv);
  std::ofstream cons = rundetail::open_out(fs::path(cfg.out_dir) / "constraint.csv");
  cons << "t,max_EB,energy_E\n";
  MaxwellRegState s = run_maxreg(
      std::move(s0), cfg.t_end, cfg.dt,
      [&](const MaxregRecord& r) {
        std::optional<double> cols[DiagnosticsCsvWriter::n_value_columns] = {};
        cols[1] = r.energy_total;  // energy_sym: the conserved bookkeeping
        cols[3] = r.energy_B;
        cols[9] = r.div_B_max;
        writer.write_row(r.t, cols);
        cons << DiagnosticsCsvWriter::fmt(r.t) << ','
             << DiagnosticsCsvWriter::fmt(r.max_EB) << ','
             << DiagnosticsCsvWriter::fmt(r.energy_E) << "\n";
      },
      cfg.diag_stride);
  save_snapshot(s, (fs::path(cfg.out_dir) / "final.snap").string());
  rundetail::write_log(cfg.out_dir, cfg, {});
}

inline void run_eps_sweep_mode(const RunConfig& cfg, std::ostream& out) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);
  Grid3 g(cfg.n);
  SpectralVectorField B0 = rundetail::make_B0(cfg, g, cfg.seed);

  // fan the member runs out across workers, one subdirectory each
  const int workers =
      std::min<int>(rundetail::worker_cap(), static_cast<int>(cfg.eps_list.size()));
  std::vector<MaxwellRegState> results(cfg.eps_list.size(), MaxwellRegState());
  std::vector<std::string> failures(cfg.eps_list.size());
  std::atomic<std::size_t> next{0};
  double dt = cfg.dt;
  if (dt <= 0.0) {
    double eps_min = cfg.eps_list[0];
    for (double e : cfg.eps_list) eps_min = std::min(eps_min, e);
    dt = 0.4 * 0.5 * eps_min * g.dx();
  }
  const long nsteps = std::max<long>(1, std::lround(cfg.t_end / dt));
  dt = cfg.t_end / nsteps;

  auto work = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cfg.eps_list.size()) return;
      const double eps = cfg.eps_list[i];
      try {
        fs::path sub = fs::path(cfg.out_dir) /
                       ("eps_" + DiagnosticsCsvWriter::fmt(eps));
        fs::create_directories(sub);
        std::ofstream cons = rundetail::open_out(sub / "constraint.csv");
        cons << "t,max_EB,energy_E\n";
        MaxwellRegState s(B0, well_prepared_E(B0), eps, 0.0);
        s = run_maxreg(std::move(s), cfg.t_end, dt,
                       [&](const MaxregRecord& r) {
                         cons << DiagnosticsCsvWriter::fmt(r.t) << ','
                              << DiagnosticsCsvWriter::fmt(r.max_EB) << ','
                              << DiagnosticsCsvWriter::fmt(r.energy_E) << "\n";
                       });
        results[i] = std::move(s);
      } catch (const std::exception& e) {
        failures[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& th : pool) th.join();

  SpectralVectorField ref = hall_nonresistive_rk2(B0, cfg.t_end, dt);

  std::ofstream summary = rundetail::open_out(fs::path(cfg.out_dir) / "eps_sweep.csv");
  summary << "eps,deviation,status\n";
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int nfit = 0;
  for (std::size_t i = 0; i < cfg.eps_list.size(); ++i) {
    const double eps = cfg.eps_list[i];
    if (!failures[i].empty()) {
      summary << DiagnosticsCsvWriter::fmt(eps) << ",,failed: " << failures[i]
              << "\n";
      continue;
    }
    const double dev = norm_l2(results[i].B_hat - ref);
    summary << DiagnosticsCsvWriter::fmt(eps) << ','
            << DiagnosticsCsvWriter::fmt(dev) << ",ok\n";
    if (dev > 0) {
      const double x = std::log(eps), y = std::log(dev);
      sx += x; sy += y; sxx += x * x; sxy += x * y;
      ++nfit;
    }
  }
  std::vector<std::string> lines;
  if (nfit >= 2) {
    const double order = (nfit * sxy - sx * sy) / (nfit * sxx - sx * sx);
    lines.push_back("fitted_order = " + DiagnosticsCsvWriter::fmt(order));
  } else {
    lines.push_back("fitted_order = undefined");
  }
  rundetail::write_log(cfg.out_dir, cfg, lines);
  for (const std::string& l : lines) out << l << "\n";
}

inline void run_scaling_mode(const RunConfig& cfg, std::ostream& out) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);
  DimensionlessGroups gr = compute_groups(cfg.phys);
  RegimeLabel label = classify_regime(gr, cfg.threshold);
  auto fmt = DiagnosticsCsvWriter::fmt;
  std::vector<std::pair<std::string, double>> rows = {
      {"eps2", gr.eps2},       {"alpha2", gr.alpha2},
      {"beta", gr.beta},       {"gamma", gr.gamma},
      {"lambda2", gr.lambda2}, {"eta_ratio", gr.eta_ratio},
      {"inv_alpha2", gr.inv_alpha2},
      {"beta_over_alpha4", gr.beta_over_alpha4},
      {"u0", gr.u0},           {"B0", gr.B0},
      {"E0", gr.E0},           {"t0", gr.t0},
  };
  std::ofstream csv = rundetail::open_out(fs::path(cfg.out_dir) / "groups.csv");
  csv << "name,value\n";
  for (const auto& [k, v] : rows) {
    csv << k << ',' << fmt(v) << "\n";
    out << k << " = " << fmt(v) << "\n";
  }
  csv << "regime," << to_string(label) << "\n";
  out << "regime = " << to_string(label) << "\n";
  rundetail::write_log(cfg.out_dir, cfg, {"regime = " + to_string(label)});
}

// ---------------------------------------------------------------------------
// verify: the structural property suite; returns false on any failure.

inline bool verify_properties(std::ostream& out) {
  struct Check {
    std::string name;
    bool pass;
    double value;
    double bound;
  };
  std::vector<Check> checks;
  auto record = [&](const std::string& name, double value, double bound) {
    checks.push_back({name, value <= bound, value, bound});
  };

  Grid3 g(32);
  // Parseval / transform round trip
  {
    SpectralVectorField F = random_solenoidal(g, 11, 1.0, 3.0, g.kmax_kept);
    RealVectorField fr = inverse_transform(F);
    double quad = 0.0;
    for (double v : fr.v) quad += v * v;
    quad /= g.npoints();
    record("parseval", std::abs(quad - norm_l2_sq(F)) / norm_l2_sq(F), 1e-12);
    SpectralVectorField back = forward_transform(fr);
    record("transform round trip", norm_l2(back - F) / norm_l2(F), 1e-12);
  }
  // projection idempotence + self-adjointness
  {
    SpectralVectorField F = random_solenoidal(g, 12, 1.0, 4.0, g.kmax_kept);
    SpectralVectorField G = random_solenoidal(g, 13, 1.0, 4.0, g.kmax_kept);
    // un-project by adding a gradient-like part
    SpectralVectorField raw = F;
    raw.mode(0, 1, 2, 0) += cplx(0.3, 0.1);
    raw.mode(0, -1, -2, 0) += cplx(0.3, -0.1);
    SpectralVectorField p1 = leray_project(raw);
    record("projection idempotent", norm_l2(leray_project(p1) - p1) /
                                        std::max(norm_l2(p1), 1e-300),
           1e-14);
    record("projection self-adjoint",
           std::abs(inner_product(leray_project(raw), G) -
                    inner_product(raw, leray_project(G))) /
               (norm_l2(raw) * norm_l2(G)),
           1e-12);
  }
  // curl of gradient, divergence of curl
  {
    // gradient of a random scalar: phi(k) random, F = 2 pi i k phi
    SpectralVectorField grad(g);
    std::mt19937_64 rng(77);
    std::normal_distribution<double> nd;
    for (int kx = -3; kx <= 3; ++kx)
      for (int ky = -3; ky <= 3; ++ky)
        for (int kz = 1; kz <= 3; ++kz) {
          const cplx phi(nd(rng), nd(rng));
          const cplx i2pi(0.0, two_pi);
          grad.mode(0, kx, ky, kz) = i2pi * double(kx) * phi;
          grad.mode(1, kx, ky, kz) = i2pi * double(ky) * phi;
          grad.mode(2, kx, ky, kz) = i2pi * double(kz) * phi;
          grad.mode(0, -kx, -ky, -kz) = std::conj(grad.mode(0, kx, ky, kz));
          grad.mode(1, -kx, -ky, -kz) = std::conj(grad.mode(1, kx, ky, kz));
          grad.mode(2, -kx, -ky, -kz) = std::conj(grad.mode(2, kx, ky, kz));
        }
    record("curl of gradient", norm_l2(curl(grad)) / norm_l2(grad), 1e-13);
    SpectralVectorField F = random_solenoidal(g, 14, 1.0, 4.0, g.kmax_kept);
    record("divergence of curl",
           div_max(curl(F)) / std::sqrt(h1_seminorm_sq(F)), 1e-13);
  }
  // Hall skew-symmetry and energy-balance identity
  {
    double worst_skew = 0.0, worst_balance = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      SpectralVectorField B =
          random_solenoidal(g, 100 + trial, 1.0, 3.0, g.kmax_kept);
      SpectralVectorField J = curl(B);
      const double scale_skew =
          (norm_l2_sq(B) + h1_seminorm_sq(B)) * max_abs_physical(B);
      worst_skew = std::max(
          worst_skew,
          std::abs(inner_product(J, cross_product_dealiased(J, B))) / scale_skew);
      const double lhs = inner_product(B, rhs_hall_only(B));
      const double rhs = -h1_seminorm_sq(B);
      worst_balance =
          std::max(worst_balance, std::abs(lhs - rhs) / std::abs(rhs));
    }
    record("hall skew-symmetry", worst_skew, 1e-12);
    record("hall energy balance", worst_balance, 1e-12);
  }
  // mean-mode conservation
  {
    SpectralVectorField B = random_solenoidal(g, 21, 1.0, 3.0, g.kmax_kept);
    B.mode(0, 0, 0, 0) = 0.4;  // nonzero mean survives the RHS untouched
    SpectralVectorField dB = rhs_hall_only(B);
    double mean = 0.0;
    for (int c = 0; c < 3; ++c) mean += std::abs(dB.mode(c, 0, 0, 0));
    record("mean-mode conservation", mean / norm_l2(B), 1e-13);
  }
  // purely swirling data stays purely swirling
  {
    AxiGrid ga(64, 64, 4.0, 4.0);
    AxiState s = swirl_ring(ga, 1.0, 1.0, 0.25, 0.5);
    s = run_axi(std::move(s), 0.05);
    record("psi invariance", s.psi.max_abs() / s.b.max_abs(), 1e-13);
  }
  // constraint conservation of the regularized system; the drift is pure
  // time-integration error, so a modest dt keeps it under the bound
  {
    Grid3 gm(32);
    SpectralVectorField B0 = smooth_null_free(gm, 1.0, 0.1);
    MaxwellRegState s(B0, well_prepared_E(B0), 1e-2, 0.0);
    const double scale_c =
        max_abs_physical(s.E_hat) * max_abs_physical(s.B_hat);
    s = run_maxreg(std::move(s), 0.01, 2e-5);
    record("constraint conservation",
           max_constraint_violation(s) / std::max(scale_c, 1e-300), 1e-8);
  }

  bool all = true;
  for (const Check& c : checks) {
    out << (c.pass ? "PASS" : "FAIL") << "  " << c.name << "  (" << c.value
        << " <= " << c.bound << ")\n";
    all = all && c.pass;
  }
  return all;
}

// Returns true on success; only the verify mode can return false without
// throwing.
inline bool dispatch_run(const RunConfig& cfg, std::ostream& out) {
  switch (cfg.mode) {
    case RunMode::hall3d: run_hall3d_mode(cfg); return true;
    case RunMode::coupled3d: run_coupled3d_mode(cfg); return true;
    case RunMode::axi: run_axi_mode(cfg); return true;
    case RunMode::kmc: run_kmc_mode(cfg, out); return true;
    case RunMode::maxreg: run_maxreg_mode(cfg); return true;
    case RunMode::eps_sweep: run_eps_sweep_mode(cfg, out); return true;
    case RunMode::scaling: run_scaling_mode(cfg, out); return true;
    case RunMode::verify: return verify_properties(out);
  }
  return false;
}

}  // namespace hallmhd
