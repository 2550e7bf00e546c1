// Command-line front end:
//   hallmhd <mode> --config <file> [--out <dir>] [--seed <u64>] [--resume <snapshot>]
// Exit codes: 0 success, 2 config error, 3 numerical blow-up,
// 4 verification failure.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "hallmhd/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"pseudo-spectral Hall-MHD simulation suite"};
  app.require_subcommand(0, 0);

  std::string mode_arg, config_path, out_dir, resume;
  std::uint64_t seed = 0;
  bool seed_given = false;

  app.add_option("mode", mode_arg,
                 "hall3d | coupled3d | axi | kmc | maxreg | eps-sweep | "
                 "scaling | verify")
      ->required();
  app.add_option("--config", config_path, "key = value configuration file");
  app.add_option("--out", out_dir, "output directory (overrides out_dir)");
  auto* seed_opt = app.add_option("--seed", seed, "RNG seed (overrides seed)");
  app.add_option("--resume", resume, "snapshot to continue from");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? 2 : 0;
  }
  seed_given = seed_opt->count() > 0;

  using namespace hallmhd;
  auto mode = mode_from_string(mode_arg);
  if (!mode) {
    std::cerr << "unknown mode '" << mode_arg << "'\n";
    return 2;
  }

  std::string text;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "cannot open config file '" << config_path << "'\n";
      return 2;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  } else if (*mode != RunMode::verify) {
    std::cerr << "mode '" << mode_arg << "' needs --config\n";
    return 2;
  }

  try {
    RunConfig cfg = parse_config(text, mode);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (seed_given) cfg.seed = seed;
    if (!resume.empty()) cfg.resume = resume;
    for (const std::string& w : cfg.warnings)
      std::cerr << "warning: " << w << "\n";
    const bool ok = dispatch_run(cfg, std::cout);
    if (!ok) {
      std::cerr << "verification failed\n";
      return 4;
    }
    return 0;
  } catch (const ConfigError& e) {
    for (const std::string& issue : e.issues) std::cerr << issue << "\n";
    return 2;
  } catch (const SnapshotError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const BlowUpError& e) {
    std::cerr << e.what() << " (last good t = " << e.last_good_t << ")\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
}
