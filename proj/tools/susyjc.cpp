// susyjc: JC/AJC dynamics runner.
//
//   susyjc evolve   --config run.cfg [--output dir]
//   susyjc sweep    --config run.cfg [--output dir] [--threads n]
//   susyjc wigner   --config run.cfg [--output dir] [--threads n] [--convention paper|standard]
//   susyjc validate --config run.cfg [--output dir]
//
// Exit codes: 0 success, 1 internal error, 2 config error, 3 degenerate input
// (SUSY singlet), 4 truncation guard, 5 validation failure.

#include "runners.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

enum ExitCode { kOk = 0, kInternal = 1, kConfig = 2, kDegenerate = 3, kTruncation = 4, kValidation = 5 };

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw susyjc::ConfigError("cannot write '" + path.string() + "'");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace susyjc;
  using namespace susyjc::cli;

  CLI::App app{"Exact JC / AJC dynamics, SUSY map, photon statistics and Wigner functions"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string output_dir;
  int threads = 0;
  std::string convention;
  app.add_option("--config", config_path, "run configuration file")->required()->check(CLI::ExistingFile);
  app.add_option("--output", output_dir, "output directory (overrides `output` in the config)");
  app.add_option("--threads", threads, "worker threads for sweeps and Wigner grids")->check(CLI::PositiveNumber);
  app.add_option("--convention", convention, "Wigner prefactor convention")->check(CLI::IsMember({"paper", "standard"}));

  auto* evolve = app.add_subcommand("evolve", "time series of observables -> evolve.csv");
  auto* sweep = app.add_subcommand("sweep", "theta x t landscape -> sweep.csv");
  auto* wigner = app.add_subcommand("wigner", "Wigner snapshots -> wigner_t*.csv, wigner_manifest.txt");
  auto* validate = app.add_subcommand("validate", "identity and oracle checks -> validate.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    RunConfig cfg = load_config(config_path);
    if (!output_dir.empty()) cfg.output = output_dir;
    if (threads > 0) cfg.threads = threads;
    if (!convention.empty()) cfg.convention = convention == "paper" ? WignerConvention::paper : WignerConvention::standard;
    const std::filesystem::path dir(cfg.output);
    std::filesystem::create_directories(dir);

    if (*evolve) {
      auto out = open_output(dir / "evolve.csv");
      run_evolve(cfg, out);
    } else if (*sweep) {
      auto out = open_output(dir / "sweep.csv");
      run_sweep(cfg, out);
    } else if (*wigner) {
      if (!run_wigner(cfg, dir)) {
        std::cerr << "susyjc: some Wigner snapshots failed the support guard; see wigner_manifest.txt\n";
        return kTruncation;
      }
    } else if (*validate) {
      const ValidationReport report = run_validate(cfg);
      auto out = open_output(dir / "validate.csv");
      report.write(out);
      report.write(std::cout);
      if (!report.passed()) {
        std::cerr << "susyjc: validation failed\n";
        return kValidation;
      }
    }
    return kOk;
  } catch (const ConfigError& e) {
    std::cerr << "susyjc: config error: " << e.what() << '\n';
    return kConfig;
  } catch (const DegenerateError& e) {
    std::cerr << "susyjc: degenerate input: " << e.what() << '\n';
    return kDegenerate;
  } catch (const TruncationError& e) {
    std::cerr << "susyjc: truncation: " << e.what() << '\n';
    return kTruncation;
  } catch (const ValidationError& e) {
    std::cerr << "susyjc: validation: " << e.what() << '\n';
    return kValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "susyjc: invalid input: " << e.what() << '\n';
    return kConfig;
  } catch (const std::out_of_range& e) {
    std::cerr << "susyjc: invalid input: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "susyjc: error: " << e.what() << '\n';
    return kInternal;
  }
}
