#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cascade/pipeline.hpp"
#include "cascade/report.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  unsigned seed = 12345;
  std::optional<int> n_sim;
  std::string integrator = "expm";
};

cascade::RunConfig load(const CommonArgs& args) {
  cascade::RunConfig config = cascade::load_config(args.config_path);
  if (args.n_sim) config.n_sim = *args.n_sim;
  if (!args.out_dir.empty()) config.output_dir = args.out_dir;
  return config;
}

void add_common(CLI::App* cmd, CommonArgs& args, bool needs_config) {
  if (needs_config) {
    cmd->add_option("--config", args.config_path, "JSON run configuration")
        ->required();
  }
  cmd->add_option("--out", args.out_dir, "output directory");
  cmd->add_option("--seed", args.seed, "seed for randomized spot checks");
  cmd->add_option("--n-sim", args.n_sim, "override the simulation mode count");
  cmd->add_option("--integrator", args.integrator, "expm or rk4")
      ->check(CLI::IsMember({"expm", "rk4"}));
}

int cmd_synthesize(const CommonArgs& args) {
  const cascade::RunConfig config = load(args);
  const cascade::SynthesisOutcome synth = cascade::run_synthesis(config);

  std::filesystem::create_directories(config.output_dir);
  const auto path = std::filesystem::path(config.output_dir) / "controller.txt";
  std::ofstream(path, std::ios::binary) << synth.document;

  std::cout << cascade::render_certification(synth.certification)
            << "controller written to " << path.string() << "\n";
  return synth.certification.all_passed() ? 0 : 1;
}

int cmd_simulate(const CommonArgs& args) {
  const cascade::RunConfig config = load(args);
  const cascade::SynthesisOutcome synth = cascade::run_synthesis(config);
  if (!synth.certification.all_passed()) {
    std::cerr << cascade::render_certification(synth.certification)
              << "refusing to simulate an uncertified controller\n";
    return 1;
  }
  const auto method = args.integrator == "rk4" ? cascade::Integrator::Rk4
                                               : cascade::Integrator::Expm;
  const cascade::SimulationOutcome sim =
      cascade::run_simulation(config, synth, method);
  cascade::write_simulation_artifacts(config.output_dir, config, sim);
  std::cout << "trajectory artifacts written to " << config.output_dir << "\n";
  return 0;
}

int cmd_verify(const CommonArgs& args) {
  const cascade::RunConfig config = load(args);
  const cascade::VerifyOutcome outcome = cascade::run_verify(config, args.seed);
  std::cout << outcome.text;
  return outcome.passed ? 0 : 1;
}

void print_repro(const cascade::ReproOutcome& outcome) {
  std::cout << outcome.name << ":\n";
  for (const auto& row : outcome.rows) {
    std::printf("  %-26s %s  %s\n", row.check.c_str(),
                row.passed ? "PASS" : "FAIL", row.detail.c_str());
  }
}

int cmd_repro(const CommonArgs& args) {
  const std::string base = args.out_dir.empty() ? "repro_out" : args.out_dir;
  const cascade::ReproOutcome internal =
      cascade::repro_internal_example(base + "/internal");
  const cascade::ReproOutcome boundary =
      cascade::repro_boundary_example(base + "/boundary");
  print_repro(internal);
  print_repro(boundary);
  std::printf("%s  %s\n", internal.name.c_str(),
              internal.passed() ? "PASS" : "FAIL");
  std::printf("%s  %s\n", boundary.name.c_str(),
              boundary.passed() ? "PASS" : "FAIL");
  return internal.passed() && boundary.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Controller synthesis and spectral closed-loop simulation for "
      "underactuated coupled reaction-diffusion systems"};
  app.require_subcommand(1);

  CommonArgs args;
  CLI::App* synthesize =
      app.add_subcommand("synthesize", "synthesize and certify a controller");
  add_common(synthesize, args, true);
  CLI::App* simulate =
      app.add_subcommand("simulate", "simulate the certified closed loop");
  add_common(simulate, args, true);
  CLI::App* verify =
      app.add_subcommand("verify", "run the full property-check report");
  add_common(verify, args, true);
  CLI::App* repro = app.add_subcommand(
      "repro", "run both built-in examples against their pinned expectations");
  add_common(repro, args, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (synthesize->parsed()) return cmd_synthesize(args);
    if (simulate->parsed()) return cmd_simulate(args);
    if (verify->parsed()) return cmd_verify(args);
    if (repro->parsed()) return cmd_repro(args);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }
  return 1;
}
