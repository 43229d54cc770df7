#include <cstdint>
#include <exception>
#include <iostream>

#include "CLI11.hpp"
#include "qlc/cli.hpp"
#include "qlc/diag.hpp"

namespace {

void add_common(CLI::App* sub, qlc::RunConfig& run) {
  sub->add_option("--config", run.config_path, "plant and solver configuration")
      ->required();
  sub->add_option("--out", run.out_path, "output file or directory");
  sub->add_option("--seed", run.seed, "override the configured seed");
  sub->add_option("--samples", run.samples, "override the configured sample count");
  sub->add_option("--workers", run.workers, "worker threads for sampled checks")
      ->check(CLI::Range(0, 1024));
}

}  // namespace

int main(int argc, char** argv) {
  qlc::set_warning_handler(
      [](const std::string& msg) { std::cerr << "warning: " << msg << "\n"; });

  CLI::App app{"sliding-mode synthesis toolkit for quaternionic plants"};
  app.require_subcommand(1);

  qlc::RunConfig run;
  CLI::App* constants =
      app.add_subcommand("constants", "derive and verify the constants table");
  add_common(constants, run);
  CLI::App* check =
      app.add_subcommand("check", "structural and sampled one-sided checks");
  add_common(check, run);
  CLI::App* synthesize =
      app.add_subcommand("synthesize", "run the certificate synthesis loop");
  add_common(synthesize, run);
  CLI::App* simulate =
      app.add_subcommand("simulate", "integrate the closed loop and verify verdicts");
  add_common(simulate, run);
  simulate->add_option("--synthesis", run.synthesis_path, "synthesis artifact")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (constants->parsed()) return qlc::cmd_constants(run);
    if (check->parsed()) return qlc::cmd_check(run);
    if (synthesize->parsed()) return qlc::cmd_synthesize(run);
    if (simulate->parsed()) return qlc::cmd_simulate(run);
  } catch (const qlc::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return qlc::exit_config_error;
  } catch (const qlc::synthesis_abort& e) {
    std::cerr << "synthesis aborted: " << e.what() << "\n";
    return qlc::exit_synthesis_abort;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return qlc::exit_config_error;
}
