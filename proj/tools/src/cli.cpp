#include <iostream>

#include "CLI11.hpp"
#include "fracsing/errors.hpp"
#include "fracsing_cli/commands.hpp"

namespace fracsing::cli {

int run(int argc, char** argv) {
  CLI::App app{"Singular solutions of fractional Lane-Emden problems on the unit ball", "fracsing"};
  app.set_version_flag("--version", FRACSING_VERSION);
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_file;
  std::vector<std::string> overrides;
  int threads = -1;
  bool emit_plots = false;
  std::string output_dir;
  std::string profile;
  app.add_option("-c,--config", config_file, "JSON configuration file")->check(CLI::ExistingFile);
  app.add_option("--set", overrides, "Override a config entry: key=value (repeatable)")
      ->take_all()
      ->allow_extra_args(false);
  app.add_option("--threads", threads, "Worker threads for operator assembly (0 = all cores)")
      ->check(CLI::NonNegativeNumber);
  app.add_flag("--emit-plots", emit_plots, "Also write long-format plotting CSVs");
  app.add_option("-o,--output", output_dir, "Output directory");

  const std::vector<std::pair<std::string, std::string>> described = {
      {"solve", "Minimal singular solution for the configured k"},
      {"kstar", "Bracket the extremal source strength k*"},
      {"stability", "First linearized eigenvalue along the minimal branch"},
      {"mountain-pass", "Second (mountain-pass) solution below k*"},
      {"classify", "Classify the isolated singularity of a saved profile"},
      {"eigen", "First eigenpair of the fractional Laplacian on the ball"},
      {"bifurcation", "Minimal and second branches as k varies"},
  };
  for (const auto& [name, help] : described) {
    auto* sub = app.add_subcommand(name, help);
    if (name == "classify") {
      sub->add_option("profile", profile, "Profile CSV written by solve or kstar")
          ->check(CLI::ExistingFile);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitSuccess : kExitUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  RunConfig cfg;
  try {
    if (!profile.empty()) {
      overrides.push_back("profile=\"" + profile + "\"");
    }
    cfg = load_config(config_file, overrides);
    if (threads >= 0) {
      cfg.threads = threads;
    }
    if (emit_plots) {
      cfg.emit_plots = true;
    }
    if (!output_dir.empty()) {
      cfg.output.directory = output_dir;
    }
    cfg.validate();
    std::filesystem::create_directories(cfg.output.directory);
  } catch (const std::exception& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitUsage;
  }
  return dispatch(command, cfg, std::cerr);
}

}  // namespace fracsing::cli
