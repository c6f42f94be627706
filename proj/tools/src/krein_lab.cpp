#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "krein/errors.hpp"
#include "krein_cli/config.hpp"
#include "krein_cli/run.hpp"

using namespace krein::cli;

int main(int argc, char** argv) {
  CLI::App app{"Krein resolvent laboratory: point interactions, segment perturbations, finite-rank checks"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  for (Command c : {Command::bound_states, Command::green, Command::verify, Command::trace}) {
    CLI::App* sub = app.add_subcommand(to_string(c));
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--out", out_dir, "output directory")->capture_default_str();
    sub->add_option("--seed", seed, "overrides the config seed");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    const Command command = parse_command(app.get_subcommands().front()->get_name());
    const RunConfig config = load_config(config_path, command, seed);
    return run(config, out_dir, std::cout);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kIoError;
  } catch (const krein::Error& e) {
    std::cerr << "model error: " << e.what() << "\n";
    return kModelError;
  }
}
