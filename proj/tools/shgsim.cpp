#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "shgsim/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Cavity-enhanced second-harmonic generation simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  double power_w = -1.0;
  std::string grid_text;

  auto add_common = [&](CLI::App* sub, bool needs_out = true) {
    sub->add_option("--config", config_path, "run configuration file")->required();
    auto* out = sub->add_option("--out", out_path, "output table path");
    if (needs_out) out->required();
    sub->add_option("--power-W", power_w, "override the pump power (watts)");
    sub->add_option("--grid", grid_text, "override the grid as start:stop:n");
  };

  add_common(app.add_subcommand("simulate", "steady state at one operating point"));
  add_common(app.add_subcommand("sweep", "efficiency versus input power"));
  add_common(app.add_subcommand("scan", "quasi-static detuning scan"));
  add_common(app.add_subcommand("fit", "least-squares nonlinearity estimate"));
  add_common(app.add_subcommand("match", "impedance-matching pump power search"));
  add_common(app.add_subcommand("eigenmode", "cavity TEM00 eigenmode waist"));

  CLI11_PARSE(app, argc, argv);

  shgsim::RunOptions options;
  const std::string sub_name = app.get_subcommands().front()->get_name();
  options.command = *shgsim::command_from_name(sub_name);
  options.out_path = out_path;
  if (app.get_subcommands().front()->count("--power-W") > 0)
    options.power_override = power_w;

  try {
    options.config = shgsim::parse_config(config_path);
    if (!grid_text.empty())
      options.grid_override = shgsim::parse_grid_spec(grid_text);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }

  return shgsim::run_command(options, std::cerr);
}
