#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "cli/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Vector-valued obstacle problem on the unit disk"};
  app.require_subcommand(1);
  std::string config;
  const std::map<std::string, std::string> help{
      {"solve", "solve the configured scenario and write its checkpoint and reports"},
      {"verify", "check KKT, tangency, admissibility and viscosity bounds of a critical point"},
      {"decay", "Morrey decay fits of grad v at interior centers"},
      {"hodge", "Hodge split of lambda^2 grad v on a ball and harmonic-part decay"},
      {"wente", "Wente ratio sweep over seeded smooth pairs"},
      {"so-solve", "rotation-valued solve (SO(2) also compared with the circle solve)"},
      {"export", "export u, mu, g, |grad v|^2 and Lap lambda of a critical point"},
  };
  for (const std::string& name : geobs::cli::command_names()) {
    CLI::App* sub = app.add_subcommand(name, help.at(name));
    sub->add_option("config", config, "run configuration file (key = value)")->required();
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : geobs::cli::kUsage;
  }
  return geobs::cli::run(app.get_subcommands().front()->get_name(), config, std::cerr);
}
