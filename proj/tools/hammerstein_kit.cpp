// hammerstein-kit {constants|check|solve|example} [flags]

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "hkit/cli.hpp"

namespace {

struct Flags {
  std::size_t nodes = 0;
  double tol = 0.0;
  std::string rhos, menu, mode, json_path;
  int starts = 0;
  std::vector<std::string> params;
};

void common_flags(CLI::App* app, Flags& f) {
  app->add_option("--nodes", f.nodes, "Nystrom node count (default from the problem file, else 200)");
  app->add_option("--tol", f.tol, "solver residual tolerance");
  app->add_option("--json", f.json_path, "write the JSON report to this path");
  app->add_option("--param", f.params, "override a problem parameter, name=value (repeatable)");
}

hkit::cli::Options to_options(const Flags& f) {
  hkit::cli::Options o;
  if (f.nodes) o.nodes = f.nodes;
  if (f.tol > 0.0) o.tol = f.tol;
  if (!f.rhos.empty()) o.rhos = hkit::cli::parse_list(f.rhos);
  if (!f.menu.empty()) o.menu = f.menu;
  if (!f.mode.empty()) o.mode = f.mode;
  if (f.starts > 0) o.starts = f.starts;
  for (const auto& kv : f.params) o.params.insert(hkit::parse_override(kv));
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Existence, localization and multiplicity checks for perturbed Hammerstein equations"};
  app.require_subcommand(1);
  Flags flags;
  std::string target;

  auto* constants = app.add_subcommand("constants", "kernel, boundary and S-kernel constants");
  auto* check = app.add_subcommand("check", "run the criteria menus");
  auto* solve = app.add_subcommand("solve", "solve u = Tu by Nystrom discretisation and fixed-point iteration");
  auto* example = app.add_subcommand("example", "reproduce a bundled example against pinned values");
  for (auto* sc : {constants, check, solve}) {
    sc->add_option("problem", target, "problem file, or a bundled scenario name (example1, example2, example3, zero)")
        ->required();
    common_flags(sc, flags);
  }
  check->add_option("--rhos", flags.rhos, "comma-separated radii");
  check->add_option("--menu", flags.menu, "S, S1..S6, H, Z, T, eigen, noext, lplus, index or all (comma-separated)");
  check->add_option("--mode", flags.mode, "full or simplified index conditions");
  solve->add_option("--starts", flags.starts, "number of concurrent starts");
  example->add_option("n", target, "example number (1, 2 or 3)")->required();
  example->add_option("--json", flags.json_path, "write the JSON report to this path");

  CLI11_PARSE(app, argc, argv);

  hkit::cli::Options opts;
  try {
    opts = to_options(flags);
  } catch (const hkit::Error& e) {
    std::cerr << "ParseError: " << e.what() << "\n";
    return hkit::cli::kConditionError;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  const auto result = hkit::cli::run_command(command, target, opts);
  (result.exit_code == hkit::cli::kConditionError ? std::cerr : std::cout) << result.text;
  if (!flags.json_path.empty()) {
    std::ofstream out(flags.json_path);
    if (!out) {
      std::cerr << "cannot write " << flags.json_path << "\n";
      return hkit::cli::kConditionError;
    }
    out << result.report.dump(2) << "\n";
  }
  return result.exit_code;
}
