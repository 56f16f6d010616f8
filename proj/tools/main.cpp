// Command-line front end: solve | probe | gradcheck over one JSON config.
#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dpl/commands.hpp"
#include "dpl/config.hpp"
#include "dpl/version.hpp"

namespace {

dpl::RunConfig load_config(const std::string& path,
                           const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open config file: " + path);
  }
  dpl::json doc;
  try {
    doc = dpl::json::parse(in);
  } catch (const dpl::json::parse_error& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") +
                                e.what());
  }
  for (const std::string& ov : overrides) {
    dpl::apply_override(doc, ov);
  }
  return dpl::RunConfig::from_json(doc);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sequences of non-negative homoclinic solutions of the "
               "weighted discrete p-Laplacian equation by box-constrained "
               "energy minimization"};
  app.set_version_flag("--version", std::string(dpl::kVersion));
  bool quiet = false;
  app.add_flag("--quiet", quiet, "suppress console summaries");
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  auto add_common = [&](CLI::App* sub) {
    sub->fallthrough();
    sub->add_option("config", config_path, "path to the JSON config")
        ->required();
    sub->add_option("--override", overrides,
                    "key=value override for a scalar config field");
  };

  CLI::App* solve = app.add_subcommand(
      "solve", "minimize over the nested boxes and certify the claims");
  CLI::App* probe = app.add_subcommand(
      "probe", "run the hypothesis checkers and growth-rate estimates");
  CLI::App* gradcheck = app.add_subcommand(
      "gradcheck", "verify the analytic gradient against central differences");
  add_common(solve);
  add_common(probe);
  add_common(gradcheck);

  CLI11_PARSE(app, argc, argv);

  dpl::RunConfig* cfg = nullptr;
  dpl::RunConfig loaded = [&]() -> dpl::RunConfig {
    try {
      return load_config(config_path, overrides);
    } catch (const std::invalid_argument& e) {
      std::cerr << "config error: " << e.what() << "\n";
      std::exit(2);
    }
  }();
  cfg = &loaded;

  try {
    if (solve->parsed()) return dpl::cmd_solve(*cfg, quiet);
    if (probe->parsed()) return dpl::cmd_probe(*cfg, quiet);
    if (gradcheck->parsed()) return dpl::cmd_gradcheck(*cfg, quiet);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
