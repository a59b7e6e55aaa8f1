// SPDX-License-Identifier: Apache-2.0
//
// secmimo: secrecy-rate analysis and link-level simulation for
// hardware-impaired massive MIMO downlinks.
//
// Batch front-end: `secmimo run <spec.json> --out <dir>` executes one
// experiment description and writes CSV tables plus a run manifest;
// `secmimo list` prints the registry of preconfigured experiments.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "secmimo/experiments.hpp"

namespace {

constexpr int kExitParseError = 2;
constexpr int kExitValidationError = 3;

int run_command(const std::string& spec_path, const std::string& out_dir) {
  std::ifstream f(spec_path);
  if (!f) {
    std::cerr << "cannot read spec file: " << spec_path << "\n";
    return kExitParseError;
  }
  std::stringstream buf;
  buf << f.rdbuf();

  secmimo::ExperimentSpec spec;
  try {
    spec = secmimo::parse_experiment(buf.str());
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "spec parse error: " << e.what() << "\n";
    return kExitParseError;
  } catch (const secmimo::ConfigError& e) {
    std::cerr << "spec error: " << e.what() << "\n";
    return kExitParseError;
  }

  try {
    const auto tables = secmimo::run_experiment(spec, out_dir);
    for (const auto& t : tables)
      std::cout << "wrote " << out_dir << "/" << t.name << ".csv (" << t.rows.size()
                << " rows)\n";
    std::cout << "wrote " << out_dir << "/run_manifest.json\n";
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config parse error: " << e.what() << "\n";
    return kExitParseError;
  } catch (const secmimo::ConfigError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidationError;
  }
  return 0;
}

void list_command() {
  for (const auto& e : secmimo::list_experiments()) {
    std::cout << e.id << ": " << e.summary << "\n"
              << "  parameters:  " << e.parameters << "\n"
              << "  desk scale:  " << e.desk_scale << "\n"
              << "  paper scale: " << e.paper_scale << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(secmimo::kVersionString) +
               " - secure massive MIMO analysis and simulation"};
  app.require_subcommand(1);

  std::string spec_path;
  std::string out_dir = "out";
  auto* run = app.add_subcommand("run", "run an experiment spec (JSON)");
  run->add_option("spec", spec_path, "experiment spec file")->required();
  run->add_option("--out", out_dir, "output directory for CSV tables and the manifest");

  auto* list = app.add_subcommand("list", "list preconfigured experiments");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return run_command(spec_path, out_dir);
  if (list->parsed()) list_command();
  return 0;
}
