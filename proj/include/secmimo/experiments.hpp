// SPDX-License-Identifier: Apache-2.0
//
// secmimo: secrecy-rate analysis and link-level simulation for
// hardware-impaired massive MIMO downlinks.

#ifndef SECMIMO_EXPERIMENTS_HPP
#define SECMIMO_EXPERIMENTS_HPP

#include <map>
#include <string>
#include <vector>

#include "secmimo/channel_sim.hpp"
#include "secmimo/design_opt.hpp"

namespace secmimo {

extern const char* kVersionString;

/// Rectangular result table written as one CSV file per curve.
struct ResultTable {
  std::string name;  ///< file stem
  std::vector<std::string> headers;
  std::vector<std::vector<double>> rows;
  std::map<std::string, std::string> metadata;  ///< config hash, seed, version, wall time
};

enum class RunMode { evaluate, simulate, sweep_mode, reproduce };

struct McBlock {
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  std::string t_grid_policy = "full";  ///< "full" or "subsample"
  std::size_t t_grid_points = 20;
};

/// Parsed experiment description: exactly one mode, plus the blocks that mode
/// requires.
struct ExperimentSpec {
  RunMode mode = RunMode::evaluate;
  std::string config_json;  ///< canonical echo of the config block
  McBlock mc;
  SweepSpec sweep_block;
  std::string figure;  ///< fig1..fig6, for reproduce mode
  std::string scale = "desk";  ///< "desk" or "paper"
};

ExperimentSpec parse_experiment(const std::string& json_text);

/// Runs the experiment and writes one CSV per curve plus run_manifest.json
/// under out_dir. Returns the produced tables.
std::vector<ResultTable> run_experiment(const ExperimentSpec& spec, const std::string& out_dir);

/// Named preconfigured experiments with desk- and paper-scale grids.
struct RegistryEntry {
  std::string id;
  std::string summary;                  ///< what the experiment shows
  std::string parameters;               ///< headline system parameters
  std::string desk_scale;               ///< reduced grids used by default
  std::string paper_scale;              ///< full-size grids
};
std::vector<RegistryEntry> list_experiments();

/// CSV body with full double precision and '.' decimal separator; the
/// metadata is emitted as comment lines before the header.
std::string to_csv(const ResultTable& table);

void write_tables(const std::vector<ResultTable>& tables, const std::string& out_dir,
                  const std::string& manifest_json);

}  // namespace secmimo

#endif  // SECMIMO_EXPERIMENTS_HPP
