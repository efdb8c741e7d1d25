#pragma once

// Run configuration: a JSON document (comments allowed) with the optional
// tables "protocol", "sweep", "witness", "scenario" and "output". Unknown keys
// are rejected with the offending key path in the message.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "seqent/analysis.hpp"
#include "seqent/feasibility.hpp"

namespace seqent::cli {

struct WitnessConfig {
  WitnessSpec spec;
  bool auto_target = true;  // derive alpha, beta, phase from the simulated state
  std::size_t shots_per_setting = 100000;
};

struct SweepConfig {
  SweepSpec spec;
  bool overlay_variants = true;  // tau sweeps: add the all-up curve to the plot
  std::vector<int> family_N;     // B_z peak sweeps: one plot curve per N
};

struct RunConfig {
  ProtocolConfig protocol = ProtocolConfig::defaults(4);
  bool protocol_init_auto = false;  // all-up polarisation chosen from the field
  std::optional<SweepConfig> sweep;
  WitnessConfig witness;
  ExperimentScenario scenario;
  std::filesystem::path output_dir = "out";
  std::uint64_t seed = 0;
  std::uint64_t hash = 0;  // FNV-1a of the canonical document plus overrides

  std::string hash_hex() const;
  /// Applies an engine name given on the command line to protocol and sweep.
  void override_engine(const std::string& name);
  void override_seed(std::uint64_t s);
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);
/// Configuration used when no file is given.
RunConfig default_config();

Engine parse_engine(const std::string& name);
SweepEngine parse_sweep_engine(const std::string& name);

}  // namespace seqent::cli
