#pragma once

// Subcommand implementations. Each returns the process exit code:
// 0 success (including WARN), 2 when a check fails. Invalid input throws
// ValidationError, numerical breakdown throws NumericalError.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "seqent/cli/config.hpp"

namespace seqent::cli {

/// "# seqent <version> config_hash=<hash>"
std::string output_header(const RunConfig& rc);

/// rho_real.csv, rho_imag.csv, stage_log.csv and summary.txt in the output dir.
int cmd_simulate(const RunConfig& rc, std::ostream& console);

/// sweep.csv, plus sweep.svg when `plot` is set.
int cmd_sweep(const RunConfig& rc, bool plot, std::ostream& console);

enum class SuiteStatus { pass, warn, fail };

struct SuiteOutcome {
  std::string name;
  SuiteStatus status = SuiteStatus::pass;
  std::string detail;
};

/// Runs every verification suite. Witness checks use the configured sign.
std::vector<SuiteOutcome> run_verify_suites(const RunConfig& rc);

/// One PASS/WARN/FAIL line per suite; 0 iff nothing failed.
int cmd_verify(const RunConfig& rc, std::ostream& console);

/// feasibility.txt and feasibility.kv.
int cmd_feasibility(const RunConfig& rc, std::ostream& console);

/// witness.csv with per-setting counts and the estimate.
int cmd_witness(const RunConfig& rc, std::ostream& console);

}  // namespace seqent::cli
