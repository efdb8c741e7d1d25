#pragma once

// Parameter sweeps, peak finding, the zero-field scaling fit and tolerance
// widths around the optimal operating point.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "seqent/dynamics.hpp"

namespace seqent {

enum class SweepVariable { tau, B_z, N };
enum class SweepEngine { closed_form, sector_oracle, collective };
enum class SweepObservable { concurrence, peak_concurrence };

std::string to_string(SweepVariable v);
std::string to_string(SweepEngine e);
std::string to_string(SweepObservable o);

struct SweepSpec {
  SweepVariable variable = SweepVariable::tau;
  std::vector<double> values;
  ProtocolConfig fixed;
  SweepEngine engine = SweepEngine::closed_form;
  SweepObservable observable = SweepObservable::concurrence;
  unsigned threads = 1;
  /// Re-derive the all-up neutron polarisation from each point's field.
  bool auto_polarization = false;

  /// `count` evenly spaced points on [lo, hi] (count = 1 gives {lo}).
  static std::vector<double> linspace(double lo, double hi, std::size_t count);
  void validate() const;
  /// Canonical text used for the config hash.
  std::string canonical() const;
};

struct SweepRow {
  double value = 0.0;
  double concurrence = 0.0;
  double tau_at_peak = 0.0;  // only meaningful for the peak observable
  SweepEngine engine = SweepEngine::closed_form;
  double wall_time_s = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::string variable;
  std::string observable;
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
  std::string code_version;

  /// Columns: variable,value,concurrence,engine,config_hash, preceded by
  /// '#' metadata lines. Wall times are omitted so output is byte-stable.
  void write_csv(std::ostream& os) const;
};

/// Concurrence of one configuration with the chosen engine. The closed form is
/// only defined for the one-magnon initial state.
double evaluate_concurrence(const ProtocolConfig& cfg, SweepEngine engine);

/// Points are evaluated independently; with threads > 1 they run concurrently
/// and are written back in input order.
SweepResult sweep(const SweepSpec& spec, std::uint64_t seed = 0);

struct PeakResult {
  double concurrence = 0.0;
  double tau = 0.0;
};

/// Global maximum over tau in [0, window] (default: one oscillation period
/// pi / phi_tilde) by a 2001-point scan plus golden-section refinement.
PeakResult peak_concurrence(const ProtocolConfig& cfg, SweepEngine engine, double window = 0.0);
PeakResult peak_concurrence(int N, double lambda, double B_z, SweepEngine engine);

/// Closed-form B_z = 0 peak, 8N(N-1)/(N+1)^3 (valid for N >= 4).
double zero_field_peak_formula(int N);

/// Least-squares slope of log C_p against log N at B_z = 0.
double zero_field_scaling_fit(const std::vector<int>& N_list, double lambda = 1.0);

struct ToleranceWidths {
  double delta_tau = 0.0;  // half-width in tau at B_z = B_z*
  double delta_B = 0.0;    // half-width in B_z at tau = tau*
  double tau_lo = 0.0, tau_hi = 0.0;
  double B_lo = 0.0, B_hi = 0.0;
};

/// Half-widths of the intervals around (tau*, B_z*) on which the closed-form
/// concurrence stays at or above `floor`. B_z is bracketed within [0, inf).
ToleranceWidths tolerance_widths(int N, double lambda, double floor = 0.7);

}  // namespace seqent
