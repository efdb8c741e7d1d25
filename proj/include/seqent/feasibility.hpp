#pragma once

// SI-unit estimates for an experiment: coupling strength, optimal field and
// interaction time, timing budgets against T1/T2 and the coherence-length
// condition on the neutron velocity spread. Quoted reference values are only
// compared at the order-of-magnitude level.

#include <iosfwd>
#include <string>
#include <vector>

#include "seqent/units.hpp"

namespace seqent {

/// CODATA 2018 recommended values. g-factors carry their physical sign
/// (both negative), which makes the neutron-sample coupling negative.
struct PhysicalConstants {
  double g_n = -3.82608545;
  units::JoulePerTesla mu_n{5.0507837461e-27};  // nuclear magneton
  double g_e = -2.00231930436256;
  units::JoulePerTesla mu_B{9.2740100783e-24};
  units::TeslaMeterPerAmpere mu_0{1.25663706212e-6};
  units::JouleSecond hbar{1.054571817e-34};
  units::Kilogram m_n{1.67492749804e-27};

  static const PhysicalConstants& codata2018();
};

struct ExperimentScenario {
  units::Meter a0{1e-10};              // lattice constant
  double N = 1e14;                     // spin count
  units::MeterPerSecond v{7.0};        // neutron velocity
  units::Meter flight_path{1.0};
  units::Flux flux{1e8};
  units::SquareMeter sample_area{1e-2};
  units::Second T1{1.0};
  units::Second T2{1e-6};
  units::Meter sample_length{0.1};     // coherence length the neutron must cover
  units::Tesla design_field{1e-2};     // target B* for the inverse design

  void validate() const;
};

/// lambda = -g_n mu_n g_e mu_B mu_0 / D^3 with D^3 = N a0^3. Negative.
units::Joule lambda_SI(units::Meter a0, double N, const PhysicalConstants& k = PhysicalConstants::codata2018());

/// Order of magnitude: nearest integer to log10|x|.
int order_of_magnitude(double x);

/// A computed value set against a decade-precision quoted value.
struct DecadeComparison {
  std::string name;
  double computed = 0.0;
  double quoted = 0.0;
  std::string unit;

  int decade_gap() const { return order_of_magnitude(computed) - order_of_magnitude(quoted); }
  bool agrees() const { return std::abs(decade_gap()) <= 1; }
};

struct OptimalOperatingPoint {
  units::Joule lambda;
  units::Tesla B_star;
  units::Second tau_star;
  units::Meter interaction_length;   // D = v tau*
  units::Meter sample_edge;          // (N a0^3)^(1/3)
  units::TeslaCubicMeter field_coefficient;  // B* a0^3
  double time_coefficient = 0.0;             // tau* / (a0^3 sqrt N), s m^-3
  double field_fraction = 0.0;               // Delta B / B* at the 0.7 floor
  double velocity_fraction = 0.0;            // Delta v / v = Delta tau / tau*
  std::vector<DecadeComparison> comparisons;
};

OptimalOperatingPoint optimal_field_time_SI(const ExperimentScenario& s,
                                            const PhysicalConstants& k = PhysicalConstants::codata2018());

/// Natural-unit round trip: B* / |lambda| and tau* |lambda| / hbar.
struct NaturalUnitCheck {
  double field_in_lambda = 0.0;   // should equal N - 1
  double time_in_inverse_lambda = 0.0;  // should equal arccos(-1/3) / (4 sqrt N)
};
NaturalUnitCheck to_natural_units(const OptimalOperatingPoint& p, double N,
                                  const PhysicalConstants& k = PhysicalConstants::codata2018());

/// Inverse design: lattice constant from a target B*, then N from D = v tau*.
struct SampleDesign {
  units::Meter a0;
  double N = 0.0;
};
SampleDesign design_sample(units::Tesla target_field, units::Meter length, units::MeterPerSecond v,
                           const PhysicalConstants& k = PhysicalConstants::codata2018());

/// N such that v tau*(a0, N) = length, for a fixed lattice constant.
double spins_for_length(units::Meter a0, units::Meter length, units::MeterPerSecond v,
                        const PhysicalConstants& k = PhysicalConstants::codata2018());

struct TimingBudget {
  units::Second flight_time;
  units::Second scattering_interval;
  bool t1_ok = false;
  bool t2_ok = false;
  double t1_margin = 0.0;  // T1 / flight_time
  double t2_margin = 0.0;  // T2 / interval
};
TimingBudget timing_budget(const ExperimentScenario& s);

struct CoherenceCondition {
  units::Momentum delta_p;
  double velocity_fraction = 0.0;  // hbar / (m_n v D)
  DecadeComparison comparison;
};
CoherenceCondition coherence_condition(const ExperimentScenario& s,
                                       const PhysicalConstants& k = PhysicalConstants::codata2018());

struct FeasibilityReport {
  ExperimentScenario scenario;
  OptimalOperatingPoint operating_point;
  SampleDesign design;
  double spins_at_given_a0 = 0.0;
  TimingBudget timing;
  CoherenceCondition coherence;
  std::vector<DecadeComparison> comparisons;  // everything checked against quotes

  bool all_agree() const;
  void write_text(std::ostream& os) const;
  void write_key_values(std::ostream& os) const;
};

FeasibilityReport feasibility_report(const ExperimentScenario& s,
                                     const PhysicalConstants& k = PhysicalConstants::codata2018());

}  // namespace seqent
