#include "seqent/feasibility.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

#include "seqent/analysis.hpp"
#include "seqent/entanglement.hpp"
#include "seqent/version.hpp"

namespace seqent {

using namespace units;

const PhysicalConstants& PhysicalConstants::codata2018() {
  static const PhysicalConstants k{};
  return k;
}

void ExperimentScenario::validate() const {
  const double values[] = {a0.value, N, v.value, flight_path.value, flux.value, sample_area.value,
                           T1.value, T2.value, sample_length.value, design_field.value};
  for (double x : values)
    if (!(x > 0.0) || !std::isfinite(x)) throw ValidationError("scenario quantities must be positive and finite");
}

int order_of_magnitude(double x) {
  if (x == 0.0 || !std::isfinite(x)) throw ValidationError("order of magnitude needs a finite non-zero value");
  return static_cast<int>(std::lround(std::log10(std::abs(x))));
}

namespace {

// |g_n mu_n g_e mu_B mu_0|, so that |lambda| = K / (N a0^3).
Quantity<1, 5, -2, 0> coupling_constant(const PhysicalConstants& k) {
  const auto product = k.mu_n * k.mu_B * k.mu_0;
  return product * std::abs(k.g_n * k.g_e);
}

const double kArccos = std::acos(-1.0 / 3.0);

// Scale-free tolerance constants at the 0.7 floor: delta_tau lambda sqrt(N)
// and delta_B / (lambda sqrt(N)). Both are N-independent (checked in tests),
// so they are evaluated once at a moderate N.
struct ToleranceConstants {
  double tau = 0.0;
  double field = 0.0;
};

const ToleranceConstants& tolerance_constants() {
  static const ToleranceConstants c = [] {
    constexpr int kN = 256;
    const ToleranceWidths w = tolerance_widths(kN, 1.0, 0.7);
    return ToleranceConstants{w.delta_tau * std::sqrt(kN), w.delta_B / std::sqrt(kN)};
  }();
  return c;
}

}  // namespace

Joule lambda_SI(Meter a0, double N, const PhysicalConstants& k) {
  if (!(a0.value > 0.0) || !(N > 0.0)) throw ValidationError("lambda_SI needs a0 > 0 and N > 0");
  const CubicMeter volume = a0 * a0 * a0 * N;
  const Joule magnitude = coupling_constant(k) / volume;
  // -g_n g_e is negative for the physical (negative) g-factors.
  return magnitude * (-k.g_n * k.g_e / std::abs(k.g_n * k.g_e));
}

OptimalOperatingPoint optimal_field_time_SI(const ExperimentScenario& s, const PhysicalConstants& k) {
  s.validate();
  OptimalOperatingPoint p;
  p.lambda = lambda_SI(s.a0, s.N, k);
  const Joule strength(std::abs(p.lambda.value));
  p.B_star = strength * (s.N - 1.0) / k.mu_B;
  p.tau_star = k.hbar / strength * (kArccos / (4.0 * std::sqrt(s.N)));
  p.interaction_length = s.v * p.tau_star;
  p.sample_edge = cbrt(s.a0 * s.a0 * s.a0 * s.N);
  p.field_coefficient = p.B_star * (s.a0 * s.a0 * s.a0);
  p.time_coefficient = p.tau_star.value / (std::pow(s.a0.value, 3) * std::sqrt(s.N));

  const auto& tol = tolerance_constants();
  p.field_fraction = tol.field * std::sqrt(s.N) / (s.N - 1.0);
  p.velocity_fraction = tol.tau / (kArccos / 4.0);

  p.comparisons = {
      {"B_star", p.B_star.value, 1e-2, "T"},
      {"field_coefficient", p.field_coefficient.value, 1e-32, "T m^3"},
      {"time_coefficient", p.time_coefficient, 1e21, "s m^-3"},
      {"field_tolerance_fraction", p.field_fraction, 1e-9, "1"},
      {"velocity_tolerance_fraction", p.velocity_fraction, 1e-1, "1"},
  };
  return p;
}

NaturalUnitCheck to_natural_units(const OptimalOperatingPoint& p, double N, const PhysicalConstants& k) {
  (void)N;
  const Joule strength(std::abs(p.lambda.value));
  return {(p.B_star * k.mu_B) / strength, (p.tau_star * strength) / k.hbar};
}

double spins_for_length(Meter a0, Meter length, MeterPerSecond v, const PhysicalConstants& k) {
  // tau* = hbar arccos(-1/3) a0^3 sqrt(N) / (4 K)
  const auto a3 = a0 * a0 * a0;
  const Second per_root_n = k.hbar * a3 * (kArccos / 4.0) / coupling_constant(k);
  const double root_n = (length / v) / per_root_n;
  return root_n * root_n;
}

SampleDesign design_sample(Tesla target_field, Meter length, MeterPerSecond v, const PhysicalConstants& k) {
  if (!(target_field.value > 0.0)) throw ValidationError("design field must be positive");
  // Large-N limit: B* = K / (a0^3 mu_B).
  const CubicMeter a3 = coupling_constant(k) / (k.mu_B * target_field);
  SampleDesign d;
  d.a0 = cbrt(a3);
  d.N = spins_for_length(d.a0, length, v, k);
  return d;
}

TimingBudget timing_budget(const ExperimentScenario& s) {
  s.validate();
  TimingBudget t;
  t.flight_time = s.flight_path / s.v;
  t.scattering_interval = 1.0 / (s.flux * s.sample_area);
  t.t1_margin = s.T1 / t.flight_time;
  t.t2_margin = s.T2 / t.scattering_interval;
  t.t1_ok = t.t1_margin >= 1.0;
  t.t2_ok = t.t2_margin >= 1.0;
  return t;
}

CoherenceCondition coherence_condition(const ExperimentScenario& s, const PhysicalConstants& k) {
  s.validate();
  CoherenceCondition c;
  c.delta_p = k.hbar / s.sample_length;
  c.velocity_fraction = c.delta_p / (k.m_n * s.v);
  c.comparison = {"velocity_precision", c.velocity_fraction, 1e-6, "1"};
  return c;
}

FeasibilityReport feasibility_report(const ExperimentScenario& s, const PhysicalConstants& k) {
  FeasibilityReport r;
  r.scenario = s;
  r.operating_point = optimal_field_time_SI(s, k);
  r.design = design_sample(s.design_field, s.sample_length, s.v, k);
  r.spins_at_given_a0 = spins_for_length(s.a0, s.sample_length, s.v, k);
  r.timing = timing_budget(s);
  r.coherence = coherence_condition(s, k);

  r.comparisons = r.operating_point.comparisons;
  r.comparisons.push_back({"design_lattice_constant", r.design.a0.value, 1e-10, "m"});
  r.comparisons.push_back({"design_spin_count", r.design.N, 1e14, "1"});
  r.comparisons.push_back({"spin_count_at_given_a0", r.spins_at_given_a0, 1e14, "1"});
  r.comparisons.push_back({"flight_time_short_path", (Meter(1e-2) / s.v).value, 1e-2, "s"});
  r.comparisons.push_back({"flight_time_long_path", (Meter(1.0) / s.v).value, 1.0, "s"});
  r.comparisons.push_back({"T2_requirement", r.timing.scattering_interval.value, 1e-6, "s"});
  r.comparisons.push_back(r.coherence.comparison);
  return r;
}

bool FeasibilityReport::all_agree() const {
  for (const auto& c : comparisons)
    if (!c.agrees()) return false;
  return true;
}

void FeasibilityReport::write_text(std::ostream& os) const {
  const auto& p = operating_point;
  const auto flags = os.flags();
  os << std::setprecision(4) << std::scientific;
  os << "Feasibility estimate (SI units)\n"
     << "  lattice constant a0        " << scenario.a0.value << " m\n"
     << "  spin count N               " << scenario.N << "\n"
     << "  neutron velocity v         " << scenario.v.value << " m/s\n\n"
     << "Coupling and optimum\n"
     << "  lambda                     " << p.lambda.value << " " << Joule::symbol() << "\n"
     << "  B_z*                       " << p.B_star.value << " " << Tesla::symbol() << "\n"
     << "  tau*                       " << p.tau_star.value << " " << Second::symbol() << "\n"
     << "  D = v tau*                 " << p.interaction_length.value << " m\n"
     << "  sample edge (N a0^3)^1/3   " << p.sample_edge.value << " m\n"
     << "  Delta B / B* (floor 0.7)   " << p.field_fraction << "\n"
     << "  Delta v / v (floor 0.7)    " << p.velocity_fraction << "\n\n"
     << "Sample design for B* = " << scenario.design_field.value << " T, length "
     << scenario.sample_length.value << " m\n"
     << "  a0                         " << design.a0.value << " m\n"
     << "  N                          " << design.N << "\n"
     << "  N at the given a0          " << spins_at_given_a0 << "\n\n"
     << "Timing budget\n"
     << "  flight time                " << timing.flight_time.value << " s  (T1 = " << scenario.T1.value << " s, "
     << (timing.t1_ok ? "ok" : "INSUFFICIENT") << ")\n"
     << "  interval between neutrons  " << timing.scattering_interval.value << " s  (T2 = " << scenario.T2.value
     << " s, " << (timing.t2_ok ? "ok" : "INSUFFICIENT") << ")\n\n"
     << "Coherence volume\n"
     << "  Delta p = hbar / D         " << coherence.delta_p.value << " " << Momentum::symbol() << "\n"
     << "  Delta v / v                " << coherence.velocity_fraction << "\n\n"
     << "Order-of-magnitude comparison with quoted values\n";
  for (const auto& c : comparisons)
    os << "  " << std::left << std::setw(28) << c.name << std::right << c.computed << "  vs  " << c.quoted << " "
       << c.unit << "  " << (c.agrees() ? "agrees" : "DISAGREES") << " (decade gap " << std::showpos
       << c.decade_gap() << std::noshowpos << ")\n";
  os.flags(flags);
}

void FeasibilityReport::write_key_values(std::ostream& os) const {
  const auto& p = operating_point;
  auto kv = [&os](const std::string& key, double value) { os << key << '=' << format_double(value) << '\n'; };
  os << "# seqent " << kVersion << " feasibility\n";
  kv("lambda_J", p.lambda.value);
  kv("B_star_T", p.B_star.value);
  kv("tau_star_s", p.tau_star.value);
  kv("interaction_length_m", p.interaction_length.value);
  kv("sample_edge_m", p.sample_edge.value);
  kv("field_tolerance_fraction", p.field_fraction);
  kv("velocity_tolerance_fraction", p.velocity_fraction);
  kv("design_a0_m", design.a0.value);
  kv("design_N", design.N);
  kv("N_at_given_a0", spins_at_given_a0);
  kv("flight_time_s", timing.flight_time.value);
  kv("scattering_interval_s", timing.scattering_interval.value);
  os << "T1_ok=" << (timing.t1_ok ? 1 : 0) << '\n' << "T2_ok=" << (timing.t2_ok ? 1 : 0) << '\n';
  kv("delta_p_kg_m_per_s", coherence.delta_p.value);
  kv("coherence_velocity_fraction", coherence.velocity_fraction);
  for (const auto& c : comparisons)
    os << "compare." << c.name << '=' << (c.agrees() ? "agrees" : "DISAGREES") << '\n';
}

}  // namespace seqent
