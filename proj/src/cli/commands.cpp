#include "seqent/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "seqent/cli/plot.hpp"
#include "seqent/version.hpp"

namespace seqent::cli {

namespace fs = std::filesystem;

namespace {

std::ofstream open_output(const fs::path& dir, const std::string& name) {
  fs::create_directories(dir);
  std::ofstream out(dir / name, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + (dir / name).string());
  return out;
}

std::string variant_name(InitialVariant v) { return v == InitialVariant::A ? "A" : "B"; }
std::string engine_name(Engine e) { return e == Engine::sector_oracle ? "sector_oracle" : "collective"; }
std::string sign_name(WitnessSign s) { return s == WitnessSign::paper ? "paper" : "corrected"; }

void write_matrix_csv(std::ostream& os, const RunConfig& rc, const Matrix4c& m, bool imag) {
  os << output_header(rc) << '\n'
     << "# " << (imag ? "imaginary" : "real") << " part, basis |n2 n1> ordered 00,01,10,11\n";
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) os << (c ? "," : "") << format_double(imag ? m(r, c).imag() : m(r, c).real());
    os << '\n';
  }
}

WitnessSpec witness_for(const RunConfig& rc, const NeutronDensityMatrix& rho) {
  return rc.witness.auto_target ? witness_target_for(rho, rc.witness.spec.sign) : rc.witness.spec;
}

Vector4c pair_state(const Eigen::Vector2cd& n1, const Eigen::Vector2cd& n2) {
  Vector4c psi;
  for (int b = 0; b < 2; ++b)
    for (int a = 0; a < 2; ++a) psi(neutron_pair_index(a, b)) = n2(b) * n1(a);
  return psi;
}

Eigen::Vector2cd random_qubit(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::Vector2cd v(Complex(g(rng), g(rng)), Complex(g(rng), g(rng)));
  return v / v.norm();
}

// Optimal operating point for the one-magnon state.
ProtocolConfig optimal_config(int N, Engine engine = Engine::sector_oracle) {
  ProtocolConfig c = ProtocolConfig::defaults(N);
  c.params.B_z = optimal_field(c.params.lambda, N);
  c.tau = optimal_time(c.params.lambda, N);
  c.engine = engine;
  return c;
}

SuiteOutcome make_outcome(std::string name, bool ok, const std::string& detail) {
  return {std::move(name), ok ? SuiteStatus::pass : SuiteStatus::fail, detail};
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

SuiteOutcome suite_oracle_vs_closed_form() {
  double worst = 0.0;
  int cases = 0;
  for (int N = 2; N <= 10; ++N) {
    for (double B : {0.0, static_cast<double>(N - 1), 2.0 * N}) {
      const double period = std::numbers::pi / phi_tilde(1.0, N, B);
      for (int i = 1; i <= 20; ++i) {
        ProtocolConfig c = ProtocolConfig::defaults(N);
        c.params.B_z = B;
        c.tau = 2.0 * period * i / 20.0;
        const double oracle = evaluate_concurrence(c, SweepEngine::sector_oracle);
        const double closed = evaluate_concurrence(c, SweepEngine::closed_form);
        worst = std::max(worst, std::abs(oracle - closed));
        ++cases;
      }
    }
  }
  return make_outcome("oracle_vs_closed_form", worst < 1e-8,
                      std::to_string(cases) + " cases, max |diff| = " + sci(worst) + " (tol 1e-8)");
}

SuiteOutcome suite_engine_equivalence() {
  double worst = 0.0;
  for (int N : {3, 4, 6}) {
    for (auto variant : {InitialVariant::A, InitialVariant::B}) {
      for (double B : {0.0, static_cast<double>(N - 1)}) {
        for (int i = 1; i <= 8; ++i) {
          ProtocolConfig c = ProtocolConfig::defaults(N);
          c.params.B_z = B;
          c.init = variant == InitialVariant::A ? InitialStateSpec::one_magnon()
                                                : InitialStateSpec::all_up_for_field(c.params, N);
          c.tau = 0.15 * i;
          c.tau_f = 0.3;
          c.tau_f_prime = 0.5;
          worst = std::max(worst, std::abs(evaluate_concurrence(c, SweepEngine::sector_oracle) -
                                           evaluate_concurrence(c, SweepEngine::collective)));
        }
      }
    }
  }
  return make_outcome("engine_equivalence", worst < 1e-8, "sector vs collective, max |diff| = " + sci(worst));
}

// Spread of the concurrence when `mutate` varies one parameter over `values`.
template <typename Mutate>
double spread(const ProtocolConfig& base, const std::vector<double>& values, Mutate mutate) {
  double lo = 2.0, hi = -1.0;
  for (double v : values) {
    ProtocolConfig c = base;
    mutate(c, v);
    const double C = concurrence(run_protocol(c).neutron_rho);
    lo = std::min(lo, C);
    hi = std::max(hi, C);
  }
  return hi - lo;
}

std::vector<ProtocolConfig> invariance_bases(int N) {
  std::vector<ProtocolConfig> out;
  for (auto variant : {InitialVariant::A, InitialVariant::B}) {
    for (double B : {0.0, optimal_field(1.0, N)}) {
      ProtocolConfig c = optimal_config(N);
      c.params.B_z = B;
      c.init = variant == InitialVariant::A ? InitialStateSpec::one_magnon()
                                            : InitialStateSpec::all_up_for_field(c.params, N);
      c.tau_f = 0.4;
      out.push_back(c);
    }
  }
  return out;
}

SuiteOutcome suite_tau_f_prime() {
  double worst = 0.0;
  for (const auto& base : invariance_bases(4))
    worst = std::max(worst, spread(base, {0.0, 0.7, 3.1, 42.0}, [](ProtocolConfig& c, double v) { c.tau_f_prime = v; }));
  return make_outcome("tau_f_prime_invariance", worst < 1e-12, "max spread = " + sci(worst) + " (tol 1e-12)");
}

SuiteOutcome suite_tau_f() {
  double worst = 0.0;
  for (const auto& base : invariance_bases(4))
    worst = std::max(worst, spread(base, {0.0, 0.7, 3.1, 42.0}, [](ProtocolConfig& c, double v) { c.tau_f = v; }));
  return make_outcome("tau_f_invariance", worst < 1e-12, "max spread = " + sci(worst) + " (tol 1e-12)");
}

SuiteOutcome suite_J() {
  double worst = 0.0;
  for (int N : {4, 5}) {
    ProtocolConfig base = optimal_config(N);
    base.tau_f = 0.4;
    base.tau_f_prime = 1.3;
    worst = std::max(worst, spread(base, {0.1, 0.25, 1.0}, [](ProtocolConfig& c, double v) { c.params.J = v; }));
  }
  return make_outcome("J_invariance", worst < 1e-10, "variant A, periodic chain, max spread = " + sci(worst));
}

SuiteOutcome suite_V0() {
  double worst = 0.0;
  for (const auto& base : invariance_bases(4))
    worst = std::max(worst, spread(base, {0.0, 0.5, -2.0, 10.0}, [](ProtocolConfig& c, double v) { c.params.V0 = v; }));
  return make_outcome("V0_invariance", worst < 1e-10, "max spread = " + sci(worst));
}

std::vector<SuiteOutcome> witness_suites(const RunConfig& rc) {
  std::vector<SuiteOutcome> out;
  const WitnessSign sign = rc.witness.spec.sign;
  const bool plus_sign = sign == WitnessSign::paper;
  const NeutronDensityMatrix rho = run_protocol(optimal_config(4)).neutron_rho;
  const WitnessSpec w = witness_target_for(rho, sign);

  // The target state itself.
  Vector4c phi = Vector4c::Zero();
  phi(neutron_pair_index(1, 0)) = w.alpha;
  phi(neutron_pair_index(0, 1)) = w.beta * std::polar(1.0, w.phase);
  const double on_target = (phi.adjoint() * witness_matrix(w) * phi)(0, 0).real();
  const double on_output = witness_expectation(rho, w);
  std::ostringstream d;
  d << "sign=" << sign_name(sign) << ", <phi|W|phi> = " << sci(on_target) << " (2 a^2 b^2 = "
    << sci(2 * w.alpha * w.alpha * w.beta * w.beta) << "), Tr(W rho) = " << sci(on_output);
  if (plus_sign) {
    const bool reproduced = on_target > 0.0;
    out.push_back({"witness_negativity", reproduced ? SuiteStatus::warn : SuiteStatus::fail,
                   d.str() + (reproduced ? "; the plus-sign cross term does not witness its own target" : "")});
  } else {
    out.push_back(make_outcome("witness_negativity", on_target < 0.0 && on_output < 0.0, d.str()));
  }

  std::mt19937_64 rng(rc.seed);
  double min_product = 1e300;
  for (int i = 0; i < 100000; ++i) {
    const Vector4c psi = pair_state(random_qubit(rng), random_qubit(rng));
    min_product = std::min(min_product, witness_expectation(NeutronDensityMatrix::from_pure(psi), w));
  }
  const bool separable_ok = min_product >= -1e-10;
  out.push_back({"witness_separable_bound",
                 separable_ok ? SuiteStatus::pass : (plus_sign ? SuiteStatus::warn : SuiteStatus::fail),
                 "min over 1e5 product states = " + sci(min_product)});

  const WitnessEstimate small = measure_witness(rho, w, 1000, rc.seed);
  const WitnessEstimate large = measure_witness(rho, w, 100000, rc.seed + 1);
  const double ratio = small.std_error / large.std_error;
  const bool scaling_ok = std::abs(ratio / 10.0 - 1.0) < 0.2;
  const double sigmas = -large.value / large.std_error;
  std::ostringstream s;
  s << "stderr ratio 1e3/1e5 shots = " << sci(ratio) << " (expect 10), estimate at 1e5 = " << sci(large.value)
    << " +- " << sci(large.std_error) << " (" << sci(sigmas) << " sigma below 0)";
  if (plus_sign)
    out.push_back({"witness_shot_estimate", scaling_ok ? SuiteStatus::warn : SuiteStatus::fail,
                   s.str() + "; negativity not expected with sign_convention=paper"});
  else
    out.push_back(make_outcome("witness_shot_estimate", scaling_ok && sigmas > 5.0, s.str()));
  return out;
}

}  // namespace

std::string output_header(const RunConfig& rc) {
  return std::string("# seqent ") + std::string(kVersion) + " config_hash=" + rc.hash_hex();
}

int cmd_simulate(const RunConfig& rc, std::ostream& console) {
  const ProtocolResult res = run_protocol(rc.protocol);
  const NeutronDensityMatrix& rho = res.neutron_rho;
  const WitnessSpec w = witness_for(rc, rho);
  const double C = concurrence(rho);
  const double W = witness_expectation(rho, w);
  const fs::path dir = rc.output_dir;

  {
    auto out = open_output(dir, "rho_real.csv");
    write_matrix_csv(out, rc, rho.matrix(), false);
  }
  {
    auto out = open_output(dir, "rho_imag.csv");
    write_matrix_csv(out, rc, rho.matrix(), true);
  }
  {
    auto out = open_output(dir, "stage_log.csv");
    out << output_header(rc) << "\nstage,start,duration,norm\n";
    for (const auto& s : res.stage_log)
      out << s.name << ',' << format_double(s.start) << ',' << format_double(s.duration) << ','
          << format_double(s.norm) << '\n';
  }
  {
    const ProtocolConfig& p = rc.protocol;
    auto out = open_output(dir, "summary.txt");
    out << output_header(rc) << '\n'
        << "N=" << p.n_sites << '\n'
        << "lattice=" << (p.lattice.kind == LatticeKind::chain_periodic ? "periodic" : "open") << '\n'
        << "J=" << format_double(p.params.J) << '\n'
        << "lambda=" << format_double(p.params.lambda) << '\n'
        << "B_z=" << format_double(p.params.B_z) << '\n'
        << "V0=" << format_double(p.params.V0) << '\n'
        << "tau_f=" << format_double(p.tau_f) << '\n'
        << "tau=" << format_double(p.tau) << '\n'
        << "tau_f_prime=" << format_double(p.tau_f_prime) << '\n'
        << "variant=" << variant_name(p.init.variant) << '\n'
        << "engine=" << engine_name(p.engine) << '\n'
        << "concurrence=" << format_double(C) << '\n'
        << "purity=" << format_double(rho.purity()) << '\n'
        << "witness_sign=" << sign_name(w.sign) << '\n'
        << "witness_alpha=" << format_double(w.alpha) << '\n'
        << "witness_beta=" << format_double(w.beta) << '\n'
        << "witness_phase=" << format_double(w.phase) << '\n'
        << "witness_expectation=" << format_double(W) << '\n';
    if (w.sign == WitnessSign::paper)
      out << "# note: with sign_convention=paper the witness is +2 alpha^2 beta^2 on its own target\n";
  }
  console << "concurrence = " << format_double(C) << "\npurity = " << format_double(rho.purity())
          << "\nwitness (" << sign_name(w.sign) << ") = " << format_double(W) << "\nwrote " << dir.string()
          << '\n';
  return 0;
}

int cmd_sweep(const RunConfig& rc, bool plot, std::ostream& console) {
  if (!rc.sweep) throw ValidationError("config has no 'sweep' table");
  const SweepConfig& sc = *rc.sweep;
  const SweepSpec& spec = sc.spec;
  SweepResult result = sweep(spec, rc.seed);
  result.config_hash = rc.hash;
  const fs::path dir = rc.output_dir;
  {
    auto out = open_output(dir, "sweep.csv");
    result.write_csv(out);
  }
  console << "sweep: " << result.rows.size() << " points -> " << (dir / "sweep.csv").string() << '\n';
  if (!plot) return 0;

  auto series_of = [](const SweepResult& r, std::string label, std::string color, bool dashed) {
    PlotSeries s{std::move(label), {}, {}, std::move(color), dashed};
    for (const auto& row : r.rows) {
      s.x.push_back(row.value);
      s.y.push_back(row.concurrence);
    }
    return s;
  };
  const std::string green = "#2a9d3f", blue = "#1f4e9c";

  PlotSpec p;
  p.header_comment = output_header(rc).substr(2);
  p.x_label = result.variable;
  p.y_label = spec.observable == SweepObservable::peak_concurrence ? "peak concurrence" : "concurrence";
  p.title = p.y_label + " vs " + result.variable + ", N=" + std::to_string(spec.fixed.n_sites);

  const bool is_A = spec.fixed.init.variant == InitialVariant::A;
  p.series.push_back(series_of(result, std::string("initial state ") + (is_A ? "A" : "B"), is_A ? green : blue, is_A));

  if (spec.variable == SweepVariable::tau && sc.overlay_variants) {
    SweepSpec other = spec;
    if (is_A) {
      other.fixed.init = InitialStateSpec::all_up_for_field(other.fixed.params, other.fixed.n_sites);
      other.auto_polarization = true;
      if (other.engine == SweepEngine::closed_form) other.engine = SweepEngine::collective;
    } else {
      other.fixed.init = InitialStateSpec::one_magnon();
      other.auto_polarization = false;
    }
    if (other.engine == SweepEngine::collective) other.fixed.engine = Engine::collective;
    p.series.push_back(series_of(sweep(other, rc.seed), std::string("initial state ") + (is_A ? "B" : "A"),
                                 is_A ? blue : green, !is_A));
  }

  if (spec.variable == SweepVariable::B_z && !sc.family_N.empty()) {
    static const char* palette[] = {"#b5651d", "#7b3fa0", "#c0392b", "#16a085", "#555555"};
    std::size_t k = 0;
    for (int N : sc.family_N) {
      if (N == spec.fixed.n_sites) continue;
      SweepSpec fam = spec;
      fam.fixed.n_sites = N;
      fam.fixed.lattice.n_sites = N;
      if (fam.fixed.init.variant == InitialVariant::B && fam.auto_polarization)
        fam.fixed.init = InitialStateSpec::all_up_for_field(fam.fixed.params, N);
      SweepResult r = sweep(fam, rc.seed);
      r.config_hash = rc.hash;
      auto out = open_output(dir, "sweep_N" + std::to_string(N) + ".csv");
      r.write_csv(out);
      p.series.push_back(series_of(r, "N=" + std::to_string(N), palette[k++ % 5], false));
    }
    p.series.front().label = "N=" + std::to_string(spec.fixed.n_sites);
    p.title = p.y_label + " vs B_z";
  }

  auto out = open_output(dir, "sweep.svg");
  write_svg(out, p);
  console << "plot -> " << (dir / "sweep.svg").string() << '\n';
  return 0;
}

std::vector<SuiteOutcome> run_verify_suites(const RunConfig& rc) {
  std::vector<SuiteOutcome> out = {suite_oracle_vs_closed_form(), suite_engine_equivalence(), suite_tau_f_prime(),
                                   suite_tau_f(), suite_J(), suite_V0()};
  for (auto& s : witness_suites(rc)) out.push_back(std::move(s));
  return out;
}

int cmd_verify(const RunConfig& rc, std::ostream& console) {
  bool failed = false;
  for (const auto& s : run_verify_suites(rc)) {
    const char* tag = s.status == SuiteStatus::pass ? "PASS" : s.status == SuiteStatus::warn ? "WARN" : "FAIL";
    console << tag << ' ' << s.name << ": " << s.detail << '\n';
    failed = failed || s.status == SuiteStatus::fail;
  }
  return failed ? 2 : 0;
}

int cmd_feasibility(const RunConfig& rc, std::ostream& console) {
  const FeasibilityReport report = feasibility_report(rc.scenario);
  const fs::path dir = rc.output_dir;
  {
    auto out = open_output(dir, "feasibility.txt");
    out << output_header(rc) << '\n';
    report.write_text(out);
  }
  {
    auto out = open_output(dir, "feasibility.kv");
    out << output_header(rc) << '\n';
    report.write_key_values(out);
  }
  report.write_text(console);
  return 0;
}

int cmd_witness(const RunConfig& rc, std::ostream& console) {
  const NeutronDensityMatrix rho = run_protocol(rc.protocol).neutron_rho;
  const WitnessSpec w = witness_for(rc, rho);
  const WitnessEstimate est = measure_witness(rho, w, rc.witness.shots_per_setting, rc.seed);
  const double exact = witness_expectation(rho, w);
  const fs::path dir = rc.output_dir;
  {
    auto out = open_output(dir, "witness.csv");
    out << output_header(rc) << '\n'
        << "# seed=" << rc.seed << " shots_per_setting=" << est.shots_per_setting << " sign=" << sign_name(w.sign)
        << '\n'
        << "# alpha=" << format_double(w.alpha) << " beta=" << format_double(w.beta)
        << " phase=" << format_double(w.phase) << '\n'
        << "# estimate=" << format_double(est.value) << " std_error=" << format_double(est.std_error)
        << " exact=" << format_double(exact) << '\n'
        << "setting,o2,o1,count,weight\n";
    const char* names[] = {"zz", "xx", "yy"};
    for (int s = 0; s < 3; ++s) {
      const Eigen::Vector4d weights = setting_weights(w, static_cast<MeasurementSetting>(s));
      for (int k = 0; k < 4; ++k)
        out << names[s] << ',' << (k >> 1) << ',' << (k & 1) << ',' << est.counts[s][k] << ','
            << format_double(weights[k]) << '\n';
    }
  }
  console << "witness (" << sign_name(w.sign) << ") estimate = " << format_double(est.value) << " +- "
          << format_double(est.std_error) << " (exact " << format_double(exact) << ", "
          << est.shots_per_setting << " shots/setting)\n";
  if (w.sign == WitnessSign::paper)
    console << "note: with sign_convention=paper the witness is +2 alpha^2 beta^2 on its own target\n";
  return 0;
}

}  // namespace seqent::cli
