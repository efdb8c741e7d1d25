#include "seqent/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include "seqent/version.hpp"

namespace seqent {

std::string hex_hash(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::tau: return "tau";
    case SweepVariable::B_z: return "B_z";
    case SweepVariable::N: return "N";
  }
  return "?";
}

std::string to_string(SweepEngine e) {
  switch (e) {
    case SweepEngine::closed_form: return "closed_form";
    case SweepEngine::sector_oracle: return "sector_oracle";
    case SweepEngine::collective: return "collective";
  }
  return "?";
}

std::string to_string(SweepObservable o) {
  return o == SweepObservable::concurrence ? "concurrence" : "peak_concurrence";
}

std::vector<double> SweepSpec::linspace(double lo, double hi, std::size_t count) {
  std::vector<double> out;
  if (count == 0) return out;
  if (count == 1) return {lo};
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i)
    out.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
  return out;
}

void SweepSpec::validate() const {
  if (values.empty()) throw ValidationError("sweep range is empty");
  for (double v : values) {
    if (!std::isfinite(v)) throw ValidationError("sweep values must be finite");
    if (variable == SweepVariable::N && (v < 2 || v != std::floor(v)))
      throw ValidationError("N sweep values must be integers >= 2");
  }
  if (engine == SweepEngine::closed_form && fixed.init.variant != InitialVariant::A)
    throw ValidationError("closed_form engine is only valid for the one-magnon initial state");
  if (variable == SweepVariable::tau && observable == SweepObservable::peak_concurrence)
    throw ValidationError("peak concurrence is already maximised over tau");
}

std::string SweepSpec::canonical() const {
  std::ostringstream os;
  const auto& c = fixed;
  os << "variable=" << to_string(variable) << ";engine=" << to_string(engine)
     << ";observable=" << to_string(observable) << ";values=";
  for (double v : values) os << format_double(v) << ',';
  os << ";N=" << c.n_sites << ";lattice=" << (c.lattice.kind == LatticeKind::chain_periodic ? "periodic" : "open")
     << ";J=" << format_double(c.params.J) << ";lambda=" << format_double(c.params.lambda)
     << ";B_z=" << format_double(c.params.B_z) << ";V0=" << format_double(c.params.V0)
     << ";tau_f=" << format_double(c.tau_f) << ";tau=" << format_double(c.tau)
     << ";tau_f_prime=" << format_double(c.tau_f_prime)
     << ";variant=" << (c.init.variant == InitialVariant::A ? "A" : "B") << ";alpha="
     << format_double(c.init.alpha.real()) << ',' << format_double(c.init.alpha.imag())
     << ";beta=" << format_double(c.init.beta.real()) << ',' << format_double(c.init.beta.imag())
     << ";auto_polarization=" << auto_polarization;
  return os.str();
}

void SweepResult::write_csv(std::ostream& os) const {
  const std::string hash = hex_hash(config_hash);
  os << "# seqent " << code_version << '\n'
     << "# config_hash=" << hash << '\n'
     << "# seed=" << seed << '\n'
     << "# observable=" << observable << '\n'
     << "variable,value,concurrence,engine,config_hash\n";
  for (const auto& r : rows)
    os << variable << ',' << format_double(r.value) << ',' << format_double(r.concurrence) << ','
       << to_string(r.engine) << ',' << hash << '\n';
}

// ---------------------------------------------------------------------------

double evaluate_concurrence(const ProtocolConfig& cfg, SweepEngine engine) {
  switch (engine) {
    case SweepEngine::closed_form:
      if (cfg.init.variant != InitialVariant::A)
        throw ValidationError("closed_form engine is only valid for the one-magnon initial state");
      return closed_form_concurrence({cfg.params.lambda, cfg.n_sites, cfg.params.B_z, cfg.tau});
    case SweepEngine::sector_oracle: {
      ProtocolConfig c = cfg;
      c.engine = Engine::sector_oracle;
      return concurrence(run_protocol(c).neutron_rho);
    }
    case SweepEngine::collective: {
      ProtocolConfig c = cfg;
      c.engine = Engine::collective;
      return concurrence(run_protocol(c).neutron_rho);
    }
  }
  throw ValidationError("unknown engine");
}

namespace {

ProtocolConfig with_value(const SweepSpec& spec, double value) {
  ProtocolConfig c = spec.fixed;
  const SweepVariable variable = spec.variable;
  switch (variable) {
    case SweepVariable::tau: c.tau = value; break;
    case SweepVariable::B_z: c.params.B_z = value; break;
    case SweepVariable::N:
      c.n_sites = static_cast<int>(value);
      c.lattice.n_sites = c.n_sites;
      break;
  }
  if (spec.auto_polarization && c.init.variant == InitialVariant::B)
    c.init = InitialStateSpec::all_up_for_field(c.params, c.n_sites);
  return c;
}

SweepRow evaluate_point(const SweepSpec& spec, double value) {
  const auto start = std::chrono::steady_clock::now();
  const ProtocolConfig cfg = with_value(spec, value);
  SweepRow row;
  row.value = value;
  row.engine = spec.engine;
  if (spec.observable == SweepObservable::peak_concurrence) {
    const PeakResult peak = peak_concurrence(cfg, spec.engine);
    row.concurrence = peak.concurrence;
    row.tau_at_peak = peak.tau;
  } else {
    row.concurrence = evaluate_concurrence(cfg, spec.engine);
  }
  row.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

}  // namespace

SweepResult sweep(const SweepSpec& spec, std::uint64_t seed) {
  spec.validate();
  std::vector<double> values = spec.values;
  std::sort(values.begin(), values.end());

  SweepResult result;
  result.variable = to_string(spec.variable);
  result.observable = to_string(spec.observable);
  result.config_hash = fnv1a(spec.canonical());
  result.seed = seed;
  result.code_version = std::string(kVersion);
  result.rows.resize(values.size());

  const unsigned workers = std::max(1U, std::min<unsigned>(spec.threads, static_cast<unsigned>(values.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < values.size(); ++i) result.rows[i] = evaluate_point(spec, values[i]);
    return result;
  }

  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < values.size(); i += workers) result.rows[i] = evaluate_point(spec, values[i]);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return result;
}

// ---------------------------------------------------------------------------

PeakResult peak_concurrence(const ProtocolConfig& cfg, SweepEngine engine, double window) {
  if (window <= 0.0) window = std::numbers::pi / phi_tilde(cfg.params.lambda, cfg.n_sites, cfg.params.B_z);
  auto c_at = [&](double tau) {
    ProtocolConfig c = cfg;
    c.tau = tau;
    return evaluate_concurrence(c, engine);
  };

  constexpr int kScan = 2001;
  const double step = window / (kScan - 1);
  int best = 0;
  double best_c = -1.0;
  for (int i = 0; i < kScan; ++i) {
    const double c = c_at(i * step);
    if (c > best_c) {
      best_c = c;
      best = i;
    }
  }

  // Golden-section refinement on the neighbouring scan cells.
  double a = std::max(0.0, (best - 1) * step);
  double b = std::min(window, (best + 1) * step);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = c_at(x1);
  double f2 = c_at(x2);
  int iterations = 0;
  while (b - a > 1e-10 && iterations++ < 200) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = c_at(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = c_at(x1);
    }
  }
  if (b - a > 1e-9) throw NumericalError("peak refinement did not converge");
  const double tau = 0.5 * (a + b);
  const double c = c_at(tau);
  if (c >= best_c) return {c, tau};
  return {best_c, best * step};
}

PeakResult peak_concurrence(int N, double lambda, double B_z, SweepEngine engine) {
  ProtocolConfig cfg = ProtocolConfig::defaults(N);
  cfg.params.lambda = lambda;
  cfg.params.B_z = B_z;
  cfg.init = InitialStateSpec::one_magnon();
  return peak_concurrence(cfg, engine);
}

double zero_field_peak_formula(int N) {
  // For N < 4 the zero-field maximum is not at sin^2 = 1.
  if (N < 4) throw ValidationError("zero-field peak formula holds for N >= 4");
  const double n = N;
  return 8.0 * n * (n - 1.0) / std::pow(n + 1.0, 3);
}

double zero_field_scaling_fit(const std::vector<int>& N_list, double lambda) {
  if (N_list.size() < 4) throw ValidationError("scaling fit needs at least four values of N");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int n : N_list) {
    if (n < 4) throw ValidationError("scaling fit needs N >= 4");
    const double x = std::log(static_cast<double>(n));
    const double y = std::log(peak_concurrence(n, lambda, 0.0, SweepEngine::closed_form).concurrence);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double k = static_cast<double>(N_list.size());
  const double denom = k * sxx - sx * sx;
  if (std::abs(denom) < 1e-12) throw ValidationError("degenerate scaling fit (all N equal)");
  return (k * sxy - sx * sy) / denom;
}

// ---------------------------------------------------------------------------

namespace {

// Crossing of f = floor between `inside` (f >= floor) and `outside` (f < floor).
template <typename F>
double bisect_crossing(F&& f, double floor, double inside, double outside) {
  for (int i = 0; i < 200 && std::abs(outside - inside) > 1e-13 * std::max(1.0, std::abs(inside)); ++i) {
    const double mid = 0.5 * (inside + outside);
    (f(mid) >= floor ? inside : outside) = mid;
  }
  return 0.5 * (inside + outside);
}

// Walks from `center` in direction `dir` with growing steps until f drops
// below floor, then bisects. Stops at `limit` if f never drops.
template <typename F>
double find_edge(F&& f, double floor, double center, double dir, double first_step, double limit) {
  double inside = center;
  double step = first_step;
  for (int i = 0; i < 400; ++i) {
    double probe = center + dir * step;
    if ((dir < 0 && probe <= limit) || (dir > 0 && probe >= limit)) {
      if (f(limit) >= floor) return limit;
      probe = limit;
    }
    if (f(probe) < floor) return bisect_crossing(f, floor, inside, probe);
    inside = probe;
    step *= 1.5;
  }
  throw NumericalError("tolerance bracket did not close");
}

}  // namespace

ToleranceWidths tolerance_widths(int N, double lambda, double floor) {
  if (N < 2) throw ValidationError("tolerance widths need N >= 2");
  if (!(lambda > 0.0)) throw ValidationError("tolerance widths need lambda > 0");
  if (!(floor > 0.0) || floor >= saturated_peak_concurrence())
    throw ValidationError("floor must lie in (0, 4/(3 sqrt 3))");

  const double b_star = optimal_field(lambda, N);
  const double t_star = optimal_time(lambda, N);
  auto c_tau = [&](double t) { return closed_form_concurrence({lambda, N, b_star, t}); };
  auto c_field = [&](double b) { return closed_form_concurrence({lambda, N, b, t_star}); };

  ToleranceWidths w;
  w.tau_lo = find_edge(c_tau, floor, t_star, -1.0, 1e-3 * t_star, 0.0);
  w.tau_hi = find_edge(c_tau, floor, t_star, +1.0, 1e-3 * t_star, 2.0 * t_star);
  const double field_step = 1e-3 * lambda * std::sqrt(static_cast<double>(N));
  w.B_lo = find_edge(c_field, floor, b_star, -1.0, field_step, 0.0);
  w.B_hi = find_edge(c_field, floor, b_star, +1.0, field_step, std::numeric_limits<double>::max());
  w.delta_tau = 0.5 * (w.tau_hi - w.tau_lo);
  w.delta_B = 0.5 * (w.B_hi - w.B_lo);
  return w;
}

}  // namespace seqent
