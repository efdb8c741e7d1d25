#include <doctest.h>

#include <numbers>
#include <sstream>

#include "seqent/analysis.hpp"
#include "support.hpp"

using namespace seqent;

namespace {

SweepSpec tau_sweep(int N, double B, std::vector<double> values, SweepEngine e = SweepEngine::closed_form) {
  SweepSpec s;
  s.variable = SweepVariable::tau;
  s.values = std::move(values);
  s.fixed = ProtocolConfig::defaults(N);
  s.fixed.params.B_z = B;
  s.engine = e;
  return s;
}

std::string csv(const SweepResult& r) {
  std::ostringstream os;
  r.write_csv(os);
  return os.str();
}

// Half-width in x of {2|cos x| sin^2 x >= floor} around arccos(-1/3)/2.
double delta_x_oracle(double floor) {
  const double xs = 0.5 * std::acos(-1.0 / 3.0);
  auto f = [&](double x) { return 2 * std::abs(std::cos(x)) * std::sin(x) * std::sin(x) - floor; };
  const double lo = testsupport::bisect(f, 0.0, xs);
  const double hi = testsupport::bisect(f, xs, std::numbers::pi / 2);
  return 0.5 * (hi - lo);
}

}  // namespace

TEST_CASE("tau sweep at zero field is periodic with the expected peak") {
  const auto r = sweep(tau_sweep(4, 0.0, SweepSpec::linspace(0.0, 2 * std::numbers::pi / 5, 401)));
  double best = 0.0, arg = 0.0;
  for (const auto& row : r.rows)
    if (row.concurrence > best) best = row.concurrence, arg = row.value;
  CHECK(best == doctest::Approx(0.768).epsilon(1e-9));
  CHECK(std::fmod(arg, std::numbers::pi / 5) == doctest::Approx(std::numbers::pi / 10));
  CHECK(r.rows.front().concurrence == doctest::Approx(r.rows.back().concurrence).epsilon(1e-12));
}

TEST_CASE("single-point sweep at tau = 0") {
  const auto r = sweep(tau_sweep(4, 0.0, {0.0}));
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0].concurrence == 0.0);
}

TEST_CASE("sweep output is byte-identical across runs and thread counts") {
  auto s = tau_sweep(5, 2.0, SweepSpec::linspace(0.0, 1.0, 37), SweepEngine::sector_oracle);
  const std::string one = csv(sweep(s, 3));
  s.threads = 4;
  const std::string four = csv(sweep(s, 3));
  CHECK(one == four);
  CHECK(one.rfind("# seqent", 0) == 0);
  CHECK(one.find("variable,value,concurrence,engine,config_hash\n") != std::string::npos);
}

TEST_CASE("engines agree inside sweeps") {
  const auto values = SweepSpec::linspace(0.0, 1.2, 25);
  for (int N : {3, 6}) {
    const auto a = sweep(tau_sweep(N, 1.5, values, SweepEngine::closed_form));
    const auto b = sweep(tau_sweep(N, 1.5, values, SweepEngine::sector_oracle));
    auto spec = tau_sweep(N, 1.5, values, SweepEngine::collective);
    spec.fixed.engine = Engine::collective;
    const auto c = sweep(spec);
    for (std::size_t i = 0; i < values.size(); ++i) {
      CHECK(std::abs(a.rows[i].concurrence - b.rows[i].concurrence) < 1e-8);
      CHECK(std::abs(a.rows[i].concurrence - c.rows[i].concurrence) < 1e-8);
    }
  }
}

TEST_CASE("sweep values are sorted and N sweeps take integers") {
  SweepSpec s = tau_sweep(4, 0.0, {0.3, 0.1, 0.2});
  const auto r = sweep(s);
  CHECK(r.rows[0].value == 0.1);
  CHECK(r.rows[2].value == 0.3);
  s.variable = SweepVariable::N;
  s.values = {4.5};
  CHECK_THROWS_AS(sweep(s), ValidationError);
  s.values = {6, 4, 5};
  s.fixed.tau = 0.2;
  const auto rn = sweep(s);
  CHECK(rn.rows[0].value == 4.0);
  CHECK(rn.rows[0].concurrence == doctest::Approx(closed_form_concurrence({1.0, 4, 0.0, 0.2})));
}

TEST_CASE("sweep validation") {
  SweepSpec s = tau_sweep(4, 0.0, {});
  CHECK_THROWS_AS(sweep(s), ValidationError);
  s.values = {0.1};
  s.fixed.init = InitialStateSpec::all_up_for_field(s.fixed.params, 4);
  CHECK_THROWS_AS(sweep(s), ValidationError);  // closed form needs the one-magnon state
  s = tau_sweep(4, 0.0, {0.1});
  s.observable = SweepObservable::peak_concurrence;
  CHECK_THROWS_AS(sweep(s), ValidationError);
  s = tau_sweep(4, 0.0, {-0.1});
  CHECK_THROWS_AS(sweep(s), ValidationError);
}

TEST_CASE("peak finder returns the largest scanned value") {
  testsupport::Gen g(30);
  for (int trial = 0; trial < 20; ++trial) {
    const int N = g.integer(2, 40);
    const double B = g.uniform(0.0, 2.0 * N);
    ProtocolConfig c = ProtocolConfig::defaults(N);
    c.params.B_z = B;
    const auto p = peak_concurrence(c, SweepEngine::closed_form);
    const double period = std::numbers::pi / phi_tilde(1.0, N, B);
    CHECK(p.tau >= 0.0);
    CHECK(p.tau <= period);
    for (int i = 0; i <= 3000; ++i)
      CHECK(closed_form_concurrence({1.0, N, B, period * i / 3000.0}) <= p.concurrence + 1e-12);
  }
}

TEST_CASE("peak concurrence over the field is centred on lambda(N-1)") {
  for (int N : {4, 8}) {
    const double Bs = optimal_field(1.0, N);
    const double top = peak_concurrence(N, 1.0, Bs, SweepEngine::closed_form).concurrence;
    CHECK(top == doctest::Approx(saturated_peak_concurrence()).epsilon(1e-10));
    for (double B = 0.0; B <= 3.0 * N; B += 0.25)
      CHECK(peak_concurrence(N, 1.0, B, SweepEngine::closed_form).concurrence <= top + 1e-10);
    for (double d : {1.0, 2.5, 4.0}) {
      if (Bs - d < 0.0) continue;
      CHECK(peak_concurrence(N, 1.0, Bs - d, SweepEngine::closed_form).concurrence ==
            doctest::Approx(peak_concurrence(N, 1.0, Bs + d, SweepEngine::closed_form).concurrence).epsilon(1e-9));
    }
  }
}

TEST_CASE("zero-field peak formula and scaling fit") {
  for (int N : {4, 7, 20})
    CHECK(std::abs(peak_concurrence(N, 1.0, 0.0, SweepEngine::closed_form).concurrence - zero_field_peak_formula(N)) < 1e-10);
  // Least-squares slope of the exact peaks, computed here independently.
  auto ls_slope = [](const std::vector<int>& ns) {
    double mx = 0, my = 0;
    for (int n : ns) mx += std::log(n), my += std::log(8.0 * n * (n - 1) / std::pow(n + 1.0, 3));
    mx /= ns.size(), my /= ns.size();
    double sxy = 0, sxx = 0;
    for (int n : ns) {
      const double x = std::log(n) - mx;
      sxy += x * (std::log(8.0 * n * (n - 1) / std::pow(n + 1.0, 3)) - my);
      sxx += x * x;
    }
    return sxy / sxx;
  };
  const std::vector<int> doubling = {8, 16, 32, 64, 128};
  CHECK(std::abs(zero_field_scaling_fit(doubling) - ls_slope(doubling)) < 1e-9);
  CHECK(zero_field_scaling_fit(doubling) == doctest::Approx(-0.84195).epsilon(1e-4));
  std::vector<int> every;
  for (int n = 8; n <= 128; ++n) every.push_back(n);
  const double slope = zero_field_scaling_fit(every);
  CHECK(std::abs(slope - ls_slope(every)) < 1e-9);
  CHECK(slope >= -1.15);
  CHECK(slope <= -0.85);
  CHECK(std::abs(256 * zero_field_peak_formula(256) / 8.0 - 1.0) < 0.05);
  CHECK_THROWS_AS(zero_field_scaling_fit({4, 8}), ValidationError);
  CHECK_THROWS_AS(zero_field_peak_formula(2), ValidationError);
}

TEST_CASE("tolerance widths") {
  const auto w = tolerance_widths(4, 1.0);
  CHECK(std::abs(w.delta_tau - delta_x_oracle(0.7) / 4.0) < 1e-9);
  CHECK(w.delta_tau == doctest::Approx(0.0437).epsilon(0.01));
  CHECK(closed_form_concurrence({1.0, 4, 3.0, w.tau_lo}) == doctest::Approx(0.7).epsilon(1e-8));
  CHECK(closed_form_concurrence({1.0, 4, 3.0, w.tau_hi}) == doctest::Approx(0.7).epsilon(1e-8));
  const auto tight = tolerance_widths(4, 1.0, 0.75);
  CHECK(tight.delta_tau < w.delta_tau);
  CHECK(tight.delta_B < w.delta_B);
  const double ref = tolerance_widths(4, 1.0).delta_tau * 2.0;
  for (int N : {16, 64}) CHECK(std::abs(tolerance_widths(N, 1.0).delta_tau * std::sqrt(double(N)) - ref) < 1e-8);
  CHECK_THROWS_AS(tolerance_widths(4, 1.0, 0.78), ValidationError);
  CHECK_THROWS_AS(tolerance_widths(4, 1.0, 0.0), ValidationError);
}
