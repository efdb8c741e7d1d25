#include "seqent/cli/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

#include "seqent/version.hpp"

namespace seqent::cli {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

void require_table(const json& j, const std::string& path) {
  if (!j.is_object()) throw ValidationError("config key '" + path + "' must be a table");
}

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  require_table(j, path);
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw ValidationError("unknown config key '" + join(path, key) + "'");
  }
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ValidationError("config key '" + path + "' must be a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ValidationError("config key '" + path + "' must be an integer");
  return j.get<int>();
}

std::string text(const json& j, const std::string& path) {
  if (!j.is_string()) throw ValidationError("config key '" + path + "' must be a string");
  return j.get<std::string>();
}

Complex complex_value(const json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw ValidationError("config key '" + path + "' must be a number or [re, im]");
}

// A number, or the string "optimal" resolved by `optimum`.
template <typename F>
double number_or_optimal(const json& j, const std::string& path, F&& optimum) {
  if (j.is_string()) {
    if (j.get<std::string>() == "optimal") return optimum();
    throw ValidationError("config key '" + path + "' must be a number or \"optimal\"");
  }
  return number(j, path);
}

void parse_protocol(const json& j, RunConfig& rc) {
  const std::string p = "protocol";
  check_keys(j, p,
             {"N", "lattice", "J", "lambda", "B_z", "V0", "tau_f", "tau", "tau_f_prime", "engine", "initial"});
  ProtocolConfig& c = rc.protocol;
  if (j.contains("N")) c.n_sites = integer(j["N"], p + ".N");
  c.lattice.n_sites = c.n_sites;
  if (j.contains("lattice")) {
    const std::string kind = text(j["lattice"], p + ".lattice");
    if (kind == "periodic") c.lattice.kind = LatticeKind::chain_periodic;
    else if (kind == "open") c.lattice.kind = LatticeKind::chain_open;
    else throw ValidationError("config key 'protocol.lattice' must be \"periodic\" or \"open\"");
  }
  if (j.contains("J")) c.params.J = number(j["J"], p + ".J");
  if (j.contains("lambda")) c.params.lambda = number(j["lambda"], p + ".lambda");
  if (j.contains("V0")) c.params.V0 = number(j["V0"], p + ".V0");
  // B_z and tau default to the optimal operating point.
  const json optimal = "optimal";
  c.params.B_z = number_or_optimal(j.contains("B_z") ? j["B_z"] : optimal, p + ".B_z",
                                   [&] { return optimal_field(c.params.lambda, c.n_sites); });
  c.tau = number_or_optimal(j.contains("tau") ? j["tau"] : optimal, p + ".tau",
                            [&] { return optimal_time(c.params.lambda, c.n_sites); });
  if (j.contains("tau_f")) c.tau_f = number(j["tau_f"], p + ".tau_f");
  if (j.contains("tau_f_prime")) c.tau_f_prime = number(j["tau_f_prime"], p + ".tau_f_prime");
  if (j.contains("engine")) c.engine = parse_engine(text(j["engine"], p + ".engine"));

  c.init = InitialStateSpec::one_magnon();
  if (j.contains("initial")) {
    const json& ini = j["initial"];
    const std::string q = p + ".initial";
    check_keys(ini, q, {"variant", "alpha", "beta"});
    const std::string variant = ini.contains("variant") ? text(ini["variant"], q + ".variant") : "A";
    if (variant == "B") {
      if (ini.contains("alpha") != ini.contains("beta"))
        throw ValidationError("config keys 'protocol.initial.alpha' and 'beta' must be given together");
      if (ini.contains("alpha")) {
        c.init = InitialStateSpec::all_up(complex_value(ini["alpha"], q + ".alpha"),
                                          complex_value(ini["beta"], q + ".beta"));
      } else {
        rc.protocol_init_auto = true;
        c.init = InitialStateSpec::all_up_for_field(c.params, c.n_sites);
      }
    } else if (variant != "A") {
      throw ValidationError("config key 'protocol.initial.variant' must be \"A\" or \"B\"");
    } else if (ini.contains("alpha") || ini.contains("beta")) {
      throw ValidationError("config keys 'protocol.initial.alpha/beta' only apply to variant B");
    }
  }
  c.validate();
}

void parse_sweep(const json& j, RunConfig& rc) {
  const std::string p = "sweep";
  check_keys(j, p, {"variable", "range", "points", "values", "engine", "observable", "threads", "overlay_variants",
                    "family_N"});
  SweepConfig sc;
  SweepSpec& s = sc.spec;
  s.fixed = rc.protocol;
  s.auto_polarization = rc.protocol_init_auto;
  const std::string var = j.contains("variable") ? text(j["variable"], p + ".variable") : "tau";
  if (var == "tau") s.variable = SweepVariable::tau;
  else if (var == "B_z") s.variable = SweepVariable::B_z;
  else if (var == "N") s.variable = SweepVariable::N;
  else throw ValidationError("config key 'sweep.variable' must be tau, B_z or N");

  if (j.contains("values")) {
    if (!j["values"].is_array()) throw ValidationError("config key 'sweep.values' must be a list");
    for (const auto& v : j["values"]) s.values.push_back(number(v, p + ".values"));
  } else if (j.contains("range")) {
    const json& r = j["range"];
    if (!r.is_array() || r.size() != 2) throw ValidationError("config key 'sweep.range' must be [lo, hi]");
    const int points = j.contains("points") ? integer(j["points"], p + ".points") : 101;
    if (points < 1) throw ValidationError("config key 'sweep.points' must be >= 1");
    s.values = SweepSpec::linspace(number(r[0], p + ".range"), number(r[1], p + ".range"),
                                   static_cast<std::size_t>(points));
  }
  if (j.contains("engine")) s.engine = parse_sweep_engine(text(j["engine"], p + ".engine"));
  if (j.contains("observable")) {
    const std::string o = text(j["observable"], p + ".observable");
    if (o == "concurrence") s.observable = SweepObservable::concurrence;
    else if (o == "peak_concurrence") s.observable = SweepObservable::peak_concurrence;
    else throw ValidationError("config key 'sweep.observable' must be concurrence or peak_concurrence");
  }
  if (j.contains("threads")) {
    const int t = integer(j["threads"], p + ".threads");
    if (t < 1) throw ValidationError("config key 'sweep.threads' must be >= 1");
    s.threads = static_cast<unsigned>(t);
  }
  if (j.contains("overlay_variants")) {
    if (!j["overlay_variants"].is_boolean()) throw ValidationError("config key 'sweep.overlay_variants' must be a boolean");
    sc.overlay_variants = j["overlay_variants"].get<bool>();
  }
  if (j.contains("family_N")) {
    if (!j["family_N"].is_array()) throw ValidationError("config key 'sweep.family_N' must be a list");
    for (const auto& v : j["family_N"]) sc.family_N.push_back(integer(v, p + ".family_N"));
  }
  s.validate();
  rc.sweep = std::move(sc);
}

void parse_witness(const json& j, RunConfig& rc) {
  const std::string p = "witness";
  check_keys(j, p, {"alpha", "beta", "phase", "sign_convention", "target", "shots_per_setting"});
  WitnessConfig& w = rc.witness;
  if (j.contains("sign_convention")) {
    const std::string s = text(j["sign_convention"], p + ".sign_convention");
    if (s == "paper") w.spec.sign = WitnessSign::paper;
    else if (s == "corrected") w.spec.sign = WitnessSign::corrected;
    else throw ValidationError("config key 'witness.sign_convention' must be \"paper\" or \"corrected\"");
  }
  if (j.contains("target")) {
    const std::string t = text(j["target"], p + ".target");
    if (t == "auto") w.auto_target = true;
    else if (t == "explicit") w.auto_target = false;
    else throw ValidationError("config key 'witness.target' must be \"auto\" or \"explicit\"");
  }
  if (j.contains("alpha") || j.contains("beta") || j.contains("phase")) w.auto_target = false;
  if (j.contains("alpha")) w.spec.alpha = number(j["alpha"], p + ".alpha");
  if (j.contains("beta")) w.spec.beta = number(j["beta"], p + ".beta");
  if (j.contains("phase")) w.spec.phase = number(j["phase"], p + ".phase");
  if (j.contains("shots_per_setting")) {
    const json& s = j["shots_per_setting"];
    if (!s.is_number_unsigned() || s.get<std::uint64_t>() < 1)
      throw ValidationError("config key 'witness.shots_per_setting' must be a positive integer");
    w.shots_per_setting = s.get<std::size_t>();
  }
  if (!w.auto_target) w.spec.validate();
}

void parse_scenario(const json& j, RunConfig& rc) {
  const std::string p = "scenario";
  check_keys(j, p, {"a0", "N", "v", "flight_path", "flux", "sample_area", "T1", "T2", "sample_length",
                    "design_field"});
  ExperimentScenario& s = rc.scenario;
  auto get = [&](const char* key, double& out) {
    if (j.contains(key)) out = number(j[key], join(p, key));
  };
  get("a0", s.a0.value);
  get("N", s.N);
  get("v", s.v.value);
  get("flight_path", s.flight_path.value);
  get("flux", s.flux.value);
  get("sample_area", s.sample_area.value);
  get("T1", s.T1.value);
  get("T2", s.T2.value);
  get("sample_length", s.sample_length.value);
  get("design_field", s.design_field.value);
  s.validate();
}

void rehash(RunConfig& rc, const std::string& canonical) {
  std::ostringstream os;
  os << canonical << "|seed=" << rc.seed << "|engine=" << static_cast<int>(rc.protocol.engine);
  if (rc.sweep) os << "|sweep_engine=" << to_string(rc.sweep->spec.engine);
  rc.hash = fnv1a(os.str());
}

}  // namespace

Engine parse_engine(const std::string& name) {
  if (name == "sector_oracle") return Engine::sector_oracle;
  if (name == "collective") return Engine::collective;
  throw ValidationError("unknown engine '" + name + "' (expected sector_oracle or collective)");
}

SweepEngine parse_sweep_engine(const std::string& name) {
  if (name == "closed_form") return SweepEngine::closed_form;
  if (name == "sector_oracle") return SweepEngine::sector_oracle;
  if (name == "collective") return SweepEngine::collective;
  throw ValidationError("unknown engine '" + name + "' (expected closed_form, sector_oracle or collective)");
}

std::string RunConfig::hash_hex() const { return hex_hash(hash); }

void RunConfig::override_engine(const std::string& name) {
  if (sweep) sweep->spec.engine = parse_sweep_engine(name);
  if (name != "closed_form") protocol.engine = parse_engine(name);
  if (sweep && name != "closed_form") sweep->spec.fixed.engine = protocol.engine;
  if (sweep) sweep->spec.validate();
  hash = fnv1a(hex_hash(hash) + "|engine=" + name);
}

void RunConfig::override_seed(std::uint64_t s) {
  seed = s;
  hash = fnv1a(hex_hash(hash) + "|seed=" + std::to_string(s));
}

RunConfig parse_config(const std::string& source) {
  json doc;
  try {
    doc = json::parse(source, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(doc, "", {"protocol", "sweep", "witness", "scenario", "output", "seed"});

  RunConfig rc;
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) throw ValidationError("config key 'seed' must be a non-negative integer");
    rc.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("output")) {
    check_keys(doc["output"], "output", {"dir"});
    if (doc["output"].contains("dir")) rc.output_dir = text(doc["output"]["dir"], "output.dir");
  }
  parse_protocol(doc.contains("protocol") ? doc["protocol"] : json::object(), rc);
  if (doc.contains("sweep")) parse_sweep(doc["sweep"], rc);
  if (doc.contains("witness")) parse_witness(doc["witness"], rc);
  if (doc.contains("scenario")) parse_scenario(doc["scenario"], rc);
  rehash(rc, doc.dump());
  return rc;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

RunConfig default_config() { return parse_config("{}"); }

}  // namespace seqent::cli
