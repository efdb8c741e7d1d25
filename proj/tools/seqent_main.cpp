#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "seqent/cli/commands.hpp"
#include "seqent/version.hpp"

namespace {

struct Options {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::string engine;
  bool plot = false;
};

seqent::cli::RunConfig resolve(const Options& o) {
  auto rc = o.config.empty() ? seqent::cli::default_config() : seqent::cli::load_config(o.config);
  if (!o.out.empty()) rc.output_dir = o.out;
  if (o.seed) rc.override_seed(*o.seed);
  if (!o.engine.empty()) rc.override_engine(o.engine);
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sequential two-neutron scattering entanglement simulator"};
  app.set_version_flag("--version", std::string(seqent::kVersion));
  app.require_subcommand(1);

  Options opt;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out, "output directory (overrides output.dir)");
    sub->add_option("--seed", opt.seed, "random seed");
    sub->add_option("--engine", opt.engine, "closed_form, sector_oracle or collective");
  };

  auto* simulate = app.add_subcommand("simulate", "run one protocol and write the neutron density matrix");
  auto* sweep = app.add_subcommand("sweep", "parameter sweep to CSV");
  auto* verify = app.add_subcommand("verify", "run the verification suites");
  auto* feasibility = app.add_subcommand("feasibility", "SI feasibility report");
  auto* witness = app.add_subcommand("witness", "shot-based witness estimate");
  for (auto* sub : {simulate, sweep, verify, feasibility, witness}) add_common(sub);
  sweep->add_flag("--plot", opt.plot, "also write an SVG plot");

  CLI11_PARSE(app, argc, argv);

  try {
    const auto rc = resolve(opt);
    if (*simulate) return seqent::cli::cmd_simulate(rc, std::cout);
    if (*sweep) return seqent::cli::cmd_sweep(rc, opt.plot, std::cout);
    if (*verify) return seqent::cli::cmd_verify(rc, std::cout);
    if (*feasibility) return seqent::cli::cmd_feasibility(rc, std::cout);
    if (*witness) return seqent::cli::cmd_witness(rc, std::cout);
  } catch (const seqent::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const seqent::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
