#include "seqent/dynamics.hpp"

#include <cmath>

namespace seqent {

InitialStateSpec InitialStateSpec::one_magnon() { return {InitialVariant::A, {1.0, 0.0}, {0.0, 0.0}}; }

InitialStateSpec InitialStateSpec::all_up(Complex alpha, Complex beta) { return {InitialVariant::B, alpha, beta}; }

InitialStateSpec InitialStateSpec::all_up_for_field(const CouplingParams& p, int n_sites) {
  if (p.B_z > threshold_field(p.lambda, n_sites)) return all_up({0.0, 0.0}, {1.0, 0.0});
  const double h = 1.0 / std::sqrt(2.0);
  return all_up({h, 0.0}, {h, 0.0});
}

int InitialStateSpec::flips_required() const {
  if (variant == InitialVariant::A) return 1;
  return std::abs(beta) > 0.0 ? 2 : 0;
}

void InitialStateSpec::validate() const {
  if (variant == InitialVariant::B && std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-12)
    throw ValidationError("neutron amplitudes must satisfy |alpha|^2 + |beta|^2 = 1");
}

double threshold_field(double lambda, int n_sites) { return 0.1 * lambda * n_sites; }

ProtocolConfig ProtocolConfig::defaults(int n_sites) {
  ProtocolConfig cfg;
  cfg.n_sites = n_sites;
  cfg.lattice = {LatticeKind::chain_periodic, n_sites};
  return cfg;
}

void ProtocolConfig::validate() const {
  if (n_sites < 2) throw ValidationError("protocol needs N >= 2");
  if (lattice.n_sites != n_sites) throw ValidationError("lattice size does not match N");
  lattice.validate();
  params.validate();
  init.validate();
  for (double t : {tau_f, tau, tau_f_prime})
    if (!(t >= 0.0) || !std::isfinite(t)) throw ValidationError("durations must be finite and non-negative");
  if (engine == Engine::collective && lattice.kind != LatticeKind::chain_periodic)
    throw ValidationError("collective engine requires a periodic chain");
}

// ---------------------------------------------------------------------------

StateVector prepare_initial(const InitialStateSpec& spec, const SectorBasis& basis) {
  spec.validate();
  if (spec.flips_required() > basis.k_max())
    throw ValidationError("initial state needs " + std::to_string(spec.flips_required()) +
                          " flips but basis has k_max=" + std::to_string(basis.k_max()));
  const int n = basis.n_sites();
  StateVector psi{basis.tag(), CVector::Zero(basis.size())};
  if (spec.variant == InitialVariant::A) {
    const double amp = 1.0 / std::sqrt(static_cast<double>(n));
    for (int j = 0; j < n; ++j) psi.amplitudes[basis.index_of(SiteMask{1} << j)] = amp;
  } else {
    for (int n2 = 0; n2 <= 1; ++n2) {
      for (int n1 = 0; n1 <= 1; ++n1) {
        const Complex amp = (n1 ? spec.beta : spec.alpha) * (n2 ? spec.beta : spec.alpha);
        if (amp == Complex{}) continue;
        psi.amplitudes[basis.index_of((SiteMask(n1) << n) | (SiteMask(n2) << (n + 1)))] = amp;
      }
    }
  }
  return psi;
}

StateVector prepare_initial(const InitialStateSpec& spec, const CollectiveBasis& basis) {
  spec.validate();
  if (spec.flips_required() > basis.m_max())
    throw ValidationError("initial state needs " + std::to_string(spec.flips_required()) +
                          " magnons but basis has m_max=" + std::to_string(basis.m_max()));
  StateVector psi{basis.tag(), CVector::Zero(basis.size())};
  if (spec.variant == InitialVariant::A) {
    psi.amplitudes[basis.index_of({0, 0, 1})] = 1.0;
  } else {
    for (int n2 = 0; n2 <= 1; ++n2)
      for (int n1 = 0; n1 <= 1; ++n1)
        psi.amplitudes[basis.index_of({n1, n2, 0})] = (n1 ? spec.beta : spec.alpha) * (n2 ? spec.beta : spec.alpha);
  }
  return psi;
}

// ---------------------------------------------------------------------------

Propagator::Propagator(const HamiltonianMatrix& h) : basis_(h.basis) {
  const double scale = std::max(1.0, h.entries.size() ? h.entries.cwiseAbs().maxCoeff() : 0.0);
  if (hermiticity_defect(h.entries) > 1e-12 * scale) throw NumericalError("Hamiltonian is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h.entries);
  if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
  energies_ = es.eigenvalues();
  vectors_ = es.eigenvectors();
}

StateVector Propagator::apply(const StateVector& state, double t) const {
  if (state.basis != basis_) throw ValidationError("state and Hamiltonian are in different bases");
  if (!(t >= 0.0)) throw ValidationError("evolution time must be non-negative");
  if (t == 0.0) return state;
  CVector coeffs = vectors_.adjoint() * state.amplitudes;
  for (Eigen::Index k = 0; k < coeffs.size(); ++k) coeffs[k] *= std::exp(Complex{0.0, -energies_[k] * t});
  return {basis_, vectors_ * coeffs};
}

StateVector evolve(const StateVector& state, const HamiltonianMatrix& h, double t) {
  return Propagator(h).apply(state, t);
}

namespace {

template <typename Basis>
ProtocolResult run_in(const ProtocolConfig& cfg, const Basis& basis) {
  const HamiltonianMatrix h0 = build_H0(basis, cfg.lattice, cfg.params);
  HamiltonianMatrix scatter1 = build_Hint(basis, 1, cfg.params);
  HamiltonianMatrix scatter2 = build_Hint(basis, 2, cfg.params);
  scatter1.entries += h0.entries;
  scatter2.entries += h0.entries;

  const Propagator free(h0);
  const Propagator first(scatter1);
  const Propagator second(scatter2);

  std::vector<StageRecord> log;
  StateVector psi = prepare_initial(cfg.init, basis);
  double clock = 0.0;
  log.push_back({"prepare", clock, 0.0, psi.norm()});

  auto stage = [&](const char* name, const Propagator& u, double t) {
    psi = u.apply(psi, t);
    log.push_back({name, clock, t, psi.norm()});
    clock += t;
  };
  stage("free", free, cfg.tau_f);
  stage("scatter_1", first, cfg.tau);
  stage("free_between", free, cfg.tau_f_prime);
  stage("scatter_2", second, cfg.tau);

  for (const auto& rec : log)
    if (std::abs(rec.norm - 1.0) > 1e-10) throw NumericalError("norm drift in stage " + rec.name);

  NeutronDensityMatrix rho = reduce_to_neutrons(psi, basis);
  return {std::move(psi), std::move(rho), std::move(log)};
}

}  // namespace

ProtocolResult run_protocol(const ProtocolConfig& cfg) {
  cfg.validate();
  const int flips = std::max(1, cfg.init.flips_required());
  if (cfg.engine == Engine::collective) return run_in(cfg, CollectiveBasis(cfg.n_sites, std::min(flips, cfg.n_sites)));
  return run_in(cfg, SectorBasis(cfg.n_sites, flips));
}

double interaction_time_from_kinematics(double D, double k_z) {
  if (!(D > 0.0)) throw ValidationError("interaction length must be positive");
  if (k_z == 0.0 || !std::isfinite(k_z)) throw ValidationError("neutron momentum must be non-zero");
  return D / std::abs(k_z);
}

}  // namespace seqent
