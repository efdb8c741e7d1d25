#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace seqent {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using Matrix4c = Eigen::Matrix4cd;
using Vector4c = Eigen::Vector4cd;

/// Precondition or input-validation failure. Maps to CLI exit code 1.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numerical failure (non-Hermitian operator, degenerate formula limit, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class BasisKind { sector, collective };

/// Identifies the basis a vector or operator is expressed in.
struct BasisTag {
  BasisKind kind = BasisKind::sector;
  int n_sites = 0;
  int max_excitations = 0;  // k_max for sector, m_max for collective

  friend bool operator==(const BasisTag&, const BasisTag&) = default;
};

std::string to_string(const BasisTag& tag);

struct StateVector {
  BasisTag basis;
  CVector amplitudes;

  double norm() const { return amplitudes.norm(); }
};

struct HamiltonianMatrix {
  BasisTag basis;
  CMatrix entries;

  Eigen::Index dim() const { return entries.rows(); }
};

/// Largest |H - H^dagger| entry.
double hermiticity_defect(const CMatrix& m);

}  // namespace seqent
