#pragma once

#include "hotent/geometry.hpp"

#include <Eigen/Dense>

#include <complex>

namespace hotent {

using complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// Complex square matrix on a composite truncated Hilbert space.
class QOperator {
public:
  QOperator(HilbertGeometry geometry, Matrix matrix);

  static QOperator identity(const HilbertGeometry& g);
  static QOperator zero(const HilbertGeometry& g);

  const HilbertGeometry& geometry() const { return geometry_; }
  const Matrix& matrix() const { return matrix_; }
  int dim() const { return static_cast<int>(matrix_.rows()); }

  QOperator adjoint() const { return {geometry_, matrix_.adjoint()}; }
  complex trace() const { return matrix_.trace(); }

  QOperator& operator+=(const QOperator& o);
  QOperator& operator-=(const QOperator& o);
  QOperator& operator*=(complex s);

  friend QOperator operator+(QOperator a, const QOperator& b) { return a += b; }
  friend QOperator operator-(QOperator a, const QOperator& b) { return a -= b; }
  friend QOperator operator*(const QOperator& a, const QOperator& b);
  friend QOperator operator*(complex s, QOperator a) { return a *= s; }
  friend QOperator operator*(QOperator a, complex s) { return a *= s; }

private:
  HilbertGeometry geometry_;
  Matrix matrix_;
};

QOperator commutator(const QOperator& a, const QOperator& b);

/// Hermitian, unit-trace, positive semidefinite operator.
class DensityState {
public:
  static constexpr double kTraceTolerance = 1e-8;
  static constexpr double kHermiticityTolerance = 1e-10;
  static constexpr double kMinEigenvalue = -1e-7;

  /// Validates every invariant; throws InvalidArgument on violation.
  explicit DensityState(QOperator op);

  /// Skips the eigenvalue check; trace and Hermiticity are still enforced.
  static DensityState trusted(QOperator op);

  static DensityState pure(const HilbertGeometry& g, const Eigen::VectorXcd& psi);
  static DensityState basis(const HilbertGeometry& g, int ancilla, int n1, int n2);
  static DensityState maximally_mixed(const HilbertGeometry& g);

  const QOperator& op() const { return op_; }
  const Matrix& matrix() const { return op_.matrix(); }
  const HilbertGeometry& geometry() const { return op_.geometry(); }

  double min_eigenvalue() const;
  double purity() const;

private:
  struct Unchecked {};
  DensityState(QOperator op, Unchecked) : op_(std::move(op)) {}
  QOperator op_;
};

// Single-factor building blocks.

/// Bosonic lowering operator truncated to `n_levels` Fock states.
Matrix fock_destroy(int n_levels);

/// TLS ladder and inversion operators in the (excited, ground) basis.
struct TlsOperators {
  Matrix lower;
  Matrix raise;
  Matrix z;
};
TlsOperators tls_operators();

/// Kronecker product with identities on every other factor.
QOperator embed(const Matrix& factor, Site site, const HilbertGeometry& g);

/// Ancilla lowering operator: sigma_- for a TLS, a for an oscillator.
QOperator ancilla_lower(const HilbertGeometry& g);
/// Ancilla excitation number: sigma_+ sigma_- for a TLS, a^dag a for an oscillator.
QOperator ancilla_number(const HilbertGeometry& g);
/// Lowering operator b_i of resonator `mode` (0 or 1).
QOperator mode_lower(const HilbertGeometry& g, int mode);

Matrix matrix_exponential(const Matrix& m);
QOperator matrix_exponential(const QOperator& op);

DensityState partial_trace(const DensityState& state, const SiteSet& keep);

/// Partial transpose of a two-mode state with respect to `site` (R1 or R2).
Matrix partial_transpose(const DensityState& state, Site site = Site::R2);
Matrix partial_transpose(const Matrix& rho, int n1, int n2, Site site = Site::R2);

} // namespace hotent
