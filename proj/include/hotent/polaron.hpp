#pragma once

#include "hotent/qoperator.hpp"

#include <array>

namespace hotent {

/// The polaron unitary u = exp(-n_a * sum_i alpha_i (b_i^dag - b_i)).
///
/// n_a is the ancilla excitation number (sigma_+ sigma_- for a TLS), so a
/// ground-state ancilla is left untouched. States live in the polaron
/// frame as u rho u^dag.
class PolaronMap {
public:
  static constexpr double kLeakageLimit = 1e-6;

  PolaronMap(const HilbertGeometry& g, std::array<double, 2> alpha);

  const std::array<double, 2>& alpha() const { return alpha_; }
  const QOperator& u() const { return u_; }
  const HilbertGeometry& geometry() const { return u_.geometry(); }

  /// Largest weight a displaced vacuum puts on the top Fock level.
  double leakage() const { return leakage_; }
  /// max |u^dag u - 1|; exp of an anti-Hermitian matrix, so roundoff only.
  double unitarity_error() const { return unitarity_error_; }

  /// u X u^dag
  QOperator to_polaron(const QOperator& local) const;
  /// u^dag X u
  QOperator to_local(const QOperator& polaron) const;
  Matrix to_local(const Matrix& polaron) const;

  /// S = sum_i alpha_i (b_i^dag - b_i), embedded in the map's geometry.
  static QOperator displacement_generator(const HilbertGeometry& g, std::array<double, 2> alpha);

private:
  std::array<double, 2> alpha_;
  QOperator u_;
  double leakage_ = 0.0;
  double unitarity_error_ = 0.0;
};

} // namespace hotent
