#include "hotent/entanglement.hpp"

#include "hotent/errors.hpp"

#include <cmath>
#include <limits>

namespace hotent {

namespace {

void require_map_geometry(const DensityState& s, const PolaronMap& map) {
  if (!(s.geometry() == map.geometry()))
    throw InvalidDimension("state geometry " + s.geometry().describe() + " does not match the polaron map " +
                           map.geometry().describe());
  if (map.leakage() > PolaronMap::kLeakageLimit)
    throw TruncationWarning("polaron map leaks " + std::to_string(map.leakage()) +
                            " onto the top Fock level; increase the truncation");
}

} // namespace

DensityState to_local_basis(const DensityState& state_tilde, const PolaronMap& map) {
  require_map_geometry(state_tilde, map);
  const Matrix m = map.to_local(state_tilde.matrix());
  return DensityState::trusted(QOperator(state_tilde.geometry(), 0.5 * (m + m.adjoint())));
}

DensityState to_polaron_frame(const DensityState& state, const PolaronMap& map) {
  require_map_geometry(state, map);
  const Matrix& u = map.u().matrix();
  const Matrix m = u * state.matrix() * u.adjoint();
  return DensityState::trusted(QOperator(state.geometry(), 0.5 * (m + m.adjoint())));
}

DensityState resonator_state(const DensityState& state) {
  if (!state.geometry().has_ancilla())
    throw InvalidDimension("resonator_state needs a three-factor state, got " + state.geometry().describe());
  return partial_trace(state, {Site::R1, Site::R2});
}

double log_negativity(const Matrix& rho, int n1, int n2, Site site) {
  const Matrix pt = partial_transpose(rho, n1, n2, site);
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (pt + pt.adjoint()), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalFailure("eigendecomposition of the partial transpose failed");
  const Eigen::VectorXd& ev = es.eigenvalues();
  // Negative eigenvalue mass at the roundoff level of the solver is PPT.
  const double negative = -ev.cwiseMin(0.0).sum();
  const double noise = 64.0 * std::numeric_limits<double>::epsilon() * ev.size() * ev.cwiseAbs().maxCoeff();
  if (negative <= noise) return 0.0;
  return std::max(0.0, std::log2(ev.cwiseAbs().sum()));
}

double log_negativity(const DensityState& two_mode, Site site) {
  const HilbertGeometry& g = two_mode.geometry();
  if (!g.is_two_mode()) throw InvalidDimension("log negativity needs a two-mode state, got " + g.describe());
  return log_negativity(two_mode.matrix(), g.fock_dim(0), g.fock_dim(1), site);
}

} // namespace hotent
