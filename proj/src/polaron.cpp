#include "hotent/polaron.hpp"

#include "hotent/errors.hpp"

namespace hotent {

QOperator PolaronMap::displacement_generator(const HilbertGeometry& g, std::array<double, 2> alpha) {
  QOperator s = QOperator::zero(g);
  for (int i = 0; i < 2; ++i) {
    if (alpha[i] == 0.0) continue;
    const QOperator b = mode_lower(g, i);
    s += complex(alpha[i], 0.0) * (b.adjoint() - b);
  }
  return s;
}

PolaronMap::PolaronMap(const HilbertGeometry& g, std::array<double, 2> alpha)
    : alpha_(alpha), u_(QOperator::identity(g)) {
  if (!g.has_ancilla()) throw InvalidDimension("polaron map needs an ancilla factor, got " + g.describe());
  for (double a : alpha) {
    if (!std::isfinite(a)) throw InvalidArgument("polaron map: alpha must be finite");
  }
  const QOperator na = ancilla_number(g);
  const QOperator s = displacement_generator(g, alpha);
  u_ = matrix_exponential(complex(-1.0, 0.0) * (na * s));

  const Matrix& u = u_.matrix();
  const int d = g.total_dim();
  unitarity_error_ = (u.adjoint() * u - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();

  // Push the vacuum of both modes through u for every ancilla level and
  // look at how much lands on the last Fock level of either resonator.
  const int n1 = g.fock_dim(0);
  const int n2 = g.fock_dim(1);
  for (int a = 0; a < g.ancilla_dim(); ++a) {
    const Eigen::VectorXcd col = u.col(a * n1 * n2);
    double top = 0.0;
    for (int i = 0; i < n1; ++i)
      for (int j = 0; j < n2; ++j) {
        if (i == n1 - 1 || j == n2 - 1) top += std::norm(col((a * n1 + i) * n2 + j));
      }
    leakage_ = std::max(leakage_, top);
  }
}

QOperator PolaronMap::to_polaron(const QOperator& local) const { return u_ * local * u_.adjoint(); }

QOperator PolaronMap::to_local(const QOperator& polaron) const { return u_.adjoint() * polaron * u_; }

Matrix PolaronMap::to_local(const Matrix& polaron) const {
  const Matrix& u = u_.matrix();
  return u.adjoint() * polaron * u;
}

} // namespace hotent
