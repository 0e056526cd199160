#include "hotent/qoperator.hpp"

#include "hotent/errors.hpp"

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

namespace hotent {

QOperator::QOperator(HilbertGeometry geometry, Matrix matrix) : geometry_(geometry), matrix_(std::move(matrix)) {
  const int d = geometry_.total_dim();
  if (matrix_.rows() != d || matrix_.cols() != d) {
    throw InvalidDimension("matrix is " + std::to_string(matrix_.rows()) + "x" + std::to_string(matrix_.cols()) +
                           " but geometry " + geometry_.describe() + " needs " + std::to_string(d));
  }
}

QOperator QOperator::identity(const HilbertGeometry& g) {
  return {g, Matrix::Identity(g.total_dim(), g.total_dim())};
}

QOperator QOperator::zero(const HilbertGeometry& g) { return {g, Matrix::Zero(g.total_dim(), g.total_dim())}; }

namespace {
void require_same(const HilbertGeometry& a, const HilbertGeometry& b) {
  if (!(a == b)) throw InvalidDimension("geometry mismatch: " + a.describe() + " vs " + b.describe());
}
} // namespace

QOperator& QOperator::operator+=(const QOperator& o) {
  require_same(geometry_, o.geometry_);
  matrix_ += o.matrix_;
  return *this;
}

QOperator& QOperator::operator-=(const QOperator& o) {
  require_same(geometry_, o.geometry_);
  matrix_ -= o.matrix_;
  return *this;
}

QOperator& QOperator::operator*=(complex s) {
  matrix_ *= s;
  return *this;
}

QOperator operator*(const QOperator& a, const QOperator& b) {
  require_same(a.geometry_, b.geometry_);
  return {a.geometry_, a.matrix_ * b.matrix_};
}

QOperator commutator(const QOperator& a, const QOperator& b) { return a * b - b * a; }

// ---------------------------------------------------------------------------

namespace {

void check_trace_and_hermiticity(const QOperator& op) {
  const Matrix& m = op.matrix();
  const double trace_err = std::abs(m.trace() - complex(1.0, 0.0));
  if (trace_err > DensityState::kTraceTolerance) {
    throw InvalidArgument("density state trace deviates from 1 by " + std::to_string(trace_err));
  }
  const double herm_err = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (herm_err > DensityState::kHermiticityTolerance) {
    throw InvalidArgument("density state is not Hermitian (max deviation " + std::to_string(herm_err) + ")");
  }
}

} // namespace

DensityState::DensityState(QOperator op) : op_(std::move(op)) {
  check_trace_and_hermiticity(op_);
  const double lmin = min_eigenvalue();
  if (lmin < kMinEigenvalue) {
    throw InvalidArgument("density state has negative eigenvalue " + std::to_string(lmin));
  }
}

DensityState DensityState::trusted(QOperator op) {
  check_trace_and_hermiticity(op);
  return DensityState(std::move(op), Unchecked{});
}

DensityState DensityState::pure(const HilbertGeometry& g, const Eigen::VectorXcd& psi) {
  if (psi.size() != g.total_dim()) throw InvalidDimension("state vector size does not match geometry");
  const double norm = psi.norm();
  if (norm == 0.0) throw InvalidArgument("zero state vector");
  Eigen::VectorXcd v = psi / norm;
  return DensityState(QOperator(g, v * v.adjoint()), Unchecked{});
}

DensityState DensityState::basis(const HilbertGeometry& g, int ancilla, int n1, int n2) {
  if (ancilla < 0 || ancilla >= g.ancilla_dim() || n1 < 0 || n1 >= g.fock_dim(0) || n2 < 0 || n2 >= g.fock_dim(1)) {
    throw InvalidArgument("basis label outside the truncated space");
  }
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(g.total_dim());
  psi((ancilla * g.fock_dim(0) + n1) * g.fock_dim(1) + n2) = 1.0;
  return pure(g, psi);
}

DensityState DensityState::maximally_mixed(const HilbertGeometry& g) {
  const int d = g.total_dim();
  return DensityState(QOperator(g, Matrix::Identity(d, d) / static_cast<double>(d)), Unchecked{});
}

double DensityState::min_eigenvalue() const {
  const Matrix& m = op_.matrix();
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalFailure("eigenvalue solver failed");
  return es.eigenvalues().minCoeff();
}

double DensityState::purity() const { return (op_.matrix() * op_.matrix()).trace().real(); }

// ---------------------------------------------------------------------------

Matrix fock_destroy(int n_levels) {
  if (n_levels < 2) throw InvalidDimension("fock_destroy needs at least 2 levels");
  Matrix b = Matrix::Zero(n_levels, n_levels);
  for (int m = 0; m + 1 < n_levels; ++m) b(m, m + 1) = std::sqrt(static_cast<double>(m + 1));
  return b;
}

TlsOperators tls_operators() {
  // index 0 = excited, index 1 = ground
  TlsOperators ops;
  ops.lower = Matrix::Zero(2, 2);
  ops.lower(1, 0) = 1.0;
  ops.raise = ops.lower.adjoint();
  ops.z = Matrix::Zero(2, 2);
  ops.z(0, 0) = 1.0;
  ops.z(1, 1) = -1.0;
  return ops;
}

QOperator embed(const Matrix& factor, Site site, const HilbertGeometry& g) {
  const int ds = g.dim(site);
  if (factor.rows() != ds || factor.cols() != ds) {
    throw InvalidDimension("factor of size " + std::to_string(factor.rows()) + " does not fit site " +
                           to_string(site) + " of dimension " + std::to_string(ds));
  }
  std::array<Matrix, 3> parts;
  for (int k = 0; k < 3; ++k) parts[k] = Matrix::Identity(g.dims()[k], g.dims()[k]);
  parts[static_cast<int>(site)] = factor;
  Matrix right = Eigen::kroneckerProduct(parts[1], parts[2]).eval();
  return {g, Eigen::kroneckerProduct(parts[0], right).eval()};
}

QOperator ancilla_lower(const HilbertGeometry& g) {
  switch (g.ancilla_kind()) {
  case AncillaKind::TLS:
    return embed(tls_operators().lower, Site::Ancilla, g);
  case AncillaKind::Oscillator:
    return embed(fock_destroy(g.ancilla_dim()), Site::Ancilla, g);
  case AncillaKind::None:
    break;
  }
  throw InvalidDimension("geometry " + g.describe() + " has no ancilla");
}

QOperator ancilla_number(const HilbertGeometry& g) {
  const QOperator a = ancilla_lower(g);
  return a.adjoint() * a;
}

QOperator mode_lower(const HilbertGeometry& g, int mode) {
  if (mode != 0 && mode != 1) throw InvalidArgument("mode index must be 0 or 1");
  const Site s = mode == 0 ? Site::R1 : Site::R2;
  return embed(fock_destroy(g.dim(s)), s, g);
}

Matrix matrix_exponential(const Matrix& m) {
  if (m.rows() != m.cols()) throw InvalidDimension("matrix exponential needs a square matrix");
  if (m.size() == 0) return m;
  Matrix e = m.exp();
  if (!e.allFinite()) throw NumericalFailure("matrix exponential did not converge");
  return e;
}

QOperator matrix_exponential(const QOperator& op) { return {op.geometry(), matrix_exponential(op.matrix())}; }

DensityState partial_trace(const DensityState& state, const SiteSet& keep) {
  if (keep.empty()) throw InvalidArgument("partial trace needs at least one kept site");
  const HilbertGeometry& g = state.geometry();
  const auto& d = g.dims();
  const HilbertGeometry out_geom = g.reduced(keep);
  const auto& od = out_geom.dims();
  const Matrix& rho = state.matrix();
  Matrix out = Matrix::Zero(out_geom.total_dim(), out_geom.total_dim());

  auto flat = [&](int a, int i, int j) { return (a * d[1] + i) * d[2] + j; };
  auto oflat = [&](int a, int i, int j) { return (a * od[1] + i) * od[2] + j; };
  const bool ka = keep.contains(Site::Ancilla);
  const bool k1 = keep.contains(Site::R1);
  const bool k2 = keep.contains(Site::R2);

  for (int a = 0; a < d[0]; ++a)
    for (int i = 0; i < d[1]; ++i)
      for (int j = 0; j < d[2]; ++j) {
        const int row = flat(a, i, j);
        const int orow = oflat(ka ? a : 0, k1 ? i : 0, k2 ? j : 0);
        for (int b = 0; b < d[0]; ++b) {
          if (!ka && b != a) continue;
          for (int k = 0; k < d[1]; ++k) {
            if (!k1 && k != i) continue;
            for (int l = 0; l < d[2]; ++l) {
              if (!k2 && l != j) continue;
              out(orow, oflat(ka ? b : 0, k1 ? k : 0, k2 ? l : 0)) += rho(row, flat(b, k, l));
            }
          }
        }
      }
  return DensityState::trusted(QOperator(out_geom, 0.5 * (out + out.adjoint())));
}

Matrix partial_transpose(const Matrix& rho, int n1, int n2, Site site) {
  if (rho.rows() != n1 * n2 || rho.cols() != n1 * n2) throw InvalidDimension("partial transpose size mismatch");
  if (site != Site::R1 && site != Site::R2) throw InvalidArgument("partial transpose site must be R1 or R2");
  Matrix out(rho.rows(), rho.cols());
  for (int i1 = 0; i1 < n1; ++i1)
    for (int i2 = 0; i2 < n2; ++i2)
      for (int j1 = 0; j1 < n1; ++j1)
        for (int j2 = 0; j2 < n2; ++j2) {
          const complex v = rho(i1 * n2 + i2, j1 * n2 + j2);
          if (site == Site::R2)
            out(i1 * n2 + j2, j1 * n2 + i2) = v;
          else
            out(j1 * n2 + i2, i1 * n2 + j2) = v;
        }
  return out;
}

Matrix partial_transpose(const DensityState& state, Site site) {
  const HilbertGeometry& g = state.geometry();
  if (!g.is_two_mode()) throw InvalidDimension("partial transpose needs a two-mode state, got " + g.describe());
  return partial_transpose(state.matrix(), g.fock_dim(0), g.fock_dim(1), site);
}

} // namespace hotent
