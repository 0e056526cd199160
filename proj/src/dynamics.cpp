#include "hotent/dynamics.hpp"

#include "generator.hpp"
#include "hotent/entanglement.hpp"
#include "hotent/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace hotent {

std::vector<double> Trajectory::times() const { return column(&Record::t); }

std::vector<double> Trajectory::column(double Record::*field) const {
  std::vector<double> out;
  out.reserve(records.size());
  for (const Record& r : records) out.push_back(r.*field);
  return out;
}

// ---------------------------------------------------------------------------

Observer::Observer(HilbertGeometry g, std::optional<PolaronMap> map) : geometry_(g), map_(std::move(map)) {
  if (map_ && !(map_->geometry() == geometry_)) throw InvalidDimension("observer: polaron map geometry mismatch");
  const auto& d = geometry_.dims();
  for (auto& n : number_) n = Matrix::Zero(geometry_.total_dim(), 1);
  for (int a = 0; a < d[0]; ++a)
    for (int i = 0; i < d[1]; ++i)
      for (int j = 0; j < d[2]; ++j) {
        const int k = (a * d[1] + i) * d[2] + j;
        double na = 0.0;
        if (geometry_.ancilla_kind() == AncillaKind::TLS)
          na = a == 0 ? 1.0 : 0.0;
        else if (geometry_.ancilla_kind() == AncillaKind::Oscillator)
          na = a;
        number_[0](k) = na;
        number_[1](k) = i;
        number_[2](k) = j;
      }
}

namespace {

double hermitian_min_eigenvalue(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalFailure("eigenvalue solver failed");
  return es.eigenvalues().minCoeff();
}

/// Minimum eigenvalue, block by block when the ancilla coherences vanish.
double min_eigenvalue_blocked(const Matrix& rho, int nb, int bs) {
  bool diagonal = true;
  for (int r = 0; r < nb && diagonal; ++r)
    for (int c = 0; c < nb; ++c)
      if (r != c && rho.block(r * bs, c * bs, bs, bs).cwiseAbs().maxCoeff() != 0.0) {
        diagonal = false;
        break;
      }
  if (!diagonal || nb == 1) return hermitian_min_eigenvalue(rho);
  double lmin = std::numeric_limits<double>::infinity();
  for (int r = 0; r < nb; ++r) lmin = std::min(lmin, hermitian_min_eigenvalue(rho.block(r * bs, r * bs, bs, bs)));
  return lmin;
}

double expectation_diag(const Matrix& rho, const Matrix& diag) {
  double s = 0.0;
  for (int k = 0; k < rho.rows(); ++k) s += rho(k, k).real() * diag(k).real();
  return s;
}

} // namespace

Record Observer::observe(double t, const Matrix& rho) const {
  Record r;
  r.t = t;
  const complex tr = rho.trace();
  r.trace_err = std::abs(tr - complex(1.0, 0.0));
  const int nb = geometry_.ancilla_dim();
  const int bs = geometry_.resonator_dim();
  r.min_eig = min_eigenvalue_blocked(rho, nb, bs);

  Matrix local = map_ ? map_->to_local(rho) : rho;
  r.na = expectation_diag(local, number_[0]);
  r.n1 = expectation_diag(local, number_[1]);
  r.n2 = expectation_diag(local, number_[2]);

  if (geometry_.fock_dim(0) > 1 && geometry_.fock_dim(1) > 1) {
    Matrix reduced = Matrix::Zero(bs, bs);
    for (int a = 0; a < nb; ++a) reduced += local.block(a * bs, a * bs, bs, bs);
    r.EN = log_negativity(reduced, geometry_.fock_dim(0), geometry_.fock_dim(1));
  }
  return r;
}

// ---------------------------------------------------------------------------

Matrix rhs(const Liouvillian& l, const DensityState& state) {
  if (!(l.geometry() == state.geometry()))
    throw InvalidDimension("rhs: state geometry " + state.geometry().describe() + " does not match " +
                           l.geometry().describe());
  return l.apply(state.matrix());
}

namespace {

// Dormand-Prince 5(4) tableau with Hairer's dense output coefficients.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                 e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

double scaled_norm(const Matrix& e, const Matrix& y0, const Matrix& y1, double rtol, double atol) {
  double s = 0.0;
  const Eigen::Index n = e.size();
  for (Eigen::Index k = 0; k < n; ++k) {
    const double sk = atol + rtol * std::max(std::abs(y0(k)), std::abs(y1(k)));
    s += std::norm(e(k)) / (sk * sk);
  }
  return std::sqrt(s / static_cast<double>(n));
}

void check_trace(Matrix& y, double t) {
  const complex tr = y.trace();
  const double drift = std::abs(tr - complex(1.0, 0.0));
  if (drift > DensityState::kTraceTolerance)
    throw IntegrationQualityError("trace drifted by " + std::to_string(drift) + " at t = " + std::to_string(t), t);
  if (drift > 0.0) y /= tr.real();
}

// Initial step following Hairer and Wanner; f0 = f(y) on entry.
template <class F>
double initial_step(const Matrix& y, const Matrix& f0, double tf, const EvolveOptions& opts, F&& f) {
  const int d = static_cast<int>(y.rows());
  const Matrix zero = Matrix::Zero(d, d);
  const double dn0 = scaled_norm(y, y, zero, opts.rtol, opts.atol);
  const double dn1 = scaled_norm(f0, y, zero, opts.rtol, opts.atol);
  double h0 = (dn0 < 1e-5 || dn1 < 1e-5) ? 1e-6 : 0.01 * dn0 / dn1;
  h0 = std::min(h0, tf);
  const Matrix ys = y + h0 * f0;
  Matrix f1;
  f(ys, f1);
  const double dn2 = scaled_norm(f1 - f0, y, zero, opts.rtol, opts.atol) / h0;
  const double dmax = std::max(dn1, dn2);
  const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 0.2);
  return std::min({100.0 * h0, h1, tf});
}

constexpr double kSafe = 0.9, kBeta = 0.04, kExpo1 = 0.2 - kBeta * 0.75, kFacc1 = 1.0 / 0.2, kFacc2 = 1.0 / 10.0;

// Lawson form of the same pair: the carrier flow phi is applied exactly and
// only the remainder R goes through the stages,
//   Z_i = phi(c_i h) y + h sum_j a_ij phi((c_i - c_j) h) R(Z_j).
// The nodes c_i never decrease, so every flow runs forward in time. Steps
// land on the record grid instead of using dense output. y is the initial
// state on entry and the final state on exit, both in the caller's frame.
template <class Grid, class Emit>
void integrate_split(const detail::CarrierSplit& split, Matrix& y, const EvolveOptions& opts, double h_min,
                     int n_records, Grid&& grid, Emit&& emit, Trajectory& traj) {
  static constexpr double c[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
  static constexpr double a[7][6] = {{},
                                     {a21},
                                     {a31, a32},
                                     {a41, a42, a43},
                                     {a51, a52, a53, a54},
                                     {a61, a62, a63, a64, a65},
                                     {a71, 0.0, a73, a74, a75, a76}};
  static constexpr double e[7] = {e1, 0.0, e3, e4, e5, e6, e7};

  const double tf = opts.t_final;
  const int d = static_cast<int>(y.rows());
  Matrix yh, y1(d, d), err(d, d), z(d, d), tmp(d, d), out(d, d);
  std::array<Matrix, 7> k;
  split.to_frame(y, yh);
  split.apply_rest(yh, k[0]);

  // out = [phi(c_i h) y] + h sum_j coef_j phi((c_i - c_j) h) k_j
  auto combine = [&](int i, double h, const double* coef, int n, bool with_y, Matrix& dst) {
    if (with_y) {
      z = yh + (h * coef[0]) * k[0];
      split.flow(c[i] * h, z, dst);
    } else {
      split.flow(c[i] * h, k[0], dst);
      dst *= h * coef[0];
    }
    for (int j = 1; j < n; ++j) {
      if (coef[j] == 0.0) continue;
      if (c[i] == c[j]) {
        dst += (h * coef[j]) * k[j];
      } else {
        split.flow((c[i] - c[j]) * h, k[j], tmp);
        dst += (h * coef[j]) * tmp;
      }
    }
  };

  double h = initial_step(yh, k[0], tf, opts, [&](const Matrix& x, Matrix& f) { split.apply_rest(x, f); });
  double facold = 1e-4;
  double t = 0.0;
  long steps = 0;
  bool last_rejected = false;
  int next = 1;

  while (t < tf) {
    if (++steps > opts.max_steps) throw StiffnessError("step budget exhausted at t = " + std::to_string(t), t);
    if (h < h_min) throw StiffnessError("step size fell below " + std::to_string(h_min) + " at t = " + std::to_string(t), t);
    const double target = grid(next);
    const bool lands = t + 1.01 * h >= target;
    const double hs = lands ? target - t : h;

    for (int i = 1; i < 6; ++i) {
      combine(i, hs, a[i], i, true, out);
      split.apply_rest(out, k[i]);
    }
    combine(6, hs, a[6], 6, true, y1);
    split.apply_rest(y1, k[6]);
    combine(6, hs, e, 7, false, err);

    const double en = scaled_norm(err, yh, y1, opts.rtol, opts.atol);
    if (!std::isfinite(en)) {
      h = 0.1 * hs;
      last_rejected = true;
      ++traj.rejected_steps;
      continue;
    }
    const double fac11 = std::pow(en, kExpo1);
    if (en <= 1.0) {
      double fac = fac11 / std::pow(facold, kBeta);
      fac = std::clamp(fac / kSafe, kFacc2, kFacc1);
      double hnew = hs / fac;
      facold = std::max(en, 1e-4);
      if (last_rejected) hnew = std::min(hnew, hs);
      // A step shortened to hit a record says nothing against the old size.
      if (lands && hs < h) hnew = std::max(hnew, h);
      last_rejected = false;
      ++traj.accepted_steps;

      yh.swap(y1);
      k[0].swap(k[6]);
      t = lands ? target : t + hs;
      check_trace(yh, t);
      h = hnew;
      if (lands) {
        split.from_frame(yh, out);
        if (emit(next++, out) || next >= n_records) {
          y = out;
          return;
        }
      }
    } else {
      h = hs / std::min(kFacc1, fac11 / kSafe);
      last_rejected = true;
      ++traj.rejected_steps;
    }
  }
  split.from_frame(yh, y);
}

} // namespace

Trajectory evolve(const Liouvillian& l, const DensityState& initial, const EvolveOptions& opts,
                  const Observer& observer) {
  if (!(l.geometry() == initial.geometry()) || !(observer.geometry() == initial.geometry()))
    throw InvalidDimension("evolve: geometry mismatch");
  if (!(opts.t_final >= 0.0) || !std::isfinite(opts.t_final)) throw InvalidArgument("t_final must be >= 0");
  if (!(opts.stride > 0.0)) throw InvalidArgument("output stride must be > 0");
  if (!(opts.rtol > 0.0) || !(opts.atol > 0.0)) throw InvalidArgument("tolerances must be > 0");

  Trajectory traj;
  const double tf = opts.t_final;
  const double h_min = opts.h_min > 0.0 ? opts.h_min : 1e-13 * std::max(1.0, tf);
  int n_records = static_cast<int>(std::floor(tf / opts.stride + 1e-9)) + 1;
  auto record_time = [&](int k) { return std::min(tf, k * opts.stride); };
  const bool extra_final = record_time(n_records - 1) < tf * (1.0 - 1e-12);
  if (extra_final) ++n_records;
  auto grid = [&](int k) { return (extra_final && k == n_records - 1) ? tf : record_time(k); };

  auto emit = [&](int k, const Matrix& y) {
    const Record rec = observer.observe(grid(k), y);
    if (rec.min_eig < -1e-6)
      throw IntegrationQualityError("negative eigenvalue " + std::to_string(rec.min_eig) + " at t = " +
                                        std::to_string(rec.t),
                                    rec.t);
    traj.records.push_back(rec);
    if (opts.snapshot_every > 0 && k % opts.snapshot_every == 0) {
      traj.snapshots.emplace_back(rec.t, DensityState::trusted(QOperator(initial.geometry(), y)));
    }
    return opts.stop && opts.stop(traj.records);
  };

  Matrix y = initial.matrix();
  int next = 0;
  if (emit(next++, y) || tf == 0.0) {
    traj.final_state = DensityState::trusted(QOperator(initial.geometry(), y));
    return traj;
  }

  if (opts.exact_carrier && l.carrier_split()) {
    integrate_split(*l.carrier_split(), y, opts, h_min, n_records, grid, emit, traj);
    traj.final_state = DensityState::trusted(QOperator(initial.geometry(), std::move(y)));
    return traj;
  }

  const int d = static_cast<int>(y.rows());
  Matrix k1(d, d), k2(d, d), k3(d, d), k4(d, d), k5(d, d), k6(d, d), k7(d, d), ys(d, d), y1(d, d), err(d, d);
  Matrix r2, r3, r4, r5;
  l.apply(y, k1);

  double h = initial_step(y, k1, tf, opts, [&](const Matrix& x, Matrix& out) { l.apply(x, out); });

  constexpr double safe = 0.9, beta = 0.04, expo1 = 0.2 - beta * 0.75, facc1 = 1.0 / 0.2, facc2 = 1.0 / 10.0;
  double facold = 1e-4;
  double t = 0.0;
  long steps = 0;
  bool last_rejected = false;

  while (t < tf) {
    if (++steps > opts.max_steps) throw StiffnessError("step budget exhausted at t = " + std::to_string(t), t);
    if (h < h_min) throw StiffnessError("step size fell below " + std::to_string(h_min) + " at t = " + std::to_string(t), t);
    if (t + 1.01 * h >= tf) h = tf - t;

    ys = y + (h * a21) * k1;
    l.apply(ys, k2);
    ys = y + h * (a31 * k1 + a32 * k2);
    l.apply(ys, k3);
    ys = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    l.apply(ys, k4);
    ys = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    l.apply(ys, k5);
    ys = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    l.apply(ys, k6);
    y1 = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    l.apply(y1, k7);
    err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    const double en = scaled_norm(err, y, y1, opts.rtol, opts.atol);
    if (!std::isfinite(en)) {
      h *= 0.1;
      last_rejected = true;
      ++traj.rejected_steps;
      continue;
    }
    const double fac11 = std::pow(en, expo1);
    if (en <= 1.0) {
      double fac = fac11 / std::pow(facold, beta);
      fac = std::clamp(fac / safe, facc2, facc1);
      double hnew = h / fac;
      facold = std::max(en, 1e-4);
      if (last_rejected) hnew = std::min(hnew, h);
      last_rejected = false;
      ++traj.accepted_steps;

      const double t1 = t + h;
      const bool emits = next < n_records && grid(next) <= t1 * (1.0 + 1e-14);
      if (emits) {
        const Matrix ydiff = y1 - y;
        const Matrix bspl = h * k1 - ydiff;
        r2 = ydiff;
        r3 = bspl;
        r4 = ydiff - h * k7 - bspl;
        r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
      }
      while (next < n_records && grid(next) <= t1 * (1.0 + 1e-14)) {
        const double th = std::clamp((grid(next) - t) / h, 0.0, 1.0);
        const double th1 = 1.0 - th;
        Matrix yi = y + th * (r2 + th1 * (r3 + th * (r4 + th1 * r5)));
        if (emit(next++, yi)) {
          traj.final_state = DensityState::trusted(QOperator(initial.geometry(), yi));
          return traj;
        }
      }
      y.swap(y1);
      k1.swap(k7);
      t = t1;
      check_trace(y, t);
      h = hnew;
    } else {
      h /= std::min(facc1, fac11 / safe);
      last_rejected = true;
      ++traj.rejected_steps;
    }
  }
  while (next < n_records) emit(next++, y);
  traj.final_state = DensityState::trusted(QOperator(initial.geometry(), y));
  return traj;
}

// ---------------------------------------------------------------------------

namespace {

DensityState finish_steady(const Liouvillian& l, Matrix x, const SteadyStateOptions& opts) {
  const complex tr = x.trace();
  if (std::abs(tr) == 0.0) throw NumericalFailure("steady state has zero trace");
  x /= tr;
  x = 0.5 * (x + x.adjoint());
  x /= x.trace().real();
  const double scale = l.norm_estimate();
  const double res = l.apply(x).norm();
  if (scale > 0.0 && res > opts.residual_limit * scale)
    throw NumericalFailure("steady-state residual " + std::to_string(res) + " exceeds " +
                           std::to_string(opts.residual_limit) + " x " + std::to_string(scale));
  return DensityState::trusted(QOperator(l.geometry(), std::move(x)));
}

complex inner(const Matrix& a, const Matrix& b) { return (a.conjugate().cwiseProduct(b)).sum(); }

} // namespace

DensityState steady_state(const Liouvillian& l, const SteadyStateOptions& opts) {
  const int d = l.geometry().total_dim();
  if (d <= opts.dense_limit) {
    const Matrix sup = dense_superoperator(l);
    Eigen::FullPivLU<Matrix> lu(sup);
    lu.setThreshold(opts.null_threshold);
    const int null_dim = static_cast<int>(sup.cols() - lu.rank());
    if (null_dim != 1)
      throw NonUniqueSteadyState("generator null space has dimension " + std::to_string(null_dim), null_dim);
    const Matrix kernel = lu.kernel();
    Matrix x = Eigen::Map<const Matrix>(kernel.data(), d, d);
    return finish_steady(l, std::move(x), opts);
  }

  // Restarted GMRES on X -> L[X]/s + Tr(X) M with M = 1/d, whose solution for
  // the right-hand side M is the unit-trace fixed point.
  const double s = l.norm_estimate();
  if (!(s > 0.0)) throw NonUniqueSteadyState("generator is zero", d * d);
  const Matrix m = Matrix::Identity(d, d) / static_cast<double>(d);
  auto op = [&](const Matrix& x) -> Matrix { return l.apply(x) / s + x.trace() * m; };

  Matrix x = m;
  const double bnorm = m.norm();
  const int kdim = opts.krylov_dim;
  int iterations = 0;
  double rel = 1.0;
  while (iterations < opts.max_iterations) {
    Matrix r = m - op(x);
    const double beta = r.norm();
    rel = beta / bnorm;
    if (rel <= opts.tolerance) break;
    std::vector<Matrix> v;
    v.reserve(kdim + 1);
    v.push_back(r / beta);
    Eigen::MatrixXcd hmat = Eigen::MatrixXcd::Zero(kdim + 1, kdim);
    Eigen::VectorXcd g = Eigen::VectorXcd::Zero(kdim + 1);
    g(0) = beta;
    std::vector<Eigen::JacobiRotation<complex>> rots;
    int j = 0;
    for (; j < kdim && iterations < opts.max_iterations; ++j, ++iterations) {
      Matrix w = op(v[j]);
      for (int i = 0; i <= j; ++i) {
        hmat(i, j) = inner(v[i], w);
        w -= hmat(i, j) * v[i];
      }
      hmat(j + 1, j) = w.norm();
      for (int i = 0; i < j; ++i) {
        Eigen::Matrix<complex, 2, 1> pair(hmat(i, j), hmat(i + 1, j));
        pair.applyOnTheLeft(0, 1, rots[i].adjoint());
        hmat(i, j) = pair(0);
        hmat(i + 1, j) = pair(1);
      }
      Eigen::JacobiRotation<complex> rot;
      rot.makeGivens(hmat(j, j), hmat(j + 1, j));
      rots.push_back(rot);
      {
        Eigen::Matrix<complex, 2, 1> pair(hmat(j, j), hmat(j + 1, j));
        pair.applyOnTheLeft(0, 1, rot.adjoint());
        hmat(j, j) = pair(0);
        hmat(j + 1, j) = 0.0;
        Eigen::Matrix<complex, 2, 1> gp(g(j), g(j + 1));
        gp.applyOnTheLeft(0, 1, rot.adjoint());
        g(j) = gp(0);
        g(j + 1) = gp(1);
      }
      if (std::abs(g(j + 1)) / bnorm <= opts.tolerance) {
        ++j;
        ++iterations;
        break;
      }
      if (w.norm() == 0.0) {
        ++j;
        ++iterations;
        break;
      }
      v.push_back(w / w.norm());
    }
    const Eigen::VectorXcd y =
        hmat.topLeftCorner(j, j).triangularView<Eigen::Upper>().solve(g.head(j));
    for (int i = 0; i < j; ++i) x += y(i) * v[i];
  }
  const double final_rel = (m - op(x)).norm() / bnorm;
  if (final_rel > 1e3 * opts.tolerance)
    throw NumericalFailure("GMRES stalled at relative residual " + std::to_string(final_rel) + " after " +
                           std::to_string(iterations) + " iterations");
  return finish_steady(l, std::move(x), opts);
}

// ---------------------------------------------------------------------------

ConvergenceReport compare_trajectories(const Trajectory& low, const Trajectory& high, double threshold, double floor) {
  // An early stop may cut one run short; compare on the shared prefix.
  const std::size_t n = std::min(low.records.size(), high.records.size());
  if (n == 0) throw InvalidArgument("empty trajectory");
  auto dev = [&](double Record::*f) {
    double peak = 0.0;
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (std::abs(low.records[k].t - high.records[k].t) > 1e-9 * std::max(1.0, std::abs(high.records[k].t)))
        throw InvalidArgument("trajectories have different grids");
      peak = std::max(peak, std::abs(high.records[k].*f));
      worst = std::max(worst, std::abs(low.records[k].*f - high.records[k].*f));
    }
    return worst / std::max(peak, floor);
  };
  ConvergenceReport rep;
  rep.dev_EN = dev(&Record::EN);
  rep.dev_n1 = dev(&Record::n1);
  rep.dev_n2 = dev(&Record::n2);
  rep.threshold = threshold;
  rep.converged = rep.dev_EN < threshold && rep.dev_n1 < threshold && rep.dev_n2 < threshold;
  return rep;
}

ConvergenceReport convergence_check(const std::function<Trajectory(int)>& run, int n, double threshold) {
  const Trajectory low = run(n);
  const Trajectory high = run(n + 2);
  ConvergenceReport rep = compare_trajectories(low, high, threshold);
  rep.n_low = n;
  rep.n_high = n + 2;
  return rep;
}

void write_csv(std::ostream& os, const Trajectory& traj, double time_scale) {
  os << "t,EN,n1,n2,na,trace_err,min_eig\n";
  char buf[256];
  for (const Record& r : traj.records) {
    std::snprintf(buf, sizeof buf, "%.10e,%.10e,%.10e,%.10e,%.10e,%.3e,%.3e\n", r.t * time_scale, r.EN, r.n1, r.n2,
                  r.na, r.trace_err, r.min_eig);
    os << buf;
  }
}

} // namespace hotent
