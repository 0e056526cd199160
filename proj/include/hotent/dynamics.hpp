#pragma once

#include "hotent/master_equation.hpp"
#include "hotent/polaron.hpp"

#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace hotent {

struct Record {
  double t = 0.0;
  double EN = 0.0;
  double n1 = 0.0;
  double n2 = 0.0;
  double na = 0.0;
  double trace_err = 0.0;
  double min_eig = 0.0;
};

struct Trajectory {
  std::vector<Record> records;
  std::vector<std::pair<double, DensityState>> snapshots;
  std::optional<DensityState> final_state; // in the frame that was integrated
  int accepted_steps = 0;
  int rejected_steps = 0;

  std::vector<double> times() const;
  std::vector<double> column(double Record::*field) const;
};

/// Turns a state in the integration frame into a record. For geometries with
/// an ancilla and a polaron map the state is taken to the local basis first.
class Observer {
public:
  explicit Observer(HilbertGeometry g, std::optional<PolaronMap> map = std::nullopt);

  Record observe(double t, const Matrix& rho) const;
  const HilbertGeometry& geometry() const { return geometry_; }

private:
  HilbertGeometry geometry_;
  std::optional<PolaronMap> map_;
  Matrix number_[3];
};

struct EvolveOptions {
  double t_final = 0.0;
  double stride = 0.0;
  double rtol = 1e-8;
  double atol = 1e-10;
  /// Smallest admissible step; 0 picks 1e-13 * max(1, t_final).
  double h_min = 0.0;
  long max_steps = 50'000'000;
  /// Keep a state snapshot every this many records (0 = none).
  int snapshot_every = 0;
  /// Integrate the bare ancilla carrier in closed form when the generator has
  /// one. Steps then land on the record grid.
  bool exact_carrier = true;
  /// Optional early stop, checked after every record.
  std::function<bool(const std::vector<Record>&)> stop;
};

/// L[rho] as a fresh matrix.
Matrix rhs(const Liouvillian& l, const DensityState& state);

/// Adaptive Dormand-Prince 5(4) integration with dense output at the record
/// grid 0, stride, 2 stride, ..., t_final.
Trajectory evolve(const Liouvillian& l, const DensityState& initial, const EvolveOptions& opts,
                  const Observer& observer);

struct SteadyStateOptions {
  int dense_limit = 32;            // use the dense superoperator up to this dimension
  double null_threshold = 1e-12;   // relative pivot threshold for the null space
  int krylov_dim = 80;
  int max_iterations = 20000;
  double tolerance = 1e-12;
  double residual_limit = 1e-10;   // on ||L[rho]|| / ||L||
};

DensityState steady_state(const Liouvillian& l, const SteadyStateOptions& opts = {});

struct ConvergenceReport {
  int n_low = 0;
  int n_high = 0;
  double dev_EN = 0.0;
  double dev_n1 = 0.0;
  double dev_n2 = 0.0;
  double threshold = 0.02;
  bool converged = true;
};

/// Largest deviation on the common grid prefix, scaled by the peak of the finer run.
ConvergenceReport compare_trajectories(const Trajectory& low, const Trajectory& high, double threshold = 0.02,
                                       double floor = 1e-6);

/// Runs the scenario at N and N + 2 and compares.
ConvergenceReport convergence_check(const std::function<Trajectory(int)>& run, int n, double threshold = 0.02);

/// CSV with header t,EN,n1,n2,na,trace_err,min_eig; t is multiplied by time_scale.
void write_csv(std::ostream& os, const Trajectory& traj, double time_scale = 1.0);

} // namespace hotent
