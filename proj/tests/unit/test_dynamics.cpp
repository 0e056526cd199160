#include "hotent/dynamics.hpp"
#include "hotent/errors.hpp"

#include "generator.hpp"
#include "generators.hpp"

#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdint>
#include <sstream>

using namespace hotent;
using testgen::max_abs;

namespace {

Liouvillian thermal_mode(const HilbertGeometry& g, double gamma, double nbar) {
  const QOperator b = mode_lower(g, 0);
  return Liouvillian(g, {{gamma * (1 + nbar), b, {}}, {gamma * nbar, b.adjoint(), {}}});
}

Liouvillian thermal_pair(const HilbertGeometry& g, double gamma, double nbar) {
  std::vector<LindbladTerm> terms;
  for (int i = 0; i < 2; ++i) {
    const QOperator b = mode_lower(g, i);
    terms.push_back({gamma * (1 + nbar), b, {}});
    terms.push_back({gamma * nbar, b.adjoint(), {}});
  }
  return Liouvillian(g, terms);
}

Matrix thermal_diag(int n, double nbar) {
  Matrix m = Matrix::Zero(n, n);
  double z = 0.0;
  for (int k = 0; k < n; ++k) z += std::pow(nbar / (1 + nbar), k);
  for (int k = 0; k < n; ++k) m(k, k) = std::pow(nbar / (1 + nbar), k) / z;
  return m;
}

EvolveOptions opts(double t_final, double stride) {
  EvolveOptions o;
  o.t_final = t_final;
  o.stride = stride;
  return o;
}

} // namespace

TEST_CASE("rhs basics") {
  const auto g = HilbertGeometry::two_mode(3, 3);
  testgen::Gen gen(1);
  const DensityState rho(QOperator(g, gen.density(9)));
  CHECK(max_abs(rhs(Liouvillian(g, {}), rho)) == 0.0);
  const LindbladTerm t{0.4, QOperator(g, gen.complex_matrix(9, 9)), {}};
  CHECK(max_abs(rhs(Liouvillian(g, {t}), rho) - dissipator_apply(t, rho)) < 1e-15);
  CHECK_THROWS_AS(rhs(Liouvillian(HilbertGeometry::two_mode(3, 4), {}), rho), InvalidDimension);
}

TEST_CASE("rhs on a random three-level problem matches the vectorized oracle") {
  const auto g = HilbertGeometry::single_mode(3);
  testgen::Gen gen(2);
  std::vector<LindbladTerm> terms;
  Matrix sup = Matrix::Zero(9, 9);
  for (int k = 0; k < 3; ++k) {
    const Matrix o = gen.complex_matrix(3, 3);
    const double r = gen.uniform(0.1, 1.0);
    terms.push_back({r, QOperator(g, o), {}});
    sup += testgen::row_major_lindblad(o, r);
  }
  const Liouvillian l(g, terms);
  const DensityState rho(QOperator(g, gen.density(3)));
  CHECK(max_abs(rhs(l, rho) - testgen::unvec_rows(sup * testgen::vec_rows(rho.matrix()), 3)) < 1e-12);
}

TEST_CASE("zero generator keeps the state") {
  const auto g = HilbertGeometry::two_mode(3, 3);
  testgen::Gen gen(3);
  const DensityState rho(QOperator(g, gen.density(9)));
  const Trajectory t = evolve(Liouvillian(g, {}), rho, opts(5.0, 1.0), Observer(g));
  REQUIRE(t.records.size() == 6);
  for (const auto& r : t.records) {
    CHECK(r.EN == doctest::Approx(t.records[0].EN).epsilon(1e-14));
    CHECK(r.n1 == doctest::Approx(t.records[0].n1).epsilon(1e-14));
  }
  REQUIRE(t.final_state);
  CHECK(max_abs(t.final_state->matrix() - rho.matrix()) < 1e-15);
}

TEST_CASE("single photon decay") {
  const auto g = HilbertGeometry::single_mode(4);
  const double gamma = 0.3;
  const Liouvillian l(g, {{gamma, mode_lower(g, 0), {}}});
  const Trajectory t = evolve(l, DensityState::basis(g, 0, 1, 0), opts(10.0, 0.5), Observer(g));
  for (const auto& r : t.records) CHECK(std::abs(r.n1 - std::exp(-gamma * r.t)) < 1e-7);
  CHECK(t.times().back() == doctest::Approx(10.0));
}

TEST_CASE("record grid includes t_final off the stride grid") {
  const auto g = HilbertGeometry::single_mode(3);
  const Trajectory t = evolve(thermal_mode(g, 0.1, 0.2), DensityState::basis(g, 0, 0, 0), opts(1.05, 0.5), Observer(g));
  const auto ts = t.times();
  REQUIRE(ts.size() == 4);
  CHECK(ts[3] == doctest::Approx(1.05));
  for (std::size_t k = 1; k < ts.size(); ++k) CHECK(ts[k] > ts[k - 1]);
}

TEST_CASE("trace and Hermiticity stay within budget") {
  const auto g = HilbertGeometry::two_mode(5, 5);
  const auto l = build_dent_only(g, 0.2, 0.1).with_hamiltonian(free_resonator_hamiltonian(g, {1.0, 1.0}));
  EvolveOptions o = opts(10.0, 0.25);
  o.snapshot_every = 4;
  const Trajectory t = evolve(l, DensityState::basis(g, 0, 0, 0), o, Observer(g));
  for (const auto& r : t.records) {
    CHECK(r.trace_err <= 1e-8);
    CHECK(r.min_eig >= -1e-7);
  }
  CHECK_FALSE(t.snapshots.empty());
  for (const auto& [time, s] : t.snapshots) CHECK(max_abs(s.matrix() - s.matrix().adjoint()) <= 1e-9);
}

TEST_CASE("tighter tolerance moves E_N by little") {
  const auto g = HilbertGeometry::two_mode(5, 5);
  const auto l = build_dent_only(g, 0.2, 0.1).with_hamiltonian(free_resonator_hamiltonian(g, {1.0, 1.0}));
  EvolveOptions a = opts(6.0, 0.5);
  EvolveOptions b = a;
  b.rtol *= 0.5;
  b.atol *= 0.5;
  const auto ta = evolve(l, DensityState::basis(g, 0, 0, 0), a, Observer(g));
  const auto tb = evolve(l, DensityState::basis(g, 0, 0, 0), b, Observer(g));
  for (std::size_t k = 0; k < ta.records.size(); ++k) CHECK(std::abs(ta.records[k].EN - tb.records[k].EN) < 10 * a.rtol);
}

TEST_CASE("unreachable tolerance at the step floor is a stiffness error") {
  const auto g = HilbertGeometry::single_mode(4);
  const Liouvillian l(g, {{1e4, mode_lower(g, 0), {}}});
  EvolveOptions o = opts(1.0, 0.5);
  o.h_min = 0.1;
  try {
    evolve(l, DensityState::basis(g, 0, 3, 0), o, Observer(g));
    FAIL("expected a stiffness error");
  } catch (const StiffnessError& e) {
    CHECK(e.time_reached() >= 0.0);
    CHECK(e.time_reached() < 1.0);
  }
}

TEST_CASE("invalid evolve options") {
  const auto g = HilbertGeometry::single_mode(3);
  CHECK_THROWS_AS(evolve(Liouvillian(g, {}), DensityState::basis(g, 0, 0, 0), opts(-1.0, 0.1), Observer(g)),
                  InvalidArgument);
  CHECK_THROWS_AS(evolve(Liouvillian(g, {}), DensityState::basis(g, 0, 0, 0), opts(1.0, 0.0), Observer(g)),
                  InvalidArgument);
}

TEST_CASE("steady states") {
  const auto g = HilbertGeometry::single_mode(8);
  const DensityState th = steady_state(thermal_mode(g, 0.1, 0.5));
  CHECK(max_abs(th.matrix() - thermal_diag(8, 0.5)) < 1e-10);

  const DensityState vac = steady_state(Liouvillian(g, {{0.2, mode_lower(g, 0), {}}}));
  CHECK(std::abs(vac.matrix()(0, 0) - 1.0) < 1e-10);

  CHECK_THROWS_AS(steady_state(Liouvillian(HilbertGeometry::two_mode(3, 3), {})), NonUniqueSteadyState);

  // Large enough for the iterative path.
  const auto big = HilbertGeometry::two_mode(6, 6);
  const DensityState pair = steady_state(thermal_pair(big, 0.1, 0.3));
  const Matrix expect = testgen::kron(thermal_diag(6, 0.3), thermal_diag(6, 0.3));
  CHECK(max_abs(pair.matrix() - expect) < 1e-8);
}

TEST_CASE("steady state equals the long-time limit") {
  const auto g = HilbertGeometry::two_mode(4, 4);
  const Liouvillian pair = thermal_pair(g, 0.5, 0.2);
  std::vector<LindbladTerm> terms = pair.terms();
  const Liouvillian dent = build_dent_only(g, 0.2, 0.3);
  for (const auto& t : dent.terms()) terms.push_back(t);
  const Liouvillian l(g, terms);
  const DensityState ss = steady_state(l);
  const Trajectory t = evolve(l, DensityState::basis(g, 0, 0, 0), opts(200.0, 50.0), Observer(g));
  REQUIRE(t.final_state);
  CHECK(max_abs(t.final_state->matrix() - ss.matrix()) < 1e-6);
}

TEST_CASE("convergence reports") {
  auto run = [](int n) {
    const auto g = HilbertGeometry::two_mode(n, n);
    return evolve(thermal_pair(g, 0.5, 2.0), DensityState::basis(g, 0, 0, 0), opts(4.0, 0.5), Observer(g));
  };
  const auto low = run(3);
  const auto same = compare_trajectories(low, low);
  CHECK(same.dev_EN == 0.0);
  CHECK(same.dev_n1 == 0.0);
  CHECK(same.converged);

  const auto rep = convergence_check(run, 3);
  CHECK(rep.n_low == 3);
  CHECK(rep.n_high == 5);
  CHECK(rep.dev_n1 > 0.02);
  CHECK_FALSE(rep.converged);

  // Early stop in one run: only the shared prefix is compared.
  Trajectory cut = low;
  cut.records.resize(3);
  CHECK(compare_trajectories(cut, low).converged);
}

TEST_CASE("csv export is deterministic") {
  const auto g = HilbertGeometry::two_mode(4, 4);
  const auto l = build_dent_only(g, 0.2, 0.1);
  auto once = [&] {
    std::ostringstream os;
    write_csv(os, evolve(l, DensityState::basis(g, 0, 0, 0), opts(2.0, 0.5), Observer(g)), 2.0);
    return os.str();
  };
  const std::string a = once();
  CHECK(a == once());
  CHECK(a.substr(0, a.find('\n')) == "t,EN,n1,n2,na,trace_err,min_eig");
  std::istringstream in(a);
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  std::getline(in, line);
  CHECK(std::stod(line.substr(0, line.find(','))) == doctest::Approx(1.0));
}

TEST_CASE("closed-form carrier follows the two-state solution") {
  const auto g = HilbertGeometry::with_tls(3, 3);
  const std::array<double, 2> alpha{0.2, 0.2};
  const auto ops = TransformedOperators::make(g, alpha);
  const double down = 0.7, up = 0.2, s = down + up;
  const Liouvillian l(g, {{down, ops.a, {}}, {up, ops.a.adjoint(), {}}}, std::nullopt, PolaronMap(g, alpha).u());
  REQUIRE(l.carrier_split() != nullptr);
  const Observer obs(g, PolaronMap(g, alpha));
  for (bool exact : {true, false}) {
    EvolveOptions o = opts(3.0, 0.5);
    o.exact_carrier = exact;
    const Trajectory t = evolve(l, DensityState::basis(g, 0, 0, 0), o, obs);
    for (const auto& r : t.records) CHECK(r.na == doctest::Approx(up / s + down / s * std::exp(-s * r.t)).epsilon(1e-8));
  }
}

TEST_CASE("exact carrier and plain integration agree on random generators") {
  // Random carrier plus random jumps, Hamiltonian and block-diagonal local
  // frame; the initial state has ancilla coherences.
  const auto g = HilbertGeometry::with_tls(3, 3);
  const int b = 9, d = 18;
  for (std::uint64_t seed = 11; seed < 15; ++seed) {
    testgen::Gen gen(seed);
    const Matrix x = gen.unitary(b);
    Matrix u = Matrix::Zero(d, d);
    u.topLeftCorner(b, b) = gen.unitary(b);
    u.bottomRightCorner(b, b) = gen.unitary(b);
    Matrix lo = Matrix::Zero(d, d);
    lo.bottomLeftCorner(b, b) = x;
    // The carrier is given in the state frame: u (carrier in local frame) u^dag.
    const Matrix carrier = u * lo * u.adjoint();
    std::vector<LindbladTerm> terms{{gen.uniform(0.5, 2.0), QOperator(g, carrier), {}},
                                    {gen.uniform(0.1, 0.5), QOperator(g, carrier.adjoint()), {}}};
    for (int k = 0; k < 3; ++k) terms.push_back({gen.uniform(0.05, 0.3), QOperator(g, gen.complex_matrix(d, d)), {}});
    const QOperator h(g, gen.hermitian(d));
    const Liouvillian l(g, terms, h, QOperator(g, u));
    REQUIRE(l.carrier_split() != nullptr);
    const DensityState rho0(QOperator(g, gen.density(d)));
    EvolveOptions a = opts(2.0, 0.25);
    a.rtol = 1e-10;
    a.atol = 1e-12;
    EvolveOptions p = a;
    p.exact_carrier = false;
    const Trajectory ta = evolve(l, rho0, a, Observer(g));
    const Trajectory tp = evolve(l, rho0, p, Observer(g));
    REQUIRE(ta.records.size() == tp.records.size());
    CHECK(max_abs(ta.final_state->matrix() - tp.final_state->matrix()) < 1e-8);
    for (std::size_t k = 0; k < ta.records.size(); ++k) CHECK(std::abs(ta.records[k].n1 - tp.records[k].n1) < 1e-8);
  }
}

TEST_CASE("exact carrier agrees with plain integration on a filtered polaron generator") {
  const auto g = HilbertGeometry::with_tls(4, 4);
  const auto p = SystemParams::from_alpha(1.0, {0.05, 0.03}, {0.2, 0.2});
  BathSet baths;
  baths.hot = {BathLabel::Hot, 5.0, 0.01, BathFilter{1.0 - 0.08, 0.01}};
  baths.cold = {BathLabel::Cold, 0.1, 0.01, BathFilter{1.0, 0.01}};
  baths.local[0] = {BathLabel::Local1, 0.2, 1e-3, {}};
  baths.local[1] = {BathLabel::Local2, 0.2, 1e-3, {}};
  const Liouvillian l = build_filtered_nondegenerate(g, p, baths);
  REQUIRE(l.carrier_split() != nullptr);
  const Observer obs(g, PolaronMap(g, p.alpha));
  EvolveOptions a = opts(2000.0, 250.0);
  a.rtol = 1e-10;
  a.atol = 1e-12;
  EvolveOptions plain = a;
  plain.exact_carrier = false;
  const auto rho0 = DensityState::basis(g, 0, 1, 0);
  const Trajectory ta = evolve(l, rho0, a, obs);
  const Trajectory tp = evolve(l, rho0, plain, obs);
  REQUIRE(ta.records.size() == tp.records.size());
  for (std::size_t k = 0; k < ta.records.size(); ++k) {
    CHECK(std::abs(ta.records[k].n1 - tp.records[k].n1) < 1e-7);
    CHECK(std::abs(ta.records[k].na - tp.records[k].na) < 1e-7);
    CHECK(std::abs(ta.records[k].EN - tp.records[k].EN) < 1e-7);
  }
}

TEST_CASE("mode products match dense multiplication") {
  using detail::ModeProduct;
  using detail::RowMatrix;
  testgen::Gen gen(21);
  const int n1 = 3, n2 = 4;
  const Matrix kr = testgen::kron(gen.complex_matrix(n1, n1), gen.complex_matrix(n2, n2));
  const Matrix dense = gen.complex_matrix(n1 * n2, n1 * n2);
  const RowMatrix m = gen.complex_matrix(n1 * n2, n1 * n2);
  for (int k = 0; k < 2; ++k) {
    const Matrix& op = k == 0 ? kr : dense;
    const ModeProduct p(op, n1, n2);
    CHECK(p.factorized() == (k == 0));
    RowMatrix out;
    p.left(m, out);
    CHECK(max_abs(Matrix(out) - op * Matrix(m)) < 1e-12);
    p.left(m, out, true);
    CHECK(max_abs(Matrix(out) - op.adjoint() * Matrix(m)) < 1e-12);
    p.right(m, out);
    CHECK(max_abs(Matrix(out) - Matrix(m) * op) < 1e-12);
    p.right(m, out, true);
    CHECK(max_abs(Matrix(out) - Matrix(m) * op.adjoint()) < 1e-12);
  }
}
