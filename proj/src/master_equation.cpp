#include "hotent/master_equation.hpp"

#include "generator.hpp"
#include "hotent/errors.hpp"
#include "hotent/polaron.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <iomanip>
#include <ostream>

namespace hotent {

namespace {

constexpr double kAlphaConsistency = 1e-12;
constexpr double kAlphaWarn = 0.3;

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)}); }

} // namespace

SystemParams SystemParams::from_alpha(double omega_a, std::array<double, 2> omega, std::array<double, 2> alpha,
                                      AncillaKind kind) {
  SystemParams p;
  p.omega_a = omega_a;
  p.omega = omega;
  p.alpha = alpha;
  p.g = {alpha[0] * omega[0], alpha[1] * omega[1]};
  p.ancilla_kind = kind;
  p.validate();
  return p;
}

void SystemParams::validate() const {
  if (!(omega_a > 0.0) || !std::isfinite(omega_a)) throw InvalidConfiguration("omega_a must be positive");
  for (int i = 0; i < 2; ++i) {
    if (!(omega[i] > 0.0) || !std::isfinite(omega[i]))
      throw InvalidConfiguration("omega_" + std::to_string(i + 1) + " must be positive");
    if (!std::isfinite(alpha[i]) || alpha[i] < 0.0)
      throw InvalidConfiguration("alpha_" + std::to_string(i + 1) + " must be finite and >= 0");
    if (std::abs(alpha[i] - g[i] / omega[i]) > kAlphaConsistency * std::max(1.0, std::abs(alpha[i])))
      throw InvalidConfiguration("alpha_" + std::to_string(i + 1) + " does not equal g/omega");
  }
  if (ancilla_kind == AncillaKind::None) throw InvalidConfiguration("system needs an ancilla kind");
}

double SystemParams::common_alpha() const {
  if (!close(alpha[0], alpha[1], kAlphaConsistency))
    throw InvalidConfiguration("master equation assumes alpha_1 = alpha_2");
  return alpha[0];
}

bool SystemParams::degenerate() const { return close(omega[0], omega[1], 1e-12); }

void BathSet::validate() const {
  hot.validate();
  cold.validate();
  local[0].validate();
  local[1].validate();
}

// ---------------------------------------------------------------------------

std::string JumpSpec::label() const {
  std::string s;
  switch (ancilla) {
  case AncillaFactor::Lower:
    s = "a~";
    break;
  case AncillaFactor::Raise:
    s = "a~^dag";
    break;
  case AncillaFactor::None:
    break;
  }
  for (const ModeFactor& m : modes) {
    if (!s.empty()) s += ' ';
    s += "b" + std::to_string(m.mode + 1) + "~";
    if (m.dagger) s += "^dag";
    if (m.power != 1) s += "^" + std::to_string(m.power);
  }
  return s.empty() ? "1" : s;
}

TransformedOperators TransformedOperators::make(const HilbertGeometry& g, std::array<double, 2> alpha) {
  const PolaronMap map(g, alpha);
  const QOperator s = PolaronMap::displacement_generator(g, alpha);
  const QOperator a_local = ancilla_lower(g) * matrix_exponential(s);
  const QOperator id = QOperator::identity(g);
  const QOperator b1 = mode_lower(g, 0) - complex(alpha[0], 0.0) * id;
  const QOperator b2 = mode_lower(g, 1) - complex(alpha[1], 0.0) * id;
  return {map.to_polaron(a_local), {map.to_polaron(b1), map.to_polaron(b2)}};
}

QOperator TransformedOperators::materialize(const JumpSpec& spec) const {
  QOperator out = QOperator::identity(a.geometry());
  switch (spec.ancilla) {
  case AncillaFactor::Lower:
    out = a;
    break;
  case AncillaFactor::Raise:
    out = a.adjoint();
    break;
  case AncillaFactor::None:
    break;
  }
  for (const ModeFactor& m : spec.modes) {
    if (m.mode != 0 && m.mode != 1) throw InvalidArgument("jump factor mode must be 0 or 1");
    const QOperator f = m.dagger ? b[m.mode].adjoint() : b[m.mode];
    for (int k = 0; k < m.power; ++k) out = out * f;
  }
  return out;
}

// ---------------------------------------------------------------------------

Liouvillian::Liouvillian(HilbertGeometry geometry, std::vector<LindbladTerm> terms, std::optional<QOperator> hamiltonian,
                         std::optional<QOperator> local_frame)
    : geometry_(geometry), terms_(std::move(terms)), hamiltonian_(std::move(hamiltonian)),
      local_frame_(std::move(local_frame)) {
  std::vector<std::pair<double, Matrix>> jumps;
  jumps.reserve(terms_.size());
  for (const LindbladTerm& t : terms_) {
    if (!(t.jump.geometry() == geometry_))
      throw InvalidDimension("term " + t.info.label + " lives on " + t.jump.geometry().describe() + ", expected " +
                             geometry_.describe());
    if (!(t.rate >= 0.0) || !std::isfinite(t.rate))
      throw InvalidArgument("term " + t.info.label + " has invalid rate " + std::to_string(t.rate));
    jumps.emplace_back(t.rate, t.jump.matrix());
  }
  std::optional<Matrix> h;
  if (hamiltonian_) {
    if (!(hamiltonian_->geometry() == geometry_)) throw InvalidDimension("Hamiltonian geometry mismatch");
    h = hamiltonian_->matrix();
  }
  compiled_ = std::make_shared<detail::BlockGenerator>(geometry_.ancilla_dim(), geometry_.resonator_dim(), jumps, h);
  std::optional<Matrix> frame;
  if (local_frame_) {
    if (!(local_frame_->geometry() == geometry_)) throw InvalidDimension("local frame geometry mismatch");
    frame = local_frame_->matrix();
  }
  if (auto split = detail::CarrierSplit::detect(geometry_.ancilla_dim(), {geometry_.fock_dim(0), geometry_.fock_dim(1)}, jumps,
                                                h, frame))
    carrier_ = std::make_shared<const detail::CarrierSplit>(std::move(*split));
}

Liouvillian Liouvillian::with_hamiltonian(QOperator h) const {
  Liouvillian out(geometry_, terms_, std::move(h), local_frame_);
  out.warnings_ = warnings_;
  return out;
}

Matrix Liouvillian::apply(const Matrix& rho) const {
  Matrix out;
  apply(rho, out);
  return out;
}

void Liouvillian::apply(const Matrix& rho, Matrix& out) const {
  const int d = geometry_.total_dim();
  if (rho.rows() != d || rho.cols() != d) throw InvalidDimension("state size does not match the Liouvillian");
  compiled_->apply(rho, out);
}

double Liouvillian::norm_estimate() const {
  double n = 0.0;
  for (const LindbladTerm& t : terms_) {
    if (t.rate == 0.0) continue;
    const Matrix ldl = t.jump.matrix().adjoint() * t.jump.matrix();
    Eigen::SelfAdjointEigenSolver<Matrix> es(ldl, Eigen::EigenvaluesOnly);
    n += 2.0 * t.rate * es.eigenvalues().cwiseAbs().maxCoeff();
  }
  if (hamiltonian_) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(hamiltonian_->matrix(), Eigen::EigenvaluesOnly);
    n += 2.0 * es.eigenvalues().cwiseAbs().maxCoeff();
  }
  return n;
}

Matrix dissipator_apply(const LindbladTerm& term, const Matrix& rho) {
  const Matrix& o = term.jump.matrix();
  if (rho.rows() != o.rows() || rho.cols() != o.cols()) throw InvalidDimension("dissipator: state size mismatch");
  const Matrix odo = o.adjoint() * o;
  return term.rate * (o * rho * o.adjoint() - 0.5 * (odo * rho + rho * odo));
}

Matrix dissipator_apply(const LindbladTerm& term, const DensityState& state) {
  if (!(term.jump.geometry() == state.geometry()))
    throw InvalidDimension("dissipator: geometry mismatch " + term.jump.geometry().describe() + " vs " +
                           state.geometry().describe());
  return dissipator_apply(term, state.matrix());
}

Matrix dense_superoperator(const Liouvillian& l) {
  const int d = l.geometry().total_dim();
  const Matrix id = Matrix::Identity(d, d);
  Matrix sup = Matrix::Zero(d * d, d * d);
  for (const LindbladTerm& t : l.terms()) {
    if (t.rate == 0.0) continue;
    const Matrix& o = t.jump.matrix();
    const Matrix odo = o.adjoint() * o;
    sup += t.rate * Matrix(Eigen::kroneckerProduct(o.conjugate(), o));
    sup -= 0.5 * t.rate * Matrix(Eigen::kroneckerProduct(id, odo));
    sup -= 0.5 * t.rate * Matrix(Eigen::kroneckerProduct(odo.transpose(), id));
  }
  if (l.hamiltonian()) {
    const Matrix& h = l.hamiltonian()->matrix();
    sup -= complex(0.0, 1.0) * Matrix(Eigen::kroneckerProduct(id, h));
    sup += complex(0.0, 1.0) * Matrix(Eigen::kroneckerProduct(h.transpose(), id));
  }
  return sup;
}

void write_term_audit(std::ostream& os, const Liouvillian& l) {
  const auto flags = os.flags();
  const auto prec = os.precision();
  os << "# label\tbath\talpha_order\tfrequency\trate\n";
  os << std::setprecision(12);
  for (const LindbladTerm& t : l.terms()) {
    os << t.info.label << '\t' << (t.info.bath ? to_string(*t.info.bath) : std::string("-")) << '\t'
       << t.info.alpha_order << '\t' << t.info.frequency << '\t' << t.rate << '\n';
  }
  os.flags(flags);
  os.precision(prec);
}

QOperator free_resonator_hamiltonian(const HilbertGeometry& g, std::array<double, 2> omega) {
  QOperator h = QOperator::zero(g);
  for (int i = 0; i < 2; ++i) {
    if (g.fock_dim(i) < 2 || omega[i] == 0.0) continue;
    const QOperator b = mode_lower(g, i);
    h += complex(omega[i], 0.0) * (b.adjoint() * b);
  }
  return h;
}

// ---------------------------------------------------------------------------
// Term lists

namespace {

JumpSpec jump(AncillaFactor a, std::vector<ModeFactor> modes = {}) { return {a, std::move(modes)}; }

ModeFactor lo(int i, int power = 1) { return {i, false, power}; }
ModeFactor up(int i, int power = 1) { return {i, true, power}; }

constexpr auto L = AncillaFactor::Lower;
constexpr auto R = AncillaFactor::Raise;

void add_carrier_and_dressed(std::vector<TermSpec>& out, BathLabel q, double wa) {
  out.push_back({q, wa, 0, jump(L)});
  out.push_back({q, -wa, 0, jump(R)});
  for (int i = 0; i < 2; ++i) {
    out.push_back({q, wa, 3, jump(L, {up(i), lo(i)})});
    out.push_back({q, -wa, 3, jump(R, {up(i), lo(i)})});
  }
}

void add_local(std::vector<TermSpec>& out, const SystemParams& p) {
  const BathLabel labels[2] = {BathLabel::Local1, BathLabel::Local2};
  for (int i = 0; i < 2; ++i) {
    out.push_back({labels[i], p.omega[i], 0, jump(AncillaFactor::None, {lo(i)})});
    out.push_back({labels[i], -p.omega[i], 0, jump(AncillaFactor::None, {up(i)})});
  }
}

void add_filtered_hot(std::vector<TermSpec>& out, const SystemParams& p) {
  const double wm = p.omega_a - p.omega[0] - p.omega[1];
  out.push_back({BathLabel::Hot, wm, 3, jump(L, {up(0), up(1)})});
  out.push_back({BathLabel::Hot, -wm, 3, jump(R, {lo(0), lo(1)})});
}

} // namespace

std::vector<TermSpec> full_secular_specs(const SystemParams& p) {
  p.validate();
  const double wa = p.omega_a;
  const double sum = p.omega[0] + p.omega[1];
  const double diff = p.omega[0] - p.omega[1];
  std::vector<TermSpec> out;
  for (BathLabel q : {BathLabel::Hot, BathLabel::Cold}) {
    add_carrier_and_dressed(out, q, wa);
    for (int i = 0; i < 2; ++i)
      for (int n = 1; n <= 2; ++n) {
        const double w = n * p.omega[i];
        out.push_back({q, wa - w, n + 1, jump(L, {up(i, n)})});
        out.push_back({q, -wa + w, n + 1, jump(R, {lo(i, n)})});
        out.push_back({q, wa + w, n + 1, jump(L, {lo(i, n)})});
        out.push_back({q, -wa - w, n + 1, jump(R, {up(i, n)})});
      }
    out.push_back({q, wa - sum, 3, jump(L, {up(0), up(1)})});
    out.push_back({q, -wa + sum, 3, jump(R, {lo(0), lo(1)})});
    out.push_back({q, wa + sum, 3, jump(L, {lo(0), lo(1)})});
    out.push_back({q, -wa - sum, 3, jump(R, {up(0), up(1)})});
    out.push_back({q, wa - diff, 3, jump(L, {up(0), lo(1)})});
    out.push_back({q, -wa + diff, 3, jump(R, {lo(0), up(1)})});
    out.push_back({q, wa + diff, 3, jump(L, {lo(0), up(1)})});
    out.push_back({q, -wa - diff, 3, jump(R, {up(0), lo(1)})});
  }
  add_local(out, p);
  return out;
}

std::vector<TermSpec> filtered_nondegenerate_specs(const SystemParams& p) {
  p.validate();
  if (p.degenerate())
    throw DegenerateConfiguration("resonator frequencies coincide; use the degenerate filtered builder");
  std::vector<TermSpec> out;
  add_carrier_and_dressed(out, BathLabel::Cold, p.omega_a);
  add_filtered_hot(out, p);
  add_local(out, p);
  return out;
}

std::vector<TermSpec> filtered_degenerate_specs(const SystemParams& p) {
  p.validate();
  if (!p.degenerate()) throw InvalidConfiguration("degenerate builder needs omega_1 = omega_2");
  const double wa = p.omega_a;
  const double two = 2.0 * p.omega[0];
  std::vector<TermSpec> out;
  add_carrier_and_dressed(out, BathLabel::Cold, wa);
  add_filtered_hot(out, p);
  add_local(out, p);
  out.push_back({BathLabel::Cold, wa, 3, jump(L, {up(0), lo(1)})});
  out.push_back({BathLabel::Cold, wa, 3, jump(L, {lo(0), up(1)})});
  out.push_back({BathLabel::Cold, -wa, 3, jump(R, {lo(0), up(1)})});
  out.push_back({BathLabel::Cold, -wa, 3, jump(R, {up(0), lo(1)})});
  for (int i = 0; i < 2; ++i) {
    out.push_back({BathLabel::Hot, wa - two, 3, jump(L, {up(i, 2)})});
    out.push_back({BathLabel::Hot, -wa + two, 3, jump(R, {lo(i, 2)})});
  }
  return out;
}

namespace {

const BathSpec& bath_for(const BathSet& baths, BathLabel label) {
  switch (label) {
  case BathLabel::Hot:
    return baths.hot;
  case BathLabel::Cold:
    return baths.cold;
  case BathLabel::Local1:
    return baths.local[0];
  case BathLabel::Local2:
    return baths.local[1];
  }
  throw InvalidArgument("unknown bath label");
}

} // namespace

Liouvillian assemble(const HilbertGeometry& g, const SystemParams& p, const BathSet& baths,
                     const std::vector<TermSpec>& specs) {
  p.validate();
  baths.validate();
  if (g.ancilla_kind() != p.ancilla_kind)
    throw InvalidDimension("geometry ancilla " + to_string(g.ancilla_kind()) + " does not match parameters (" +
                           to_string(p.ancilla_kind) + ")");
  const double alpha = p.common_alpha();
  const TransformedOperators ops = TransformedOperators::make(g, p.alpha);
  const PolaronMap map(g, p.alpha);

  std::vector<LindbladTerm> terms;
  terms.reserve(specs.size());
  for (const TermSpec& s : specs) {
    const double rate = std::pow(alpha, s.alpha_order) * bath_response(s.frequency, bath_for(baths, s.bath));
    if (!(rate >= 0.0) || !std::isfinite(rate))
      throw NumericalFailure("rate for " + s.jump.label() + " is " + std::to_string(rate));
    if (rate == 0.0) continue;
    QOperator j = ops.materialize(s.jump);
    if (j.matrix().cwiseAbs().maxCoeff() == 0.0) continue;
    terms.push_back({rate, std::move(j), {s.jump.label(), s.bath, s.frequency, s.alpha_order}});
  }
  Liouvillian l(g, std::move(terms), std::nullopt, map.u());
  if (alpha > kAlphaWarn)
    l.add_warning("alpha = " + std::to_string(alpha) + " exceeds 0.3; dropped O(alpha^4) terms may matter");
  return l;
}

Liouvillian build_full_secular(const HilbertGeometry& g, const SystemParams& p, const BathSet& baths) {
  return assemble(g, p, baths, full_secular_specs(p));
}

Liouvillian build_filtered_nondegenerate(const HilbertGeometry& g, const SystemParams& p, const BathSet& baths) {
  if (!baths.hot.filter || !baths.cold.filter)
    throw InvalidConfiguration("filtered builder needs filters on the hot and cold baths");
  Liouvillian l = assemble(g, p, baths, filtered_nondegenerate_specs(p));
  double linewidth = 0.0;
  for (int i = 0; i < 2; ++i)
    linewidth = std::max(linewidth, bath_response(p.omega[i], baths.local[i]) + bath_response(-p.omega[i], baths.local[i]));
  if (std::abs(p.omega[0] - p.omega[1]) < 10.0 * linewidth)
    l.add_warning("resonator detuning is within 10 local linewidths; the secular split is doubtful");
  return l;
}

Liouvillian build_filtered_degenerate(const HilbertGeometry& g, const SystemParams& p, const BathSet& baths) {
  if (!baths.hot.filter || !baths.cold.filter)
    throw InvalidConfiguration("filtered builder needs filters on the hot and cold baths");
  return assemble(g, p, baths, filtered_degenerate_specs(p));
}

// ---------------------------------------------------------------------------

DentOperators DentOperators::make(const HilbertGeometry& g, double alpha, double n_a_expect) {
  if (!g.is_two_mode()) throw InvalidDimension("D_ent acts on two resonators only, got " + g.describe());
  if (!(n_a_expect >= 0.0)) throw InvalidArgument("<n_a> must be >= 0");
  const QOperator b1 = mode_lower(g, 0);
  const QOperator b2 = mode_lower(g, 1);
  const QOperator id = QOperator::identity(g);
  QOperator c = complex(alpha, 0.0) * (b1 + b2);
  QOperator d = b1 * b2 + complex(alpha * alpha, 0.0) * id;
  QOperator j = matrix_exponential(c - c.adjoint()) * (d - c);
  return {std::move(c), std::move(d), std::move(j), n_a_expect + 1.0};
}

Liouvillian build_dent_only(const HilbertGeometry& g, double alpha, double rate, double n_a_expect) {
  if (!(rate >= 0.0)) throw InvalidArgument("D_ent rate must be >= 0");
  DentOperators ops = DentOperators::make(g, alpha, n_a_expect);
  std::vector<LindbladTerm> terms;
  terms.push_back({rate * ops.weight, std::move(ops.jump), {"exp(c-c^dag)(d-c)", std::nullopt, 0.0, 0}});
  return Liouvillian(g, std::move(terms));
}

Liouvillian build_arenz_reference(const ArenzParams& a, const HilbertGeometry& g) {
  if (!g.is_two_mode()) throw InvalidDimension("reference Liouvillian acts on two resonators, got " + g.describe());
  if (!(a.kappa_c >= 0.0) || !(a.kappa_d >= 0.0)) throw InvalidArgument("kappa_c and kappa_d must be >= 0");
  const QOperator b1 = mode_lower(g, 0);
  const QOperator b2 = mode_lower(g, 1);
  const QOperator id = QOperator::identity(g);
  std::vector<LindbladTerm> terms;
  terms.push_back({a.kappa_c, complex(1.0 / std::sqrt(2.0), 0.0) * (b1 - b2), {"c-", std::nullopt, 0.0, 0}});
  terms.push_back({a.kappa_d, complex(0.5, 0.0) * (b1 * b2) - a.beta * a.beta * id, {"d-", std::nullopt, 0.0, 0}});
  return Liouvillian(g, std::move(terms));
}

} // namespace hotent
