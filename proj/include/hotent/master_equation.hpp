#pragma once

#include "hotent/qoperator.hpp"
#include "hotent/spectral.hpp"

#include <array>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace hotent {

namespace detail {
class BlockGenerator;
class CarrierSplit;
}

/// Parameters of the ancilla-resonator Hamiltonian, in units where omega_a = 1
/// is customary but not required.
struct SystemParams {
  double omega_a = 1.0;
  std::array<double, 2> omega{};
  std::array<double, 2> g{};
  std::array<double, 2> alpha{};
  AncillaKind ancilla_kind = AncillaKind::TLS;

  /// Fills g from alpha so that both stay consistent.
  static SystemParams from_alpha(double omega_a, std::array<double, 2> omega, std::array<double, 2> alpha,
                                 AncillaKind kind = AncillaKind::TLS);

  void validate() const;
  /// The master equation assumes alpha_1 = alpha_2; throws otherwise.
  double common_alpha() const;
  bool degenerate() const;
};

/// The four baths seen by the system.
struct BathSet {
  BathSpec hot;
  BathSpec cold;
  std::array<BathSpec, 2> local;

  void validate() const;
};

// ---------------------------------------------------------------------------
// Symbolic jump operators

enum class AncillaFactor { None, Lower, Raise };

/// b_i^(dag)^power for mode i in {0, 1}.
struct ModeFactor {
  int mode = 0;
  bool dagger = false;
  int power = 1;
};

/// Ordered product (ancilla factor) * mode factors of transformed operators.
struct JumpSpec {
  AncillaFactor ancilla = AncillaFactor::None;
  std::vector<ModeFactor> modes;

  std::string label() const;
};

/// One entry of a generator before its rate is looked up.
struct TermSpec {
  BathLabel bath = BathLabel::Cold;
  double frequency = 0.0; // signed argument of the bath response
  int alpha_order = 0;    // rate carries a factor alpha^alpha_order
  JumpSpec jump;
};

/// Audit record attached to each Lindblad term.
struct TermInfo {
  std::string label;
  std::optional<BathLabel> bath;
  double frequency = 0.0;
  int alpha_order = 0;
};

struct LindbladTerm {
  double rate = 0.0;
  QOperator jump;
  TermInfo info;
};

/// Polaron-frame operators a~, b~_1, b~_2 as matrices on the full space.
///
/// With S = sum_i alpha_i (b_i^dag - b_i) and u = exp(-n_a S), they are the
/// conjugates u X u^dag of the local-basis operators a exp(S) and b_i - alpha_i.
/// Conjugating a polaron-frame dissipator back with u therefore yields the
/// local-basis jump exactly, including the trace over the ancilla.
struct TransformedOperators {
  QOperator a;
  std::array<QOperator, 2> b;

  static TransformedOperators make(const HilbertGeometry& g, std::array<double, 2> alpha);
  QOperator materialize(const JumpSpec& spec) const;
};

/// Lindblad generator sum_k r_k D[L_k] plus an optional -i[H, .].
class Liouvillian {
public:
  /// local_frame, when given, is a unitary u such that u^dag rho u is a frame
  /// in which the jumps are sparse. It only speeds up evolve.
  Liouvillian(HilbertGeometry geometry, std::vector<LindbladTerm> terms,
              std::optional<QOperator> hamiltonian = std::nullopt, std::optional<QOperator> local_frame = std::nullopt);

  const HilbertGeometry& geometry() const { return geometry_; }
  const std::vector<LindbladTerm>& terms() const { return terms_; }
  const std::optional<QOperator>& hamiltonian() const { return hamiltonian_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  Liouvillian with_hamiltonian(QOperator h) const;
  void add_warning(std::string w) { warnings_.push_back(std::move(w)); }

  /// L[rho]. Exploits the ancilla block structure of every jump.
  Matrix apply(const Matrix& rho) const;
  void apply(const Matrix& rho, Matrix& out) const;

  /// Cheap upper bound on the operator norm, used to scale residuals.
  double norm_estimate() const;

  /// Closed-form split of the bare ancilla carrier, when the generator has one.
  const detail::CarrierSplit* carrier_split() const { return carrier_.get(); }

private:
  HilbertGeometry geometry_;
  std::vector<LindbladTerm> terms_;
  std::optional<QOperator> hamiltonian_;
  std::optional<QOperator> local_frame_;
  std::vector<std::string> warnings_;
  std::shared_ptr<const detail::BlockGenerator> compiled_;
  std::shared_ptr<const detail::CarrierSplit> carrier_;
};

/// rate * (o rho o^dag - {o^dag o, rho} / 2)
Matrix dissipator_apply(const LindbladTerm& term, const DensityState& state);
Matrix dissipator_apply(const LindbladTerm& term, const Matrix& rho);

/// Dense d^2 x d^2 generator acting on column-stacked vec(rho).
Matrix dense_superoperator(const Liouvillian& l);

/// One line per term: label, bath, alpha order, frequency, rate.
void write_term_audit(std::ostream& os, const Liouvillian& l);

/// sum_i omega_i b_i^dag b_i on the given geometry.
QOperator free_resonator_hamiltonian(const HilbertGeometry& g, std::array<double, 2> omega);

// ---------------------------------------------------------------------------
// Builders

std::vector<TermSpec> full_secular_specs(const SystemParams& p);
std::vector<TermSpec> filtered_nondegenerate_specs(const SystemParams& p);
std::vector<TermSpec> filtered_degenerate_specs(const SystemParams& p);

/// Resolves rates through the spectral module and materializes each jump.
Liouvillian assemble(const HilbertGeometry& g, const SystemParams& p, const BathSet& baths,
                     const std::vector<TermSpec>& specs);

Liouvillian build_full_secular(const HilbertGeometry& g, const SystemParams& p, const BathSet& baths);
Liouvillian build_filtered_nondegenerate(const HilbertGeometry& g, const SystemParams& p, const BathSet& baths);
Liouvillian build_filtered_degenerate(const HilbertGeometry& g, const SystemParams& p, const BathSet& baths);

struct DentOperators {
  QOperator c;    // alpha (b_1 + b_2)
  QOperator d;    // b_1 b_2 + alpha^2
  QOperator jump; // exp(c - c^dag) (d - c)
  double weight = 1.0;

  static DentOperators make(const HilbertGeometry& two_mode, double alpha, double n_a_expect = 0.0);
};

/// rate <n_a + 1> D[exp(c - c^dag)(d - c)] on two resonators.
Liouvillian build_dent_only(const HilbertGeometry& two_mode, double alpha, double rate, double n_a_expect = 0.0);

struct ArenzParams {
  double kappa_c = 0.0;
  double kappa_d = 0.0;
  complex beta = 0.0;
};

/// kappa_c D[(b_1 - b_2)/sqrt 2] + kappa_d D[b_1 b_2 / 2 - beta^2]
Liouvillian build_arenz_reference(const ArenzParams& params, const HilbertGeometry& two_mode);

} // namespace hotent
