#pragma once

#include <functional>
#include <optional>
#include <string>

namespace hotent {

enum class BathLabel { Hot, Cold, Local1, Local2 };

std::string to_string(BathLabel label);

enum class LambShiftMode { Off, Cutoff };

/// Lorentzian filter placed between the ancilla and a bath.
struct BathFilter {
  double center = 0.0;          // resonance frequency of the filter
  double filter_coupling = 0.0; // kappa
  LambShiftMode lamb_shift_mode = LambShiftMode::Off;
  double cutoff = 0.0; // upper integration limit for the Lamb shift
};

/// One Ohmic bath, optionally seen through a Lorentzian filter.
/// Frequencies, rates and temperatures share one unit (k_B = hbar = 1).
struct BathSpec {
  BathLabel label = BathLabel::Cold;
  double temperature = 0.0;
  double coupling = 0.0;
  std::optional<BathFilter> filter;

  /// Throws InvalidConfiguration when an invariant is broken.
  void validate() const;
};

double bose_occupation(double omega, double temperature);

/// Ohmic response at a signed frequency; positive arguments are emission.
double ohmic_response(double omega, const BathSpec& bath);

/// Principal value of the integral of g(x) / (omega - x) over [0, cutoff].
///
/// The singular neighbourhood is folded onto itself so that only the odd
/// part of g around omega contributes, then both pieces go through adaptive
/// Gauss-Kronrod quadrature.
double principal_value_integral(const std::function<double(double)>& g, double omega, double cutoff,
                                double rel_tol = 1e-10);

/// Bath-induced Lamb shift of the filter resonance. Zero when disabled.
double lamb_shift(double omega, const BathSpec& bath);

/// Lorentzian-filtered response. The envelope is evaluated at |omega|;
/// negative arguments carry the Boltzmann factor exp(-|omega|/T) so that
/// every line keeps detailed balance.
double filtered_response(double omega, const BathSpec& bath);

/// Filtered response when the bath has a filter, Ohmic otherwise.
double bath_response(double omega, const BathSpec& bath);

} // namespace hotent
