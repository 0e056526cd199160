#pragma once

#include "hotent/master_equation.hpp"

#include <array>

namespace hotent {

/// Rates of the resonator-only equation obtained by tracing out the ancilla
/// from the non-degenerate filtered generator.
struct RateSet {
  std::array<double, 2> gamma_down{};
  std::array<double, 2> gamma_up{};
  double Gamma_down = 0.0; // joint cooling, D[b1 b2]
  double Gamma_up = 0.0;   // joint heating, D[b1^dag b2^dag]
  double gamma_d = 0.0;    // dephasing, D[b_i^dag b_i]
};

/// Thermal excitation of the ancilla at omega_a against the cold bath.
double default_ancilla_occupation(const SystemParams& p, const BathSet& baths);

RateSet effective_rates(const SystemParams& p, const BathSet& baths, double n_a_expect);

struct DominanceReport {
  bool dominant = false;
  double over_joint_heating = 0.0; // Gamma_down / Gamma_up
  double over_local_heating = 0.0; // Gamma_down / max_i gamma_up_i
  double margin = 0.0;             // smaller of the two ratios
};

/// Gamma_down > Gamma_up and Gamma_down > max_i gamma_up_i, strictly.
DominanceReport cooling_dominance(const RateSet& rates);

} // namespace hotent
