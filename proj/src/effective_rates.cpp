#include "hotent/effective_rates.hpp"

#include "hotent/errors.hpp"

#include <cmath>
#include <limits>

namespace hotent {

double default_ancilla_occupation(const SystemParams& p, const BathSet& baths) {
  const double n = bose_occupation(p.omega_a, baths.cold.temperature);
  if (p.ancilla_kind == AncillaKind::TLS) return n / (1.0 + 2.0 * n);
  return n;
}

RateSet effective_rates(const SystemParams& p, const BathSet& baths, double n_a_expect) {
  p.validate();
  baths.validate();
  if (!baths.hot.filter || !baths.cold.filter)
    throw InvalidConfiguration("effective rates need filters on the hot and cold baths");
  if (!(n_a_expect >= 0.0)) throw InvalidArgument("<n_a> must be >= 0");
  const double a3 = std::pow(p.common_alpha(), 3);
  const double wm = p.omega_a - p.omega[0] - p.omega[1];

  RateSet r;
  for (int i = 0; i < 2; ++i) {
    r.gamma_down[i] = bath_response(p.omega[i], baths.local[i]);
    r.gamma_up[i] = bath_response(-p.omega[i], baths.local[i]);
  }
  r.Gamma_down = a3 * filtered_response(-wm, baths.hot) * (n_a_expect + 1.0);
  r.Gamma_up = a3 * filtered_response(wm, baths.hot) * n_a_expect;
  r.gamma_d = a3 * (filtered_response(p.omega_a, baths.cold) * n_a_expect +
                    filtered_response(-p.omega_a, baths.cold) * (n_a_expect + 1.0));
  return r;
}

namespace {

double ratio(double num, double den) {
  if (den > 0.0) return num / den;
  return num > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
}

} // namespace

DominanceReport cooling_dominance(const RateSet& rates) {
  DominanceReport rep;
  rep.over_joint_heating = ratio(rates.Gamma_down, rates.Gamma_up);
  rep.over_local_heating = ratio(rates.Gamma_down, std::max(rates.gamma_up[0], rates.gamma_up[1]));
  rep.margin = std::min(rep.over_joint_heating, rep.over_local_heating);
  rep.dominant = rates.Gamma_down > rates.Gamma_up && rates.Gamma_down > std::max(rates.gamma_up[0], rates.gamma_up[1]);
  return rep;
}

} // namespace hotent
