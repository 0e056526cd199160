#include "hotent/spectral.hpp"

#include "hotent/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>

namespace hotent {

std::string to_string(BathLabel label) {
  switch (label) {
  case BathLabel::Hot:
    return "hot";
  case BathLabel::Cold:
    return "cold";
  case BathLabel::Local1:
    return "local1";
  case BathLabel::Local2:
    return "local2";
  }
  return "?";
}

void BathSpec::validate() const {
  if (!(temperature >= 0.0)) throw InvalidConfiguration(to_string(label) + " bath: temperature must be >= 0");
  if (!(coupling > 0.0)) throw InvalidConfiguration(to_string(label) + " bath: coupling must be > 0");
  if (filter) {
    if (!(filter->filter_coupling > 0.0))
      throw InvalidConfiguration(to_string(label) + " bath: filter coupling must be > 0");
    if (filter->lamb_shift_mode == LambShiftMode::Cutoff && !(std::isfinite(filter->cutoff) && filter->cutoff > 0.0))
      throw InvalidConfiguration(to_string(label) + " bath: Lamb shift cutoff must be finite and positive");
  }
}

double bose_occupation(double omega, double temperature) {
  if (!(omega > 0.0)) throw InvalidArgument("bose_occupation needs omega > 0");
  if (temperature < 0.0) throw InvalidArgument("temperature must be >= 0");
  if (temperature == 0.0) return 0.0;
  return 1.0 / std::expm1(omega / temperature);
}

double ohmic_response(double omega, const BathSpec& bath) {
  if (omega > 0.0) return omega * bath.coupling * (1.0 + bose_occupation(omega, bath.temperature));
  if (omega < 0.0) return -omega * bath.coupling * bose_occupation(-omega, bath.temperature);
  return 0.0;
}

namespace {

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol) {
  if (b <= a) return 0.0;
  double err = 0.0;
  double l1 = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 20, rel_tol, &err, &l1);
  if (!std::isfinite(v) || err > 1e3 * rel_tol * std::max(l1, 1e-300)) {
    throw NumericalFailure("principal value quadrature did not converge (error estimate " + std::to_string(err) +
                           ")");
  }
  return v;
}

} // namespace

double principal_value_integral(const std::function<double(double)>& g, double omega, double cutoff, double rel_tol) {
  if (!(cutoff > 0.0) || !std::isfinite(cutoff)) throw InvalidArgument("principal value needs a finite cutoff");
  auto kernel = [&](double x) { return g(x) / (omega - x); };
  if (omega <= 0.0 || omega >= cutoff) {
    return integrate(kernel, 0.0, cutoff, rel_tol);
  }
  const double h = std::min(omega, cutoff - omega);
  auto folded = [&](double s) { return (g(omega - s) - g(omega + s)) / s; };
  double value = integrate(folded, 0.0, h, rel_tol);
  if (omega - h > 0.0) value += integrate(kernel, 0.0, omega - h, rel_tol);
  if (omega + h < cutoff) value += integrate(kernel, omega + h, cutoff, rel_tol);
  return value;
}

double lamb_shift(double omega, const BathSpec& bath) {
  if (!bath.filter || bath.filter->lamb_shift_mode == LambShiftMode::Off) return 0.0;
  auto density = [&](double x) { return ohmic_response(x, bath); };
  return principal_value_integral(density, omega, bath.filter->cutoff);
}

double filtered_response(double omega, const BathSpec& bath) {
  if (!bath.filter) throw InvalidConfiguration(to_string(bath.label) + " bath has no filter configured");
  const double w = std::abs(omega);
  if (w == 0.0) return 0.0;
  const BathFilter& filt = *bath.filter;
  const double width = std::numbers::pi * ohmic_response(w, bath);
  const double detuning = w - (filt.center + lamb_shift(w, bath));
  const double envelope = filt.filter_coupling / std::numbers::pi * width * width / (detuning * detuning + width * width);
  if (omega > 0.0) return envelope;
  if (bath.temperature == 0.0) return 0.0;
  return envelope * std::exp(-w / bath.temperature);
}

double bath_response(double omega, const BathSpec& bath) {
  return bath.filter ? filtered_response(omega, bath) : ohmic_response(omega, bath);
}

} // namespace hotent
