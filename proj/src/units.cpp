#include "hotent/units.hpp"

#include "hotent/errors.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

namespace hotent {

namespace {

constexpr double kBoltzmann = 1.380649e-23;
constexpr double kPlanck = 6.62607015e-34;

struct Split {
  double value = 0.0;
  std::string unit;
};

Split split(const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || !std::isfinite(v)) throw InvalidConfiguration("cannot read a number from '" + text + "'");
  std::string unit(end);
  const auto first = unit.find_first_not_of(" \t");
  const auto last = unit.find_last_not_of(" \t");
  unit = first == std::string::npos ? "" : unit.substr(first, last - first + 1);
  return {v, unit};
}

double hz_factor(const std::string& unit) {
  if (unit == "GHz") return 1e9;
  if (unit == "MHz") return 1e6;
  if (unit == "kHz" || unit == "KHz") return 1e3;
  if (unit == "Hz") return 1.0;
  return 0.0;
}

} // namespace

UnitSystem::UnitSystem(double nu_a_hz) : nu_a_(nu_a_hz) {
  if (!(nu_a_hz > 0.0) || !std::isfinite(nu_a_hz)) throw InvalidConfiguration("omega_a must be a positive frequency");
}

double UnitSystem::temperature(double kelvin) const { return kBoltzmann * kelvin / (kPlanck * nu_a_); }

double parse_frequency_hz(const std::string& text) {
  const Split s = split(text);
  const double f = hz_factor(s.unit);
  if (f == 0.0) throw InvalidConfiguration("'" + text + "' is not a frequency (use GHz, MHz, kHz or Hz)");
  return s.value * f;
}

double UnitSystem::parse(const std::string& text, QuantityKind kind) const {
  const Split s = split(text);
  if (s.unit.empty()) return s.value;
  switch (kind) {
  case QuantityKind::Frequency: {
    const double f = hz_factor(s.unit);
    if (f == 0.0) throw InvalidConfiguration("'" + text + "' is not a frequency (use GHz, MHz, kHz or Hz)");
    return frequency(s.value * f);
  }
  case QuantityKind::Temperature:
    if (s.unit == "K") return temperature(s.value);
    if (s.unit == "mK") return temperature(s.value * 1e-3);
    throw InvalidConfiguration("'" + text + "' is not a temperature (use K or mK)");
  case QuantityKind::Dimensionless:
    break;
  }
  throw InvalidConfiguration("'" + text + "' should be a plain number");
}

} // namespace hotent
