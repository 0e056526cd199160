#pragma once

#include <string>

namespace hotent {

enum class QuantityKind { Frequency, Temperature, Dimensionless };

/// Converts physical quantities to units where omega_a = 1 and k_B = hbar = 1.
///
/// Frequencies are cyclic ("5 MHz" stands for omega = 2 pi x 5 MHz), so a
/// frequency or rate maps to nu / nu_a. Temperatures map to k_B T / (h nu_a).
class UnitSystem {
public:
  explicit UnitSystem(double nu_a_hz);

  double nu_a_hz() const { return nu_a_; }

  double frequency(double hz) const { return hz / nu_a_; }
  double temperature(double kelvin) const;

  /// Parses "<number> <unit>" or a bare number (already in scaled units).
  /// Accepted units: GHz, MHz, kHz, Hz for frequencies, K and mK for
  /// temperatures. Throws InvalidConfiguration on anything else.
  double parse(const std::string& text, QuantityKind kind) const;

private:
  double nu_a_;
};

/// Parses "<number> <unit>" into hertz; throws InvalidConfiguration.
double parse_frequency_hz(const std::string& text);

} // namespace hotent
