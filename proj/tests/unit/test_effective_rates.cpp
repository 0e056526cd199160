#include "hotent/effective_rates.hpp"
#include "hotent/errors.hpp"
#include "hotent/units.hpp"

#include <doctest.h>

#include <cmath>

using namespace hotent;

namespace {

const UnitSystem units(10e9);

// Thermal-start scenario parameters, scaled to omega_a = 1.
struct Setup {
  SystemParams p;
  BathSet baths;
};

Setup scenario_setup(double alpha, double th_kelvin, double ti_kelvin) {
  Setup s;
  s.p = SystemParams::from_alpha(1.0, {units.frequency(5e6), units.frequency(2.5e6)}, {alpha, alpha});
  const double gamma = units.frequency(500e3);
  const double wm = 1.0 - s.p.omega[0] - s.p.omega[1];
  s.baths.hot = {BathLabel::Hot, units.temperature(th_kelvin), gamma, BathFilter{wm, gamma, LambShiftMode::Off, 0.0}};
  s.baths.cold = {BathLabel::Cold, units.temperature(0.065), gamma, BathFilter{1.0, gamma, LambShiftMode::Off, 0.0}};
  s.baths.local[0] = {BathLabel::Local1, units.temperature(ti_kelvin), units.frequency(100.0), std::nullopt};
  s.baths.local[1] = {BathLabel::Local2, units.temperature(ti_kelvin), units.frequency(100.0), std::nullopt};
  return s;
}

const LindbladTerm* term(const Liouvillian& l, const std::string& label, BathLabel b) {
  for (const auto& t : l.terms())
    if (t.info.label == label && t.info.bath == b) return &t;
  return nullptr;
}

} // namespace

TEST_CASE("zero coupling removes the joint rates") {
  const Setup s = scenario_setup(0.0, 300.0, 0.05);
  const RateSet r = effective_rates(s.p, s.baths, 0.1);
  CHECK(r.Gamma_down == 0.0);
  CHECK(r.Gamma_up == 0.0);
  CHECK(r.gamma_d == 0.0);
  CHECK(r.gamma_down[0] > 0.0);
}

TEST_CASE("hot limit ratio") {
  Setup s = scenario_setup(0.1, 300.0, 0.05);
  s.baths.hot.temperature = 1e12;
  const double na = 0.3;
  const RateSet r = effective_rates(s.p, s.baths, na);
  CHECK(r.Gamma_up / r.Gamma_down == doctest::Approx(na / (na + 1)).epsilon(1e-9));
}

TEST_CASE("thermal-start parameters favour joint cooling") {
  const Setup s = scenario_setup(0.2, 300.0, 0.05);
  const double na = default_ancilla_occupation(s.p, s.baths);
  const RateSet r = effective_rates(s.p, s.baths, na);

  // Direct evaluation through the spectral functions.
  const double wm = 1.0 - s.p.omega[0] - s.p.omega[1];
  const double down = 0.008 * filtered_response(-wm, s.baths.hot) * (na + 1);
  const double up = 0.008 * filtered_response(wm, s.baths.hot) * na;
  CHECK(r.Gamma_down == doctest::Approx(down).epsilon(1e-12));
  CHECK(r.Gamma_up == doctest::Approx(up).epsilon(1e-12));
  CHECK(r.gamma_up[0] == doctest::Approx(ohmic_response(-s.p.omega[0], s.baths.local[0])).epsilon(1e-12));
  CHECK(r.Gamma_down > r.Gamma_up);
  CHECK(r.Gamma_down > std::max(r.gamma_up[0], r.gamma_up[1]));
  CHECK(cooling_dominance(r).dominant);
}

TEST_CASE("regime condition at the non-degenerate scenario parameters") {
  // Local heating well below the joint sideband rate.
  const Setup s = scenario_setup(0.1, 300.0, 0.1);
  const double wm = 1.0 - s.p.omega[0] - s.p.omega[1];
  const double joint = 1e-3 * filtered_response(wm, s.baths.hot);
  for (int i = 0; i < 2; ++i) CHECK(ohmic_response(-s.p.omega[i], s.baths.local[i]) < 0.2 * joint);
}

TEST_CASE("cooling dominance predicate") {
  RateSet r;
  r.Gamma_down = 1.0;
  r.Gamma_up = 0.5;
  r.gamma_up = {0.1, 0.1};
  const DominanceReport d = cooling_dominance(r);
  CHECK(d.dominant);
  CHECK(d.margin == doctest::Approx(2.0));
  r.Gamma_up = 1.0;
  CHECK_FALSE(cooling_dominance(r).dominant);
}

TEST_CASE("net joint cooling grows with the hot temperature") {
  double prev = -1.0;
  for (double th : {0.5, 1.0, 5.0, 20.0, 70.0, 150.0, 300.0, 1000.0}) {
    const Setup s = scenario_setup(0.1, th, 0.1);
    const RateSet r = effective_rates(s.p, s.baths, default_ancilla_occupation(s.p, s.baths));
    CHECK(r.Gamma_down - r.Gamma_up >= prev);
    prev = r.Gamma_down - r.Gamma_up;
  }
}

TEST_CASE("rates agree with the generator terms") {
  const Setup s = scenario_setup(0.1, 70.0, 0.1);
  const double na = 0.25;
  const RateSet r = effective_rates(s.p, s.baths, na);
  const auto l = build_filtered_nondegenerate(HilbertGeometry::with_tls(3, 3), s.p, s.baths);
  CHECK(r.Gamma_down == doctest::Approx(term(l, "a~^dag b1~ b2~", BathLabel::Hot)->rate * (na + 1)).epsilon(1e-12));
  CHECK(r.Gamma_up == doctest::Approx(term(l, "a~ b1~^dag b2~^dag", BathLabel::Hot)->rate * na).epsilon(1e-12));
  CHECK(r.gamma_down[0] == doctest::Approx(term(l, "b1~", BathLabel::Local1)->rate).epsilon(1e-12));
  CHECK(r.gamma_up[1] == doctest::Approx(term(l, "b2~^dag", BathLabel::Local2)->rate).epsilon(1e-12));
}

TEST_CASE("rates need filters") {
  Setup s = scenario_setup(0.1, 70.0, 0.1);
  s.baths.hot.filter.reset();
  CHECK_THROWS_AS(effective_rates(s.p, s.baths, 0.0), InvalidConfiguration);
}

TEST_CASE("unit conversions") {
  CHECK(units.parse("5 MHz", QuantityKind::Frequency) == doctest::Approx(5e-4));
  CHECK(units.parse("500 kHz", QuantityKind::Frequency) == doctest::Approx(5e-5));
  CHECK(units.parse("500 KHz", QuantityKind::Frequency) == doctest::Approx(5e-5));
  CHECK(units.parse("100Hz", QuantityKind::Frequency) == doctest::Approx(1e-8));
  CHECK(units.parse("10 GHz", QuantityKind::Frequency) == doctest::Approx(1.0));
  CHECK(units.parse("1 K", QuantityKind::Temperature) == doctest::Approx(2.0837).epsilon(1e-4));
  CHECK(units.parse("65 mK", QuantityKind::Temperature) == doctest::Approx(0.13544).epsilon(1e-4));
  CHECK(units.parse("0.25", QuantityKind::Frequency) == 0.25);
  CHECK_THROWS_AS(units.parse("5 MHz", QuantityKind::Temperature), InvalidConfiguration);
  CHECK_THROWS_AS(units.parse("5 furlongs", QuantityKind::Frequency), InvalidConfiguration);
  CHECK_THROWS_AS(units.parse("1 K", QuantityKind::Dimensionless), InvalidConfiguration);
  CHECK(parse_frequency_hz("2.5 GHz") == doctest::Approx(2.5e9));
}
