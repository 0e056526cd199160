#include "hotent/errors.hpp"
#include "hotent/spectral.hpp"

#include "generators.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace hotent;

namespace {

BathSpec ohmic(double temperature, double coupling = 1.0) {
  BathSpec b;
  b.temperature = temperature;
  b.coupling = coupling;
  return b;
}

BathSpec filtered(double temperature, double coupling, double center, double kappa) {
  BathSpec b = ohmic(temperature, coupling);
  b.filter = BathFilter{center, kappa, LambShiftMode::Off, 0.0};
  return b;
}

// PV integral by subtracting the pole: the remainder is smooth and goes
// through a plain midpoint rule.
double pv_oracle(const std::function<double(double)>& g, double omega, double cutoff, int n = 400000) {
  const double g0 = g(omega);
  const double h = cutoff / n;
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    const double x = (k + 0.5) * h;
    const double d = omega - x;
    sum += std::abs(d) < 1e-300 ? 0.0 : (g(x) - g0) / d;
  }
  return sum * h + g0 * std::log(omega / (cutoff - omega));
}

} // namespace

TEST_CASE("bose occupation") {
  CHECK(bose_occupation(std::log(2.0) * 0.3, 0.3) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(bose_occupation(1.0, 0.0) == 0.0);
  CHECK(bose_occupation(30.0, 1.0) == doctest::Approx(1.0 / (std::exp(30.0) - 1.0)).epsilon(1e-12));
  CHECK(bose_occupation(30.0, 1.0) == doctest::Approx(std::exp(-30.0)).epsilon(1e-12));
  CHECK_THROWS_AS(bose_occupation(0.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(bose_occupation(-1.0, 1.0), InvalidArgument);
}

TEST_CASE("ohmic response") {
  CHECK(ohmic_response(0.0, ohmic(1.0)) == 0.0);
  CHECK(ohmic_response(-1.0, ohmic(0.0)) == 0.0);
  CHECK(ohmic_response(2.0, ohmic(0.0, 0.5)) == doctest::Approx(1.0));

  // Limits on either side of zero approach T * gamma.
  const BathSpec b = ohmic(0.7, 2.0);
  CHECK(ohmic_response(1e-9, b) == doctest::Approx(1.4).epsilon(1e-6));
  CHECK(ohmic_response(-1e-9, b) == doctest::Approx(1.4).epsilon(1e-6));
}

TEST_CASE("ohmic response satisfies detailed balance on a grid") {
  testgen::Gen gen(21);
  for (int k = 0; k < 200; ++k) {
    const double w = std::exp(gen.uniform(-8.0, 2.0));
    const double t = std::exp(gen.uniform(-6.0, 6.0));
    if (w / t > 600.0) continue;
    const BathSpec b = ohmic(t, gen.uniform(0.1, 3.0));
    const double ratio = ohmic_response(-w, b) / ohmic_response(w, b);
    CHECK(ratio == doctest::Approx(std::exp(-w / t)).epsilon(1e-12));
    CHECK(ohmic_response(w, b) >= 0.0);
    CHECK(ohmic_response(-w, b) >= 0.0);
  }
}

TEST_CASE("principal value integrals") {
  // Constant integrand, symmetric interval: exactly zero.
  CHECK(std::abs(principal_value_integral([](double) { return 1.0; }, 1.3, 2.6)) < 1e-12);

  // Ohmic at T = 0, omega = 1, cutoff 10: PV int x / (1 - x) = -10 - ln 9.
  const BathSpec zero = ohmic(0.0, 1.0);
  auto f0 = [&](double x) { return ohmic_response(x, zero); };
  const double exact = -10.0 - std::log(9.0);
  CHECK(principal_value_integral(f0, 1.0, 10.0) == doctest::Approx(exact).epsilon(1e-6));
  CHECK(pv_oracle(f0, 1.0, 10.0) == doctest::Approx(exact).epsilon(1e-6));

  // Finite temperature against the subtraction oracle.
  const BathSpec warm = ohmic(0.5, 1.0);
  auto f1 = [&](double x) { return ohmic_response(x, warm); };
  CHECK(principal_value_integral(f1, 1.0, 10.0) == doctest::Approx(pv_oracle(f1, 1.0, 10.0)).epsilon(1e-6));
  CHECK(principal_value_integral(f1, 3.7, 10.0) == doctest::Approx(pv_oracle(f1, 3.7, 10.0)).epsilon(1e-6));
}

TEST_CASE("lamb shift") {
  BathSpec b = filtered(0.0, 1.0, 1.0, 0.1);
  CHECK(lamb_shift(1.0, b) == 0.0);
  CHECK(lamb_shift(3.0, ohmic(1.0)) == 0.0);
  b.filter->lamb_shift_mode = LambShiftMode::Cutoff;
  b.filter->cutoff = 10.0;
  CHECK(lamb_shift(1.0, b) == doctest::Approx(-10.0 - std::log(9.0)).epsilon(1e-6));
  CHECK(lamb_shift(1.0, b) == lamb_shift(1.0, b));
}

TEST_CASE("filtered response") {
  const double kappa = 0.03;
  const BathSpec b = filtered(0.4, 0.02, 1.0, kappa);
  CHECK(filtered_response(1.0, b) == doctest::Approx(kappa / std::numbers::pi).epsilon(1e-14));

  // Lorentzian tail, 100 linewidths out.
  const double width = std::numbers::pi * ohmic_response(1.0, b);
  const double w = 1.0 + 100.0 * width;
  const double pf = std::numbers::pi * ohmic_response(w, b);
  const double tail = kappa / std::numbers::pi * pf * pf / ((w - 1.0) * (w - 1.0));
  CHECK(filtered_response(w, b) == doctest::Approx(tail).epsilon(0.02));

  // Detailed balance at resonance under the |omega| envelope convention.
  const double ratio = filtered_response(-1.0, b) / filtered_response(1.0, b);
  const double ohmic_ratio = ohmic_response(-1.0, b) / ohmic_response(1.0, b);
  CHECK(ratio == doctest::Approx(ohmic_ratio).epsilon(1e-10));
  CHECK(ratio == doctest::Approx(std::exp(-1.0 / 0.4)).epsilon(1e-10));

  CHECK_THROWS_AS(filtered_response(1.0, ohmic(1.0)), InvalidConfiguration);
}

TEST_CASE("filtered response peaks at the filter center and stays nonnegative") {
  const BathSpec b = filtered(0.3, 0.05, 0.8, 0.05);
  double best = -1.0;
  double arg = 0.0;
  for (int k = 1; k <= 2000; ++k) {
    const double w = 0.001 * k;
    const double v = filtered_response(w, b);
    CHECK(v >= 0.0);
    CHECK(filtered_response(-w, b) >= 0.0);
    if (v > best) {
      best = v;
      arg = w;
    }
  }
  CHECK(arg == doctest::Approx(0.8).epsilon(1e-9));
}

TEST_CASE("bath spec validation") {
  BathSpec b = ohmic(-1.0);
  CHECK_THROWS_AS(b.validate(), InvalidConfiguration);
  b = ohmic(1.0, 0.0);
  CHECK_THROWS_AS(b.validate(), InvalidConfiguration);
  b = filtered(1.0, 1.0, 1.0, 0.0);
  CHECK_THROWS_AS(b.validate(), InvalidConfiguration);
  b = filtered(1.0, 1.0, 1.0, 0.1);
  CHECK_NOTHROW(b.validate());
}
