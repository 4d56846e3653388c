#include <doctest.h>

#include <cmath>

#include "conormal/cutoffs.hpp"
#include "conormal/quadrature.hpp"

using namespace conormal;

TEST_CASE("periodic trapezoid weights sum to the period") {
  const Rule1d r = periodic_trapezoid(16, 1.0);
  CHECK(r.weights.sum() == doctest::Approx(1.0).epsilon(1e-15));
  const Rule1d r2 = periodic_trapezoid(32, kTwoPi);
  CHECK(r2.weights.sum() == doctest::Approx(kTwoPi).epsilon(1e-14));
}

TEST_CASE("periodic trapezoid is exact on trigonometric polynomials") {
  const Rule1d r = periodic_trapezoid(16, 1.0);
  const Real v = integrate(r, [](Real s) { return std::cos(kTwoPi * s); });
  CHECK(std::abs(v) < 1e-14);
  const Real v3 =
      integrate(r, [](Real s) { return std::pow(std::sin(kTwoPi * s), 2); });
  CHECK(v3 == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("periodic trapezoid converges spectrally on smooth integrands") {
  auto f = [](Real s) { return std::exp(std::sin(kTwoPi * s)); };
  const Real coarse = integrate(periodic_trapezoid(24), f);
  const Real fine = integrate(periodic_trapezoid(48), f);
  CHECK(std::abs(coarse - fine) < 1e-13);
}

TEST_CASE("gauss-legendre integrates polynomials exactly") {
  const Rule1d r = gauss_legendre(6, 0.0, 1.0);
  const Real v = integrate(r, [](Real x) { return std::pow(x, 9); });
  CHECK(v == doctest::Approx(0.1).epsilon(1e-14));
  for (int i = 0; i < r.nodes.size(); ++i) {
    CHECK(r.nodes[i] > 0.0);
    CHECK(r.nodes[i] < 1.0);
    CHECK(r.weights[i] > 0.0);
  }
}

TEST_CASE("gauss-legendre handles analytic integrands") {
  const Rule1d r = gauss_legendre(24, -1.0, 1.0);
  const Real v = integrate(r, [](Real x) { return std::exp(x); });
  CHECK(v == doctest::Approx(std::exp(1.0) - std::exp(-1.0)).epsilon(1e-14));
}

TEST_CASE("composite gauss-legendre covers the interval") {
  const Rule1d r = composite_gauss_legendre(8, 5, 0.25, 0.75);
  CHECK(r.weights.sum() == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("smooth ramp endpoints and smoothness") {
  CHECK(smooth_ramp(-0.5) == 0.0);
  CHECK(smooth_ramp(0.0) == 0.0);
  CHECK(smooth_ramp(1.0) == 1.0);
  CHECK(smooth_ramp(2.0) == 1.0);
  CHECK(smooth_ramp(0.5) == doctest::Approx(0.5).epsilon(1e-12));
  for (Real s : {0.2, 0.35, 0.5, 0.8}) {
    const Real eps = 1e-6;
    const Real fd = (smooth_ramp(s + eps) - smooth_ramp(s - eps)) / (2 * eps);
    CHECK(smooth_ramp_derivative(s) == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("plateau cutoff has the required support") {
  const PlateauCutoff chi = chi_alpha(0.2);  // 1 on |t|<=0.1, 0 on |t|>=0.2
  CHECK(chi(0.0) == 1.0);
  CHECK(chi(0.1) == 1.0);
  CHECK(chi(-0.05) == 1.0);
  CHECK(chi(0.2) == 0.0);
  CHECK(chi(0.5) == 0.0);
  CHECK(chi(0.15) > 0.0);
  CHECK(chi(0.15) < 1.0);
  CHECK(chi(0.15) == chi(-0.15));
}

TEST_CASE("plateau cutoff derivative matches finite differences") {
  const PlateauCutoff chi = chi_delta(0.3);
  for (Real t : {0.16, 0.2, 0.25, 0.29, -0.2}) {
    const Real eps = 1e-7;
    const Real fd = (chi(t + eps) - chi(t - eps)) / (2 * eps);
    CHECK(chi.derivative(t) == doctest::Approx(fd).epsilon(1e-5));
  }
  CHECK(chi.derivative(0.05) == 0.0);
  CHECK(chi.derivative(0.4) == 0.0);
}

TEST_CASE("recorded lipschitz scale is finite and shape-only") {
  const Real s1 = chi_alpha(0.2).lipschitz_scale();
  const Real s2 = chi_alpha(0.05).lipschitz_scale();
  CHECK(s1 > 1.0);
  CHECK(s1 < 4.0);
  CHECK(s1 == doctest::Approx(s2).epsilon(1e-9));
}

TEST_CASE("chart window weights are normalized") {
  const ChartWindow w = ChartWindow::make();
  Real total = w.weights[0];
  for (std::size_t j = 1; j < w.weights.size(); ++j) total += 2 * w.weights[j];
  CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
}
