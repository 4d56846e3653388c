#include <doctest.h>

#include <cmath>
#include <random>

#include "conormal/measures.hpp"
#include "conormal/quantize.hpp"

using namespace conormal;

namespace {

Symbol xi1_squared() {
  return Symbol::multiplier([](const Vec2& xi) { return Complex(xi[0] * xi[0], 0); });
}

Symbol cos_x1() {
  Symbol a;
  a.add_mode(Vec2i(1, 0), [](const Vec2&) { return Complex(0.5, 0); });
  a.add_mode(Vec2i(-1, 0), [](const Vec2&) { return Complex(0.5, 0); });
  return a;
}

}  // namespace

TEST_CASE("Op(1) is the identity on trig polynomials") {
  TrigPoly u;
  u.add(Vec2i(3, -2), Complex(0.4, 0.1));
  u.add(Vec2i(0, 1), Complex(-0.2, 0.9));
  const Symbol one = Symbol::multiplier([](const Vec2&) { return Complex(1, 0); });
  const TrigPoly v = apply_op_poly(TestOperator{one, 0.01}, u);
  for (const auto& [k, c] : u)
    CHECK(std::abs(v.coeff(Vec2i(k.first, k.second)) - c) < 1e-15);
}

TEST_CASE("multipliers act by their value at 2 pi h k") {
  // u = e^{i x1 / h} with 2 pi h k = (1, 0): the symbol xi_1^2 reads 1
  const EigenFamily f = EigenFamily::torus_plane_wave(Vec2i(1, 0));
  const Real h = f.h_for_index(5);
  const TrigPoly u = f.trig_poly(h);
  const TrigPoly v = apply_op_poly(TestOperator{xi1_squared(), h}, u);
  CHECK(std::abs(v.coeff(Vec2i(5, 0)) - Complex(1, 0)) < 1e-12);
}

TEST_CASE("x-dependent symbols multiply pointwise") {
  const EigenFamily f = EigenFamily::torus_plane_wave(Vec2i(1, 0));
  const Real h = f.h_for_index(3);
  const TrigPoly u = f.trig_poly(h);
  const SampledFunction s = apply_op(TestOperator{cos_x1(), h}, u, 32);
  for (int i = 0; i < 32; ++i)
    for (int j = 0; j < 32; ++j) {
      const Vec2 x(Real(i) / 32, Real(j) / 32);
      const Complex expected = std::cos(kTwoPi * x[0]) * u.eval(x);
      CHECK(std::abs(s.values[i * 32 + j] - expected) < 1e-12);
    }
}

TEST_CASE("too small grids raise an aliasing error") {
  const EigenFamily f = EigenFamily::torus_plane_wave(Vec2i(1, 0));
  const Real h = f.h_for_index(20);
  CHECK_THROWS_AS(apply_op(TestOperator{cos_x1(), h}, f.trig_poly(h), 16),
                  AliasingError);
}

TEST_CASE("plane-wave matrix elements of momentum symbols are exact") {
  const EigenFamily f = EigenFamily::torus_plane_wave(Vec2i(1, 0));
  const Symbol a = Symbol::multiplier(
      [](const Vec2& xi) { return Complex(std::exp(-xi.squaredNorm()) + xi[0], 0); });
  for (Real h : f.admissible_h(10)) {
    const Complex me = matrix_element(a, f, h);
    const Complex expected = a.eval(Vec2(0, 0), Vec2(1, 0));
    CHECK(std::abs(me - expected) < 1e-12);
  }
}

TEST_CASE("mean-zero position symbols average out on plane waves") {
  const EigenFamily f = EigenFamily::torus_plane_wave(Vec2i(1, 0));
  const Real h = f.h_for_index(7);
  CHECK(std::abs(matrix_element(cos_x1(), f, h)) < 1e-14);
}

TEST_CASE("two-mode superposition with xi_1^2 gives 1") {
  // equal weights on k and -k: both see |2 pi h k_1| = 1
  const EigenFamily f = EigenFamily::torus_superposition(
      {{Vec2i(1, 0), Complex(1, 0)}, {Vec2i(-1, 0), Complex(1, 0)}});
  const Real h = f.h_for_index(4);
  // brute-force double-sum oracle on the two modes
  const TrigPoly u = f.trig_poly(h);
  Complex oracle{0, 0};
  for (const auto& [k, c] : u)
    oracle += std::norm(c) *
              std::pow(kTwoPi * h * k.first, 2);  // diagonal pairs only
  CHECK(std::abs(oracle - Complex(1, 0)) < 1e-13);
  CHECK(std::abs(matrix_element(xi1_squared(), f, h) - oracle) < 1e-13);
}

TEST_CASE("calibration: the identity symbol has unit expectation") {
  const EigenFamily f = EigenFamily::torus_random_shell(11);
  const Symbol one = Symbol::multiplier([](const Vec2&) { return Complex(1, 0); });
  for (long long n : {5LL, 25LL}) {
    const Real h = f.h_for_index(n);
    CHECK(std::abs(matrix_element(one, f, h) - Complex(1, 0)) < 1e-12);
  }
}

TEST_CASE("real symbols have O(h) imaginary part in the left quantization") {
  Symbol a;  // cos(2 pi x2) * exp(-|xi|^2), real
  a.add_mode(Vec2i(0, 1), [](const Vec2& xi) {
    return Complex(0.5 * std::exp(-xi.squaredNorm()), 0);
  });
  a.add_mode(Vec2i(0, -1), [](const Vec2& xi) {
    return Complex(0.5 * std::exp(-xi.squaredNorm()), 0);
  });
  const EigenFamily f = EigenFamily::torus_superposition(
      {{Vec2i(0, 1), Complex(0.8, 0)}, {Vec2i(1, 0), Complex(0.0, 0.6)}});
  std::vector<std::pair<Real, Real>> im;
  for (Real h : f.admissible_h(12))
    im.push_back({h, std::abs(std::imag(matrix_element(a, f, h)))});
  for (std::size_t i = 0; i + 1 < im.size(); ++i)
    CHECK(im[i + 1].second <= im[i].second + 1e-12);
  CHECK(im.back().second < 2 * im.back().first);  // |Im| = O(h)
}

TEST_CASE("nonnegative symbols obey the O(h) positivity bound") {
  // a = |1 + e^{2 pi i x1}|^2 psi(xi) >= 0 pointwise
  auto psi = [](const Vec2& xi) { return std::exp(-0.5 * xi.squaredNorm()); };
  Symbol a;
  a.add_mode(Vec2i(0, 0), [psi](const Vec2& xi) { return Complex(2 * psi(xi), 0); });
  a.add_mode(Vec2i(1, 0), [psi](const Vec2& xi) { return Complex(psi(xi), 0); });
  a.add_mode(Vec2i(-1, 0), [psi](const Vec2& xi) { return Complex(psi(xi), 0); });
  const EigenFamily f = EigenFamily::torus_superposition(
      {{Vec2i(1, 0), Complex(0.6, 0)}, {Vec2i(0, 1), Complex(0.0, 0.8)}});
  const auto hs = f.admissible_h(16);
  Real c_fit = 1.0;
  for (Real h : hs)
    c_fit = std::max(c_fit, -std::real(matrix_element(a, f, h)) / h);
  // the fitted constant must absorb every rung: re >= -C h across the ladder
  for (Real h : hs)
    CHECK(std::real(matrix_element(a, f, h)) >= -1.0001 * c_fit * h);
  CHECK(c_fit < 50.0);
}

TEST_CASE("curve multiplier keeps the zero mode and kills high modes") {
  CurveSeries v;
  v.length = 1.0;
  v.add(0, Complex(1, 0));
  const CurveSeries w = curve_microlocalize(v, 0.01, 0.2);
  CHECK(std::abs(w.mean() - Complex(1, 0)) < 1e-15);

  CurveSeries high;
  high.length = 1.0;
  high.add(40, Complex(1, 0));  // 2 pi h m = 2.5 > delta
  const Real h = 0.01;
  const CurveSeries hw = curve_microlocalize(high, h, 0.2);
  CHECK(hw.l2_norm() == 0.0);
}

TEST_CASE("restriction of a conormal plane wave passes unchanged") {
  const EigenFamily f = EigenFamily::torus_plane_wave(Vec2i(1, 0));
  const Real h = f.h_for_index(9);
  const CurveSeries u =
      restriction_series(f, h, Hypersurface::torus_circle(1, 0.0));
  const CurveSeries w = curve_microlocalize(u, h, 0.2);
  CHECK(std::abs(w.mean() - u.mean()) < 1e-15);  // constant series
}

TEST_CASE("microlocalizer idempotence defect is multiplier-shaped") {
  // (m - m^2) vanishes off the cutoff transition, so a passing or killed
  // mode produces no defect at all.
  CurveSeries v;
  v.length = 1.0;
  v.add(0, Complex(0.5, 0));
  v.add(60, Complex(1, 0));
  const Real h = 0.01, delta = 0.2;
  const CurveSeries once = curve_microlocalize(v, h, delta);
  const CurveSeries twice = curve_microlocalize(once, h, delta);
  Real defect2 = 0;
  for (const auto& [m, c] : once.modes) {
    const Complex d = c - (twice.modes.count(m) ? twice.modes.at(m) : Complex{0, 0});
    defect2 += std::norm(d);
  }
  CHECK(std::sqrt(defect2) < 0.5);  // bounded by the transition mass
  CHECK(std::abs(once.mean() - v.mean()) == 0.0);
}

TEST_CASE("microlocal defect vanishes exactly with the global multiplier") {
  CurveSeries constant;
  constant.length = 1.0;
  constant.add(0, Complex(3, -1));
  CHECK(microlocalize_defect(constant, 0.02, 0.2) == 0.0);

  CurveSeries passing;
  passing.length = 1.0;
  passing.add(2, Complex(1, 0));  // 2 pi h m < delta/2 passes, integrates to 0
  CHECK(microlocalize_defect(passing, 0.002, 0.2) == 0.0);
}

TEST_CASE("chart-windowed defect decays superpolynomially along the ladder") {
  const EigenFamily f = EigenFamily::torus_plane_wave(Vec2i(1, 0));
  const Hypersurface H = Hypersurface::torus_circle(1, 0.0);
  const ChartWindow win = ChartWindow::make();
  std::vector<std::pair<Real, Real>> d;
  for (Real h : f.admissible_h(40))
    d.push_back({h, microlocalize_defect(restriction_series(f, h, H), h, 0.2,
                                         win)});
  // defects shrink fast; fitted order is checked in the acceptance suite
  CHECK(d.front().second > d.back().second * 1e6);
}

TEST_CASE("phase-space histogram of a plane wave is one momentum cell") {
  const EigenFamily f = EigenFamily::torus_plane_wave(Vec2i(1, 0));
  const Real h = f.h_for_index(3);
  const PhaseHistogram hist = phase_space_histogram(f, h, 4, 16);
  CHECK(hist.total == doctest::Approx(1.0).epsilon(1e-10));
  const VecX marg = hist.angle_marginal();
  CHECK(marg[0] == doctest::Approx(1.0).epsilon(1e-10));  // direction (1,0)
  for (int a = 1; a < 16; ++a) CHECK(marg[a] < 1e-12);
  // pure shell: uniform in position
  for (int c = 0; c < 16; ++c)
    CHECK(hist.weights(c, 0) == doctest::Approx(1.0 / 16).epsilon(1e-10));
}

TEST_CASE("opposite modes split the histogram mass in half") {
  const EigenFamily f = EigenFamily::torus_superposition(
      {{Vec2i(1, 0), Complex(1, 0)}, {Vec2i(-1, 0), Complex(1, 0)}});
  const Real h = f.h_for_index(2);
  const PhaseHistogram hist = phase_space_histogram(f, h, 4, 8);
  const VecX marg = hist.angle_marginal();
  CHECK(marg[0] == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(marg[4] == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(hist.total == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("histogram concentration dissolves on larger shells") {
  // medians over seeds of the largest cell weight shrink as the shell grows
  std::vector<Real> max25, max4225;
  for (std::uint64_t seed = 1; seed <= 9; ++seed) {
    const EigenFamily f = EigenFamily::torus_random_shell(seed, {25, 4225});
    max25.push_back(
        phase_space_histogram(f, f.h_for_index(25), 2, 12).max_cell());
    max4225.push_back(
        phase_space_histogram(f, f.h_for_index(4225), 2, 12).max_cell());
  }
  std::sort(max25.begin(), max25.end());
  std::sort(max4225.begin(), max4225.end());
  CHECK(max4225[4] < max25[4]);  // median comparison
}

TEST_CASE("matrix elements reject sphere families") {
  const Symbol one = Symbol::multiplier([](const Vec2&) { return Complex(1, 0); });
  const EigenFamily zonal = EigenFamily::sphere_zonal();
  CHECK_THROWS(matrix_element(one, zonal, zonal.h_for_index(3)));
}

TEST_CASE("expectations of smooth symbols settle on the measure for every family") {
  Symbol a;
  a.add_mode(Vec2i(0, 0), [](const Vec2& xi) {
    return Complex(1.0 / (1.0 + xi.squaredNorm()), 0);
  });
  a.add_mode(Vec2i(2, 1), [](const Vec2& xi) { return Complex(0.2, 0) * xi[0]; });
  a.add_mode(Vec2i(-2, -1), [](const Vec2& xi) { return Complex(0.2, 0) * xi[0]; });
  for (const EigenFamily& f :
       {EigenFamily::torus_plane_wave(Vec2i(2, 1)),
        EigenFamily::torus_random_shell(9, {25, 105625})}) {
    const auto hs = f.admissible_h(2);
    const Real h = hs.back();
    const Real limit = integrate_symbol(analytic_defect_measure(f, h), a);
    CHECK(std::abs(matrix_element(a, f, h) - limit) < 1e-9);
  }
}
