#include <doctest.h>

#include <cmath>

#include "conormal/cutoffs.hpp"
#include "conormal/legendre.hpp"
#include "conormal/quadrature.hpp"
#include "conormal/restriction.hpp"

using namespace conormal;

TEST_CASE("conormal plane-wave averages stay at 1") {
  const EigenFamily f = EigenFamily::torus_plane_wave(Vec2i(1, 0));
  const Hypersurface H = Hypersurface::torus_circle(1, 0.0);
  for (Real h : f.admissible_h(12))
    CHECK(std::abs(boundary_average(f, h, H) - Complex(1, 0)) < 1e-12);
}

TEST_CASE("transverse plane-wave averages vanish") {
  const EigenFamily f = EigenFamily::torus_plane_wave(Vec2i(1, 0));
  const Hypersurface H = Hypersurface::torus_circle(2, 0.0);
  for (Real h : f.admissible_h(12))
    CHECK(std::abs(boundary_average(f, h, H)) < 1e-13);
}

TEST_CASE("even zonal equator averages approach the P_l(0) closed form") {
  const EigenFamily f = EigenFamily::sphere_zonal();
  const Hypersurface eq = Hypersurface::sphere_equator();
  const Real h2 = f.h_for_index(2);
  const Real expected2 =
      kTwoPi * std::sqrt(5.0 / (4 * kPi)) * legendre_p0(2);
  const Complex avg2 = boundary_average(f, h2, eq);
  CHECK(std::real(avg2) == doctest::Approx(expected2).epsilon(1e-10));
  CHECK(std::real(avg2) == doctest::Approx(-1.9817).epsilon(1e-4));

  // quadrature path cross-check against the constant restriction value
  const Real direct = kTwoPi * std::real(f.eval(h2, Vec2(0.0, 0.0)));
  CHECK(std::real(avg2) == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("normal averages: conormal wave gives i, transverse gives 0") {
  const EigenFamily f = EigenFamily::torus_plane_wave(Vec2i(1, 0));
  for (Real h : f.admissible_h(6)) {
    const Complex n1 =
        normal_average(f, h, Hypersurface::torus_circle(1, 0.0));
    CHECK(std::abs(n1 - kI) < 1e-12);
    const Complex n2 =
        normal_average(f, h, Hypersurface::torus_circle(2, 0.0));
    CHECK(std::abs(n2) < 1e-13);
  }
}

TEST_CASE("beam normal average over the equator vanishes by symmetry") {
  const EigenFamily f = EigenFamily::sphere_gaussian_beam();
  const Complex v =
      normal_average(f, f.h_for_index(60), Hypersurface::sphere_equator());
  CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("odd zonal normal averages over the equator approach 2") {
  // h d(P_l(sin w))/dw at w=0 is h l P_{l-1}(0); the prefactors drive the
  // limit to 2 for odd degrees
  const EigenFamily f = EigenFamily::sphere_zonal();
  const Hypersurface eq = Hypersurface::sphere_equator();
  const Real v = std::abs(normal_average(f, f.h_for_index(301), eq));
  CHECK(v == doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("weighted averages pick out matching restriction modes") {
  const EigenFamily f = EigenFamily::torus_plane_wave(Vec2i(1, 0));
  const Hypersurface H = Hypersurface::torus_circle(2, 0.0);
  const Real h = f.h_for_index(5);
  const std::function<Complex(Real)> match = [](Real s) {
    return std::exp(-kI * (kTwoPi * 5 * s));
  };
  CHECK(std::abs(boundary_average(f, h, H, &match) - Complex(1, 0)) < 1e-10);
  const std::function<Complex(Real)> mismatch = [](Real s) {
    return std::exp(-kI * (kTwoPi * 4 * s));
  };
  CHECK(std::abs(boundary_average(f, h, H, &mismatch)) < 1e-12);
}

TEST_CASE("smooth indicator of the full circle is identically zero") {
  const SmoothIndicator chi(ArcSet::full(1.0), 1e-3, 0.1);
  CHECK(chi.is_zero());
  CHECK(chi(0.3) == 0.0);
  CHECK(chi.l2_norm_inside() == 0.0);
}

TEST_CASE("smooth indicator bands carry the predicted L2 mass") {
  ArcSet arcs{1.0, {{0.0, 0.5}}};
  const Real h = 1e-3, eps = 0.1;
  const SmoothIndicator chi(arcs, h, eps);
  const Real w = std::pow(h, 1.0 - eps);
  CHECK(chi.bandwidth() == doctest::Approx(w));
  CHECK(chi(0.0) == 1.0);
  CHECK(chi(0.5 - 0.5 * w) == 1.0);
  CHECK(chi(0.25) == 0.0);

  // direct quadrature over the inside bands against the closed form
  Real acc = 0;
  const int n = 40000;
  for (int i = 0; i < n; ++i) {
    const Real s = 0.5 * i / n;  // the arc [0, 1/2]
    acc += 0.5 / n * chi(s) * chi(s);
  }
  CHECK(std::sqrt(acc) == doctest::Approx(chi.l2_norm_inside()).epsilon(1e-3));

  // || chi_h 1_A || scales like h^{(1-eps)/2}
  const SmoothIndicator chi2(arcs, h / 2, eps);
  CHECK(chi2.l2_norm_inside() / chi.l2_norm_inside() ==
        doctest::Approx(std::pow(0.5, (1 - eps) / 2)).epsilon(1e-12));
}

TEST_CASE("smooth indicator rejects overlapping bands") {
  ArcSet arcs{1.0, {{0.0, 0.05}}};
  CHECK_THROWS(SmoothIndicator(arcs, 0.05, 0.4));
}

TEST_CASE("rough projection norm vanishes in the trivial cases") {
  CHECK(rough_projection_norm(ArcSet::full(1.0), 0.2, 0.01) == 0.0);
  ArcSet point{1.0, {{0.3, 0.3}}};
  CHECK(rough_projection_norm(point, 0.2, 0.01) == 0.0);
}

TEST_CASE("rough projection norm matches a brute-force tail sum") {
  ArcSet half{1.0, {{0.0, 0.5}}};
  const Real delta = 0.2, h = 1.0 / 512;
  const Real value = rough_projection_norm(half, delta, h);
  // direct summation over the square-wave spectrum
  const PlateauCutoff cut = chi_delta(delta);
  Real acc = 0;
  for (long long m = 1; m <= 20000000; m += 2) {  // odd modes only
    const Real cm2 = 2.0 / std::pow(kPi * m, 2);   // |c_m|^2 + |c_-m|^2
    const Real g = 1.0 - cut(kTwoPi * h * m);
    acc += g * g * cm2;
  }
  CHECK(value == doctest::Approx(std::sqrt(acc)).epsilon(1e-6));
}

TEST_CASE("rough projection norm decays like h^(1/2) on the half circle") {
  ArcSet half{1.0, {{0.0, 0.5}}};
  std::vector<std::pair<Real, Real>> pts;
  for (int j = 2; j <= 12; ++j) {
    const Real h = std::pow(2.0, -j);
    pts.push_back({h, rough_projection_norm(half, 0.2, h)});
  }
  const FitResult fit = decay_fit(pts);
  CHECK(fit.slope >= 0.45);
  CHECK(fit.slope < 0.6);
}

TEST_CASE("local averages agree with the antiderivative closed form") {
  const EigenFamily f = EigenFamily::torus_plane_wave(Vec2i(1, 0));
  const Hypersurface H = Hypersurface::torus_circle(2, 0.0);
  ArcSet half{1.0, {{0.0, 0.5}}};
  for (long long m : {3LL, 10LL, 25LL}) {
    const Real h = f.h_for_index(m);
    const Complex expected =
        (std::exp(kI * (kPi * Real(m))) - 1.0) / (kTwoPi * kI * Real(m));
    const Complex got = local_average(f, h, H, half);
    CHECK(std::abs(got - expected) < 1e-12);
    CHECK(std::abs(got) <= 2 * h + 1e-12);
  }
}

TEST_CASE("beam averages over a half equator decay like 2 c_l / l") {
  const EigenFamily f = EigenFamily::sphere_gaussian_beam();
  const Hypersurface eq = Hypersurface::sphere_equator();
  ArcSet halfeq{kTwoPi, {{0.0, kPi}}};
  for (long long l : {51LL, 201LL}) {  // odd degrees give |1 - e^{-il pi}| = 2
    const Real h = f.h_for_index(l);
    const Real cl = std::exp(beam_log_constant(l));
    const Complex got = local_average(f, h, eq, halfeq);
    CHECK(std::abs(got) == doctest::Approx(2 * cl / l).epsilon(1e-8));
  }
}

TEST_CASE("local averages over a partition sum to the full average") {
  const EigenFamily f = EigenFamily::torus_superposition(
      {{Vec2i(2, 1), Complex(0.6, 0.2)}, {Vec2i(-2, -1), Complex(1, 0)}});
  const Hypersurface H = Hypersurface::torus_circle(2, 0.25);
  const Real h = f.h_for_index(3);
  ArcSet a{1.0, {{0.0, 0.37}}};
  ArcSet b{1.0, {{0.37, 1.0}}};
  const Complex total = local_average(f, h, H, a) + local_average(f, h, H, b);
  CHECK(std::abs(total - boundary_average(f, h, H)) < 1e-10);
}

TEST_CASE("restriction norms: plane waves have unit mass on circles") {
  const EigenFamily f = EigenFamily::torus_plane_wave(Vec2i(1, 0));
  CHECK(restriction_norm(f, f.h_for_index(5),
                         Hypersurface::torus_circle(2, 0.0)) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("beam restriction norm grows like l^(1/4) on the equator") {
  const EigenFamily f = EigenFamily::sphere_gaussian_beam();
  const Hypersurface eq = Hypersurface::sphere_equator();
  std::vector<std::pair<Real, Real>> pts;
  for (long long l = 50; l <= 800; l += 50) {
    const Real h = f.h_for_index(l);
    const Real norm = restriction_norm(f, h, eq);
    // closed form: ||phi||_{L^2(eq)}^2 = 2 pi c_l^2
    const Real oracle =
        std::sqrt(kTwoPi) * std::exp(beam_log_constant(l));
    CHECK(norm == doctest::Approx(oracle).epsilon(1e-10));
    pts.push_back({h, norm});
  }
  const FitResult fit = decay_fit(pts);
  CHECK(-fit.slope == doctest::Approx(0.25).epsilon(0.2));
  CHECK(std::abs(-fit.slope - 0.25) < 0.05);
}

TEST_CASE("beam restriction norm on a meridian stays bounded") {
  const EigenFamily f = EigenFamily::sphere_gaussian_beam();
  const Hypersurface mer = Hypersurface::sphere_meridian(0.4);
  Real prev = 0;
  for (long long l : {100LL, 400LL, 800LL}) {
    const Real norm = restriction_norm(f, f.h_for_index(l), mer);
    // Laplace closed form: ||phi||^2 -> 1/pi
    CHECK(norm == doctest::Approx(1.0 / std::sqrt(kPi)).epsilon(0.01));
    prev = norm;
  }
  (void)prev;
  // the tangential microlocalizer keeps it bounded as well
  const Real micro =
      restriction_norm(f, f.h_for_index(800), mer, 0.2);
  CHECK(micro < 1.0);
}

TEST_CASE("averages respect the Cauchy-Schwarz chain") {
  const EigenFamily f = EigenFamily::torus_random_shell(5);
  const Hypersurface H = Hypersurface::torus_circle(2, 0.0);
  for (long long n : {4LL, 9LL, 25LL}) {
    const Real h = f.h_for_index(n);
    const DecayRecord r = decay_record(f, h, H, 0.2);
    CHECK(std::abs(r.avg) <=
          std::sqrt(H.length) * r.l2_restriction + 1e-12);
    CHECK(r.microlocalized_norm <= r.l2_restriction + 1e-12);
  }
}

TEST_CASE("decay fit recovers exact power laws") {
  std::vector<std::pair<Real, Real>> linear, constant;
  for (int j = 1; j <= 12; ++j) {
    const Real h = 1.0 / (kTwoPi * j);
    linear.push_back({h, h});
    constant.push_back({h, 3.7});
  }
  CHECK(decay_fit(linear).slope == doctest::Approx(1.0).epsilon(0.01));
  CHECK(decay_fit(constant).slope == doctest::Approx(0.0).epsilon(0.01));
}

TEST_CASE("decay fit filters nonpositive values and demands 5 survivors") {
  std::vector<std::pair<Real, Real>> pts;
  for (int j = 1; j <= 12; ++j) pts.push_back({1.0 / j, j % 2 ? 1.0 / j : 0.0});
  const FitResult fit = decay_fit(pts);
  CHECK(fit.n_filtered == 6);
  std::vector<std::pair<Real, Real>> few = {{0.1, 0.1}, {0.05, 0.05},
                                            {0.025, 0.0}, {0.0125, 0.0125},
                                            {0.00625, 0.00625}};
  CHECK_THROWS_AS(decay_fit(few), FitError);
}

TEST_CASE("quadrature self-consistency under doubling") {
  // the checked integral already doubles internally; verify directly that
  // doubling the rule moves a smooth sphere average by < 1e-10
  const EigenFamily f = EigenFamily::sphere_zonal();
  const Real h = f.h_for_index(40);
  const Hypersurface lat = Hypersurface::sphere_latitude(0.45);
  auto quad = [&](int n) {
    Complex acc{0, 0};
    for (const auto& node : hypersurface_quadrature(lat, n))
      acc += node.weight * f.eval(h, node.point);
    return acc;
  };
  CHECK(std::abs(quad(256) - quad(512)) < 1e-10);
  CHECK(std::abs(boundary_average(f, h, lat) - quad(512)) < 1e-10);
}

TEST_CASE("persistently unresolved weights raise a resolution error") {
  // a weight with a cusp converges too slowly for the doubling check
  const EigenFamily f = EigenFamily::sphere_zonal();
  const Hypersurface eq = Hypersurface::sphere_equator();
  const std::function<Complex(Real)> cusp = [](Real s) {
    return Complex(std::pow(std::abs(wrap_signed(s - 2.0, kTwoPi)), 0.6), 0);
  };
  CHECK_THROWS_AS(boundary_average(f, f.h_for_index(2), eq, &cusp),
                  ResolutionError);
}

TEST_CASE("averages over rational-slope geodesics see the curve length") {
  // e^{2 pi i m (x1 + x2)} is constant on the (1,-1) geodesic and fully
  // oscillatory on the (1,1) one
  const EigenFamily f = EigenFamily::torus_plane_wave(Vec2i(1, 1));
  const Real h = f.h_for_index(4);
  const Hypersurface conormal_geo =
      Hypersurface::torus_geodesic(1, -1, Vec2(0, 0));
  const Complex avg = boundary_average(f, h, conormal_geo);
  CHECK(std::abs(avg - Complex(std::sqrt(2.0), 0)) < 1e-12);
  const Hypersurface tangent_geo =
      Hypersurface::torus_geodesic(1, 1, Vec2(0, 0));
  CHECK(std::abs(boundary_average(f, h, tangent_geo)) < 1e-13);
}
