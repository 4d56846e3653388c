#include "conormal/rellich.hpp"

#include <cmath>
#include <map>

#include "conormal/quadrature.hpp"

namespace conormal {

namespace {

// int_lo^hi e^{2 pi i n t} dt
Complex segment(long long n, Real lo, Real hi) {
  if (n == 0) return Complex(hi - lo, 0);
  return (std::exp(kI * (kTwoPi * n * hi)) - std::exp(kI * (kTwoPi * n * lo))) /
         Complex(0, kTwoPi * n);
}

TrigPoly laplacian_multiplier(const TrigPoly& u, Real h) {
  // -h^2 lap: mode k picks up |2 pi h k|^2
  TrigPoly out;
  for (const auto& [k, c] : u) {
    const Real lam = kTwoPi * h * kTwoPi * h *
                     (Real(k.first) * k.first + Real(k.second) * k.second);
    out.add(Vec2i(k.first, k.second), lam * c);
  }
  return out;
}

TrigPoly scale(const TrigPoly& u, Complex z) {
  TrigPoly out;
  for (const auto& [k, c] : u) out.add(Vec2i(k.first, k.second), z * c);
  return out;
}

TrigPoly subtract(const TrigPoly& u, const TrigPoly& v) {
  TrigPoly out;
  for (const auto& [k, c] : u) out.add(Vec2i(k.first, k.second), c);
  for (const auto& [k, c] : v) out.add(Vec2i(k.first, k.second), -c);
  return out;
}

/// Restriction of u to the circle {x2 = level} as a series in x1.
std::map<int, Complex> circle_collapse(const TrigPoly& u, Real level) {
  std::map<int, Complex> out;
  for (const auto& [k, c] : u)
    out[k.first] += c * std::exp(kI * (kTwoPi * k.second * level));
  return out;
}

/// Restriction of hD_{x2} u to {x2 = level}.
std::map<int, Complex> circle_collapse_dnu(const TrigPoly& u, Real level,
                                           Real h) {
  std::map<int, Complex> out;
  for (const auto& [k, c] : u)
    out[k.first] +=
        c * (kTwoPi * h * k.second) * std::exp(kI * (kTwoPi * k.second * level));
  return out;
}

Complex circle_pair(const std::map<int, Complex>& a,
                    const std::map<int, Complex>& b) {
  Complex acc{0, 0};
  for (const auto& [m, c] : a) {
    auto it = b.find(m);
    if (it != b.end()) acc += c * std::conj(it->second);
  }
  return acc;
}

TrigPoly commutator_poly(const TorusOperator& A, const TrigPoly& phi, Real h) {
  // (i/h) [ -h^2 lap, A ] phi
  const TrigPoly a_phi = A.apply(phi, h);
  const TrigPoly left = laplacian_multiplier(a_phi, h);
  const TrigPoly right = A.apply(laplacian_multiplier(phi, h), h);
  return scale(subtract(left, right), kI / h);
}

}  // namespace

StripDomain::StripDomain(Real lo_, Real hi_) : lo(lo_), hi(hi_) {
  // bounds may sit anywhere on the covering line; only the width matters
  if (!(lo < hi && hi - lo < 1.0))
    throw std::invalid_argument("StripDomain: need lo < hi with width < 1");
  // Green self-test on a smooth pair of modes.
  TrigPoly u, v;
  u.add(Vec2i(2, 1), Complex{0.7, 0.3});
  v.add(Vec2i(2, -2), Complex{-0.4, 1.1});
  auto lap = [](const TrigPoly& w) {
    TrigPoly out;
    for (const auto& [k, c] : w)
      out.add(Vec2i(k.first, k.second),
              -kTwoPi * kTwoPi *
                  (Real(k.first) * k.first + Real(k.second) * k.second) * c);
    return out;
  };
  // int_Omega (lap u) conj(v) - u conj(lap v)
  const Complex lhs = strip_inner_exact(lap(u), v, *this) -
                      strip_inner_exact(u, lap(v), *this);
  // int_bnd d_nu(u) conj(v) - u conj(d_nu v)
  Complex rhs{0, 0};
  for (int side = 0; side < 2; ++side) {
    const Real level = side == 0 ? hi : lo;
    const Real sgn = side == 0 ? 1.0 : -1.0;
    auto du = circle_collapse_dnu(u, level, 1.0);  // = (1/ i 2pi ...) scaled
    auto dv = circle_collapse_dnu(v, level, 1.0);
    // hD with h=1 gives 2 pi k2; d/dx2 = i 2 pi k2, so multiply by i
    for (auto& [m, c] : du) c *= kI;
    for (auto& [m, c] : dv) c *= kI;
    rhs += sgn * (circle_pair(du, circle_collapse(v, level)) -
                  circle_pair(circle_collapse(u, level), dv));
  }
  if (std::abs(lhs - rhs) > 1e-10 * (std::abs(lhs) + std::abs(rhs) + 1))
    throw std::logic_error("StripDomain: Green self-test failed");
}

Complex strip_inner_exact(const TrigPoly& u, const TrigPoly& v,
                          const StripDomain& strip) {
  Complex acc{0, 0};
  for (const auto& [ku, cu] : u)
    for (const auto& [kv, cv] : v) {
      if (ku.first != kv.first) continue;
      acc += cu * std::conj(cv) *
             segment(ku.second - kv.second, strip.lo, strip.hi);
    }
  return acc;
}

Complex strip_inner_quadrature(const TrigPoly& u, const TrigPoly& v,
                               const StripDomain& strip, Real oversample) {
  int max1 = 0, max2 = 0;
  for (const auto& [k, c] : u) {
    (void)c;
    max1 = std::max(max1, std::abs(k.first));
    max2 = std::max(max2, std::abs(k.second));
  }
  for (const auto& [k, c] : v) {
    (void)c;
    max1 = std::max(max1, std::abs(k.first));
    max2 = std::max(max2, std::abs(k.second));
  }
  const int n1 = std::max<int>(8, int(oversample * (4 * max1 + 9)));
  const int n2 = std::max<int>(
      8, int(oversample * (kPi * 2 * max2 * strip.width() + 40)));
  const Rule1d gl = gauss_legendre(n2, strip.lo, strip.hi);
  Complex acc{0, 0};
  for (int i = 0; i < n1; ++i) {
    const Real x1 = Real(i) / n1;
    for (int j = 0; j < n2; ++j) {
      const Vec2 x(x1, gl.nodes[j]);
      acc += u.eval(x) * std::conj(v.eval(x)) * (gl.weights[j] / n1);
    }
  }
  return acc;
}

TorusOperator TorusOperator::identity() {
  TorusOperator op;
  op.name = "Id";
  op.symbol = Symbol::multiplier([](const Vec2&) { return Complex{1, 0}; });
  op.apply = [](const TrigPoly& u, Real) { return u; };
  return op;
}

TorusOperator TorusOperator::quantization(Symbol a, std::string name) {
  TorusOperator op;
  op.name = std::move(name);
  op.symbol = a;
  op.apply = [a](const TrigPoly& u, Real h) {
    return apply_op_poly(TestOperator{a, h}, u);
  };
  return op;
}

TorusOperator TorusOperator::collar_test(Real delta, Real alpha,
                                         const Hypersurface& H,
                                         int truncation) {
  if (H.kind != HypersurfaceKind::TorusCircle)
    throw std::invalid_argument("collar_test: torus coordinate circle only");
  const int axis = H.axis;
  const Real level = H.level;
  const PlateauCutoff beta_cut = chi_delta(delta);
  const VecX chi_c =
      periodized_cutoff_coefficients(chi_alpha(alpha), truncation);

  TorusOperator op;
  op.name = "A_{delta,alpha}";
  op.symbol = collar_symbol(H, delta, alpha, 1, truncation);
  op.apply = [axis, level, beta_cut, chi_c, truncation](const TrigPoly& u,
                                                        Real h) {
    // hD_nu
    TrigPoly step1;
    for (const auto& [k, c] : u) {
      const int kn = axis == 2 ? k.second : k.first;
      step1.add(Vec2i(k.first, k.second), c * (kTwoPi * h * kn));
    }
    // chi_alpha(x_n) as its truncated Fourier series
    TrigPoly step2;
    for (const auto& [k, c] : step1) {
      for (int j = -truncation; j <= truncation; ++j) {
        const Complex w =
            chi_c[std::abs(j)] * std::exp(-kI * (kTwoPi * j * level));
        if (std::abs(w) < 1e-18) continue;
        const Vec2i m = axis == 2 ? Vec2i(k.first, k.second + j)
                                  : Vec2i(k.first + j, k.second);
        step2.add(m, c * w);
      }
    }
    // tangential multiplier beta_delta^2
    TrigPoly out;
    for (const auto& [k, c] : step2) {
      const int kt = axis == 2 ? k.first : k.second;
      const Real b = beta_cut(std::abs(kTwoPi * h * kt));
      if (b != 0.0) out.add(Vec2i(k.first, k.second), c * b * b);
    }
    return out;
  };
  return op;
}

Real rellich_residual(const TorusOperator& A, const EigenFamily& f, Real h,
                      const StripDomain& strip, Real oversample) {
  const TrigPoly phi = f.trig_poly(h);
  const TrigPoly comm = commutator_poly(A, phi, h);
  const Complex lhs = strip_inner_quadrature(comm, phi, strip, oversample);

  const TrigPoly a_phi = A.apply(phi, h);
  Complex rhs{0, 0};
  for (int side = 0; side < 2; ++side) {
    const Real level = side == 0 ? strip.hi : strip.lo;
    const Real sgn = side == 0 ? 1.0 : -1.0;  // outward normal +-d/dx2
    auto a_phi_r = circle_collapse(a_phi, level);
    auto dnu_phi = circle_collapse_dnu(phi, level, h);
    auto dnu_a_phi = circle_collapse_dnu(a_phi, level, h);
    auto phi_r = circle_collapse(phi, level);
    // hD_nu = sgn * hD_{x2}; the first term carries conj(sgn * hD phi)
    rhs += sgn * circle_pair(a_phi_r, dnu_phi) +
           sgn * circle_pair(dnu_a_phi, phi_r);
  }
  return std::abs(lhs - rhs) / (std::abs(lhs) + std::abs(rhs) + 1.0);
}

BracketComparison commutator_vs_bracket(const Symbol& a, const EigenFamily& f,
                                        const std::vector<Real>& hs,
                                        const StripDomain& strip) {
  const Symbol bracket = poisson_bracket_with_energy(a);
  BracketComparison cmp;
  for (Real h : hs) {
    const TrigPoly phi = f.trig_poly(h);
    const TrigPoly lhs_poly =
        commutator_poly(TorusOperator::quantization(a), phi, h);
    const TrigPoly rhs_poly = apply_op_poly(TestOperator{bracket, h}, phi);
    const Complex d = strip_inner_exact(lhs_poly, phi, strip) -
                      strip_inner_exact(rhs_poly, phi, strip);
    cmp.gap.push_back({h, std::abs(d)});
  }
  Real max_gap = 0;
  for (const auto& [h, d] : cmp.gap) max_gap = std::max(max_gap, d);
  if (max_gap < 1e-13) {
    cmp.all_zero = true;
    return cmp;
  }
  FitOptions opts;
  opts.value_floor = 1e-13;
  cmp.fit = decay_fit(cmp.gap, opts);
  return cmp;
}

TraceRow main_inequality_trace(const EigenFamily& f, Real h, Real delta,
                               Real alpha, const Hypersurface& H,
                               const StripDomain& strip) {
  if (H.kind != HypersurfaceKind::TorusCircle || H.axis != 2)
    throw std::invalid_argument("main_inequality_trace: H = {x2 = level}");
  if (std::abs(wrap_signed(H.level - strip.hi)) > 1e-12)
    throw std::invalid_argument(
        "main_inequality_trace: the strip must end on H");
  if (!(alpha < strip.width()))
    throw std::invalid_argument("main_inequality_trace: alpha exceeds strip");

  TraceRow row;
  row.h = h;
  row.delta = delta;
  row.alpha = alpha;

  const CurveSeries phi_r = restriction_series(f, h, H);
  // hD_nu phi restricted to H
  const TrigPoly phi = f.trig_poly(h);
  CurveSeries dnu_r;
  dnu_r.length = H.length;
  for (const auto& [k, c] : phi)
    dnu_r.add(k.first, c * (kTwoPi * h * k.second) *
                           std::exp(kI * (kTwoPi * k.second * H.level)));

  row.bnorm_dnu = std::pow(curve_microlocalize(dnu_r, h, delta).l2_norm(), 2);
  const Real bphi = std::pow(curve_microlocalize(phi_r, h, delta).l2_norm(), 2);
  row.bnorm_phi = (1.0 - 2 * delta * delta) * bphi;
  row.lhs_sum = row.bnorm_dnu + row.bnorm_phi;

  const TorusOperator A = TorusOperator::collar_test(delta, alpha, H);
  const Complex comm =
      strip_inner_exact(commutator_poly(A, phi, h), phi, strip);
  row.commutator_re = std::real(comm);
  row.commutator_im = std::imag(comm);

  const DefectMeasure mu = analytic_defect_measure(f, h);
  const Symbol bracket_main = collar_bracket_symbol(H, delta, alpha, 1);
  const Real lo = strip.lo, hi = strip.hi;
  // Direction deltas with uniform base integrate in closed form: the x1
  // average keeps only the m1 = 0 modes and x2 runs over the strip.
  for (const auto& comp : mu.components) {
    if (const auto* dd = std::get_if<DirectionDelta>(&comp)) {
      Complex acc{0, 0};
      for (const auto& mode : bracket_main.modes)
        if (mode.m[0] == 0)
          acc += mode.coeff(dd->xi0) * segment(mode.m[1], lo, hi);
      row.measure_side += dd->mass * std::real(acc);
    } else {
      DefectMeasure single{mu.manifold, {comp}};
      row.measure_side += integrate_measure(single, [&](const PhasePoint& p) {
        if (wrap(p.x[1] - lo) >= hi - lo) return 0.0;  // outside the strip
        return std::real(bracket_main.eval(p.x, p.xi));
      });
    }
  }
  row.r_alpha_delta = 0.0;  // q_delta vanishes identically on the flat torus

  const Vec2 d = tangent_covector(H, 0.0);
  const Vec2 nu = normal_covector(H, 0.0);
  for (const auto& comp : mu.components)
    if (const auto* dd = std::get_if<DirectionDelta>(&comp))
      if (std::abs(dd->xi0.dot(d)) < 1e-9)
        row.conormal_limit += 2 * dd->mass * std::pow(dd->xi0.dot(nu), 2);

  row.gap = row.commutator_re - row.lhs_sum;
  return row;
}

}  // namespace conormal
