#include "conormal/symbol.hpp"

#include <cmath>

namespace conormal {

Symbol Symbol::multiplier(std::function<Complex(const Vec2&)> f) {
  Symbol a;
  a.modes.push_back({Vec2i(0, 0), std::move(f)});
  return a;
}

Symbol Symbol::separable(const Vec2i& m,
                         std::function<Complex(const Vec2&)> f) {
  Symbol a;
  a.modes.push_back({m, std::move(f)});
  return a;
}

VecX periodized_cutoff_coefficients(const PlateauCutoff& chi, int truncation) {
  // The cutoff is supported well inside (-1/2, 1/2); trapezoid projection
  // is spectrally accurate.
  const int n = 4096;
  VecX c(truncation + 1);
  for (int j = 0; j <= truncation; ++j) {
    Real acc = 0;
    for (int i = 0; i < n; ++i) {
      const Real t = -0.5 + Real(i) / n;
      acc += chi(t) * std::cos(kTwoPi * j * t);
    }
    c[j] = acc / n;
  }
  return c;
}

namespace {

Symbol collar_symbol_impl(const Hypersurface& h, Real delta, Real alpha,
                          int power, int truncation, bool bracket) {
  if (h.kind != HypersurfaceKind::TorusCircle)
    throw std::invalid_argument("collar_symbol: torus coordinate circle only");
  if (!(alpha < 2 * h.collar))
    throw std::invalid_argument("collar_symbol: alpha exceeds the collar");
  const PlateauCutoff chi = chi_alpha(alpha);
  const PlateauCutoff beta_cut = chi_delta(delta);
  const VecX c = periodized_cutoff_coefficients(chi, truncation);
  const int axis = h.axis;
  const Real level = h.level;
  const int p = bracket ? power + 1 : power;

  auto xi_split = [axis](const Vec2& xi) {
    return axis == 2 ? std::pair<Real, Real>{xi[0], xi[1]}
                     : std::pair<Real, Real>{xi[1], xi[0]};
  };

  Symbol a;
  Symbol::CollarData data;
  data.delta = delta;
  data.alpha = alpha;
  data.power = p;
  data.axis = axis;
  data.level = level;
  data.lipschitz_scale = chi.lipschitz_scale();
  a.collar = data;

  for (int j = -truncation; j <= truncation; ++j) {
    Complex base = c[std::abs(j)] * std::exp(-kI * (kTwoPi * j * level));
    if (bracket) base *= kI * (kTwoPi * j) * 2.0;  // 2 chi' from the bracket
    if (std::abs(base) < 1e-18) continue;
    const Vec2i m = axis == 2 ? Vec2i(0, j) : Vec2i(j, 0);
    a.add_mode(m, [base, beta_cut, p, xi_split](const Vec2& xi) {
      const auto [xt, xn] = xi_split(xi);
      const Real b = beta_cut(std::abs(xt));
      return base * (b * b) * std::pow(xn, p);
    });
  }
  return a;
}

}  // namespace

Symbol collar_symbol(const Hypersurface& h, Real delta, Real alpha, int power,
                     int truncation) {
  return collar_symbol_impl(h, delta, alpha, power, truncation, false);
}

Symbol collar_bracket_symbol(const Hypersurface& h, Real delta, Real alpha,
                             int power, int truncation) {
  return collar_symbol_impl(h, delta, alpha, power, truncation, true);
}

Symbol poisson_bracket_with_energy(const Symbol& a) {
  Symbol b;
  for (const auto& mode : a.modes) {
    const Vec2i m = mode.m;
    auto f = mode.coeff;
    b.add_mode(m, [m, f](const Vec2& xi) {
      return Complex(0, 4 * kPi) * (xi[0] * m[0] + xi[1] * m[1]) * f(xi);
    });
  }
  return b;
}

}  // namespace conormal
