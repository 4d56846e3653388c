#include "conormal/quantize.hpp"

#include <cmath>

namespace conormal {

TrigPoly apply_op_poly(const TestOperator& op, const TrigPoly& u) {
  TrigPoly out;
  for (const auto& [k, c] : u) {
    const Vec2 xi = kTwoPi * op.h * Vec2(k.first, k.second);
    for (const auto& mode : op.symbol.modes)
      out.add(Vec2i(k.first + mode.m[0], k.second + mode.m[1]),
              c * mode.coeff(xi));
  }
  return out;
}

SampledFunction apply_op(const TestOperator& op, const TrigPoly& u, int n) {
  const int needed = 2 * (u.max_abs_component() + op.symbol.x_order()) + 1;
  if (n < needed)
    throw AliasingError("apply_op: grid of size " + std::to_string(n) +
                        " aliases modes; need >= " + std::to_string(needed));
  const TrigPoly v = apply_op_poly(op, u);
  SampledFunction s;
  s.n = n;
  s.values.resize(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      s.values[i * n + j] = v.eval(Vec2(Real(i) / n, Real(j) / n));
  return s;
}

Complex matrix_element(const TestOperator& op, const TrigPoly& u) {
  Complex acc{0, 0};
  for (const auto& [k, c] : u) {
    const Vec2 xi = kTwoPi * op.h * Vec2(k.first, k.second);
    for (const auto& mode : op.symbol.modes) {
      const Complex pair =
          u.coeff(Vec2i(k.first + mode.m[0], k.second + mode.m[1]));
      if (pair == Complex{0, 0}) continue;
      acc += mode.coeff(xi) * c * std::conj(pair);
    }
  }
  return acc;
}

Complex matrix_element(const Symbol& a, const EigenFamily& f, Real h) {
  if (!f.is_torus_trig())
    throw std::invalid_argument(
        "matrix_element: torus families only (sphere measures are handled "
        "analytically)");
  return matrix_element(TestOperator{a, h}, f.trig_poly(h));
}

CurveSeries curve_microlocalize(const CurveSeries& v, Real h, Real delta) {
  const PlateauCutoff cut = chi_delta(delta);
  CurveSeries out;
  out.length = v.length;
  for (const auto& [m, c] : v.modes) {
    const Real mult = cut(std::abs(kTwoPi * h * m / v.length));
    if (mult != 0.0) out.add(m, mult * c);
  }
  return out;
}

Real windowed_multiplier(const ChartWindow& w, Real h, Real delta, Real length,
                         long long m) {
  const PlateauCutoff cut = chi_delta(delta);
  Real acc = 0;
  const int J = int(w.weights.size()) - 1;
  for (int j = -J; j <= J; ++j)
    acc += w.weights[std::abs(j)] *
           cut(std::abs(kTwoPi * h * (m - j) / length));
  return acc;
}

Real microlocalize_defect(const CurveSeries& u, Real h, Real delta,
                          const std::optional<ChartWindow>& window) {
  if (!window) {
    const CurveSeries v = curve_microlocalize(u, h, delta);
    return std::abs(u.integral() - v.integral());
  }
  const Real m0 = windowed_multiplier(*window, h, delta, u.length, 0);
  return u.length * std::abs(u.mean()) * std::abs(1.0 - m0);
}

namespace {

// int_{a}^{b} e^{2 pi i n t} dt
Complex segment_integral(long long n, Real a, Real b) {
  if (n == 0) return Complex(b - a, 0);
  const Complex den(0, kTwoPi * n);
  return (std::exp(kI * (kTwoPi * n * b)) - std::exp(kI * (kTwoPi * n * a))) /
         den;
}

}  // namespace

PhaseHistogram phase_space_histogram(const EigenFamily& f, Real h, int nx,
                                     int nangle) {
  if (nx < 1 || nangle < 1)
    throw std::invalid_argument("phase_space_histogram: empty grid");
  const TrigPoly u = f.trig_poly(h);

  // Bin modes by the angle of xi = 2 pi h k.
  std::vector<std::vector<std::pair<Vec2i, Complex>>> bins(nangle);
  for (const auto& [k, c] : u) {
    Real ang = std::atan2(Real(k.second), Real(k.first));
    if (ang < 0) ang += kTwoPi;
    int b = std::min<int>(nangle - 1, int(ang / (kTwoPi / nangle)));
    bins[b].push_back({Vec2i(k.first, k.second), c});
  }

  PhaseHistogram hist;
  hist.nx = nx;
  hist.nangle = nangle;
  hist.weights = Eigen::MatrixXd::Zero(nx * nx, nangle);
  for (int b = 0; b < nangle; ++b) {
    for (const auto& [k, c] : bins[b]) {
      for (const auto& [kp, cp] : bins[b]) {
        const long long d1 = k[0] - kp[0];
        const long long d2 = k[1] - kp[1];
        const Complex pair = c * std::conj(cp);
        for (int i = 0; i < nx; ++i) {
          const Complex e1 =
              segment_integral(d1, Real(i) / nx, Real(i + 1) / nx);
          if (std::abs(e1) < 1e-18) continue;
          for (int j = 0; j < nx; ++j) {
            const Complex e2 =
                segment_integral(d2, Real(j) / nx, Real(j + 1) / nx);
            hist.weights(i * nx + j, b) += std::real(pair * e1 * e2);
          }
        }
      }
    }
  }
  // Clip the tiny negative dust left by cancellation in the pair sums.
  hist.weights = hist.weights.cwiseMax(0.0);
  hist.total = hist.weights.sum();
  return hist;
}

}  // namespace conormal
