#include "conormal/cutoffs.hpp"

#include <cmath>
#include <stdexcept>

namespace conormal {

namespace {
inline Real bump_piece(Real s) { return s > 0 ? std::exp(-1.0 / s) : 0.0; }
inline Real bump_piece_derivative(Real s) {
  return s > 0 ? std::exp(-1.0 / s) / (s * s) : 0.0;
}
}  // namespace

Real smooth_ramp(Real s) {
  if (s <= 0) return 0.0;
  if (s >= 1) return 1.0;
  const Real f = bump_piece(s);
  const Real g = bump_piece(1.0 - s);
  return f / (f + g);
}

Real smooth_ramp_derivative(Real s) {
  if (s <= 0 || s >= 1) return 0.0;
  const Real f = bump_piece(s);
  const Real g = bump_piece(1.0 - s);
  const Real df = bump_piece_derivative(s);
  const Real dg = -bump_piece_derivative(1.0 - s);
  const Real denom = f + g;
  return (df * denom - f * (df + dg)) / (denom * denom);
}

PlateauCutoff::PlateauCutoff(Real inner, Real outer)
    : inner_(inner), outer_(outer) {
  if (!(0 < inner && inner < outer))
    throw std::invalid_argument("PlateauCutoff: need 0 < inner < outer");
}

Real PlateauCutoff::operator()(Real t) const {
  const Real r = std::abs(t);
  if (r <= inner_) return 1.0;
  if (r >= outer_) return 0.0;
  return smooth_ramp((outer_ - r) / (outer_ - inner_));
}

Real PlateauCutoff::derivative(Real t) const {
  const Real r = std::abs(t);
  if (r <= inner_ || r >= outer_) return 0.0;
  const Real width = outer_ - inner_;
  Real d = -smooth_ramp_derivative((outer_ - r) / width) / width;
  return t < 0 ? -d : d;
}

Real PlateauCutoff::lipschitz_scale() const {
  Real sup = 0.0;
  const int n = 2000;
  for (int i = 0; i <= n; ++i) {
    const Real t = inner_ + (outer_ - inner_) * i / n;
    sup = std::max(sup, std::abs(derivative(t)));
  }
  return sup * (outer_ - inner_);
}

ChartWindow ChartWindow::make(int J, Real sigma) {
  ChartWindow w;
  w.weights.resize(J + 1);
  Real total = 0.0;
  for (int j = 0; j <= J; ++j) {
    w.weights[j] = std::exp(-0.5 * (j / sigma) * (j / sigma));
    total += (j == 0 ? 1.0 : 2.0) * w.weights[j];
  }
  for (auto& x : w.weights) x /= total;
  return w;
}

}  // namespace conormal
