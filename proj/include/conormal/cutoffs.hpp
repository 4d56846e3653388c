#ifndef CONORMAL_CUTOFFS_HPP
#define CONORMAL_CUTOFFS_HPP

#include <vector>

#include "conormal/core.hpp"

namespace conormal {

/// C-infinity ramp g with g = 0 for s <= 0, g = 1 for s >= 1, built from
/// the exp(-1/s) mollifier.
Real smooth_ramp(Real s);
Real smooth_ramp_derivative(Real s);

/// Even plateau cutoff: 1 on |t| <= inner, 0 on |t| >= outer, smooth ramp
/// in between.  chi_alpha(t) of the interior calculus is
/// PlateauCutoff(alpha/2, alpha); chi_delta(r) restricted to r >= 0 is the
/// tangential-frequency cutoff behind beta_delta.
class PlateauCutoff {
 public:
  PlateauCutoff(Real inner, Real outer);

  Real operator()(Real t) const;
  Real derivative(Real t) const;

  Real inner() const { return inner_; }
  Real outer() const { return outer_; }

  /// sup |chi'| * (outer - inner), sampled; recorded rather than enforced.
  Real lipschitz_scale() const;

 private:
  Real inner_;
  Real outer_;
};

/// chi_alpha: 1 on |t| <= alpha/2, 0 on |t| >= alpha.
inline PlateauCutoff chi_alpha(Real alpha) {
  return PlateauCutoff(0.5 * alpha, alpha);
}

/// chi_delta: 1 on [0, delta/2], 0 on [delta, infinity); used as
/// beta_delta(xi') = chi_delta(|xi'|).
inline PlateauCutoff chi_delta(Real delta) {
  return PlateauCutoff(0.5 * delta, delta);
}

/// Spatial window for the chart-localized quantization of a curve
/// multiplier.  The window is the trigonometric kernel with Fourier
/// weights w_j ~ exp(-(j/sigma)^2/2), normalized to sum 1, so the windowed
/// operator acts on mode m as sum_j w_j * chi(xi_{m-j}).
struct ChartWindow {
  std::vector<Real> weights;  // index 0..J, symmetric
  static ChartWindow make(int J = 8, Real sigma = 0.6);
};

}  // namespace conormal

#endif  // CONORMAL_CUTOFFS_HPP
