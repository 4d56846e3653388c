#ifndef CONORMAL_RESTRICTION_HPP
#define CONORMAL_RESTRICTION_HPP

#include <functional>
#include <optional>
#include <vector>

#include "conormal/eigenfamily.hpp"
#include "conormal/manifold.hpp"

namespace conormal {

// ---------------------------------------------------------------------------
// Hypersurface averages, localized and microlocalized variants, and the
// log-log decay fits that quantify them along an h ladder.
// ---------------------------------------------------------------------------

/// Spectral quadrature of weight * phi_h over H.  Deterministic; a doubling
/// self-check guards resolution (ResolutionError on persistent disagreement).
Complex boundary_average(
    const EigenFamily& f, Real h, const Hypersurface& H,
    const std::function<Complex(Real)>* weight = nullptr);

/// Same with integrand h * d(phi_h)/d(nu).
Complex normal_average(const EigenFamily& f, Real h, const Hypersurface& H,
                       const std::function<Complex(Real)>* weight = nullptr);

/// Finite union of parameter intervals on a curve of length L.
struct ArcSet {
  Real length = 1.0;
  std::vector<std::pair<Real, Real>> intervals;

  static ArcSet full(Real length) { return {length, {}}; }
  bool is_full() const { return intervals.empty(); }
  Real measure() const;
  std::vector<Real> boundary_points() const;
};

/// Mollified indicator-of-boundary cutoff: 1 within h^{1-eps} of the arc
/// endpoints, 0 beyond 2 h^{1-eps}.  Bands must be disjoint.
class SmoothIndicator {
 public:
  SmoothIndicator(const ArcSet& arcs, Real h, Real eps);

  Real operator()(Real s) const;
  Real bandwidth() const { return width_; }
  /// Recorded derivative constant: sup |chi'| * h^{1-eps}.
  Real derivative_constant() const;
  /// Closed-form || chi_h 1_A ||_{L^2}: each endpoint contributes one
  /// inside-of-A band of plateau plus ramp.
  Real l2_norm_inside() const;
  bool is_zero() const { return boundary_.empty(); }

 private:
  Real length_;
  Real width_;
  std::vector<Real> boundary_;
};

/// || (1 - Op_h(beta_delta))^* 1_A ||_{L^2(H)} from the exact Fourier
/// coefficients of the indicator; the tail above the cutoff is summed via
/// Parseval, so the value is exact up to rounding.
Real rough_projection_norm(const ArcSet& arcs, Real delta, Real h);

/// Composite Gauss-Legendre average of phi_h over the arcs (exact
/// endpoints).
Complex local_average(const EigenFamily& f, Real h, const Hypersurface& H,
                      const ArcSet& arcs);

/// L^2(H) norm of the restriction, optionally after the tangential
/// microlocalizer Op_h(beta_delta).
Real restriction_norm(const EigenFamily& f, Real h, const Hypersurface& H,
                      std::optional<Real> delta = {});

struct DecayRecord {
  Real h = 0;
  Complex avg{0, 0};
  Complex normal_avg{0, 0};
  Real l2_restriction = 0;
  Real l2_normal = 0;
  Real beta_delta = 0;           // 0 when no microlocalizer was applied
  Real microlocalized_norm = 0;
};

DecayRecord decay_record(const EigenFamily& f, Real h, const Hypersurface& H,
                         std::optional<Real> delta = {});

struct FitResult {
  Real slope = 0;
  Real intercept = 0;
  Real band95 = 0;       // 95% half-width on the slope
  Real residual_rms = 0;
  int n_used = 0;
  int n_filtered = 0;    // nonpositive values dropped
};

struct FitOptions {
  Real drop_top_fraction = 0.2;  // discard the largest h (pre-asymptotic)
  Real value_floor = 0.0;        // values <= floor count as filtered
};

/// Least-squares slope of log(value) against log(h).  Needs >= 5 surviving
/// points, else FitError.
FitResult decay_fit(const std::vector<std::pair<Real, Real>>& h_value,
                    const FitOptions& opts = {});

}  // namespace conormal

#endif  // CONORMAL_RESTRICTION_HPP
