#ifndef CONORMAL_MEASURES_HPP
#define CONORMAL_MEASURES_HPP

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "conormal/eigenfamily.hpp"
#include "conormal/manifold.hpp"
#include "conormal/symbol.hpp"

namespace conormal {

// ---------------------------------------------------------------------------
// Structured invariant measures on the unit cotangent bundle, flow tubes
// mu_H(A) = mu( U_{|s|<=t0} G^s A ) / (2 t0), and the conormal-mass
// diagnostic built from them.
// ---------------------------------------------------------------------------

/// Fixed covector direction with uniform base density on the torus.
struct DirectionDelta {
  Vec2 xi0;   // unit covector
  Real mass;
};

/// Uniform density along one closed flow orbit.
struct GeodesicAtom {
  PhasePoint start;  // unit phase point; the orbit is G^t(start)
  Real period;
  Real mass;
};

/// Rotation-invariant measure on the covectors tangent to sphere
/// meridians: uniform over (meridian angle, orientation, arc parameter).
struct MeridianFamily {
  Real mass;
};

/// Constant multiple of normalized Liouville measure on S*T^2.
struct LiouvilleDensity {
  Real mass;
};

using MeasureComponent =
    std::variant<DirectionDelta, GeodesicAtom, MeridianFamily, LiouvilleDensity>;

struct DefectMeasure {
  ModelManifold manifold;
  std::vector<MeasureComponent> components;

  Real total_mass() const;
};

/// The measure each implemented family concentrates on.  Shell families
/// need the ladder position (their mixture depends on the shell).
DefectMeasure analytic_defect_measure(const EigenFamily& f,
                                      std::optional<Real> h = {});

/// Normalized Liouville measure itself (torus).
DefectMeasure liouville_measure_torus();

/// int F d(mu) for a phase-space observable, component-wise quadrature.
Real integrate_measure(const DefectMeasure& mu,
                       const std::function<Real(const PhasePoint&)>& F,
                       int resolution = 96);

/// int a d(mu) for a torus symbol (real part).
Real integrate_symbol(const DefectMeasure& mu, const Symbol& a,
                      int resolution = 96);

/// Pushforward under G^t: int (F o G^t) d(mu).
Real integrate_flowed(const DefectMeasure& mu, Real t,
                      const std::function<Real(const PhasePoint&)>& F,
                      int resolution = 96);

/// Length of a union of circular intervals given as (center, halfwidth);
/// the thickened-crossing bookkeeping behind orbit tube measures.
Real circular_union_length(std::vector<std::pair<Real, Real>> intervals,
                           Real period);

struct McOptions {
  long long samples = 1'000'000;
  std::uint64_t seed = 1;
  int strata = 10;  // per axis of (x1, x2, angle)
  int jobs = 1;
};

struct TubeValue {
  Real value = 0;
  Real stderr_ = 0;  // 0 for analytic components
};

/// Subset of S*_H M: tangential-frequency band, optional base arcs,
/// optional sign of the conormal component.
struct HBandRegion {
  Real xi_lo = 0.0;
  Real xi_hi = 1.0;
  std::vector<std::pair<Real, Real>> arcs;  // in arc length; empty = all of H
  int xi_n_sign = 0;                        // -1, 0 (both), +1

  bool admits(Real xi_prime, Real xi_n, Real s, Real length) const;
  Real arc_length(Real length) const;
};

struct TubeRegion {
  Hypersurface H;
  HBandRegion band;
  Real t0;
};

/// (1/2t0) mu( U_{|s|<=t0} G^s(band over H) ).
TubeValue tube_measure(const DefectMeasure& mu, const TubeRegion& region,
                       const McOptions& mc = {});

/// mu( U_{t in [t_lo, t_hi]} G^t(band over H) ): the rectangle measure of
/// the flow-box factorization.
TubeValue flow_box_measure(const DefectMeasure& mu, const Hypersurface& H,
                           Real t_lo, Real t_hi, const HBandRegion& band,
                           const McOptions& mc = {});

/// mu of the collar slab {x_n in [w_lo, w_hi], direction in band}.
TubeValue collar_slab_measure(const DefectMeasure& mu, const Hypersurface& H,
                              Real w_lo, Real w_hi, const HBandRegion& band,
                              const McOptions& mc = {});

enum class Verdict { Diffuse, Concentrated, Indeterminate };

std::string to_string(Verdict v);

struct DiagnosticRow {
  Real delta;
  Real t0;
  Real quotient;
  Real stderr_;
};

struct DiagnosticReport {
  std::vector<DiagnosticRow> rows;
  Real estimate = 0;
  Real estimate_stderr = 0;
  Verdict verdict = Verdict::Indeterminate;
  Real atol = 1e-3;
  std::string note;
};

struct DiagnosticOptions {
  Real atol = 1e-3;
  McOptions mc;
};

/// Tube quotients over the (delta, t0) grid, last-value extrapolation in
/// delta with a monotonicity check, and the diffuse/concentrated verdict.
DiagnosticReport conormal_diagnostic(const DefectMeasure& mu,
                                     const Hypersurface& H,
                                     const std::vector<Real>& deltas,
                                     const std::vector<Real>& t0s,
                                     const DiagnosticOptions& opts = {});

struct FactorizationResult {
  Real interval_residual = 0;
  Real density_residual = 0;
  Real stderr_ = 0;
  Real sigma_measure = 0;  // mu_Sigma(B) from the reference interval
  Real c_estimate = 0;     // mu_Sigma(B) / leb(B), the Liouville constant
};

/// Checks mu(iota(I x B)) = |I| mu_Sigma(B) with mu_Sigma estimated from
/// the reference interval [-eps, eps], plus the |xi_n|^{-1} collar density
/// form via the x_n marginal.  B must stay away from the glancing set by
/// the margin delta.
FactorizationResult factorization_check(const DefectMeasure& mu,
                                        const Hypersurface& H, Real t_lo,
                                        Real t_hi, const HBandRegion& B,
                                        Real delta, Real eps_ref = 0.05,
                                        const McOptions& mc = {});

}  // namespace conormal

#endif  // CONORMAL_MEASURES_HPP
