#ifndef CONORMAL_MANIFOLD_HPP
#define CONORMAL_MANIFOLD_HPP

#include <string>
#include <vector>

#include "conormal/core.hpp"

namespace conormal {

// ---------------------------------------------------------------------------
// Model geometries.  Torus2 is [0,1)^2 with the flat metric.  Sphere2 uses
// chart coordinates (theta, omega) in [0,2pi) x [-pi/2,pi/2] with metric
// d(omega)^2 + cos^2(omega) d(theta)^2; points map to the ambient unit
// sphere as (cos t cos w, sin t cos w, sin w).
// ---------------------------------------------------------------------------

enum class ManifoldKind { Torus2, Sphere2 };

struct ModelManifold {
  ManifoldKind kind = ManifoldKind::Torus2;

  static ModelManifold torus2() { return {ManifoldKind::Torus2}; }
  static ModelManifold sphere2() { return {ManifoldKind::Sphere2}; }

  bool is_torus() const { return kind == ManifoldKind::Torus2; }
  bool is_sphere() const { return kind == ManifoldKind::Sphere2; }
};

/// Point x with covector xi, both in chart components.
struct PhasePoint {
  Vec2 x;
  Vec2 xi;
};

/// |xi|_g at x.
Real metric_norm(const ModelManifold& m, const Vec2& x, const Vec2& xi);

Vec3 sphere_embed(const Vec2& x);
Vec2 sphere_chart(const Vec3& p);

/// Geodesic flow G^t of a unit phase point.  Torus2 translates along the
/// (co)vector; Sphere2 rotates along the great circle in the ambient
/// embedding.  Throws NormalizationError when | |xi|_g - 1 | > 1e-9.
PhasePoint geodesic_flow(const ModelManifold& m, const PhasePoint& p, Real t);

// ---------------------------------------------------------------------------
// Hypersurfaces: closed curves with constant-speed parametrization
// gamma : [0, L) -> M, unit normal nu pointing out of Omega_H, and a Fermi
// collar (x', x_n) -> exp_{gamma(x')}(x_n nu) of half-width `collar`.
// The side convention is x_n < 0 on Omega_H.
// ---------------------------------------------------------------------------

enum class HypersurfaceKind {
  TorusCircle,     // {x_axis = level}
  TorusGeodesic,   // closed geodesic of direction (p, q), gcd(p,q)=1
  SphereLatitude,  // {omega = omega0}; omega0 = 0 is the equator
  SphereGreatCircle
};

struct Hypersurface {
  ModelManifold host;
  HypersurfaceKind kind;

  // TorusCircle
  int axis = 2;       // coordinate held fixed (1 or 2)
  Real level = 0.0;

  // TorusGeodesic
  Vec2i direction{1, 0};
  Vec2 base{0.0, 0.0};

  // SphereLatitude
  Real omega0 = 0.0;

  // SphereGreatCircle frame: points A cos s + B sin s, normal A x B
  Vec3 frame_a{1.0, 0.0, 0.0};
  Vec3 frame_b{0.0, 1.0, 0.0};

  Real length = 1.0;
  Real collar = 0.25;

  static Hypersurface torus_circle(int axis, Real level);
  static Hypersurface torus_geodesic(int p, int q, const Vec2& base);
  static Hypersurface sphere_latitude(Real omega0);
  static Hypersurface sphere_great_circle(const Vec3& a, const Vec3& b);
  static Hypersurface sphere_equator() {
    return sphere_great_circle(Vec3(1, 0, 0), Vec3(0, 1, 0));
  }
  static Hypersurface sphere_meridian(Real theta0);

  std::string describe() const;
};

struct FermiCoords {
  Real x_prime;  // arc-length parameter along the curve
  Real x_n;      // signed normal distance, > 0 outside Omega_H
};

/// gamma(x') in chart coordinates.
Vec2 curve_point(const Hypersurface& h, Real x_prime);

/// Unit normal at gamma(x'), as chart covector components (equals the
/// chart components of the normal vector for these models).
Vec2 normal_covector(const Hypersurface& h, Real x_prime);

/// Unit tangent covector at gamma(x').
Vec2 tangent_covector(const Hypersurface& h, Real x_prime);

/// Forward Fermi map exp_{gamma(x')}(x_n nu).
Vec2 fermi_point(const Hypersurface& h, Real x_prime, Real x_n);

/// Inverse Fermi map; throws OutOfCollarError for |x_n| >= collar.
FermiCoords fermi_coords(const Hypersurface& h, const Vec2& q);

/// The function R of the collar metric: |xi|_g^2 = xi_n^2 + R(x',x_n,xi'),
/// with R(x',0,xi') = |xi'|^2.
Real collar_metric_r(const Hypersurface& h, Real x_prime, Real x_n,
                     Real xi_prime);

struct CotangentSplit {
  Real xi_prime;      // component along dx'
  Real xi_n;          // component along dx_n
  Real induced_norm;  // |xi'|_{g_H} at the foot point
};

/// Split a covector at a collar point into tangential and conormal parts.
CotangentSplit cotangent_split(const Hypersurface& h, const PhasePoint& p);

struct CurveQuadNode {
  Real s;
  Vec2 point;
  Real weight;
  Vec2 normal;
};

/// Periodic-trapezoid quadrature along the curve; weights sum to length.
/// Requires n >= 8.
std::vector<CurveQuadNode> hypersurface_quadrature(const Hypersurface& h,
                                                   int n);

}  // namespace conormal

#endif  // CONORMAL_MANIFOLD_HPP
