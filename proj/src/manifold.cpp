#include "conormal/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace conormal {

namespace {

int gcd_abs(int a, int b) { return std::gcd(std::abs(a), std::abs(b)); }

// Ambient coordinate frame of the sphere chart at (theta, omega):
// d/dtheta has length cos(omega), d/domega is unit.
Vec3 sphere_e_theta(const Vec2& x) {
  return Vec3(-std::sin(x[0]) * std::cos(x[1]),
              std::cos(x[0]) * std::cos(x[1]), 0.0);
}
Vec3 sphere_e_omega(const Vec2& x) {
  return Vec3(-std::cos(x[0]) * std::sin(x[1]),
              -std::sin(x[0]) * std::sin(x[1]), std::cos(x[1]));
}

// Raise the chart covector to an ambient velocity vector.
Vec3 sphere_raise(const Vec2& x, const Vec2& xi) {
  const Real c = std::cos(x[1]);
  return (xi[0] / (c * c)) * sphere_e_theta(x) + xi[1] * sphere_e_omega(x);
}

// Lower an ambient tangent vector to chart covector components.
Vec2 sphere_lower(const Vec2& x, const Vec3& v) {
  return Vec2(v.dot(sphere_e_theta(x)), v.dot(sphere_e_omega(x)));
}

}  // namespace

Real metric_norm(const ModelManifold& m, const Vec2& x, const Vec2& xi) {
  if (m.is_torus()) return xi.norm();
  const Real c = std::cos(x[1]);
  return std::sqrt(xi[0] * xi[0] / (c * c) + xi[1] * xi[1]);
}

Vec3 sphere_embed(const Vec2& x) {
  return Vec3(std::cos(x[0]) * std::cos(x[1]),
              std::sin(x[0]) * std::cos(x[1]), std::sin(x[1]));
}

Vec2 sphere_chart(const Vec3& p) {
  const Real z = std::clamp(p[2], -1.0, 1.0);
  Real theta = std::atan2(p[1], p[0]);
  if (theta < 0) theta += kTwoPi;
  if (std::abs(p[0]) < 1e-15 && std::abs(p[1]) < 1e-15) theta = 0.0;
  return Vec2(theta, std::asin(z));
}

PhasePoint geodesic_flow(const ModelManifold& m, const PhasePoint& p, Real t) {
  if (std::abs(metric_norm(m, p.x, p.xi) - 1.0) > 1e-9)
    throw NormalizationError("geodesic_flow: phase point is not unit");
  if (m.is_torus()) return {wrap(Vec2(p.x + t * p.xi)), p.xi};

  const Vec3 pos = sphere_embed(p.x);
  const Vec3 vel = sphere_raise(p.x, p.xi);
  const Vec3 pos_t = pos * std::cos(t) + vel * std::sin(t);
  const Vec3 vel_t = -pos * std::sin(t) + vel * std::cos(t);
  const Vec2 x_t = sphere_chart(pos_t);
  return {x_t, sphere_lower(x_t, vel_t)};
}

Hypersurface Hypersurface::torus_circle(int axis, Real level) {
  Hypersurface h;
  h.host = ModelManifold::torus2();
  h.kind = HypersurfaceKind::TorusCircle;
  h.axis = axis;
  h.level = wrap(level);
  h.length = 1.0;
  h.collar = 0.25;
  if (axis != 1 && axis != 2)
    throw std::invalid_argument("torus_circle: axis must be 1 or 2");
  return h;
}

Hypersurface Hypersurface::torus_geodesic(int p, int q, const Vec2& base) {
  if (p == 0 && q == 0)
    throw std::invalid_argument("torus_geodesic: zero direction");
  if (gcd_abs(p, q) != 1)
    throw std::invalid_argument("torus_geodesic: direction must be primitive");
  Hypersurface h;
  h.host = ModelManifold::torus2();
  h.kind = HypersurfaceKind::TorusGeodesic;
  h.direction = Vec2i(p, q);
  h.base = wrap(base);
  h.length = std::sqrt(Real(p) * p + Real(q) * q);
  // Parallel copies of the geodesic are 1/L apart.
  h.collar = std::min(0.25, 0.4 / h.length);
  return h;
}

Hypersurface Hypersurface::sphere_latitude(Real omega0) {
  if (std::abs(omega0) >= kPi / 2 - 0.1)
    throw std::invalid_argument("sphere_latitude: too close to a pole");
  Hypersurface h;
  h.host = ModelManifold::sphere2();
  h.kind = HypersurfaceKind::SphereLatitude;
  h.omega0 = omega0;
  h.length = kTwoPi * std::cos(omega0);
  h.collar = std::min(kPi / 4, kPi / 2 - std::abs(omega0) - 0.05);
  return h;
}

Hypersurface Hypersurface::sphere_great_circle(const Vec3& a, const Vec3& b) {
  Hypersurface h;
  h.host = ModelManifold::sphere2();
  h.kind = HypersurfaceKind::SphereGreatCircle;
  h.frame_a = a.normalized();
  h.frame_b = (b - b.dot(h.frame_a) * h.frame_a).normalized();
  h.length = kTwoPi;
  h.collar = kPi / 4;
  return h;
}

Hypersurface Hypersurface::sphere_meridian(Real theta0) {
  return sphere_great_circle(Vec3(std::cos(theta0), std::sin(theta0), 0.0),
                             Vec3(0.0, 0.0, 1.0));
}

std::string Hypersurface::describe() const {
  std::ostringstream os;
  switch (kind) {
    case HypersurfaceKind::TorusCircle:
      os << "torus circle {x" << axis << " = " << level << "}";
      break;
    case HypersurfaceKind::TorusGeodesic:
      os << "torus geodesic dir (" << direction[0] << "," << direction[1]
         << ")"
         << " [strip domain; normal fixed to (-q,p)/L]";
      break;
    case HypersurfaceKind::SphereLatitude:
      os << "sphere latitude omega = " << omega0;
      break;
    case HypersurfaceKind::SphereGreatCircle:
      os << "sphere great circle";
      break;
  }
  return os.str();
}

Vec2 curve_point(const Hypersurface& h, Real s) {
  switch (h.kind) {
    case HypersurfaceKind::TorusCircle:
      return h.axis == 2 ? Vec2(wrap(s), h.level) : Vec2(h.level, wrap(s));
    case HypersurfaceKind::TorusGeodesic: {
      const Vec2 d = h.direction.cast<Real>() / h.length;
      return wrap(Vec2(h.base + s * d));
    }
    case HypersurfaceKind::SphereLatitude:
      return Vec2(wrap(s / std::cos(h.omega0), kTwoPi), h.omega0);
    case HypersurfaceKind::SphereGreatCircle: {
      const Vec3 p = h.frame_a * std::cos(s) + h.frame_b * std::sin(s);
      return sphere_chart(p);
    }
  }
  throw std::logic_error("curve_point: unreachable");
}

Vec2 normal_covector(const Hypersurface& h, Real s) {
  switch (h.kind) {
    case HypersurfaceKind::TorusCircle:
      return h.axis == 2 ? Vec2(0, 1) : Vec2(1, 0);
    case HypersurfaceKind::TorusGeodesic:
      return Vec2(-h.direction[1], h.direction[0]) / h.length;
    case HypersurfaceKind::SphereLatitude:
      return Vec2(0, 1);  // d(omega), unit
    case HypersurfaceKind::SphereGreatCircle: {
      const Vec3 n = h.frame_a.cross(h.frame_b);
      const Vec2 x = curve_point(h, s);
      return sphere_lower(x, n);
    }
  }
  throw std::logic_error("normal_covector: unreachable");
}

Vec2 tangent_covector(const Hypersurface& h, Real s) {
  switch (h.kind) {
    case HypersurfaceKind::TorusCircle:
      return h.axis == 2 ? Vec2(1, 0) : Vec2(0, 1);
    case HypersurfaceKind::TorusGeodesic:
      return h.direction.cast<Real>() / h.length;
    case HypersurfaceKind::SphereLatitude: {
      const Vec2 x = curve_point(h, s);
      const Vec3 t = sphere_e_theta(x) / std::cos(h.omega0);
      return sphere_lower(x, t);
    }
    case HypersurfaceKind::SphereGreatCircle: {
      const Vec3 t = -h.frame_a * std::sin(s) + h.frame_b * std::cos(s);
      const Vec2 x = curve_point(h, s);
      return sphere_lower(x, t);
    }
  }
  throw std::logic_error("tangent_covector: unreachable");
}

Vec2 fermi_point(const Hypersurface& h, Real s, Real x_n) {
  switch (h.kind) {
    case HypersurfaceKind::TorusCircle:
    case HypersurfaceKind::TorusGeodesic: {
      const Vec2 nu = normal_covector(h, s);
      return wrap(Vec2(curve_point(h, s) + x_n * nu));
    }
    case HypersurfaceKind::SphereLatitude:
      return Vec2(wrap(s / std::cos(h.omega0), kTwoPi), h.omega0 + x_n);
    case HypersurfaceKind::SphereGreatCircle: {
      const Vec3 p = h.frame_a * std::cos(s) + h.frame_b * std::sin(s);
      const Vec3 n = h.frame_a.cross(h.frame_b);
      return sphere_chart(p * std::cos(x_n) + n * std::sin(x_n));
    }
  }
  throw std::logic_error("fermi_point: unreachable");
}

FermiCoords fermi_coords(const Hypersurface& h, const Vec2& q) {
  switch (h.kind) {
    case HypersurfaceKind::TorusCircle: {
      const Real x_n = wrap_signed(q[h.axis - 1] - h.level);
      if (std::abs(x_n) >= h.collar)
        throw OutOfCollarError("fermi_coords: point outside collar");
      const Real s = h.axis == 2 ? q[0] : q[1];
      return {wrap(s), x_n};
    }
    case HypersurfaceKind::TorusGeodesic: {
      const Vec2 d = h.direction.cast<Real>() / h.length;
      const Vec2 nu = normal_covector(h, 0.0);
      const int span =
          std::max(std::abs(h.direction[0]), std::abs(h.direction[1])) + 1;
      for (int i = -span; i <= span; ++i) {
        for (int j = -span; j <= span; ++j) {
          const Vec2 delta = q - h.base + Vec2(i, j);
          const Real x_n = delta.dot(nu);
          if (std::abs(x_n) < h.collar)
            return {wrap(delta.dot(d), h.length), x_n};
        }
      }
      throw OutOfCollarError("fermi_coords: point outside collar");
    }
    case HypersurfaceKind::SphereLatitude: {
      const Real x_n = q[1] - h.omega0;
      if (std::abs(x_n) >= h.collar)
        throw OutOfCollarError("fermi_coords: point outside collar");
      return {wrap(q[0] * std::cos(h.omega0), h.length), x_n};
    }
    case HypersurfaceKind::SphereGreatCircle: {
      const Vec3 p = sphere_embed(q);
      const Vec3 n = h.frame_a.cross(h.frame_b);
      const Real x_n = std::asin(std::clamp(p.dot(n), -1.0, 1.0));
      if (std::abs(x_n) >= h.collar)
        throw OutOfCollarError("fermi_coords: point outside collar");
      const Vec3 foot = (p - p.dot(n) * n).normalized();
      Real s = std::atan2(foot.dot(h.frame_b), foot.dot(h.frame_a));
      if (s < 0) s += kTwoPi;
      return {s, x_n};
    }
  }
  throw std::logic_error("fermi_coords: unreachable");
}

Real collar_metric_r(const Hypersurface& h, Real s, Real x_n, Real xi_prime) {
  switch (h.kind) {
    case HypersurfaceKind::TorusCircle:
    case HypersurfaceKind::TorusGeodesic:
      return xi_prime * xi_prime;
    case HypersurfaceKind::SphereLatitude: {
      const Real ratio = std::cos(h.omega0) / std::cos(h.omega0 + x_n);
      return xi_prime * xi_prime * ratio * ratio;
    }
    case HypersurfaceKind::SphereGreatCircle: {
      const Real c = std::cos(x_n);
      (void)s;
      return xi_prime * xi_prime / (c * c);
    }
  }
  throw std::logic_error("collar_metric_r: unreachable");
}

CotangentSplit cotangent_split(const Hypersurface& h, const PhasePoint& p) {
  const FermiCoords fc = fermi_coords(h, p.x);  // throws if outside collar
  if (h.host.is_torus()) {
    const Vec2 d = tangent_covector(h, fc.x_prime);
    const Vec2 nu = normal_covector(h, fc.x_prime);
    const Real xp = p.xi.dot(d);
    return {xp, p.xi.dot(nu), std::abs(xp)};
  }
  // Sphere: pair the raised (ambient) vector with the Fermi chart basis
  // e' = d(fermi)/dx', e_n = d(fermi)/dx_n.
  const Vec3 v = sphere_raise(p.x, p.xi);
  Vec3 e_prime, e_n;
  if (h.kind == HypersurfaceKind::SphereLatitude) {
    e_prime = sphere_e_theta(p.x) / std::cos(h.omega0);
    e_n = sphere_e_omega(p.x);
  } else {
    const Vec3 n = h.frame_a.cross(h.frame_b);
    const Vec3 pc = h.frame_a * std::cos(fc.x_prime) +
                    h.frame_b * std::sin(fc.x_prime);
    const Vec3 tc = -h.frame_a * std::sin(fc.x_prime) +
                    h.frame_b * std::cos(fc.x_prime);
    e_prime = tc * std::cos(fc.x_n);
    e_n = -pc * std::sin(fc.x_n) + n * std::cos(fc.x_n);
  }
  const Real xp = v.dot(e_prime);
  return {xp, v.dot(e_n), std::abs(xp)};
}

std::vector<CurveQuadNode> hypersurface_quadrature(const Hypersurface& h,
                                                   int n) {
  if (n < 8)
    throw std::invalid_argument("hypersurface_quadrature: need n >= 8");
  std::vector<CurveQuadNode> nodes;
  nodes.reserve(n);
  const Real w = h.length / n;
  for (int j = 0; j < n; ++j) {
    const Real s = h.length * j / n;
    nodes.push_back({s, curve_point(h, s), w, normal_covector(h, s)});
  }
  return nodes;
}

}  // namespace conormal
