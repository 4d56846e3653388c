#include "conormal/measures.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace conormal {

namespace {

Real uniform01(std::mt19937_64& g) { return Real((g() >> 11)) * 0x1.0p-53; }

struct TorusCurveFrame {
  Vec2 d;
  Vec2 nu;
  Vec2 base;
  Real length;
  Real normal_period;  // spacing of parallel copies of H along nu
};

TorusCurveFrame torus_frame(const Hypersurface& H) {
  TorusCurveFrame f;
  f.d = tangent_covector(H, 0.0);
  f.nu = normal_covector(H, 0.0);
  f.length = H.length;
  if (H.kind == HypersurfaceKind::TorusCircle) {
    f.base = curve_point(H, 0.0);
    f.normal_period = 1.0;
  } else {
    f.base = H.base;
    f.normal_period = 1.0 / H.length;
  }
  return f;
}

/// Visit crossing times s in [s_lo, s_hi] of the straight orbit
/// x + s xi with H; cb(s) -> bool decides whether to keep scanning.
void torus_crossings(const TorusCurveFrame& f, const Vec2& x, const Vec2& xi,
                     Real s_lo, Real s_hi,
                     const std::function<bool(Real)>& cb) {
  const Real xi_n = xi.dot(f.nu);
  if (std::abs(xi_n) < 1e-15) return;
  const Real xn0 = (x - f.base).dot(f.nu);
  // s = (k * p - xn0) / xi_n for integer k
  const Real p = f.normal_period;
  Real a = (s_lo * xi_n + xn0) / p;
  Real b = (s_hi * xi_n + xn0) / p;
  if (a > b) std::swap(a, b);
  for (long long k = (long long)std::ceil(a - 1e-12);
       k <= (long long)std::floor(b + 1e-12); ++k) {
    const Real s = (k * p - xn0) / xi_n;
    if (s < s_lo - 1e-12 || s > s_hi + 1e-12) continue;
    if (!cb(s)) return;
  }
}

Real arcs_total(const std::vector<std::pair<Real, Real>>& arcs, Real length) {
  if (arcs.empty()) return length;
  Real t = 0;
  for (const auto& [a, b] : arcs) t += b - a;
  return t;
}

bool in_arcs(const std::vector<std::pair<Real, Real>>& arcs, Real s,
             Real length) {
  if (arcs.empty()) return true;
  const Real w = wrap(s, length);
  for (const auto& [a, b] : arcs)
    if (w >= a - 1e-12 && w <= b + 1e-12) return true;
  return false;
}

}  // namespace

/// (center, halfwidth) intervals on a circle of the given period.
Real circular_union_length(std::vector<std::pair<Real, Real>> iv, Real period) {
  if (iv.empty()) return 0;
  Real total_raw = 0;
  for (const auto& [c, r] : iv) total_raw += 2 * r;
  if (total_raw >= period) return period;
  // Normalize each interval to start in [0, period) and split the ones
  // that wrap, then sweep-merge on [0, period).
  std::vector<std::pair<Real, Real>> seg;  // (start, end)
  for (const auto& [c, r] : iv) {
    const Real start = wrap(c - r, period);
    const Real end = start + 2 * r;
    if (end <= period) {
      seg.push_back({start, end});
    } else {
      seg.push_back({start, period});
      seg.push_back({0.0, end - period});
    }
  }
  std::sort(seg.begin(), seg.end());
  Real covered = 0, cur_a = seg[0].first, cur_b = seg[0].second;
  for (std::size_t i = 1; i < seg.size(); ++i) {
    if (seg[i].first > cur_b) {
      covered += cur_b - cur_a;
      cur_a = seg[i].first;
      cur_b = seg[i].second;
    } else {
      cur_b = std::max(cur_b, seg[i].second);
    }
  }
  covered += cur_b - cur_a;
  return std::min(period, covered);
}

namespace {

struct SphereCrossing {
  Real t;
  Real xi_prime;
  Real xi_n;
  Real foot_s;
};

/// Crossings in t of the great-circle orbit pos*cos t + vel*sin t with H,
/// over one period [0, 2 pi).  Computed in the ambient embedding so that
/// crossings at the chart poles are fine.  Returns false when the orbit
/// lies inside H (tangential case).
bool sphere_orbit_crossings(const Vec3& pos, const Vec3& vel,
                            const Hypersurface& H,
                            std::vector<SphereCrossing>& out) {
  out.clear();
  auto push = [&](Real t) {
    t = wrap(t, kTwoPi);
    const Vec3 q = pos * std::cos(t) + vel * std::sin(t);
    const Vec3 v = -pos * std::sin(t) + vel * std::cos(t);
    if (H.kind == HypersurfaceKind::SphereGreatCircle) {
      const Vec3 n = H.frame_a.cross(H.frame_b);
      Real s = std::atan2(q.dot(H.frame_b), q.dot(H.frame_a));
      if (s < 0) s += kTwoPi;
      const Vec3 tang = -H.frame_a * std::sin(s) + H.frame_b * std::cos(s);
      out.push_back({t, v.dot(tang), v.dot(n), s});
    } else {
      // q_z == sin(omega0) at a latitude crossing
      const Real theta = std::atan2(q[1], q[0]);
      const Real sw = std::sin(H.omega0), cw = std::cos(H.omega0);
      const Vec3 e_om(-std::cos(theta) * sw, -std::sin(theta) * sw, cw);
      const Vec3 e_th(-std::sin(theta), std::cos(theta), 0.0);
      const Real s = wrap(theta * cw, H.length);
      out.push_back({t, v.dot(e_th), v.dot(e_om), s});
    }
    return true;
  };

  if (H.kind == HypersurfaceKind::SphereGreatCircle) {
    const Vec3 n = H.frame_a.cross(H.frame_b);
    const Real a = pos.dot(n), b = vel.dot(n);
    const Real r = std::hypot(a, b);
    if (r < 1e-13) return false;  // orbit inside H
    const Real t0 = std::atan2(-a, b);
    push(t0);
    push(t0 + kPi);
    return true;
  }
  // latitude: pos_z cos t + vel_z sin t = sin(omega0)
  const Real a = pos[2], b = vel[2];
  const Real r = std::hypot(a, b);
  const Real target = std::sin(H.omega0);
  if (r < 1e-13)
    return std::abs(target) > 1e-13;  // equatorial orbit: inside iff omega0 = 0
  if (r < std::abs(target) - 1e-13) return true;  // never reaches the latitude
  const Real phi = std::atan2(a, b);  // a cos t + b sin t = r sin(t + phi)
  const Real ratio = std::clamp(target / r, -1.0, 1.0);
  const Real base = std::asin(ratio);
  push(base - phi);
  push(kPi - base - phi);
  return true;
}

}  // namespace

bool HBandRegion::admits(Real xi_prime, Real xi_n, Real s, Real length) const {
  const Real a = std::abs(xi_prime);
  if (a < xi_lo - 1e-12 || a > xi_hi + 1e-12) return false;
  if (xi_n_sign > 0 && xi_n <= 0) return false;
  if (xi_n_sign < 0 && xi_n >= 0) return false;
  return in_arcs(arcs, s, length);
}

Real HBandRegion::arc_length(Real length) const {
  return arcs_total(arcs, length);
}

Real DefectMeasure::total_mass() const {
  Real m = 0;
  for (const auto& c : components)
    std::visit([&](const auto& comp) { m += comp.mass; }, c);
  return m;
}

DefectMeasure liouville_measure_torus() {
  DefectMeasure mu;
  mu.manifold = ModelManifold::torus2();
  mu.components.push_back(LiouvilleDensity{1.0});
  return mu;
}

DefectMeasure analytic_defect_measure(const EigenFamily& f,
                                      std::optional<Real> h) {
  DefectMeasure mu;
  mu.manifold = f.manifold();
  switch (f.kind()) {
    case FamilyKind::TorusPlaneWave: {
      const Real hh = h ? *h : f.h_for_index(1);
      const TrigPoly u = f.trig_poly(hh);
      for (const auto& [k, c] : u)
        mu.components.push_back(
            DirectionDelta{Vec2(k.first, k.second).normalized(), std::norm(c)});
      break;
    }
    case FamilyKind::TorusSuperposition:
    case FamilyKind::TorusRandomShell: {
      if (f.kind() == FamilyKind::TorusRandomShell && !h)
        throw std::invalid_argument(
            "analytic_defect_measure: random shells need the ladder h");
      const Real hh = h ? *h : f.h_for_index(1);
      const TrigPoly u = f.trig_poly(hh);
      for (const auto& [k, c] : u) {
        const Real w = std::norm(c);
        if (w > 0)
          mu.components.push_back(
              DirectionDelta{Vec2(k.first, k.second).normalized(), w});
      }
      break;
    }
    case FamilyKind::SphereZonal:
      mu.components.push_back(MeridianFamily{1.0});
      break;
    case FamilyKind::SphereGaussianBeam:
      mu.components.push_back(
          GeodesicAtom{PhasePoint{Vec2(0, 0), Vec2(-1, 0)}, kTwoPi, 1.0});
      break;
  }
  return mu;
}

Real integrate_measure(const DefectMeasure& mu,
                       const std::function<Real(const PhasePoint&)>& F,
                       int resolution) {
  const int n = std::max(resolution, 16);
  Real total = 0;
  for (const auto& comp : mu.components) {
    if (const auto* d = std::get_if<DirectionDelta>(&comp)) {
      Real acc = 0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          acc += F({Vec2((i + 0.5) / n, (j + 0.5) / n), d->xi0});
      total += d->mass * acc / (Real(n) * n);
    } else if (const auto* g = std::get_if<GeodesicAtom>(&comp)) {
      Real acc = 0;
      for (int i = 0; i < n; ++i) {
        const Real t = g->period * (i + 0.5) / n;
        acc += F(geodesic_flow(mu.manifold, g->start, t));
      }
      total += g->mass * acc / n;
    } else if (const auto* m = std::get_if<MeridianFamily>(&comp)) {
      const int nt = std::max(16, n / 2);
      Real acc = 0;
      for (int i = 0; i < nt; ++i) {
        const Real theta0 = kPi * (i + 0.5) / nt;
        const Vec3 e1(std::cos(theta0), std::sin(theta0), 0.0);
        const Vec3 e3(0, 0, 1);
        for (int sgn = -1; sgn <= 1; sgn += 2) {
          for (int j = 0; j < n; ++j) {
            const Real s = kTwoPi * (j + 0.5) / n;
            const Vec3 q = e1 * std::cos(s) + Real(sgn) * e3 * std::sin(s);
            const Vec3 v = -e1 * std::sin(s) + Real(sgn) * e3 * std::cos(s);
            const Vec2 x = sphere_chart(q);
            const Vec2 xi(v.dot(Vec3(-std::sin(x[0]) * std::cos(x[1]),
                                     std::cos(x[0]) * std::cos(x[1]), 0.0)),
                          v.dot(Vec3(-std::cos(x[0]) * std::sin(x[1]),
                                     -std::sin(x[0]) * std::sin(x[1]),
                                     std::cos(x[1]))));
            acc += F({x, xi});
          }
        }
      }
      total += m->mass * acc / (Real(nt) * 2 * n);
    } else if (const auto* lv = std::get_if<LiouvilleDensity>(&comp)) {
      Real acc = 0;
      const int na = n;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < na; ++k) {
            const Real phi = kTwoPi * (k + 0.5) / na;
            acc += F({Vec2((i + 0.5) / n, (j + 0.5) / n),
                      Vec2(std::cos(phi), std::sin(phi))});
          }
      total += lv->mass * acc / (Real(n) * n * na);
    }
  }
  return total;
}

Real integrate_symbol(const DefectMeasure& mu, const Symbol& a,
                      int resolution) {
  return integrate_measure(
      mu, [&](const PhasePoint& p) { return std::real(a.eval(p.x, p.xi)); },
      resolution);
}

Real integrate_flowed(const DefectMeasure& mu, Real t,
                      const std::function<Real(const PhasePoint&)>& F,
                      int resolution) {
  const ModelManifold m = mu.manifold;
  return integrate_measure(
      mu, [&](const PhasePoint& p) { return F(geodesic_flow(m, p, t)); },
      resolution);
}

namespace {

struct Window {
  Real lo, hi;
  Real len() const { return hi - lo; }
};

/// mu(DirectionDelta flow set): area of {x : the orbit of (x, xi0) crosses
/// the banded part of H at a time inside the window}.
Real delta_flow_area(const Hypersurface& H, const HBandRegion& band,
                     const Vec2& xi0, const Window& win) {
  const TorusCurveFrame f = torus_frame(H);
  const Real xi_t = xi0.dot(f.d);
  const Real xi_n = xi0.dot(f.nu);
  if (std::abs(xi_n) < 1e-15) return 0.0;  // tangent flow never crosses
  // The arc restriction factors through the foot length below; only the
  // frequency band and the sign gate the direction itself.
  const Real a = std::abs(xi_t);
  if (a < band.xi_lo - 1e-12 || a > band.xi_hi + 1e-12) return 0.0;
  if (band.xi_n_sign > 0 && xi_n <= 0) return 0.0;
  if (band.xi_n_sign < 0 && xi_n >= 0) return 0.0;
  const Real thickness = win.len() * std::abs(xi_n);
  if (band.arcs.empty())
    return std::min(1.0, thickness * H.length);
  if (thickness > f.normal_period)
    throw std::invalid_argument(
        "flow area: window too wide for an arc-restricted set");
  return thickness * band.arc_length(H.length);
}

/// Orbit-parameter fraction of one closed orbit spent inside the flow set.
Real orbit_flow_fraction(const ModelManifold& m, const PhasePoint& start,
                         Real period, const Hypersurface& H,
                         const HBandRegion& band, const Window& win) {
  std::vector<std::pair<Real, Real>> intervals;  // (center, halfwidth)
  const Real mid = 0.5 * (win.lo + win.hi);
  const Real half = 0.5 * win.len();
  if (m.is_torus()) {
    const TorusCurveFrame f = torus_frame(H);
    const Real xi_t = start.xi.dot(f.d);
    const Real xi_n = start.xi.dot(f.nu);
    torus_crossings(f, start.x, start.xi, 0.0, period, [&](Real s) {
      const Vec2 q = wrap(Vec2(start.x + s * start.xi));
      const Real foot = fermi_coords(H, q).x_prime;
      if (band.admits(xi_t, xi_n, foot, H.length))
        intervals.push_back({s + mid, half});
      return true;
    });
  } else {
    const Vec3 pos = sphere_embed(start.x);
    const Real c = std::cos(start.x[1]);
    const Vec3 vel = (start.xi[0] / (c * c)) *
                         Vec3(-std::sin(start.x[0]) * c,
                              std::cos(start.x[0]) * c, 0.0) +
                     start.xi[1] * Vec3(-std::cos(start.x[0]) * std::sin(start.x[1]),
                                        -std::sin(start.x[0]) * std::sin(start.x[1]),
                                        std::cos(start.x[1]));
    std::vector<SphereCrossing> cs;
    if (!sphere_orbit_crossings(pos, vel, H, cs)) {
      // orbit inside H: glancing; in the flow set iff its own split passes
      if (!band.arcs.empty())
        throw std::invalid_argument(
            "flow fraction: tangent orbit with an arc restriction");
      // the split along the orbit is |xi'| = 1, xi_n = 0
      return (band.xi_hi >= 1.0 - 1e-12 && band.xi_n_sign == 0) ? 1.0 : 0.0;
    }
    for (const auto& cr : cs)
      if (band.admits(cr.xi_prime, cr.xi_n, cr.foot_s, H.length))
        intervals.push_back({cr.t + mid, half});
  }
  return circular_union_length(std::move(intervals), period) / period;
}

TubeValue mc_torus_fraction(
    const std::function<bool(const Vec2&, Real)>& member,
    const McOptions& mc) {
  const int s = std::max(1, mc.strata);
  const long long cells = (long long)s * s * s;
  const long long per_cell =
      std::max<long long>(1, (mc.samples + cells - 1) / cells);
  std::vector<Real> phat(cells, 0.0);
  parallel_for(cells, mc.jobs, [&](std::size_t c) {
    std::mt19937_64 g(mc.seed ^ (0x9E3779B97F4A7C15ULL * (c + 1)));
    const long long i = c / (s * s), j = (c / s) % s, k = c % s;
    long long hits = 0;
    for (long long t = 0; t < per_cell; ++t) {
      const Real x1 = (i + uniform01(g)) / s;
      const Real x2 = (j + uniform01(g)) / s;
      const Real phi = kTwoPi * (k + uniform01(g)) / s;
      if (member(Vec2(x1, x2), phi)) ++hits;
    }
    phat[c] = Real(hits) / per_cell;
  });
  Real mean = 0, var = 0;
  for (Real p : phat) {
    mean += p;
    var += p * (1 - p) / per_cell;
  }
  mean /= cells;
  var /= Real(cells) * cells;
  return {mean, std::sqrt(var)};
}

TubeValue flow_set_measure(const DefectMeasure& mu, const Hypersurface& H,
                           const HBandRegion& band, const Window& win,
                           const McOptions& mc) {
  Real value = 0, var = 0;
  for (const auto& comp : mu.components) {
    if (const auto* d = std::get_if<DirectionDelta>(&comp)) {
      value += d->mass * delta_flow_area(H, band, d->xi0, win);
    } else if (const auto* g = std::get_if<GeodesicAtom>(&comp)) {
      value += g->mass * orbit_flow_fraction(mu.manifold, g->start, g->period,
                                             H, band, win);
    } else if (const auto* mf = std::get_if<MeridianFamily>(&comp)) {
      const int nt = 256;
      Real acc = 0;
      for (int i = 0; i < nt; ++i) {
        const Real theta0 = kPi * (i + 0.5) / nt;
        const Vec2 x(theta0, 0.0);
        for (int sgn = -1; sgn <= 1; sgn += 2)
          acc += orbit_flow_fraction(mu.manifold,
                                     PhasePoint{x, Vec2(0.0, Real(sgn))},
                                     kTwoPi, H, band, win);
      }
      value += mf->mass * acc / (2 * nt);
    } else if (const auto* lv = std::get_if<LiouvilleDensity>(&comp)) {
      const TorusCurveFrame f = torus_frame(H);
      auto member = [&](const Vec2& x, Real phi) {
        const Vec2 xi(std::cos(phi), std::sin(phi));
        const Real xi_t = xi.dot(f.d);
        const Real xi_n = xi.dot(f.nu);
        bool hit = false;
        torus_crossings(f, x, xi, win.lo, win.hi, [&](Real s) {
          Real foot = 0;
          if (!band.arcs.empty()) {
            const Vec2 q = wrap(Vec2(x + s * xi));
            foot = fermi_coords(H, q).x_prime;
          }
          if (band.admits(xi_t, xi_n, foot, H.length)) {
            hit = true;
            return false;
          }
          return true;
        });
        return hit;
      };
      const TubeValue v = mc_torus_fraction(member, mc);
      value += lv->mass * v.value;
      var += lv->mass * lv->mass * v.stderr_ * v.stderr_;
    }
  }
  return {value, std::sqrt(var)};
}

}  // namespace

TubeValue tube_measure(const DefectMeasure& mu, const TubeRegion& region,
                       const McOptions& mc) {
  if (!(region.t0 > 0))
    throw std::invalid_argument("tube_measure: t0 must be positive");
  const TubeValue raw = flow_set_measure(mu, region.H, region.band,
                                         {-region.t0, region.t0}, mc);
  return {raw.value / (2 * region.t0), raw.stderr_ / (2 * region.t0)};
}

TubeValue flow_box_measure(const DefectMeasure& mu, const Hypersurface& H,
                           Real t_lo, Real t_hi, const HBandRegion& band,
                           const McOptions& mc) {
  if (t_lo == t_hi) return {0.0, 0.0};  // a time slice carries no mass
  if (t_lo > t_hi)
    throw std::invalid_argument("flow_box_measure: inverted interval");
  // (x,xi) in U_{t in I} G^t(B)  <=>  the orbit meets B at some s in -I.
  return flow_set_measure(mu, H, band, {-t_hi, -t_lo}, mc);
}

TubeValue collar_slab_measure(const DefectMeasure& mu, const Hypersurface& H,
                              Real w_lo, Real w_hi, const HBandRegion& band,
                              const McOptions& mc) {
  if (!(w_lo < w_hi) || std::abs(w_lo) >= H.collar ||
      std::abs(w_hi) >= H.collar)
    throw std::invalid_argument("collar_slab_measure: bad x_n range");
  const TorusCurveFrame f = torus_frame(H);
  Real value = 0, var = 0;
  for (const auto& comp : mu.components) {
    if (const auto* d = std::get_if<DirectionDelta>(&comp)) {
      const Real xi_t = d->xi0.dot(f.d);
      const Real xi_n = d->xi0.dot(f.nu);
      if (band.admits(xi_t, xi_n, 0.0, H.length) && band.arcs.empty())
        value += d->mass * (w_hi - w_lo) * H.length;
      else if (!band.arcs.empty()) {
        const Real a = std::abs(xi_t);
        const bool ok = a >= band.xi_lo - 1e-12 && a <= band.xi_hi + 1e-12 &&
                        !(band.xi_n_sign > 0 && xi_n <= 0) &&
                        !(band.xi_n_sign < 0 && xi_n >= 0);
        if (ok) value += d->mass * (w_hi - w_lo) * band.arc_length(H.length);
      }
    } else if (std::get_if<LiouvilleDensity>(&comp)) {
      auto member = [&](const Vec2& x, Real phi) {
        FermiCoords fc;
        try {
          fc = fermi_coords(H, x);
        } catch (const OutOfCollarError&) {
          return false;
        }
        if (fc.x_n < w_lo || fc.x_n > w_hi) return false;
        const Vec2 xi(std::cos(phi), std::sin(phi));
        return band.admits(xi.dot(f.d), xi.dot(f.nu), fc.x_prime, H.length);
      };
      const auto* lv = std::get_if<LiouvilleDensity>(&comp);
      const TubeValue v = mc_torus_fraction(member, mc);
      value += lv->mass * v.value;
      var += lv->mass * lv->mass * v.stderr_ * v.stderr_;
    } else {
      throw std::invalid_argument(
          "collar_slab_measure: supported for direction and Liouville "
          "components");
    }
  }
  return {value, std::sqrt(var)};
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Diffuse:
      return "diffuse";
    case Verdict::Concentrated:
      return "concentrated";
    case Verdict::Indeterminate:
      return "indeterminate";
  }
  return {};
}

DiagnosticReport conormal_diagnostic(const DefectMeasure& mu,
                                     const Hypersurface& H,
                                     const std::vector<Real>& deltas,
                                     const std::vector<Real>& t0s,
                                     const DiagnosticOptions& opts) {
  if (deltas.empty() || t0s.empty())
    throw std::invalid_argument("conormal_diagnostic: empty grids");
  for (Real d : deltas)
    if (!(0 < d && d < 1))
      throw std::invalid_argument("conormal_diagnostic: need 0 < delta < 1");

  std::vector<Real> ds = deltas;
  std::sort(ds.begin(), ds.end(), std::greater<>());

  DiagnosticReport rep;
  rep.atol = opts.atol;
  if (H.kind == HypersurfaceKind::TorusGeodesic)
    rep.note =
        "non-separating circle: strip convention, normal (-q,p)/L out of "
        "the lower strip side";

  bool monotone = true;
  std::vector<Real> prev(t0s.size(), std::numeric_limits<Real>::infinity());
  std::vector<Real> prev_err(t0s.size(), 0.0);
  for (Real delta : ds) {
    for (std::size_t it = 0; it < t0s.size(); ++it) {
      TubeRegion region{H, HBandRegion{0.0, delta, {}, 0}, t0s[it]};
      const TubeValue v = tube_measure(mu, region, opts.mc);
      rep.rows.push_back({delta, t0s[it], v.value, v.stderr_});
      const Real slack = 3 * (v.stderr_ + prev_err[it]) + 1e-12;
      if (v.value > prev[it] + slack) monotone = false;
      prev[it] = v.value;
      prev_err[it] = v.stderr_;
    }
  }

  Real est = 0, est_var = 0;
  const std::size_t nrows = rep.rows.size();
  for (std::size_t it = 0; it < t0s.size(); ++it) {
    const auto& r = rep.rows[nrows - t0s.size() + it];
    est += r.quotient;
    est_var += r.stderr_ * r.stderr_;
  }
  est /= t0s.size();
  rep.estimate = est;
  rep.estimate_stderr = std::sqrt(est_var) / t0s.size();

  if (!monotone) {
    rep.verdict = Verdict::Indeterminate;
  } else if (est <= opts.atol + 3 * rep.estimate_stderr) {
    rep.verdict = Verdict::Diffuse;
  } else if (est >= 10 * opts.atol) {
    rep.verdict = Verdict::Concentrated;
  } else {
    rep.verdict = Verdict::Indeterminate;
  }
  return rep;
}

FactorizationResult factorization_check(const DefectMeasure& mu,
                                        const Hypersurface& H, Real t_lo,
                                        Real t_hi, const HBandRegion& B,
                                        Real delta, Real eps_ref,
                                        const McOptions& mc) {
  const Real glancing = std::sqrt(std::max(0.0, 1.0 - delta * delta));
  if (B.xi_hi > glancing - 1e-12)
    throw std::invalid_argument("factorization_check: B touches the glancing set");
  if (t_lo > t_hi)
    throw std::invalid_argument("factorization_check: inverted interval");

  FactorizationResult res;
  if (t_lo == t_hi) return res;  // empty interval: zero on both sides

  const TubeValue ref = flow_box_measure(mu, H, -eps_ref, eps_ref, B, mc);
  const Real mu_sigma = ref.value / (2 * eps_ref);
  const Real mu_sigma_err = ref.stderr_ / (2 * eps_ref);
  res.sigma_measure = mu_sigma;

  const TubeValue box = flow_box_measure(mu, H, t_lo, t_hi, B, mc);
  const Real len = t_hi - t_lo;
  res.interval_residual = std::abs(box.value - len * mu_sigma);
  res.stderr_ = std::sqrt(box.stderr_ * box.stderr_ +
                          len * len * mu_sigma_err * mu_sigma_err);

  // Lebesgue area of B in (x', xi') for the Liouville-constant estimate.
  const Real branches = B.xi_n_sign == 0 ? 2.0 : 1.0;
  const Real leb =
      B.arc_length(H.length) * 2 * (B.xi_hi - B.xi_lo) * branches;
  res.c_estimate = leb > 0 ? mu_sigma / leb : 0.0;

  // |xi_n|^{-1} density form: the collar slab against the x_n marginal of
  // the factorized measure.
  const Real w = std::min(0.5 * H.collar, 4 * eps_ref);
  bool analytic_only = true;
  for (const auto& comp : mu.components)
    if (std::get_if<LiouvilleDensity>(&comp)) analytic_only = false;
  const TubeValue slab = collar_slab_measure(mu, H, 0.0, w, B, mc);
  Real predicted = 0, predicted_var = 0;
  if (analytic_only) {
    const TorusCurveFrame frame = torus_frame(H);
    for (const auto& comp : mu.components) {
      if (const auto* d = std::get_if<DirectionDelta>(&comp)) {
        const Real xi_t = d->xi0.dot(frame.d);
        const Real xi_n = d->xi0.dot(frame.nu);
        if (std::abs(xi_n) < 1e-15) continue;
        if (!B.admits(xi_t, xi_n, B.arcs.empty() ? 0.0 : B.arcs[0].first,
                      H.length))
          continue;
        // mu_Sigma weight of this component over B is mass |xi_n| arclen
        predicted += w * d->mass * B.arc_length(H.length);
      }
    }
  } else {
    const int nsub = 12;
    for (int i = 0; i < nsub; ++i) {
      HBandRegion sub = B;
      sub.xi_lo = B.xi_lo + (B.xi_hi - B.xi_lo) * i / nsub;
      sub.xi_hi = B.xi_lo + (B.xi_hi - B.xi_lo) * (i + 1) / nsub;
      const Real mid = 0.5 * (sub.xi_lo + sub.xi_hi);
      const Real xi_n_mid = std::sqrt(std::max(1e-12, 1.0 - mid * mid));
      McOptions sub_mc = mc;
      sub_mc.seed = mc.seed + 977 * (i + 1);
      const TubeValue m_sub = flow_box_measure(mu, H, -eps_ref, eps_ref, sub,
                                               sub_mc);
      predicted += w * (m_sub.value / (2 * eps_ref)) / xi_n_mid;
      const Real e = w * (m_sub.stderr_ / (2 * eps_ref)) / xi_n_mid;
      predicted_var += e * e;
    }
  }
  res.density_residual = std::abs(slab.value - predicted);
  res.stderr_ = std::sqrt(res.stderr_ * res.stderr_ +
                          slab.stderr_ * slab.stderr_ + predicted_var);
  return res;
}

}  // namespace conormal
