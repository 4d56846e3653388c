#include "conormal/restriction.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "conormal/cutoffs.hpp"
#include "conormal/quadrature.hpp"
#include "conormal/quantize.hpp"

namespace conormal {

namespace {

Complex curve_trapezoid(const Hypersurface& H,
                        const std::function<Complex(Real)>& f, int n) {
  Complex acc{0, 0};
  for (int j = 0; j < n; ++j) acc += f(H.length * j / Real(n));
  return acc * (H.length / n);
}

/// Trapezoid with a doubling self-check; throws ResolutionError when the
/// integral refuses to settle.
Complex checked_curve_integral(const Hypersurface& H,
                               const std::function<Complex(Real)>& f, int n0) {
  int n = std::max(64, n0);
  Complex prev = curve_trapezoid(H, f, n);
  for (int round = 0; round < 4; ++round) {
    const Complex cur = curve_trapezoid(H, f, 2 * n);
    if (std::abs(cur - prev) <= 1e-8 * std::max(1.0, std::abs(cur)))
      return cur;
    prev = cur;
    n *= 2;
  }
  throw ResolutionError("curve integral did not settle under doubling");
}

int base_nodes(const EigenFamily& f, Real h, const Hypersurface& H) {
  if (f.is_torus_trig()) {
    const long long freq = restriction_series(f, h, H).max_freq();
    return int(std::min<long long>(1 << 20, 2 * freq + 33));
  }
  return int(2 * f.index_of_h(h)) + 64;
}

}  // namespace

Complex boundary_average(const EigenFamily& f, Real h, const Hypersurface& H,
                         const std::function<Complex(Real)>* weight) {
  if (f.is_torus_trig() && !weight) {
    // Exact value of the spectral rule: the collapsed zero mode.
    return restriction_series(f, h, H).integral();
  }
  auto integrand = [&](Real s) {
    const Complex v = f.eval(h, curve_point(H, s));
    return weight ? (*weight)(s)*v : v;
  };
  return checked_curve_integral(H, integrand, base_nodes(f, h, H));
}

Complex normal_average(const EigenFamily& f, Real h, const Hypersurface& H,
                       const std::function<Complex(Real)>* weight) {
  if (f.is_torus_trig() && !weight)
    return normal_series(f, h, H).integral();
  auto integrand = [&](Real s) {
    const Vec2 x = curve_point(H, s);
    const Vec2c g = f.gradient(h, x);
    const Vec2 nc = normal_covector(H, s);
    Vec2 nv = nc;
    if (H.host.is_sphere()) {
      const Real c = std::cos(x[1]);
      nv = Vec2(nc[0] / (c * c), nc[1]);
    }
    const Complex v = h * (g[0] * nv[0] + g[1] * nv[1]);
    return weight ? (*weight)(s)*v : v;
  };
  return checked_curve_integral(H, integrand, base_nodes(f, h, H));
}

Real ArcSet::measure() const {
  if (intervals.empty()) return length;
  Real m = 0;
  for (const auto& [a, b] : intervals) m += b - a;
  return m;
}

std::vector<Real> ArcSet::boundary_points() const {
  std::vector<Real> pts;
  for (const auto& [a, b] : intervals) {
    pts.push_back(wrap(a, length));
    pts.push_back(wrap(b, length));
  }
  std::sort(pts.begin(), pts.end());
  return pts;
}

SmoothIndicator::SmoothIndicator(const ArcSet& arcs, Real h, Real eps)
    : length_(arcs.length) {
  if (!(0 < eps && eps < 0.5))
    throw std::invalid_argument("smooth_indicator: need 0 < eps < 1/2");
  width_ = std::pow(h, 1.0 - eps);
  boundary_ = arcs.boundary_points();
  if (boundary_.empty()) return;  // full circle: no boundary, chi == 0
  // Bands of radius 2w around distinct boundary points must not overlap.
  for (std::size_t i = 0; i < boundary_.size(); ++i) {
    const Real gap = i + 1 < boundary_.size()
                         ? boundary_[i + 1] - boundary_[i]
                         : boundary_.front() + length_ - boundary_.back();
    if (gap < 4 * width_)
      throw std::invalid_argument("smooth_indicator: mollification bands overlap");
  }
}

Real SmoothIndicator::operator()(Real s) const {
  if (boundary_.empty()) return 0.0;
  Real d = length_;
  const Real w = wrap(s, length_);
  for (Real b : boundary_)
    d = std::min(d, std::abs(wrap_signed(w - b, length_)));
  if (d <= width_) return 1.0;
  if (d >= 2 * width_) return 0.0;
  return smooth_ramp((2 * width_ - d) / width_);
}

Real SmoothIndicator::derivative_constant() const {
  Real sup = 0;
  const int n = 4000;
  for (int i = 0; i <= n; ++i) {
    const Real d = width_ * (1.0 + Real(i) / n);
    const Real g = smooth_ramp_derivative((2 * width_ - d) / width_) / width_;
    sup = std::max(sup, std::abs(g));
  }
  return sup * width_;
}

Real SmoothIndicator::l2_norm_inside() const {
  if (boundary_.empty()) return 0.0;
  // Each endpoint owns one inside-of-A band: plateau of width w plus the
  // squared ramp, int_0^1 g(u)^2 du of it.
  static const Real ramp_sq = [] {
    const Rule1d gl = gauss_legendre(64, 0.0, 1.0);
    Real acc = 0;
    for (int i = 0; i < gl.nodes.size(); ++i)
      acc += gl.weights[i] * smooth_ramp(gl.nodes[i]) * smooth_ramp(gl.nodes[i]);
    return acc;
  }();
  return std::sqrt(boundary_.size() * width_ * (1.0 + ramp_sq));
}

Real rough_projection_norm(const ArcSet& arcs, Real delta, Real h) {
  if (arcs.is_full() || arcs.measure() <= 0) return 0.0;
  const Real L = arcs.length;
  const PlateauCutoff cut = chi_delta(delta);

  auto indicator_coeff = [&](long long m) {
    Complex c{0, 0};
    for (const auto& [a, b] : arcs.intervals) {
      if (m == 0)
        c += (b - a) / L;
      else
        c += (std::exp(-kI * (kTwoPi * m * b / L)) -
              std::exp(-kI * (kTwoPi * m * a / L))) /
             Complex(0, -kTwoPi * m);
    }
    return c;
  };

  // Modes above m_pass keep the full coefficient; Parseval supplies that
  // tail exactly.
  const long long m_pass = (long long)std::ceil(delta * L / (kTwoPi * h)) + 1;
  const Real frac = arcs.measure() / L;
  Real full_tail = frac - frac * frac;  // sum_{m != 0} |c_m|^2
  Real acc = 0;
  for (long long m = 1; m <= m_pass; ++m) {
    const Real cm2 = std::norm(indicator_coeff(m)) +
                     std::norm(indicator_coeff(-m));
    full_tail -= cm2;
    const Real g = 1.0 - cut(kTwoPi * h * m / L);
    acc += g * g * cm2;
  }
  acc += std::max(0.0, full_tail);
  return std::sqrt(L * acc);
}

Complex local_average(const EigenFamily& f, Real h, const Hypersurface& H,
                      const ArcSet& arcs) {
  if (arcs.is_full())
    return boundary_average(f, h, H);
  const Real freq = Real(base_nodes(f, h, H)) / H.length;  // cycles per unit
  Complex acc{0, 0};
  for (const auto& [a, b] : arcs.intervals) {
    const Real cycles = freq * (b - a) / 2 + 1;
    const int panels = int(cycles / 6) + 1;
    const Rule1d rule = composite_gauss_legendre(24, panels, a, b);
    for (int i = 0; i < rule.nodes.size(); ++i)
      acc += rule.weights[i] * f.eval(h, curve_point(H, rule.nodes[i]));
  }
  return acc;
}

Real restriction_norm(const EigenFamily& f, Real h, const Hypersurface& H,
                      std::optional<Real> delta) {
  CurveSeries u = restriction_series(f, h, H);
  if (delta) u = curve_microlocalize(u, h, *delta);
  return u.l2_norm();
}

DecayRecord decay_record(const EigenFamily& f, Real h, const Hypersurface& H,
                         std::optional<Real> delta) {
  DecayRecord r;
  r.h = h;
  r.avg = boundary_average(f, h, H);
  r.normal_avg = normal_average(f, h, H);
  r.l2_restriction = restriction_norm(f, h, H);
  r.l2_normal = normal_series(f, h, H).l2_norm();
  if (delta) {
    r.beta_delta = *delta;
    r.microlocalized_norm = restriction_norm(f, h, H, delta);
  }
  return r;
}

FitResult decay_fit(const std::vector<std::pair<Real, Real>>& h_value,
                    const FitOptions& opts) {
  std::vector<std::pair<Real, Real>> pts;
  int filtered = 0;
  for (const auto& [h, v] : h_value) {
    if (v > opts.value_floor && h > 0)
      pts.push_back({h, v});
    else
      ++filtered;
  }
  std::sort(pts.begin(), pts.end());  // ascending h
  const int drop = int(opts.drop_top_fraction * pts.size());
  if (drop > 0) pts.resize(pts.size() - drop);
  if (pts.size() < 5)
    throw FitError("decay_fit: fewer than 5 usable records (" +
                   std::to_string(pts.size()) + " after filtering " +
                   std::to_string(filtered) + ")");

  const int n = int(pts.size());
  Eigen::MatrixXd A(n, 2);
  VecX y(n);
  for (int i = 0; i < n; ++i) {
    A(i, 0) = std::log(pts[i].first);
    A(i, 1) = 1.0;
    y[i] = std::log(pts[i].second);
  }
  const Eigen::Vector2d beta = A.colPivHouseholderQr().solve(y);
  const VecX resid = y - A * beta;
  const Real s2 = resid.squaredNorm() / std::max(1, n - 2);
  const Eigen::Matrix2d cov =
      s2 * (A.transpose() * A).inverse();

  FitResult fit;
  fit.slope = beta[0];
  fit.intercept = beta[1];
  fit.band95 = 2.0 * std::sqrt(std::max(0.0, cov(0, 0)));
  fit.residual_rms = std::sqrt(resid.squaredNorm() / n);
  fit.n_used = n;
  fit.n_filtered = filtered;
  return fit;
}

}  // namespace conormal
