#include "conormal/eigenfamily.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "conormal/cutoffs.hpp"
#include "conormal/legendre.hpp"
#include "conormal/quadrature.hpp"

namespace conormal {

namespace {

long long isqrt_ll(long long n) {
  if (n < 0) return -1;
  long long r = std::llround(std::sqrt(Real(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

Real uniform01(std::mt19937_64& g) {
  return Real((g() >> 11)) * 0x1.0p-53;
}

Complex standard_complex_gaussian(std::mt19937_64& g) {
  // radius^2 ~ Exp(1), phase uniform
  Real u1 = uniform01(g);
  while (u1 <= 0.0) u1 = uniform01(g);
  const Real u2 = uniform01(g);
  const Real r = std::sqrt(-std::log(u1));
  return Complex(r * std::cos(kTwoPi * u2), r * std::sin(kTwoPi * u2));
}

Real zonal_amplitude(long long l) { return std::sqrt((2 * l + 1) / (4 * kPi)); }

long long sphere_l_of_h(Real h) {
  const Real s = 1.0 / (h * h);
  const long long l = std::llround(0.5 * (-1.0 + std::sqrt(1.0 + 4.0 * s)));
  if (l < 1 || std::abs(1.0 / std::sqrt(Real(l) * (l + 1)) - h) > 1e-9 * h)
    throw InadmissibleError("h is not 1/sqrt(l(l+1)) for integer l");
  return l;
}

}  // namespace

EigenFamily EigenFamily::torus_plane_wave(const Vec2i& k0) {
  if (k0[0] == 0 && k0[1] == 0)
    throw std::invalid_argument("plane wave: zero direction");
  EigenFamily f;
  f.kind_ = FamilyKind::TorusPlaneWave;
  f.manifold_ = ModelManifold::torus2();
  f.k0_ = k0;
  return f;
}

EigenFamily EigenFamily::torus_superposition(
    std::vector<std::pair<Vec2i, Complex>> modes) {
  if (modes.empty()) throw std::invalid_argument("superposition: no modes");
  const long long n2 = modes.front().first.squaredNorm();
  Real norm2 = 0;
  for (const auto& [k, c] : modes) {
    if (k.squaredNorm() != n2)
      throw std::invalid_argument("superposition: modes must share a shell");
    norm2 += std::norm(c);
  }
  for (auto& [k, c] : modes) c /= std::sqrt(norm2);
  EigenFamily f;
  f.kind_ = FamilyKind::TorusSuperposition;
  f.manifold_ = ModelManifold::torus2();
  f.base_modes_ = std::move(modes);
  return f;
}

EigenFamily EigenFamily::sphere_zonal() {
  EigenFamily f;
  f.kind_ = FamilyKind::SphereZonal;
  f.manifold_ = ModelManifold::sphere2();
  return f;
}

EigenFamily EigenFamily::sphere_gaussian_beam() {
  EigenFamily f;
  f.kind_ = FamilyKind::SphereGaussianBeam;
  f.manifold_ = ModelManifold::sphere2();
  return f;
}

EigenFamily EigenFamily::torus_random_shell(std::uint64_t seed,
                                            std::vector<long long> schedule) {
  for (long long n : schedule)
    if (!is_sum_of_two_squares(n))
      throw std::invalid_argument(
          "random shell: schedule entry is not a sum of two squares");
  EigenFamily f;
  f.kind_ = FamilyKind::TorusRandomShell;
  f.manifold_ = ModelManifold::torus2();
  f.seed_ = seed;
  f.schedule_ = std::move(schedule);
  return f;
}

std::string EigenFamily::name() const {
  switch (kind_) {
    case FamilyKind::TorusPlaneWave:
      return "torus plane wave";
    case FamilyKind::TorusSuperposition:
      return "torus shell superposition";
    case FamilyKind::SphereZonal:
      return "sphere zonal";
    case FamilyKind::SphereGaussianBeam:
      return "sphere gaussian beam";
    case FamilyKind::TorusRandomShell:
      return "torus random shell (QE surrogate)";
  }
  return {};
}

bool EigenFamily::is_torus_trig() const {
  return kind_ == FamilyKind::TorusPlaneWave ||
         kind_ == FamilyKind::TorusSuperposition ||
         kind_ == FamilyKind::TorusRandomShell;
}

bool EigenFamily::is_sum_of_two_squares(long long n) {
  if (n < 1) return false;
  for (long long a = 0; a * a <= n; ++a) {
    const long long b = isqrt_ll(n - a * a);
    if (b * b == n - a * a) return true;
  }
  return false;
}

std::vector<Vec2i> EigenFamily::shell_modes(long long n) {
  std::vector<Vec2i> modes;
  const long long r = isqrt_ll(n);
  for (long long a = -r; a <= r; ++a) {
    const long long rem = n - a * a;
    const long long b = isqrt_ll(rem);
    if (b * b != rem) continue;
    modes.emplace_back(int(a), int(b));
    if (b != 0) modes.emplace_back(int(a), int(-b));
  }
  std::sort(modes.begin(), modes.end(), [](const Vec2i& u, const Vec2i& v) {
    return u[0] != v[0] ? u[0] < v[0] : u[1] < v[1];
  });
  return modes;
}

VecXc EigenFamily::shell_amplitudes(long long n) const {
  const auto modes = shell_modes(n);
  std::mt19937_64 g(seed_ ^ (0x9E3779B97F4A7C15ULL * std::uint64_t(n) +
                             0x632BE59BD9B4E019ULL));
  VecXc c(modes.size());
  for (Eigen::Index i = 0; i < c.size(); ++i)
    c[i] = standard_complex_gaussian(g);
  c /= c.norm();
  return c;
}

std::vector<Real> EigenFamily::admissible_h(int count) const {
  if (count < 1) throw std::invalid_argument("admissible_h: count >= 1");
  std::vector<Real> hs;
  hs.reserve(count);
  switch (kind_) {
    case FamilyKind::TorusPlaneWave:
    case FamilyKind::TorusSuperposition:
      for (int m = 1; m <= count; ++m) hs.push_back(h_for_index(m));
      break;
    case FamilyKind::SphereZonal:
    case FamilyKind::SphereGaussianBeam:
      for (int l = 1; l <= count; ++l) hs.push_back(h_for_index(l));
      break;
    case FamilyKind::TorusRandomShell: {
      if (!schedule_.empty()) {
        for (int i = 0; i < count && i < int(schedule_.size()); ++i)
          hs.push_back(h_for_index(schedule_[i]));
      } else {
        for (long long n = 1; int(hs.size()) < count; ++n)
          if (is_sum_of_two_squares(n)) hs.push_back(h_for_index(n));
      }
      break;
    }
  }
  return hs;
}

Real EigenFamily::h_for_index(long long index) const {
  switch (kind_) {
    case FamilyKind::TorusPlaneWave:
      return 1.0 / (kTwoPi * index * k0_.cast<Real>().norm());
    case FamilyKind::TorusSuperposition:
      return 1.0 /
             (kTwoPi * index *
              std::sqrt(Real(base_modes_.front().first.squaredNorm())));
    case FamilyKind::SphereZonal:
    case FamilyKind::SphereGaussianBeam:
      return 1.0 / std::sqrt(Real(index) * (index + 1));
    case FamilyKind::TorusRandomShell:
      return 1.0 / (kTwoPi * std::sqrt(Real(index)));
  }
  throw std::logic_error("h_for_index: unreachable");
}

long long EigenFamily::index_of_h(Real h) const {
  if (!(h > 0)) throw InadmissibleError("h must be positive");
  switch (kind_) {
    case FamilyKind::TorusPlaneWave:
    case FamilyKind::TorusSuperposition: {
      const Real r = kind_ == FamilyKind::TorusPlaneWave
                         ? k0_.cast<Real>().norm()
                         : std::sqrt(Real(base_modes_.front().first.squaredNorm()));
      const long long m = std::llround(1.0 / (kTwoPi * h * r));
      if (m < 1 || std::abs(h_for_index(m) - h) > 1e-9 * h)
        throw InadmissibleError("h is not on the plane-wave ladder");
      return m;
    }
    case FamilyKind::SphereZonal:
    case FamilyKind::SphereGaussianBeam:
      return sphere_l_of_h(h);
    case FamilyKind::TorusRandomShell: {
      const long long n = std::llround(1.0 / (kTwoPi * h * kTwoPi * h));
      if (n < 1 || std::abs(h_for_index(n) - h) > 1e-9 * h ||
          !is_sum_of_two_squares(n))
        throw InadmissibleError("h is not 1/(2 pi sqrt(n)) for a shell n");
      return n;
    }
  }
  throw std::logic_error("index_of_h: unreachable");
}

TrigPoly EigenFamily::trig_poly(Real h) const {
  if (!is_torus_trig())
    throw std::invalid_argument("trig_poly: torus families only");
  const long long idx = index_of_h(h);
  TrigPoly u;
  switch (kind_) {
    case FamilyKind::TorusPlaneWave:
      u.add(Vec2i(int(idx) * k0_[0], int(idx) * k0_[1]), Complex{1, 0});
      break;
    case FamilyKind::TorusSuperposition:
      for (const auto& [k, c] : base_modes_)
        u.add(Vec2i(int(idx) * k[0], int(idx) * k[1]), c);
      break;
    case FamilyKind::TorusRandomShell: {
      const auto modes = shell_modes(idx);
      const VecXc amps = shell_amplitudes(idx);
      for (std::size_t i = 0; i < modes.size(); ++i)
        u.add(modes[i], amps[Eigen::Index(i)]);
      break;
    }
    default:
      break;
  }
  return u;
}

Complex EigenFamily::eval(Real h, const Vec2& x) const {
  switch (kind_) {
    case FamilyKind::TorusPlaneWave:
    case FamilyKind::TorusSuperposition:
    case FamilyKind::TorusRandomShell:
      return trig_poly(h).eval(x);
    case FamilyKind::SphereZonal: {
      const long long l = index_of_h(h);
      return Complex(zonal_amplitude(l) * legendre_p(int(l), std::sin(x[1])),
                     0.0);
    }
    case FamilyKind::SphereGaussianBeam: {
      const long long l = index_of_h(h);
      const Real c = std::cos(x[1]);
      if (c <= 0) return Complex{0, 0};
      const Real amp = std::exp(beam_log_constant(l) + l * std::log(c));
      return amp * std::exp(-kI * (Real(l) * x[0]));
    }
  }
  throw std::logic_error("eval: unreachable");
}

Vec2c EigenFamily::gradient(Real h, const Vec2& x) const {
  switch (kind_) {
    case FamilyKind::TorusPlaneWave:
    case FamilyKind::TorusSuperposition:
    case FamilyKind::TorusRandomShell: {
      const TrigPoly u = trig_poly(h);
      Vec2c g = Vec2c::Zero();
      for (const auto& [k, c] : u) {
        const Complex ph =
            c * std::exp(kI * (kTwoPi * (k.first * x[0] + k.second * x[1])));
        g[0] += kTwoPi * kI * Real(k.first) * ph;
        g[1] += kTwoPi * kI * Real(k.second) * ph;
      }
      return g;
    }
    case FamilyKind::SphereZonal: {
      const long long l = index_of_h(h);
      const LegendreJet j = legendre_jet(int(l), std::sin(x[1]));
      return Vec2c(Complex{0, 0},
                   Complex(zonal_amplitude(l) * j.dp * std::cos(x[1]), 0));
    }
    case FamilyKind::SphereGaussianBeam: {
      const long long l = index_of_h(h);
      const Complex v = eval(h, x);
      return Vec2c(-kI * Real(l) * v, -Real(l) * std::tan(x[1]) * v);
    }
  }
  throw std::logic_error("gradient: unreachable");
}

Real EigenFamily::l2_norm(Real h, int resolution) const {
  if (resolution < 64)
    throw std::invalid_argument("l2_norm: resolution >= 64");
  if (manifold_.is_torus()) {
    const TrigPoly u = trig_poly(h);
    const int n =
        std::max<int>(resolution, 2 * u.max_abs_component() + 8);
    Real acc = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        acc += std::norm(u.eval(Vec2(Real(i) / n, Real(j) / n)));
    return std::sqrt(acc / (Real(n) * n));
  }
  const long long l = index_of_h(h);
  // |phi|^2 is a polynomial of degree 2l in u = sin(omega); the area
  // element is du d(theta).
  const Rule1d gl = gauss_legendre(std::max<int>(resolution, int(l) + 2));
  Real acc = 0;
  for (int i = 0; i < gl.nodes.size(); ++i) {
    const Real omega = std::asin(gl.nodes[i]);
    acc += gl.weights[i] * std::norm(eval(h, Vec2(0.0, omega)));
  }
  return std::sqrt(kTwoPi * acc);
}

Real beam_log_constant(long long l) {
  return -l * std::log(2.0) - std::lgamma(Real(l) + 1) +
         0.5 * (std::lgamma(2.0 * l + 2) - std::log(4 * kPi));
}

Complex beam_surrogate_eval(long long l, const Vec2& x) {
  static const PlateauCutoff chi(0.5, 1.0);
  const Real w = x[1];
  const Real amp =
      std::exp(beam_log_constant(l) - 0.5 * l * w * w) * chi(w);
  return amp * std::exp(-kI * (Real(l) * x[0]));
}

Real beam_surrogate_l2_norm(long long l, int resolution) {
  const int n = std::max<int>(resolution, 4 * int(isqrt_ll(l)) + 32);
  const Rule1d gl = gauss_legendre(n, -1.0, 1.0);
  Real acc = 0;
  for (int i = 0; i < gl.nodes.size(); ++i) {
    const Real w = gl.nodes[i];
    acc += gl.weights[i] * std::norm(beam_surrogate_eval(l, Vec2(0.0, w))) *
           std::cos(w);
  }
  return std::sqrt(kTwoPi * acc);
}

namespace {

// Exact mode collapse of a torus trig polynomial onto the curve.
CurveSeries collapse_torus(const TrigPoly& u, const Hypersurface& H) {
  CurveSeries out;
  out.length = H.length;
  const Vec2 origin = curve_point(H, 0.0);
  for (const auto& [k, c] : u) {
    long long m;
    if (H.kind == HypersurfaceKind::TorusCircle)
      m = H.axis == 2 ? k.first : k.second;
    else
      m = (long long)k.first * H.direction[0] +
          (long long)k.second * H.direction[1];
    const Complex phase =
        std::exp(kI * (kTwoPi * (k.first * origin[0] + k.second * origin[1])));
    out.add(m, c * phase);
  }
  return out;
}

CurveSeries sampled_series(const Hypersurface& H, long long max_freq,
                           const std::function<Complex(Real)>& f) {
  const long long n = 2 * max_freq + 256;
  VecXc samples(n);
  for (long long j = 0; j < n; ++j)
    samples[j] = f(H.length * Real(j) / Real(n));
  return curve_series_from_samples(samples, H.length, max_freq + 64);
}

}  // namespace

CurveSeries restriction_series(const EigenFamily& f, Real h,
                               const Hypersurface& H) {
  if (f.is_torus_trig()) return collapse_torus(f.trig_poly(h), H);
  const long long l = f.index_of_h(h);
  if (H.kind == HypersurfaceKind::SphereLatitude) {
    CurveSeries out;
    out.length = H.length;
    // theta(s) = s / cos(omega0), so the beam phase -l theta is curve mode -l
    out.add(f.kind() == FamilyKind::SphereZonal ? 0 : -l,
            f.eval(h, Vec2(0.0, H.omega0)));
    return out;
  }
  // Equator realized as a great circle keeps the single-mode structure.
  if (H.kind == HypersurfaceKind::SphereGreatCircle &&
      std::abs(H.frame_a[2]) < 1e-15 && std::abs(H.frame_b[2]) < 1e-15 &&
      f.kind() == FamilyKind::SphereGaussianBeam) {
    const Real theta0 = std::atan2(H.frame_a[1], H.frame_a[0]);
    // theta(s) = theta0 + s up to orientation; orientation read off frame_b
    const Real orient =
        (H.frame_a.cross(H.frame_b))[2] > 0 ? 1.0 : -1.0;
    CurveSeries out;
    out.length = H.length;
    out.add(-(long long)(orient * l),
            std::exp(beam_log_constant(l)) * std::exp(-kI * (Real(l) * theta0)));
    return out;
  }
  return sampled_series(H, l, [&](Real s) {
    return f.eval(h, curve_point(H, s));
  });
}

CurveSeries normal_series(const EigenFamily& f, Real h,
                          const Hypersurface& H) {
  if (f.is_torus_trig()) {
    const TrigPoly u = f.trig_poly(h);
    const Vec2 nu = normal_covector(H, 0.0);  // constant on torus models
    TrigPoly du;
    for (const auto& [k, c] : u)
      du.add(Vec2i(k.first, k.second),
             c * kTwoPi * kI * (k.first * nu[0] + k.second * nu[1]) * h);
    return collapse_torus(du, H);
  }
  const long long l = f.index_of_h(h);
  auto dnu = [&](Real s) {
    const Vec2 x = curve_point(H, s);
    const Vec2c g = f.gradient(h, x);
    // raise the normal covector to vector components in the chart
    const Vec2 nc = normal_covector(H, s);
    const Real c = std::cos(x[1]);
    const Vec2 nv(nc[0] / (c * c), nc[1]);
    return h * (g[0] * nv[0] + g[1] * nv[1]);
  };
  if (H.kind == HypersurfaceKind::SphereLatitude) {
    CurveSeries out;
    out.length = H.length;
    const Complex v = dnu(0.0);
    if (f.kind() == FamilyKind::SphereZonal)
      out.add(0, v);
    else
      out.add(-l, v);
    return out;
  }
  return sampled_series(H, l, dnu);
}

}  // namespace conormal
