#ifndef CONORMAL_TRIGPOLY_HPP
#define CONORMAL_TRIGPOLY_HPP

#include <map>
#include <utility>
#include <vector>

#include "conormal/core.hpp"

namespace conormal {

/// Finite Fourier sum u(x) = sum_k c_k e^{2 pi i <k, x>} on the torus.
class TrigPoly {
 public:
  void add(const Vec2i& k, Complex c) { coeffs_[{k[0], k[1]}] += c; }

  Complex coeff(const Vec2i& k) const {
    auto it = coeffs_.find({k[0], k[1]});
    return it == coeffs_.end() ? Complex{0, 0} : it->second;
  }

  Complex eval(const Vec2& x) const {
    Complex v{0, 0};
    for (const auto& [k, c] : coeffs_)
      v += c * std::exp(kI * (kTwoPi * (k.first * x[0] + k.second * x[1])));
    return v;
  }

  Real l2_norm() const {
    Real s = 0;
    for (const auto& [k, c] : coeffs_) s += std::norm(c);
    return std::sqrt(s);
  }

  int max_abs_component() const {
    int m = 0;
    for (const auto& [k, c] : coeffs_) {
      (void)c;
      m = std::max({m, std::abs(k.first), std::abs(k.second)});
    }
    return m;
  }

  std::size_t size() const { return coeffs_.size(); }

  void prune(Real tol = 0.0) {
    for (auto it = coeffs_.begin(); it != coeffs_.end();)
      it = std::abs(it->second) <= tol ? coeffs_.erase(it) : std::next(it);
  }

  auto begin() const { return coeffs_.begin(); }
  auto end() const { return coeffs_.end(); }

 private:
  std::map<std::pair<int, int>, Complex> coeffs_;
};

/// Fourier series on a closed curve of length L:
/// u(s) = sum_m c_m e^{2 pi i m s / L}.
struct CurveSeries {
  Real length = 1.0;
  std::map<long long, Complex> modes;

  void add(long long m, Complex c) { modes[m] += c; }

  Complex mean() const {
    auto it = modes.find(0);
    return it == modes.end() ? Complex{0, 0} : it->second;
  }

  Complex integral() const { return length * mean(); }

  Real l2_norm() const {
    Real s = 0;
    for (const auto& [m, c] : modes) s += std::norm(c);
    return std::sqrt(length * s);
  }

  Complex eval(Real s) const {
    Complex v{0, 0};
    for (const auto& [m, c] : modes)
      v += c * std::exp(kI * (kTwoPi * m * s / length));
    return v;
  }

  long long max_freq() const {
    long long f = 0;
    for (const auto& [m, c] : modes) {
      (void)c;
      f = std::max(f, std::llabs(m));
    }
    return f;
  }
};

/// Project N uniform samples onto modes |m| <= m_max (requires
/// 2*m_max < N; the caller guarantees the samples resolve the function).
CurveSeries curve_series_from_samples(const VecXc& samples, Real length,
                                      long long m_max);

}  // namespace conormal

#endif  // CONORMAL_TRIGPOLY_HPP
