#ifndef CONORMAL_CORE_HPP
#define CONORMAL_CORE_HPP

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace conormal {

using Real = double;
using Complex = std::complex<double>;
using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec2i = Eigen::Vector2i;
using Vec2c = Eigen::Vector2cd;
using VecX = Eigen::VectorXd;
using VecXc = Eigen::VectorXcd;

inline constexpr Real kPi = 3.14159265358979323846;
inline constexpr Real kTwoPi = 2.0 * kPi;

inline constexpr Complex kI{0.0, 1.0};

/// Wrap into [0, period).
inline Real wrap(Real x, Real period = 1.0) {
  Real y = std::fmod(x, period);
  if (y < 0) y += period;
  // fmod can return exactly `period` after the correction when x is a
  // tiny negative number.
  if (y >= period) y -= period;
  return y;
}

/// Wrap into (-period/2, period/2].
inline Real wrap_signed(Real x, Real period = 1.0) {
  Real y = wrap(x, period);
  if (y > 0.5 * period) y -= period;
  return y;
}

inline Vec2 wrap(const Vec2& x, Real period = 1.0) {
  return Vec2(wrap(x[0], period), wrap(x[1], period));
}

struct NormalizationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct OutOfCollarError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ResolutionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct AliasingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InadmissibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct FitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Run fn(i) for i in [0, n) on up to `jobs` threads. Results must be
/// written to per-index slots; the caller keeps a deterministic order.
inline void parallel_for(std::size_t n, int jobs,
                         const std::function<void(std::size_t)>& fn) {
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(jobs, n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace conormal

#endif  // CONORMAL_CORE_HPP
