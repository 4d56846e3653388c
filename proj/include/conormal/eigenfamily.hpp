#ifndef CONORMAL_EIGENFAMILY_HPP
#define CONORMAL_EIGENFAMILY_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "conormal/core.hpp"
#include "conormal/manifold.hpp"
#include "conormal/trigpoly.hpp"

namespace conormal {

// ---------------------------------------------------------------------------
// Explicit L2-normalized eigenfunction ladders, -h^2 lap phi = phi:
//   * torus plane waves  e^{2 pi i m <k0, x>},       h = 1/(2 pi m |k0|)
//   * torus shell superpositions (scaled by m),      h = 1/(2 pi m r)
//   * zonal harmonics    Y_l^0,                      h = 1/sqrt(l(l+1))
//   * highest-weight beams c_l e^{-i l theta} cos^l, h = 1/sqrt(l(l+1))
//   * seeded random superpositions on full lattice shells |k|^2 = n
// ---------------------------------------------------------------------------

enum class FamilyKind {
  TorusPlaneWave,
  TorusSuperposition,
  SphereZonal,
  SphereGaussianBeam,
  TorusRandomShell
};

class EigenFamily {
 public:
  static EigenFamily torus_plane_wave(const Vec2i& k0);
  /// Modes must share one eigenvalue shell; amplitudes are normalized to
  /// unit l2 norm.
  static EigenFamily torus_superposition(
      std::vector<std::pair<Vec2i, Complex>> modes);
  static EigenFamily sphere_zonal();
  static EigenFamily sphere_gaussian_beam();
  /// Random unit-Gaussian amplitudes on the full shell {|k|^2 = n}.  The
  /// schedule lists the n values of the ladder; when empty the ladder is
  /// the first `count` integers expressible as a sum of two squares.
  static EigenFamily torus_random_shell(std::uint64_t seed,
                                        std::vector<long long> schedule = {});

  FamilyKind kind() const { return kind_; }
  ModelManifold manifold() const { return manifold_; }
  std::uint64_t seed() const { return seed_; }
  std::string name() const;

  bool is_torus_trig() const;

  /// Strictly decreasing admissible semiclassical parameters.
  std::vector<Real> admissible_h(int count) const;
  Real h_for_index(long long index) const;
  /// Ladder index (m, l, or shell n) of an admissible h; throws
  /// InadmissibleError otherwise.
  long long index_of_h(Real h) const;

  Complex eval(Real h, const Vec2& x) const;
  /// Chart components of the (complex) differential d(phi_h).
  Vec2c gradient(Real h, const Vec2& x) const;

  /// Quadrature estimate of the L2(M) norm; resolution >= 64.
  Real l2_norm(Real h, int resolution) const;

  /// Fourier data for torus families.
  TrigPoly trig_poly(Real h) const;

  /// Lattice modes of the shell |k|^2 = n, lexicographic order.
  static std::vector<Vec2i> shell_modes(long long n);
  static bool is_sum_of_two_squares(long long n);

 private:
  FamilyKind kind_;
  ModelManifold manifold_;
  Vec2i k0_{1, 0};
  std::vector<std::pair<Vec2i, Complex>> base_modes_;
  std::uint64_t seed_ = 0;
  std::vector<long long> schedule_;

  VecXc shell_amplitudes(long long n) const;
};

/// log of the beam normalizing constant c_l (evaluated via lgamma so the
/// ladder can run far beyond the factorial overflow point).
Real beam_log_constant(long long l);

/// Truncated transverse profile u_h = c_l e^{-il theta} chi(omega)
/// e^{-l omega^2/2}; chi is 1 on [-1/2,1/2] and supported in (-1,1).
Complex beam_surrogate_eval(long long l, const Vec2& x);
Real beam_surrogate_l2_norm(long long l, int resolution);

/// Restriction of phi_h to the curve H as an exact (torus, and the
/// constant/fixed-mode sphere cases) or sample-projected Fourier series.
CurveSeries restriction_series(const EigenFamily& f, Real h,
                               const Hypersurface& H);
/// Same for h * d(phi_h)/d(nu).
CurveSeries normal_series(const EigenFamily& f, Real h,
                          const Hypersurface& H);

}  // namespace conormal

#endif  // CONORMAL_EIGENFAMILY_HPP
