#ifndef CONORMAL_RELLICH_HPP
#define CONORMAL_RELLICH_HPP

#include <functional>
#include <string>
#include <vector>

#include "conormal/eigenfamily.hpp"
#include "conormal/measures.hpp"
#include "conormal/quantize.hpp"
#include "conormal/restriction.hpp"
#include "conormal/symbol.hpp"

namespace conormal {

// ---------------------------------------------------------------------------
// Green-formula verification on torus strips: the interior commutator
// integral against the boundary pairing, the commutator-to-bracket
// reduction, and the term-by-term inequality trace.
// ---------------------------------------------------------------------------

/// {lo < x2 < hi} in T^2 with outward normals -+ d/dx2.  Construction runs
/// a Green-identity self-test on a smooth pair.
struct StripDomain {
  Real lo;
  Real hi;

  StripDomain(Real lo, Real hi);
  Real width() const { return hi - lo; }
};

/// int_Omega u conj(v), exact mode pairing (x2 segment integrals in closed
/// form).
Complex strip_inner_exact(const TrigPoly& u, const TrigPoly& v,
                          const StripDomain& strip);

/// Same by tensor quadrature: periodic trapezoid in x1 against
/// Gauss-Legendre in x2.  `oversample` scales the automatically chosen
/// grid; values below 1 starve it (used to show the quadrature floor).
Complex strip_inner_quadrature(const TrigPoly& u, const TrigPoly& v,
                               const StripDomain& strip, Real oversample = 1.0);

/// Operator on torus trig polynomials with its principal symbol attached.
struct TorusOperator {
  std::string name;
  Symbol symbol;
  std::function<TrigPoly(const TrigPoly&, Real)> apply;

  static TorusOperator identity();
  static TorusOperator quantization(Symbol a, std::string name = "Op(a)");
  /// Op(beta_delta^2) o Op(chi_alpha(x_n)) o hD_nu on the collar of the
  /// coordinate circle H (the semiclassical normal derivative
  /// h-microlocalized to the conormal directions over the collar).
  static TorusOperator collar_test(Real delta, Real alpha,
                                   const Hypersurface& H,
                                   int truncation = kSymbolTruncationOrder);
};

/// | LHS - RHS | / (|LHS| + |RHS| + 1) of the Green identity
///   (i/h) int_Omega [-h^2 lap, A] phi conj(phi)
///     = int_bnd A phi conj(hD_nu phi) + int_bnd hD_nu(A phi) conj(phi),
/// interior by tensor quadrature, boundary by exact circle pairing.
Real rellich_residual(const TorusOperator& A, const EigenFamily& f, Real h,
                      const StripDomain& strip, Real oversample = 1.0);

struct BracketComparison {
  std::vector<std::pair<Real, Real>> gap;  // (h, d(h))
  FitResult fit;                           // empty when all gaps vanish
  bool all_zero = false;
};

/// d(h) = |<(i/h)[-h^2 lap, Op(a)] phi, phi>_Omega -
///         <Op({|xi|^2, a}) phi, phi>_Omega| over the ladder, with the
/// fitted order in h (expected >= 1 whenever the gap is nonzero).
BracketComparison commutator_vs_bracket(const Symbol& a, const EigenFamily& f,
                                        const std::vector<Real>& hs,
                                        const StripDomain& strip);

struct TraceRow {
  Real h = 0;
  Real delta = 0;
  Real alpha = 0;
  Real bnorm_dnu = 0;       // ||Op(beta) hD_nu phi||_H^2
  Real bnorm_phi = 0;       // (1 - 2 delta^2) ||Op(beta) phi||_H^2
  Real lhs_sum = 0;
  Real commutator_re = 0;
  Real commutator_im = 0;
  Real measure_side = 0;    // int 2 chi_alpha' beta^2 xi_n^2 d(mu) over the strip side
  Real r_alpha_delta = 0;   // ||q_delta||_inf residual bound (0 on the flat torus)
  Real conormal_limit = 0;  // 2 mu_Sigma(N*H)
  Real gap = 0;             // commutator_re - lhs_sum
};

/// Every term of the boundary-norm inequality for one (h, delta, alpha):
/// microlocalized boundary norms, the interior commutator, and the
/// measure-side prediction, so the h -> 0, alpha -> 0, delta -> 0 order of
/// limits is visible in data.
TraceRow main_inequality_trace(const EigenFamily& f, Real h, Real delta,
                               Real alpha, const Hypersurface& H,
                               const StripDomain& strip);

}  // namespace conormal

#endif  // CONORMAL_RELLICH_HPP
