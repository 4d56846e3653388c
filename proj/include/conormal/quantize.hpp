#ifndef CONORMAL_QUANTIZE_HPP
#define CONORMAL_QUANTIZE_HPP

#include <optional>

#include "conormal/cutoffs.hpp"
#include "conormal/eigenfamily.hpp"
#include "conormal/symbol.hpp"
#include "conormal/trigpoly.hpp"

namespace conormal {

// ---------------------------------------------------------------------------
// Left (Kohn-Nirenberg) quantization on the torus.  The defining property
// Op_h(a) e^{2 pi i <k,x>} = a(x, 2 pi h k) e^{2 pi i <k,x>} is exact for
// finite Fourier data, which is what all operator tests lean on.
// ---------------------------------------------------------------------------

struct TestOperator {
  Symbol symbol;
  Real h;
};

/// Exact mode arithmetic: mode k picks up the symbol coefficients at
/// xi = 2 pi h k and lands on modes k + m.
TrigPoly apply_op_poly(const TestOperator& op, const TrigPoly& u);

struct SampledFunction {
  int n = 0;        // n x n uniform torus grid, x = (i/n, j/n)
  VecXc values;     // row-major
};

/// Evaluate Op_h(a) u on an n x n grid.  Throws AliasingError when the
/// grid cannot represent the result (n <= 2 * (max mode + symbol order)).
SampledFunction apply_op(const TestOperator& op, const TrigPoly& u, int n);

/// <Op_h(a) u, u>_{L^2(T^2)} as an exact double sum over Fourier pairs.
Complex matrix_element(const TestOperator& op, const TrigPoly& u);
Complex matrix_element(const Symbol& a, const EigenFamily& f, Real h);

/// Fourier multiplier chi_delta(|2 pi h m / L|) on a curve series; the
/// model realization of the tangential microlocalizer.
CurveSeries curve_microlocalize(const CurveSeries& v, Real h, Real delta);

/// | int_H u - int_H Op_h(beta_delta) u |.  The default global multiplier
/// preserves the mean exactly (the zero mode passes), so the defect
/// vanishes; with a chart window the quantization kernel is spatially
/// localized, the multiplier at the zero mode is 1 only up to rapidly
/// vanishing tails, and the defect exhibits the super-polynomial decay the
/// microlocal reduction predicts.
Real microlocalize_defect(const CurveSeries& u, Real h, Real delta,
                          const std::optional<ChartWindow>& window = {});

/// Multiplier of the chart-windowed microlocalizer at curve mode m.
Real windowed_multiplier(const ChartWindow& w, Real h, Real delta, Real length,
                         long long m);

struct PhaseHistogram {
  int nx = 0;
  int nangle = 0;
  Eigen::MatrixXd weights;  // (nx*nx) rows, nangle columns
  Real total = 0;

  Real max_cell() const { return weights.maxCoeff(); }
  /// Mass per momentum-angle cell (summed over position cells).
  VecX angle_marginal() const { return weights.colwise().sum(); }
};

/// Empirical phase-space lift: mass of the angle-binned mode projection
/// P_a u over each position cell, w(cell, a) = int_cell |P_a u|^2 dx.
/// Nonnegative, sums to ||u||^2 = 1 for normalized families.
PhaseHistogram phase_space_histogram(const EigenFamily& f, Real h, int nx,
                                     int nangle);

}  // namespace conormal

#endif  // CONORMAL_QUANTIZE_HPP
