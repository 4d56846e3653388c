#ifndef CONORMAL_SYMBOL_HPP
#define CONORMAL_SYMBOL_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "conormal/core.hpp"
#include "conormal/cutoffs.hpp"
#include "conormal/manifold.hpp"

namespace conormal {

/// Phase-space symbol on the torus with finite Fourier support in x:
///   a(x, xi) = sum_m c_m(xi) e^{2 pi i <m, x>}.
/// The structured collar form beta_delta^2(xi') chi_alpha(x_n) xi_n^p keeps
/// its parameters in `collar` so operators and brackets can reuse them.
struct Symbol {
  struct XMode {
    Vec2i m;
    std::function<Complex(const Vec2&)> coeff;
  };

  struct CollarData {
    Real delta = 0;
    Real alpha = 0;
    int power = 0;
    int axis = 2;        // normal coordinate index of the carrying circle
    Real level = 0;
    Real lipschitz_scale = 0;  // recorded sup|chi_alpha'| * alpha
  };

  std::vector<XMode> modes;
  std::optional<CollarData> collar;

  Complex eval(const Vec2& x, const Vec2& xi) const {
    Complex v{0, 0};
    for (const auto& mode : modes)
      v += mode.coeff(xi) *
           std::exp(kI * (kTwoPi * (mode.m[0] * x[0] + mode.m[1] * x[1])));
    return v;
  }

  int x_order() const {
    int o = 0;
    for (const auto& mode : modes)
      o = std::max({o, std::abs(mode.m[0]), std::abs(mode.m[1])});
    return o;
  }

  /// x-independent symbol a(xi).
  static Symbol multiplier(std::function<Complex(const Vec2&)> f);

  /// Single x-mode c(xi) e^{2 pi i <m, x>}.
  static Symbol separable(const Vec2i& m, std::function<Complex(const Vec2&)> f);

  Symbol& add_mode(const Vec2i& m, std::function<Complex(const Vec2&)> f) {
    modes.push_back({m, std::move(f)});
    return *this;
  }
};

/// Maximum Fourier order kept when periodizing collar cutoffs.
inline constexpr int kSymbolTruncationOrder = 64;

/// beta_delta^2(xi_tangential) * chi_alpha(x_n) * xi_n^power on the collar
/// of a torus coordinate circle; chi_alpha enters through its truncated
/// Fourier series so every operator built from the symbol is exact on
/// trigonometric polynomials.
Symbol collar_symbol(const Hypersurface& h, Real delta, Real alpha, int power,
                     int truncation = kSymbolTruncationOrder);

/// Same structure with chi_alpha replaced by 2 chi_alpha' and the conormal
/// power raised by one: the Poisson bracket {|xi|^2, collar_symbol} on the
/// flat torus.
Symbol collar_bracket_symbol(const Hypersurface& h, Real delta, Real alpha,
                             int power, int truncation = kSymbolTruncationOrder);

/// {|xi|^2, a} = 2 xi . grad_x a for any finite-order torus symbol.
Symbol poisson_bracket_with_energy(const Symbol& a);

/// Fourier coefficients of the periodized plateau cutoff chi_alpha
/// (period 1), j = 0..truncation; real and even.
VecX periodized_cutoff_coefficients(const PlateauCutoff& chi, int truncation);

}  // namespace conormal

#endif  // CONORMAL_SYMBOL_HPP
