#ifndef CONORMAL_QUADRATURE_HPP
#define CONORMAL_QUADRATURE_HPP

#include <utility>
#include <vector>

#include "conormal/core.hpp"

namespace conormal {

struct Rule1d {
  VecX nodes;
  VecX weights;
};

/// Uniform nodes j*period/n with equal weights: spectrally accurate for
/// smooth periodic integrands.
Rule1d periodic_trapezoid(int n, Real period = 1.0);

/// Gauss-Legendre rule on [a, b].
Rule1d gauss_legendre(int n, Real a = -1.0, Real b = 1.0);

/// Composite Gauss-Legendre over [a, b] split into `panels` panels of
/// `per_panel` nodes each.
Rule1d composite_gauss_legendre(int per_panel, int panels, Real a, Real b);

template <typename F>
auto integrate(const Rule1d& rule, F&& f) -> decltype(f(Real{}) * Real{}) {
  decltype(f(Real{}) * Real{}) acc{};
  for (int i = 0; i < rule.nodes.size(); ++i)
    acc += f(rule.nodes[i]) * rule.weights[i];
  return acc;
}

}  // namespace conormal

#endif  // CONORMAL_QUADRATURE_HPP
