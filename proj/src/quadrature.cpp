#include "conormal/quadrature.hpp"

#include <cmath>

namespace conormal {

Rule1d periodic_trapezoid(int n, Real period) {
  Rule1d r;
  r.nodes.resize(n);
  r.weights.setConstant(n, period / n);
  for (int j = 0; j < n; ++j) r.nodes[j] = period * j / n;
  return r;
}

Rule1d gauss_legendre(int n, Real a, Real b) {
  // Newton iteration on P_n with the Chebyshev-like initial guess; nodes
  // come out in decreasing order on [-1,1] and are mapped to [a,b].
  Rule1d r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const Real mid = 0.5 * (a + b);
  const Real half = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    Real x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    Real dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      Real p0 = 1.0, p1 = x;
      for (int l = 1; l < n; ++l) {
        Real p2 = ((2 * l + 1) * x * p1 - l * p0) / (l + 1);
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      Real dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    r.nodes[n - 1 - i] = mid + half * x;
    r.weights[n - 1 - i] = 2.0 * half / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

Rule1d composite_gauss_legendre(int per_panel, int panels, Real a, Real b) {
  Rule1d r;
  r.nodes.resize(per_panel * panels);
  r.weights.resize(per_panel * panels);
  const Real w = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    Rule1d panel = gauss_legendre(per_panel, a + p * w, a + (p + 1) * w);
    r.nodes.segment(p * per_panel, per_panel) = panel.nodes;
    r.weights.segment(p * per_panel, per_panel) = panel.weights;
  }
  return r;
}

}  // namespace conormal
