#include "conormal/legendre.hpp"

namespace conormal {

Real legendre_p(int l, Real u) {
  if (l == 0) return 1.0;
  Real p0 = 1.0, p1 = u;
  for (int k = 1; k < l; ++k) {
    const Real p2 = ((2 * k + 1) * u * p1 - k * p0) / (k + 1);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

LegendreJet legendre_jet(int l, Real u) {
  // value:       (k+1) P_{k+1} = (2k+1) u P_k - k P_{k-1}
  // derivative:  P'_{k+1} = P'_{k-1} + (2k+1) P_k
  // second:      P''_{k+1} = P''_{k-1} + (2k+1) P'_k
  if (l == 0) return {1.0, 0.0, 0.0};
  Real p0 = 1.0, p1 = u;
  Real d0 = 0.0, d1 = 1.0;
  Real s0 = 0.0, s1 = 0.0;
  for (int k = 1; k < l; ++k) {
    const Real p2 = ((2 * k + 1) * u * p1 - k * p0) / (k + 1);
    const Real d2 = d0 + (2 * k + 1) * p1;
    const Real s2 = s0 + (2 * k + 1) * d1;
    p0 = p1; p1 = p2;
    d0 = d1; d1 = d2;
    s0 = s1; s1 = s2;
  }
  return {p1, d1, s1};
}

Real legendre_p0(int l) {
  if (l % 2 == 1) return 0.0;
  Real v = 1.0;  // P_0(0)
  for (int k = 1; k + 1 <= l; k += 2) v *= -Real(k) / Real(k + 1);
  return v;
}

Real legendre_dp0(int l) {
  if (l == 0) return 0.0;
  return l * legendre_p0(l - 1);
}

}  // namespace conormal
