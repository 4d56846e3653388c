#ifndef CONORMAL_LEGENDRE_HPP
#define CONORMAL_LEGENDRE_HPP

#include "conormal/core.hpp"

namespace conormal {

/// P_l(u) by upward three-term recurrence, stable for |u| <= 1.
Real legendre_p(int l, Real u);

/// P_l, P_l', P_l'' at u, each by its own upward recurrence.
struct LegendreJet {
  Real p;
  Real dp;
  Real d2p;
};
LegendreJet legendre_jet(int l, Real u);

/// P_l(0), exact alternating recurrence (0 for odd l).
Real legendre_p0(int l);

/// l * P_{l-1}(0); equals P_l'(0).
Real legendre_dp0(int l);

}  // namespace conormal

#endif  // CONORMAL_LEGENDRE_HPP
