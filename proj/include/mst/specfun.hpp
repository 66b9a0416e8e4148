#pragma once

// Spherical Bessel and Hankel functions at imaginary argument.
//
// For a negative energy z the wave number is sqrt(z) = i k with k = sqrt(|z|),
// so every function here is evaluated at x = i k r. In that regime
//   j_l(i k r) = i^l  * i_l(kr)        (modified spherical Bessel, grows)
//   h_l(i k r) = -(-i)^l * kappa_l(kr) (decays like e^{-kr}/(kr))
// with i_l, kappa_l real and positive. Derivatives are taken with respect to
// the full complex argument x; multiply by sqrt(z) for d/dr.

#include <vector>

#include "mst/types.hpp"

namespace mst::specfun {

/// Arguments with k r above this would overflow e^{kr}.
inline constexpr double max_kr = 700.0;

/// Negative energy parameter z together with its wave number k = sqrt(-z).
class EnergyParameter {
public:
  explicit EnergyParameter(double z);

  double z() const { return z_; }
  double k() const { return k_; }
  /// The branch sqrt(z) = i sqrt(|z|).
  cplx sqrt_z() const { return {0.0, k_}; }

private:
  double z_;
  double k_;
};

/// j_0 .. j_{ell_max} at sqrt(z) r.
std::vector<cplx> bessel_j(int ell_max, EnergyParameter z, double r);

/// h_0 .. h_{ell_max} at sqrt(z) r.
std::vector<cplx> hankel_h(int ell_max, EnergyParameter z, double r);

/// Real magnitudes i_l(x) for l = 0..ell_max (downward Miller recurrence).
std::vector<double> modified_i(int ell_max, double x);

/// Real magnitudes kappa_l(x) = e^{-x}/x sum_n (l+n)!/(n!(l-n)!) (2x)^{-n}.
std::vector<double> modified_k(int ell_max, double x);

struct RadialBasisValues {
  EnergyParameter z;
  double r;
  int ell_max;
  // j and h hold ell_max + 2 entries (one extra order feeds the derivative
  // recurrence); jp and hp hold ell_max + 1 entries once filled.
  std::vector<cplx> j;
  std::vector<cplx> h;
  std::vector<cplx> jp;
  std::vector<cplx> hp;
};

/// Fill jp, hp from j, h using v'_l = (l v_{l-1} - (l+1) v_{l+1})/(2l+1).
RadialBasisValues radial_derivatives(RadialBasisValues values);

/// j, h and their derivatives for l = 0..ell_max.
RadialBasisValues radial_basis(int ell_max, EnergyParameter z, double r);

} // namespace mst::specfun
