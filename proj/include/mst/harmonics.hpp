#pragma once

// Real (tesseral) spherical harmonics, Gaunt coefficients and a product
// quadrature on the unit sphere.
//
// Y_{l0} = N_l P_l(cos t); Y_{lm} = sqrt(2) N_lm P_l^m(cos t) cos(m phi) for m > 0
// and sqrt(2) N_l|m| P_l^|m|(cos t) sin(|m| phi) for m < 0, without the
// Condon-Shortley phase. The set is orthonormal on the sphere.

#include <span>
#include <utility>
#include <vector>

#include "mst/types.hpp"

namespace mst::harmonics {

struct AngularIndex {
  int ell = 0;
  int m = 0;

  /// Linear packing ell^2 + ell + m.
  constexpr int packed() const { return ell * ell + ell + m; }
  static AngularIndex unpack(int idx);

  friend constexpr bool operator==(AngularIndex, AngularIndex) = default;
};

/// Number of (l, m) pairs with l <= L.
constexpr int num_channels(int L) { return (L + 1) * (L + 1); }

/// ell of the packed index.
int ell_of(int packed);

/// Value of one real harmonic. Throws DomainError for non-unit directions.
double ylm(AngularIndex index, const Vec3 &direction);

/// All real harmonics with l <= L, packed order, for a unit direction.
void ylm_all(int L, const Vec3 &direction, std::span<double> out);
std::vector<double> ylm_all(int L, const Vec3 &direction);

struct SphereQuadrature {
  std::vector<Vec3> nodes;
  std::vector<double> weights;
  int degree = 0;
};

/// Gauss-Legendre in cos(theta) times the uniform trapezoid in phi; exact for
/// spherical polynomials of total degree <= `degree`.
SphereQuadrature sphere_quadrature(int degree);

/// Gauss-Legendre nodes and weights on [-1, 1].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n);

/// True when the triple product of real harmonics vanishes by parity,
/// the triangle rule or the azimuthal rule.
bool gaunt_vanishes(AngularIndex a, AngularIndex b, AngularIndex c);

/// Integral of Y_a Y_b Y_c over the sphere (real convention).
double gaunt(AngularIndex a, AngularIndex b, AngularIndex c);

/// Sparse table of Gaunt coefficients C(a, b, c) for l_a <= L_a, l_b <= L_b,
/// l_c <= L_c. Immutable after construction.
class GauntTable {
public:
  struct Entry {
    int c;
    double value;
  };

  GauntTable(int L_a, int L_b, int L_c);

  int L_a() const { return L_a_; }
  int L_b() const { return L_b_; }
  int L_c() const { return L_c_; }

  /// Nonzero entries for a fixed packed (a, b), sorted by c.
  std::span<const Entry> row(int a, int b) const;
  double operator()(int a, int b, int c) const;

private:
  int L_a_;
  int L_b_;
  int L_c_;
  std::vector<std::size_t> offsets_;
  std::vector<Entry> entries_;
};

} // namespace mst::harmonics
