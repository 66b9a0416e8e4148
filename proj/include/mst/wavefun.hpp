#pragma once

// Truncated eigenfunction u_L of an accepted root.
//
// Inside sphere n:  u = sum_L c^n_L(r) Y_L(r^), with c^n_L = a^n_L chi_l for
// spherical sites (chi normalized to j_l + t_l h_l at R_n) and the coupled
// channel functions of the launch A^n a^n otherwise.
// Outside:          u = sum_n sum_L b^n_L H_L(r - R_n).

#include <array>
#include <iosfwd>
#include <vector>

#include "mst/root_trace.hpp"

namespace mst::wavefun {

struct WaveFunction {
  double energy = 0.0;   // physical E_L
  double internal = 0.0; // E_L / kinetic
  int L = 0;
  std::vector<Vec3> centers;
  std::vector<double> radii;
  std::vector<radial::RadialMesh> meshes;
  // [site][node](channel): c_L(r_i) and d c_L / dr.
  std::vector<std::vector<VectorXc>> value;
  std::vector<std::vector<VectorXc>> deriv;
  std::vector<VectorXc> a; // incoming amplitudes per site
  std::vector<VectorXc> b; // outgoing amplitudes per site
  cplx scale = 1.0;        // global factor applied by normalize()

  /// Index of the sphere containing the point (|r - R_n| < R_n), or -1.
  int site_containing(const Vec3 &point) const;
  cplx evaluate(const Vec3 &point) const;
  /// Interior expansion of site n, valid for |r - R_n| <= R_n.
  cplx interior(int site, const Vec3 &point) const;
  /// Hankel expansion, valid outside every sphere.
  cplx exterior(const Vec3 &point) const;
  /// Channel functions c_L(r) of site n by cubic Hermite interpolation in ln r.
  VectorXc channels(int site, double r) const;
};

/// Wave function of null vector `which` of an accepted root.
WaveFunction build(const kkr::KkrSystem &system, const kkr::EigenResult &root, int which = 0);

/// Wave function from explicit incoming amplitudes a (stacked per site) at energy E.
WaveFunction build(const kkr::KkrSystem &system, double E, const VectorXc &a);

struct JumpMoments {
  VectorXc value; // int [u] Y_L dOmega over the unit sphere around R_n
  VectorXc deriv; // int [d u / d r_n] Y_L dOmega
  double max_abs(int L_max) const;
};

/// Moments of the jumps of u and d u/d r_n across the surface of sphere n for
/// l <= L_check. Outside traces sum every site's Hankel waves directly;
/// derivatives of the other sites' waves use a fourth-order central difference.
JumpMoments surface_jump_moments(const WaveFunction &u, int site, const harmonics::SphereQuadrature &quad,
                                 int L_check);

/// Quadrature degree used by default for jump moments.
int jump_quadrature_degree(int L_check);

struct NormParts {
  double interior = 0.0; // sum over spheres of int |u|^2
  double exterior = 0.0; // interstitial and far field
  double total() const { return interior + exterior; }
};

/// Squared L2 norm split into interior and exterior parts.
NormParts norm_squared(const WaveFunction &u, int radial_nodes = 64, int angular_degree = 48);

/// Copy with unit L2 norm. Throws DomainError for a zero function.
WaveFunction normalize(const WaveFunction &u);

/// Samples on a regular grid as CSV rows x,y,z,Re u,Im u (with header).
void export_grid_csv(const WaveFunction &u, const Vec3 &lo, const Vec3 &hi, const std::array<int, 3> &counts,
                     std::ostream &out);

} // namespace mst::wavefun
