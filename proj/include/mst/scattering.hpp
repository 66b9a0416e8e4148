#pragma once

// Single-site scattering: t-matrices by boundary matching and by the
// integral (Lippmann-Schwinger) route, the matrix t-matrix of a
// non-spherical site, the partial-wave free Green's function and the poles
// of a single well.
//
// Conventions: outside the sphere the regular solution launched in channel L
// is J_L + sum_L' H_L' t_{L'L}, with J_L = j_l(sqrt(z) r) Y_L and likewise H.

#include <utility>
#include <vector>

#include "mst/potential.hpp"
#include "mst/radial.hpp"
#include "mst/specfun.hpp"

namespace mst::scattering {

using specfun::EnergyParameter;

struct TMatrix {
  int site = -1;
  double energy = 0.0;
  int L = 0;
  MatrixXc values; // (L+1)^2 square, packed (l, m) order
  bool diagonal = true;
  double matching_condition = 1.0; // condition estimate of the matching system
};

/// t_l from chi(R), chi'(R). Invariant under rescaling of chi.
/// Throws AsymptoticProblem when the matching denominator vanishes.
cplx t_matrix_log_derivative(const radial::RadialSolution &sol, EnergyParameter z, double R,
                             int site = -1);

/// t_l = -i sqrt(z) int_0^R j_l V chi r^2 dr with chi normalized so that its
/// exterior form is j_l + t h_l. Composite Simpson on the mesh in ln r.
cplx t_matrix_lippmann_schwinger(const PotentialModel &model, int ell, EnergyParameter z,
                                 const radial::RadialMesh &mesh);

/// Unit-j normalization factor alpha with chi = alpha (j + t h) at R.
cplx unit_j_scale(double chi, double dchi, int ell, EnergyParameter z, double R);

/// Diagonal t-matrix of a spherical site for l <= L.
TMatrix t_matrix_spherical(const PotentialModel &model, int L, EnergyParameter z,
                           const radial::RadialMesh &mesh, int site = -1);

/// Full matching of the coupled solutions: X A - H T = J, X' A - sqrt(z) H' T = sqrt(z) J'.
/// Returns T; `launch` (if non-null) receives A.
TMatrix t_matrix_nonspherical(const radial::CoupledSolutionMatrix &sol, EnergyParameter z, double R,
                              int site = -1, MatrixXc *launch = nullptr);

/// -i sqrt(z) int j_l' Vbar_{L'L''} (X A)_{L''L} r^2 dr for the coupled solution
/// normalized by `launch`. Used as an independent check of the matching route.
MatrixXc t_matrix_coupled_integral(const PotentialModel &model, const radial::CoupledSolutionMatrix &sol,
                                   const MatrixXc &launch, EnergyParameter z, const radial::RadialMesh &mesh);

/// sum_{l <= ell_cut} sum_m Y_lm(r^) g_l(r, r') Y_lm(r'^),
/// g_l = -i sqrt(z) j_l(sqrt(z) r_<) h_l(sqrt(z) r_>).
cplx free_green_partial_wave(const Vec3 &r, const Vec3 &rp, EnergyParameter z, int ell_cut);

/// Real matching function d(E) = chi' kappa_l - chi d kappa_l/dr at R, whose
/// zeros are the single-site bound states for angular momentum l.
double pole_function(const PotentialModel &model, int ell, double E, const radial::RadialMesh &mesh);

/// Zeros of pole_function in [E_lo, E_hi] by sign-change bracketing on a
/// grid of the given step and bisection to `tol`.
std::vector<double> find_t_pole(const PotentialModel &model, int ell, double E_lo, double E_hi,
                                const radial::RadialMesh &mesh, double step = 0.05, double tol = 1e-11);

} // namespace mst::scattering
