#pragma once

// KKR secular matrix S = I - G T and the assumption matrix
// P = I + G diag(j_l(sqrt(z) R_n') / h_l(sqrt(z) R_n')), i.e. S at t = -j/h.
//
// With b^n = T^n a^n the exterior wave is sum_n b^n . H(r - R_n) and the
// incoming amplitudes at site n are a^n = sum_n' g^{nn'} b^n', so a bound
// state is a null vector of S.

#include <vector>

#include "mst/scattering.hpp"
#include "mst/structure.hpp"

namespace mst::kkr {

struct SecularMatrix {
  double energy = 0.0;
  int L = 0;
  MatrixXc S;
  // Similarity scaling K = |j_l(k R_n)| per channel: incoming amplitudes are
  // measured by their size on the sphere surface, which keeps K G T K^-1
  // bounded as l grows.
  Eigen::VectorXd channel_scale;
  // Column scaling D_j = 1 / max(1, |K T K^-1 e_j|), which keeps the matrix
  // well conditioned next to single-site t-matrix poles.
  Eigen::VectorXd column_scale;

  /// K S K^-1 D. Singular exactly when S is; a null vector y maps back to
  /// a = K^-1 D y.
  MatrixXc scaled() const;
};

/// S = I - G T. With `radii` empty the scalings K and D are identities.
SecularMatrix assemble_secular(const StructureConstants &g, const std::vector<scattering::TMatrix> &tmats,
                               const std::vector<double> &radii = {});

MatrixXc assumption_matrix(const StructureConstants &g, const std::vector<double> &radii, EnergyParameter z);

struct SecularDiagnostics {
  cplx det = 1.0;
  double sigma_min = 1.0;
  cplx det_P = 1.0;
};

/// Determinant of S by partial-pivot LU; smallest singular value of S D by
/// LAPACK zgesvd.
SecularDiagnostics secular_diagnostics(const SecularMatrix &S, const MatrixXc &P);

/// Smallest singular value only.
double smallest_singular_value(const MatrixXc &S);

struct NullSpace {
  std::vector<VectorXc> a; // unit-norm right singular vectors with sigma < tol
  std::vector<VectorXc> b; // per vector, the stacked outgoing amplitudes T a
  std::vector<double> sigma;
  int multiplicity() const { return static_cast<int>(a.size()); }
};

/// Null basis of S: K^-1 D times every right singular vector of K S K^-1 D whose singular
/// value is below `tol`. Each vector has unit norm and its first
/// largest-magnitude entry real and positive. Throws NotSingular when
/// sigma_min >= tol.
NullSpace null_space(const SecularMatrix &S, const std::vector<scattering::TMatrix> &tmats, double tol);

} // namespace mst::kkr
