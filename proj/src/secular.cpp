#include "mst/secular.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <lapacke.h>

namespace mst::kkr {

namespace {

// Eigen 3.4's BDCSVD occasionally returns a smallest singular value that is off
// by a factor of a few; LAPACK's QR-iteration driver does not.
struct Svd {
  Eigen::VectorXd values;
  MatrixXc V;
};

Svd svd(MatrixXc A, bool want_v) {
  const lapack_int m = static_cast<lapack_int>(A.rows()), n = static_cast<lapack_int>(A.cols());
  Svd out;
  out.values.resize(std::min(m, n));
  if (want_v)
    out.V.resize(n, n);
  std::vector<double> superb(std::max<lapack_int>(1, std::min(m, n)));
  MatrixXc Vh(want_v ? n : 1, want_v ? n : 1);
  const lapack_int info = LAPACKE_zgesvd(LAPACK_COL_MAJOR, 'N', want_v ? 'A' : 'N', m, n,
                                         reinterpret_cast<lapack_complex_double *>(A.data()), m,
                                         out.values.data(), nullptr, 1,
                                         reinterpret_cast<lapack_complex_double *>(Vh.data()), Vh.rows(), superb.data());
  if (info != 0)
    throw std::runtime_error("zgesvd failed: info = " + std::to_string(info));
  if (want_v)
    out.V = Vh.adjoint();
  return out;
}

void check_blocks(const StructureConstants &g, const std::vector<scattering::TMatrix> &tmats) {
  const int b = g.block_size();
  if (static_cast<int>(tmats.size()) != g.sites)
    throw std::invalid_argument("one t-matrix per site is required");
  for (const auto &t : tmats)
    if (t.values.rows() != b || t.values.cols() != b)
      throw std::invalid_argument("t-matrix cutoff does not match the structure constants");
}

} // namespace

MatrixXc SecularMatrix::scaled() const {
  const Eigen::VectorXd inv = channel_scale.cwiseInverse();
  return channel_scale.asDiagonal() * S * (inv.cwiseProduct(column_scale)).asDiagonal();
}

SecularMatrix assemble_secular(const StructureConstants &g, const std::vector<scattering::TMatrix> &tmats,
                               const std::vector<double> &radii) {
  check_blocks(g, tmats);
  const int b = g.block_size();
  const int dim = b * g.sites;
  SecularMatrix out;
  out.energy = g.energy;
  out.L = g.L;
  out.S = MatrixXc::Identity(dim, dim);
  out.channel_scale = Eigen::VectorXd::Ones(dim);
  out.column_scale.resize(dim);
  if (!radii.empty()) {
    if (static_cast<int>(radii.size()) != g.sites)
      throw std::invalid_argument("one radius per site is required");
    const EnergyParameter z(g.energy);
    for (int n = 0; n < g.sites; ++n) {
      const auto mag = specfun::modified_i(g.L, z.k() * radii[n]);
      for (int c = 0; c < b; ++c)
        out.channel_scale[n * b + c] = mag[harmonics::ell_of(c)];
    }
  }
  for (int np = 0; np < g.sites; ++np) {
    const auto &t = tmats[np];
    const auto k = out.channel_scale.segment(np * b, b);
    for (int c = 0; c < b; ++c) {
      const double norm = (k.cwiseProduct(t.values.col(c).cwiseAbs())).norm() / k[c];
      out.column_scale[np * b + c] = 1.0 / std::max(1.0, norm);
    }
    if (t.diagonal) {
      for (int c = 0; c < b; ++c)
        out.S.col(np * b + c) -= g.G.col(np * b + c) * t.values(c, c);
    } else {
      out.S.middleCols(np * b, b) -= g.G.middleCols(np * b, b) * t.values;
    }
  }
  return out;
}

MatrixXc assumption_matrix(const StructureConstants &g, const std::vector<double> &radii, EnergyParameter z) {
  if (static_cast<int>(radii.size()) != g.sites)
    throw std::invalid_argument("one radius per site is required");
  const int b = g.block_size();
  const int dim = b * g.sites;
  MatrixXc P = MatrixXc::Identity(dim, dim);
  for (int np = 0; np < g.sites; ++np) {
    const auto j = specfun::bessel_j(g.L, z, radii[np]);
    const auto h = specfun::hankel_h(g.L, z, radii[np]);
    for (int c = 0; c < b; ++c) {
      const int l = harmonics::ell_of(c);
      P.col(np * b + c) += g.G.col(np * b + c) * (j[l] / h[l]);
    }
  }
  return P;
}

double smallest_singular_value(const MatrixXc &S) {
  if (S.size() == 0)
    return 1.0;
  const auto sv = svd(S, false).values;
  return sv[sv.size() - 1];
}

SecularDiagnostics secular_diagnostics(const SecularMatrix &S, const MatrixXc &P) {
  SecularDiagnostics d;
  d.det = Eigen::PartialPivLU<MatrixXc>(S.S).determinant();
  d.sigma_min = smallest_singular_value(S.scaled());
  d.det_P = Eigen::PartialPivLU<MatrixXc>(P).determinant();
  return d;
}

NullSpace null_space(const SecularMatrix &S, const std::vector<scattering::TMatrix> &tmats, double tol) {
  const auto dec = svd(S.scaled(), true);
  const auto &sv = dec.values;
  const Eigen::Index n = sv.size();
  if (!(sv[n - 1] < tol))
    throw NotSingular("secular matrix is not singular: sigma_min = " + std::to_string(sv[n - 1]));
  NullSpace out;
  const int b = static_cast<int>(tmats.empty() ? n : tmats.front().values.rows());
  for (Eigen::Index k = n - 1; k >= 0 && sv[k] < tol; --k) {
    VectorXc a = S.column_scale.cwiseQuotient(S.channel_scale).asDiagonal() * dec.V.col(k);
    Eigen::Index imax = 0;
    for (Eigen::Index i = 1; i < a.size(); ++i)
      if (std::abs(a[i]) > std::abs(a[imax]))
        imax = i;
    a *= std::abs(a[imax]) / a[imax];
    a /= a.norm();
    VectorXc bvec(a.size());
    for (std::size_t site = 0; site < tmats.size(); ++site)
      bvec.segment(site * b, b) = tmats[site].values * a.segment(site * b, b);
    out.a.push_back(std::move(a));
    out.b.push_back(std::move(bvec));
    out.sigma.push_back(sv[k]);
  }
  return out;
}

} // namespace mst::kkr
