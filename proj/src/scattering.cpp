#include "mst/scattering.hpp"

#include <algorithm>
#include <cmath>

namespace mst::scattering {

using harmonics::AngularIndex;
using harmonics::ell_of;
using harmonics::num_channels;

namespace {

// V is sampled strictly inside the sphere so the last node sees the inner limit.
double inside(double r, double R) { return std::min(r, R * (1.0 - 1e-15)); }

} // namespace

cplx t_matrix_log_derivative(const radial::RadialSolution &sol, EnergyParameter z, double R, int site) {
  const int l = sol.ell;
  const auto basis = specfun::radial_basis(l, z, R);
  const cplx sz = z.sqrt_z();
  const double chi = sol.value_at_R();
  const double dchi = sol.deriv_at_R();
  const cplx num = sz * chi * basis.jp[l] - dchi * basis.j[l];
  const cplx den = dchi * basis.h[l] - sz * chi * basis.hp[l];
  const double scale = std::abs(dchi * basis.h[l]) + std::abs(sz * chi * basis.hp[l]);
  if (!(std::abs(den) > 1e-14 * scale))
    throw AsymptoticProblem(site, l, z.z(), "vanishing matching denominator");
  return num / den;
}

cplx unit_j_scale(double chi, double dchi, int ell, EnergyParameter z, double R) {
  const auto basis = specfun::radial_basis(ell, z, R);
  const cplx sz = z.sqrt_z();
  const cplx x = sz * R;
  // chi sqrt(z) h' - chi' h = alpha sqrt(z) (j h' - j' h) = alpha sqrt(z) i / x^2.
  return (chi * sz * basis.hp[ell] - dchi * basis.h[ell]) / (sz * imag_unit / (x * x));
}

cplx t_matrix_lippmann_schwinger(const PotentialModel &model, int ell, EnergyParameter z,
                                 const radial::RadialMesh &mesh) {
  const auto sol = radial::solve_radial_spherical(model, ell, z, mesh);
  const double R = mesh.radius();
  const cplx alpha = unit_j_scale(sol.value_at_R(), sol.deriv_at_R(), ell, z, R);
  if (std::abs(alpha) == 0.0)
    throw AsymptoticProblem(-1, ell, z.z(), "zero unit-j normalization");
  std::vector<cplx> f(mesh.r.size());
  for (std::size_t i = 0; i < mesh.r.size(); ++i) {
    const double r = mesh.r[i];
    const double V = model.spherical(inside(r, R));
    if (V == 0.0) {
      f[i] = 0.0;
      continue;
    }
    const cplx j = specfun::bessel_j(ell, z, r)[ell];
    f[i] = j * V * (sol.value[i] / alpha) * r * r * r;
  }
  return -imag_unit * z.sqrt_z() * radial::integrate_log_mesh(mesh, f);
}

TMatrix t_matrix_spherical(const PotentialModel &model, int L, EnergyParameter z,
                           const radial::RadialMesh &mesh, int site) {
  TMatrix t;
  t.site = site;
  t.energy = z.z();
  t.L = L;
  t.values = MatrixXc::Zero(num_channels(L), num_channels(L));
  t.diagonal = true;
  for (int l = 0; l <= L; ++l) {
    const auto sol = radial::solve_radial_spherical(model, l, z, mesh);
    const cplx tl = t_matrix_log_derivative(sol, z, mesh.radius(), site);
    for (int m = -l; m <= l; ++m) {
      const int i = AngularIndex{l, m}.packed();
      t.values(i, i) = tl;
    }
  }
  return t;
}

TMatrix t_matrix_nonspherical(const radial::CoupledSolutionMatrix &sol, EnergyParameter z, double R, int site,
                              MatrixXc *launch) {
  const int n = num_channels(sol.L_in);
  const auto basis = specfun::radial_basis(sol.L_in, z, R);
  const cplx sz = z.sqrt_z();

  MatrixXc M = MatrixXc::Zero(2 * n, 2 * n);
  MatrixXc rhs = MatrixXc::Zero(2 * n, n);
  M.topLeftCorner(n, n) = sol.X.cast<cplx>();
  M.bottomLeftCorner(n, n) = sol.Xp.cast<cplx>();
  for (int i = 0; i < n; ++i) {
    const int l = ell_of(i);
    M(i, n + i) = -basis.h[l];
    M(n + i, n + i) = -sz * basis.hp[l];
    rhs(i, i) = basis.j[l];
    rhs(n + i, i) = sz * basis.jp[l];
  }
  // Column scaling keeps the X block and the Hankel block comparable.
  Eigen::VectorXd colscale(2 * n);
  for (int c = 0; c < 2 * n; ++c) {
    const double norm = M.col(c).norm();
    colscale[c] = norm > 0.0 ? 1.0 / norm : 1.0;
  }
  const MatrixXc Ms = M * colscale.asDiagonal();
  const Eigen::FullPivLU<MatrixXc> lu(Ms);
  const double rcond = lu.rcond();
  if (!lu.isInvertible() || !(rcond > 1e-15))
    throw AsymptoticProblem(site, -1, z.z(), "singular matching system");
  const MatrixXc sol_at = colscale.asDiagonal() * lu.solve(rhs);

  TMatrix t;
  t.site = site;
  t.energy = z.z();
  t.L = sol.L_in;
  t.values = sol_at.bottomRows(n);
  t.diagonal = false;
  t.matching_condition = 1.0 / rcond;
  if (launch)
    *launch = sol_at.topRows(n);
  return t;
}

MatrixXc t_matrix_coupled_integral(const PotentialModel &model, const radial::CoupledSolutionMatrix &sol,
                                   const MatrixXc &launch, EnergyParameter z, const radial::RadialMesh &mesh) {
  if (sol.samples.size() != mesh.r.size())
    throw DomainError("coupled solution was computed without samples");
  const radial::CouplingMatrix coupling(model, sol.L_in);
  const int n = coupling.size();
  const double R = mesh.radius();
  std::vector<MatrixXc> f(mesh.r.size(), MatrixXc::Zero(n, n));
  for (std::size_t i = 0; i < mesh.r.size(); ++i) {
    const double r = mesh.r[i];
    const auto j = specfun::bessel_j(sol.L_in, z, r);
    const Eigen::MatrixXd V = coupling.evaluate(model, inside(r, R));
    const MatrixXc chi = sol.samples[i].cast<cplx>() * launch;
    Eigen::VectorXcd jv(n);
    for (int c = 0; c < n; ++c)
      jv[c] = j[ell_of(c)];
    f[i] = (jv.asDiagonal() * (V.cast<cplx>() * chi)) * (r * r * r);
  }
  const MatrixXc integral = radial::integrate_log_mesh(mesh, f);
  return -imag_unit * z.sqrt_z() * integral;
}

cplx free_green_partial_wave(const Vec3 &r, const Vec3 &rp, EnergyParameter z, int ell_cut) {
  const double a = r.norm(), b = rp.norm();
  if (!(a > 0.0 && b > 0.0))
    throw DomainError("Green's function arguments must be away from the origin");
  const double rl = std::min(a, b), rg = std::max(a, b);
  const auto j = specfun::bessel_j(ell_cut, z, rl);
  const auto h = specfun::hankel_h(ell_cut, z, rg);
  const auto ya = harmonics::ylm_all(ell_cut, r / a);
  const auto yb = harmonics::ylm_all(ell_cut, rp / b);
  cplx sum = 0.0;
  for (int l = 0; l <= ell_cut; ++l) {
    double angular = 0.0;
    for (int m = -l; m <= l; ++m) {
      const int i = AngularIndex{l, m}.packed();
      angular += ya[i] * yb[i];
    }
    sum += j[l] * h[l] * angular;
  }
  return -imag_unit * z.sqrt_z() * sum;
}

double pole_function(const PotentialModel &model, int ell, double E, const radial::RadialMesh &mesh) {
  const EnergyParameter z(E);
  const auto sol = radial::solve_radial_spherical(model, ell, z, mesh);
  const double R = mesh.radius();
  const auto basis = specfun::radial_basis(ell, z, R);
  const cplx den = sol.deriv_at_R() * basis.h[ell] - z.sqrt_z() * sol.value_at_R() * basis.hp[ell];
  // h_l(ikR) = -(-i)^l kappa_l(kR): strip the constant phase to get a real function.
  const cplx real_form = den / (-ipow(-ell));
  // Normalize by |chi(R)| + |chi'(R)| so the magnitude stays O(kappa).
  return real_form.real() / (std::abs(sol.value_at_R()) + std::abs(sol.deriv_at_R()) / (z.k() + 1.0));
}

std::vector<double> find_t_pole(const PotentialModel &model, int ell, double E_lo, double E_hi,
                                const radial::RadialMesh &mesh, double step, double tol) {
  if (!(E_hi < 0.0) || E_lo > E_hi || !(step > 0.0))
    throw DomainError("invalid pole search window");
  std::vector<double> roots;
  const int n = std::max(1, static_cast<int>(std::ceil((E_hi - E_lo) / step)));
  double e_prev = E_lo;
  double f_prev = pole_function(model, ell, e_prev, mesh);
  for (int i = 1; i <= n; ++i) {
    const double e = (i == n) ? E_hi : E_lo + i * (E_hi - E_lo) / n;
    const double f = pole_function(model, ell, e, mesh);
    if (f_prev == 0.0) {
      roots.push_back(e_prev);
    } else if (f_prev * f < 0.0) {
      double lo = e_prev, hi = e, flo = f_prev;
      while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double fm = pole_function(model, ell, mid, mesh);
        if (fm == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    e_prev = e;
    f_prev = f;
  }
  return roots;
}

} // namespace mst::scattering
