#include "mst/radial.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>

namespace mst::radial {

using harmonics::AngularIndex;
using harmonics::num_channels;

RadialMesh RadialMesh::geometric(double R, int intervals, double start_fraction) {
  if (!(R > 0.0) || intervals < 2 || !(start_fraction > 0.0 && start_fraction < 1.0))
    throw DomainError("invalid radial mesh parameters");
  RadialMesh mesh;
  mesh.log_step = -std::log(start_fraction) / intervals;
  mesh.r.resize(intervals + 1);
  const double r0 = start_fraction * R;
  for (int i = 0; i <= intervals; ++i)
    mesh.r[i] = r0 * std::exp(i * mesh.log_step);
  mesh.r.back() = R;
  return mesh;
}

namespace {

// Butcher's seven-stage sixth-order Runge-Kutta tableau. Its abscissae take
// four distinct values per step besides the far node: 0, 1/3, 1/2, 2/3.
constexpr int rk_stages = 7;
constexpr int slots_per_step = 4;
constexpr double slot_fraction[slots_per_step] = {0.0, 1.0 / 3.0, 0.5, 2.0 / 3.0};
constexpr int rk_slot[rk_stages] = {0, 1, 3, 1, 2, 2, 4};
constexpr double rk_a[rk_stages][rk_stages - 1] = {
    {},
    {1.0 / 3.0},
    {0.0, 2.0 / 3.0},
    {1.0 / 12.0, 1.0 / 3.0, -1.0 / 12.0},
    {-1.0 / 16.0, 9.0 / 8.0, -3.0 / 16.0, -3.0 / 8.0},
    {0.0, 9.0 / 8.0, -3.0 / 8.0, -3.0 / 4.0, 1.0 / 2.0},
    {9.0 / 44.0, -9.0 / 11.0, 63.0 / 44.0, 18.0 / 11.0, 0.0, -16.0 / 11.0}};
constexpr double rk_b[rk_stages] = {11.0 / 120.0, 0.0, 27.0 / 40.0, 27.0 / 40.0, -4.0 / 15.0, -4.0 / 15.0,
                                    11.0 / 120.0};

// Radii of every stage: slot k of step i sits at r_i exp(slot_fraction[k] h),
// and position slots_per_step * M is the outer node R.
std::vector<double> stage_radii(const RadialMesh &mesh) {
  const int M = mesh.intervals();
  std::vector<double> r(slots_per_step * M + 1);
  for (int i = 0; i < M; ++i)
    for (int k = 0; k < slots_per_step; ++k)
      r[slots_per_step * i + k] = std::min(mesh.r[i] * std::exp(slot_fraction[k] * mesh.log_step), mesh.r[M]);
  r.back() = mesh.r[M];
  return r;
}

// One step for dy/ds = f(slot, y); `base` is the first stage slot of the step.
template <class State, class Rhs>
void rk_step(State &y, double h, std::size_t base, Rhs &&f, std::array<State, rk_stages> &k, State &tmp) {
  for (int s = 0; s < rk_stages; ++s) {
    tmp = y;
    for (int j = 0; j < s; ++j)
      if (rk_a[s][j] != 0.0)
        tmp += (h * rk_a[s][j]) * k[j];
    f(base + rk_slot[s], tmp, k[s]);
  }
  for (int s = 0; s < rk_stages; ++s)
    if (rk_b[s] != 0.0)
      y += (h * rk_b[s]) * k[s];
}

// Near-origin slope w_s / w for the first Coulomb series term w ~ 1 - Z r / (2(l+1)).
double coulomb_start_slope(double Z, int ell, double r0) {
  if (Z == 0.0)
    return 0.0;
  const double a = -Z / (2.0 * (ell + 1));
  return a * r0 / (1.0 + a * r0);
}

void check_finite(double v, double r) {
  if (!std::isfinite(v))
    throw IntegrationError("radial integration produced a non-finite value", r);
}

} // namespace

RadialSolution solve_radial_spherical(const PotentialModel &model, int ell, EnergyParameter z,
                                      const RadialMesh &mesh) {
  return solve_radial_spherical(model, ell, z, mesh, 1.0);
}

RadialSolution solve_radial_spherical(const PotentialModel &model, int ell, EnergyParameter z,
                                      const RadialMesh &mesh, double launch_scale) {
  if (ell < 0)
    throw DomainError("negative angular momentum");
  if (!model.is_spherical())
    throw DomainError("single-channel solver requires a spherical potential");
  const int M = mesh.intervals();
  const double h = mesh.log_step;
  const double c = 2.0 * ell + 1.0;
  // q = r^2 (V - z) at every stage radius.
  const auto rs = stage_radii(mesh);
  std::vector<double> q(rs.size());
  for (std::size_t i = 0; i < rs.size(); ++i) {
    // V is evaluated strictly inside (r < R) at the last node.
    const double rr = std::min(rs[i], mesh.radius() * (1.0 - 1e-15));
    q[i] = rs[i] * rs[i] * (model.spherical(rr) - z.z());
  }

  RadialSolution sol;
  sol.ell = ell;
  sol.value.resize(M + 1);
  sol.deriv.resize(M + 1);

  // State (w, w_s).
  Eigen::Vector2d y(launch_scale,
                    launch_scale * coulomb_start_slope(model.coulomb_strength(), ell, mesh.start()));
  auto store = [&](int i) {
    const double r = mesh.r[i];
    const double rl = std::pow(r, ell);
    sol.value[i] = rl * y[0];
    sol.deriv[i] = rl / r * (ell * y[0] + y[1]);
  };
  auto rhs = [&](std::size_t slot, const Eigen::Vector2d &v, Eigen::Vector2d &dv) {
    dv[0] = v[1];
    dv[1] = -c * v[1] + q[slot] * v[0];
  };
  std::array<Eigen::Vector2d, rk_stages> k;
  Eigen::Vector2d tmp;
  store(0);
  for (int i = 0; i < M; ++i) {
    rk_step(y, h, static_cast<std::size_t>(slots_per_step) * i, rhs, k, tmp);
    store(i + 1);
    if (i % 256 == 0 || i + 1 == M) {
      check_finite(y[0], mesh.r[i + 1]);
      check_finite(y[1], mesh.r[i + 1]);
    }
  }
  return sol;
}

CouplingMatrix::CouplingMatrix(const PotentialModel &model, int L_in)
    : L_in_(L_in), components_(model.components()) {
  if (L_in < 0)
    throw DomainError("negative inner cutoff");
  const harmonics::GauntTable table(L_in, L_in, model.max_degree());
  const int n = num_channels(L_in);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      for (std::size_t ci = 0; ci < components_.size(); ++ci) {
        const double g = table(j, k, components_[ci]);
        if (g != 0.0)
          terms_.push_back({j, k, static_cast<int>(ci), g});
      }
    }
  }
}

Eigen::MatrixXd CouplingMatrix::evaluate(const PotentialModel &model, double r) const {
  const int n = size();
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(n, n);
  std::vector<double> comp(components_.size());
  for (std::size_t ci = 0; ci < components_.size(); ++ci)
    comp[ci] = model.multipole(AngularIndex::unpack(components_[ci]), r);
  for (const auto &t : terms_)
    v(t.row, t.col) += t.gaunt * comp[t.component];
  return v;
}

namespace {

// Sweep the matrix system from r_0 to R. `launch` holds w(r_0) column by column;
// `on_node(i, W, P)` is called at every node.
void coupled_sweep(const PotentialModel &model, const CouplingMatrix &coupling, EnergyParameter z,
                   const RadialMesh &mesh, const Eigen::MatrixXd &launch,
                   const std::function<void(int, const Eigen::MatrixXd &, const Eigen::MatrixXd &)> &on_node) {
  const int n = coupling.size();
  const int M = mesh.intervals();
  const double h = mesh.log_step;
  const auto rs = stage_radii(mesh);

  std::vector<int> ells(n);
  for (int j = 0; j < n; ++j)
    ells[j] = harmonics::ell_of(j);
  Eigen::VectorXd damping(n);
  for (int j = 0; j < n; ++j)
    damping[j] = 2.0 * ells[j] + 1.0;

  // Per stage radius: r^2 * gaunt * V_c(r) * r^{l_k - l_j} for every coupling term.
  const auto &terms = coupling.terms();
  const auto &comps = coupling.components();
  const std::size_t nt = terms.size();
  std::vector<double> coef(rs.size() * nt);
  std::vector<double> comp(comps.size());
  for (std::size_t s = 0; s < rs.size(); ++s) {
    const double r = std::min(rs[s], mesh.radius() * (1.0 - 1e-15));
    for (std::size_t ci = 0; ci < comps.size(); ++ci)
      comp[ci] = model.multipole(AngularIndex::unpack(comps[ci]), r);
    for (std::size_t t = 0; t < nt; ++t) {
      const auto &tm = terms[t];
      coef[s * nt + t] = rs[s] * rs[s] * tm.gaunt * comp[tm.component] *
                         std::pow(rs[s], ells[tm.col] - ells[tm.row]);
    }
  }

  // State Y = [W^T, W_s^T], one row per launch, so that every coupling term
  // is a contiguous column update.
  const Eigen::Index cols = launch.cols();
  auto rhs = [&](std::size_t s, const Eigen::MatrixXd &Y, Eigen::MatrixXd &dY) {
    const double r2z = rs[s] * rs[s] * z.z();
    dY.resize(cols, 2 * n);
    const auto W = Y.leftCols(n);
    const auto P = Y.rightCols(n);
    dY.leftCols(n) = P;
    dY.rightCols(n) = -(P * damping.asDiagonal()) - r2z * W;
    const double *c = coef.data() + s * nt;
    for (std::size_t t = 0; t < nt; ++t)
      dY.col(n + terms[t].row) += c[t] * W.col(terms[t].col);
  };

  Eigen::MatrixXd Y(cols, 2 * n);
  Y.leftCols(n) = launch.transpose();
  const double Z = model.coulomb_strength();
  for (int j = 0; j < n; ++j)
    Y.col(n + j) = coulomb_start_slope(Z, ells[j], mesh.start()) * launch.row(j).transpose();

  std::array<Eigen::MatrixXd, rk_stages> k;
  Eigen::MatrixXd tmp;
  on_node(0, Y.leftCols(n).transpose(), Y.rightCols(n).transpose());
  for (int i = 0; i < M; ++i) {
    rk_step(Y, h, static_cast<std::size_t>(slots_per_step) * i, rhs, k, tmp);
    if ((i % 256 == 0 || i + 1 == M) && !Y.allFinite())
      throw IntegrationError("coupled radial integration produced a non-finite value", mesh.r[i + 1]);
    on_node(i + 1, Y.leftCols(n).transpose(), Y.rightCols(n).transpose());
  }
}

// chi = r^l w and chi' = r^{l-1} (l w + w_s), row by row.
void to_chi(const std::vector<int> &ells, double r, const Eigen::MatrixXd &W, const Eigen::MatrixXd &P,
            Eigen::MatrixXd &X, Eigen::MatrixXd &Xp) {
  X.resize(W.rows(), W.cols());
  Xp.resize(W.rows(), W.cols());
  for (Eigen::Index j = 0; j < W.rows(); ++j) {
    const double rl = std::pow(r, ells[j]);
    X.row(j) = rl * W.row(j);
    Xp.row(j) = rl / r * (ells[j] * W.row(j) + P.row(j));
  }
}

} // namespace

CoupledSolutionMatrix solve_coupled_channels(const PotentialModel &model, int L_in, EnergyParameter z,
                                             const RadialMesh &mesh, bool keep_samples) {
  const CouplingMatrix coupling(model, L_in);
  const int n = coupling.size();
  std::vector<int> ells(n);
  for (int j = 0; j < n; ++j)
    ells[j] = harmonics::ell_of(j);

  CoupledSolutionMatrix out;
  out.energy = z.z();
  out.L_in = L_in;
  if (keep_samples)
    out.samples.resize(mesh.r.size());
  Eigen::MatrixXd Wend, Pend;
  coupled_sweep(model, coupling, z, mesh, Eigen::MatrixXd::Identity(n, n),
                [&](int i, const Eigen::MatrixXd &W, const Eigen::MatrixXd &P) {
                  if (keep_samples) {
                    Eigen::MatrixXd Xi, Xpi;
                    to_chi(ells, mesh.r[i], W, P, Xi, Xpi);
                    out.samples[i] = std::move(Xi);
                  }
                  if (i == mesh.intervals()) {
                    Wend = W;
                    Pend = P;
                  }
                });
  to_chi(ells, mesh.radius(), Wend, Pend, out.X, out.Xp);
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(out.X);
  const auto &sv = svd.singularValues();
  out.condition = sv[sv.size() - 1] > 0.0 ? sv[0] / sv[sv.size() - 1] : INFINITY;
  return out;
}

ChannelSamples solve_coupled_launch(const PotentialModel &model, int L_in, EnergyParameter z,
                                    const RadialMesh &mesh, const Eigen::VectorXcd &launch) {
  const CouplingMatrix coupling(model, L_in);
  const int n = coupling.size();
  if (launch.size() != n)
    throw DomainError("launch vector has the wrong number of channels");
  std::vector<int> ells(n);
  for (int j = 0; j < n; ++j)
    ells[j] = harmonics::ell_of(j);

  Eigen::MatrixXd W0(n, 2);
  W0.col(0) = launch.real();
  W0.col(1) = launch.imag();
  ChannelSamples out;
  out.value.resize(mesh.r.size());
  out.deriv.resize(mesh.r.size());
  coupled_sweep(model, coupling, z, mesh, W0, [&](int i, const Eigen::MatrixXd &W, const Eigen::MatrixXd &P) {
    Eigen::MatrixXd X, Xp;
    to_chi(ells, mesh.r[i], W, P, X, Xp);
    out.value[i] = X.col(0).cast<cplx>() + imag_unit * X.col(1).cast<cplx>();
    out.deriv[i] = Xp.col(0).cast<cplx>() + imag_unit * Xp.col(1).cast<cplx>();
  });
  return out;
}

} // namespace mst::radial
