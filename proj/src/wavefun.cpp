#include "mst/wavefun.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

namespace mst::wavefun {

using harmonics::ell_of;
using harmonics::num_channels;
using specfun::EnergyParameter;

namespace {

// C-infinity step: 0 for x <= 0, 1 for x >= 1.
double smooth_step(double x) {
  if (x <= 0.0)
    return 0.0;
  if (x >= 1.0)
    return 1.0;
  const double a = std::exp(-1.0 / x);
  const double b = std::exp(-1.0 / (1.0 - x));
  return a / (a + b);
}

// Sum of all Hankel waves except those of `skip`.
cplx hankel_sum(const WaveFunction &u, const Vec3 &p, int skip) {
  const EnergyParameter z(u.internal);
  cplx sum = 0.0;
  for (std::size_t n = 0; n < u.centers.size(); ++n) {
    if (static_cast<int>(n) == skip)
      continue;
    const auto h = kkr::hankel_waves(u.L, z, p - u.centers[n]);
    for (int c = 0; c < num_channels(u.L); ++c)
      sum += u.b[n][c] * h[c];
  }
  return sum;
}

} // namespace

int WaveFunction::site_containing(const Vec3 &point) const {
  for (std::size_t n = 0; n < centers.size(); ++n)
    if ((point - centers[n]).norm() < radii[n])
      return static_cast<int>(n);
  return -1;
}

VectorXc WaveFunction::channels(int site, double r) const {
  const auto &mesh = meshes[site];
  const auto &v = value[site];
  const auto &d = deriv[site];
  const int nc = num_channels(L);
  if (r <= mesh.start()) {
    // Regular behavior c_L ~ r^l below the first node.
    VectorXc out = v.front();
    const double ratio = r / mesh.start();
    for (int c = 0; c < nc; ++c)
      out[c] *= std::pow(ratio, ell_of(c));
    return out;
  }
  if (r >= mesh.radius())
    return v.back();
  const double s = std::log(r / mesh.start());
  const int last = mesh.intervals() - 1;
  int i = std::clamp(static_cast<int>(s / mesh.log_step), 0, last);
  while (i < last && mesh.r[i + 1] < r)
    ++i;
  while (i > 0 && mesh.r[i] > r)
    --i;
  // Cubic Hermite in s with dc/ds = r dc/dr.
  const double s0 = std::log(mesh.r[i]), s1 = std::log(mesh.r[i + 1]);
  const double h = s1 - s0;
  const double t = (std::log(r) - s0) / h;
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
  return h00 * v[i] + h10 * h * mesh.r[i] * d[i] + h01 * v[i + 1] + h11 * h * mesh.r[i + 1] * d[i + 1];
}

cplx WaveFunction::interior(int site, const Vec3 &point) const {
  const Vec3 v = point - centers[site];
  const double r = v.norm();
  const VectorXc c = channels(site, r);
  if (r == 0.0)
    return scale * c[0] * harmonics::ylm({0, 0}, Vec3(0, 0, 1));
  const auto y = harmonics::ylm_all(L, v / r);
  cplx sum = 0.0;
  for (int k = 0; k < c.size(); ++k)
    sum += c[k] * y[k];
  return scale * sum;
}

cplx WaveFunction::exterior(const Vec3 &point) const { return scale * hankel_sum(*this, point, -1); }

cplx WaveFunction::evaluate(const Vec3 &point) const {
  const int n = site_containing(point);
  return n >= 0 ? interior(n, point) : exterior(point);
}

WaveFunction build(const kkr::KkrSystem &system, const kkr::EigenResult &root, int which) {
  if (which < 0 || which >= static_cast<int>(root.a.size()))
    throw DomainError("no null vector with index " + std::to_string(which));
  VectorXc a(root.a[which].size());
  a = root.a[which];
  return build(system, root.energy, a);
}

WaveFunction build(const kkr::KkrSystem &system, double E, const VectorXc &a) {
  const auto ev = system.evaluate(E);
  const EnergyParameter z(ev.internal);
  const int L = system.config().L;
  const int nc = num_channels(L);
  if (a.size() != nc * system.size())
    throw DomainError("amplitude vector does not match the system size");

  WaveFunction u;
  u.energy = E;
  u.internal = ev.internal;
  u.L = L;
  u.centers = system.positions();
  u.radii = system.radii();
  for (int n = 0; n < system.size(); ++n) {
    const auto &mesh = system.mesh(n);
    const auto &model = system.internal_potential(n);
    const VectorXc an = a.segment(n * nc, nc);
    u.meshes.push_back(mesh);
    u.a.push_back(an);
    u.b.push_back(ev.tmats[n].values * an);
    const std::size_t M = mesh.r.size();
    std::vector<VectorXc> val(M, VectorXc::Zero(nc)), der(M, VectorXc::Zero(nc));
    if (model.is_spherical()) {
      for (int l = 0; l <= L; ++l) {
        const auto sol = radial::solve_radial_spherical(model, l, z, mesh);
        const cplx alpha = scattering::unit_j_scale(sol.value_at_R(), sol.deriv_at_R(), l, z, mesh.radius());
        for (int m = -l; m <= l; ++m) {
          const int c = harmonics::AngularIndex{l, m}.packed();
          const cplx f = an[c] / alpha;
          for (std::size_t i = 0; i < M; ++i) {
            val[i][c] = f * sol.value[i];
            der[i][c] = f * sol.deriv[i];
          }
        }
      }
    } else {
      const auto samples = radial::solve_coupled_launch(model, L, z, mesh, ev.launch[n] * an);
      val = samples.value;
      der = samples.deriv;
    }
    u.value.push_back(std::move(val));
    u.deriv.push_back(std::move(der));
  }
  return u;
}

double JumpMoments::max_abs(int L_max) const {
  double m = 0.0;
  const int n = std::min<int>(num_channels(L_max), static_cast<int>(value.size()));
  for (int c = 0; c < n; ++c)
    m = std::max({m, std::abs(value[c]), std::abs(deriv[c])});
  return m;
}

int jump_quadrature_degree(int L_check) { return 2 * L_check + 40; }

JumpMoments surface_jump_moments(const WaveFunction &u, int site, const harmonics::SphereQuadrature &quad,
                                 int L_check) {
  const EnergyParameter z(u.internal);
  const cplx sz = z.sqrt_z();
  const double R = u.radii[site];
  const Vec3 &center = u.centers[site];
  const int nc = num_channels(u.L);
  const int nm = num_channels(L_check);
  const auto basis = specfun::radial_basis(u.L, z, R);
  const VectorXc &c_in = u.value[site].back();
  const VectorXc &d_in = u.deriv[site].back();
  const double delta = 1e-3 * R;

  JumpMoments out;
  out.value = VectorXc::Zero(nm);
  out.deriv = VectorXc::Zero(nm);
  for (std::size_t q = 0; q < quad.nodes.size(); ++q) {
    const Vec3 &dir = quad.nodes[q];
    const auto y = harmonics::ylm_all(std::max(u.L, L_check), dir);
    cplx in_v = 0.0, in_d = 0.0, own_v = 0.0, own_d = 0.0;
    for (int c = 0; c < nc; ++c) {
      const int l = ell_of(c);
      in_v += c_in[c] * y[c];
      in_d += d_in[c] * y[c];
      own_v += u.b[site][c] * basis.h[l] * y[c];
      own_d += u.b[site][c] * sz * basis.hp[l] * y[c];
    }
    const auto other = [&](double t) { return hankel_sum(u, center + (R + t) * dir, site); };
    const cplx other_v = other(0.0);
    const cplx other_d =
        (other(-2 * delta) - 8.0 * other(-delta) + 8.0 * other(delta) - other(2 * delta)) / (12.0 * delta);
    const cplx jump_v = u.scale * (own_v + other_v - in_v);
    const cplx jump_d = u.scale * (own_d + other_d - in_d);
    for (int c = 0; c < nm; ++c) {
      out.value[c] += quad.weights[q] * jump_v * y[c];
      out.deriv[c] += quad.weights[q] * jump_d * y[c];
    }
  }
  return out;
}

NormParts norm_squared(const WaveFunction &u, int radial_nodes, int angular_degree) {
  NormParts parts;
  const int sites = static_cast<int>(u.centers.size());
  const double s2 = std::norm(u.scale);

  // Interior: orthonormal harmonics reduce each sphere to sum_L int |c_L|^2 r^2 dr.
  for (int n = 0; n < sites; ++n) {
    const auto &mesh = u.meshes[n];
    std::vector<double> g(mesh.r.size());
    for (std::size_t i = 0; i < mesh.r.size(); ++i) {
      const double r = mesh.r[i];
      g[i] = u.value[n][i].squaredNorm() * r * r * r;
    }
    parts.interior += s2 * radial::integrate_log_mesh(mesh, g);
  }

  // Exterior: partition of unity over sites; each piece is integrated in
  // spherical coordinates about its own center with r = R_n + y/(k (1 - y)),
  // which sends the decaying tail to a flat endpoint at y = 1.
  const EnergyParameter z(u.internal);
  const double k = z.k();
  double gap = 1.0;
  bool have_gap = false;
  for (int n = 0; n < sites; ++n)
    for (int m = n + 1; m < sites; ++m) {
      const double g = (u.centers[n] - u.centers[m]).norm() - u.radii[n] - u.radii[m];
      gap = have_gap ? std::min(gap, g) : g;
      have_gap = true;
    }
  const double width = 0.45 * gap;
  const auto weight = [&](int n, const Vec3 &p) {
    double w = std::exp(-k * ((p - u.centers[n]).norm() - u.radii[n]));
    for (int m = 0; m < sites; ++m)
      if (m != n)
        w *= smooth_step(((p - u.centers[m]).norm() - u.radii[m]) / width);
    return w;
  };

  const auto [yn, yw] = harmonics::gauss_legendre(radial_nodes);
  const auto quad = harmonics::sphere_quadrature(angular_degree);
  for (int n = 0; n < sites; ++n) {
    double piece = 0.0;
    for (std::size_t i = 0; i < yn.size(); ++i) {
      const double y = 0.5 * (yn[i] + 1.0);
      const double t = y / (k * (1.0 - y));
      const double r = u.radii[n] + t;
      const double jac = 0.5 * yw[i] / (k * (1.0 - y) * (1.0 - y)) * r * r;
      for (std::size_t q = 0; q < quad.nodes.size(); ++q) {
        const Vec3 p = u.centers[n] + r * quad.nodes[q];
        const double own = weight(n, p);
        if (own == 0.0)
          continue;
        double total = 0.0;
        for (int m = 0; m < sites; ++m)
          total += (m == n) ? own : weight(m, p);
        piece += jac * quad.weights[q] * (own / total) * std::norm(u.exterior(p));
      }
    }
    parts.exterior += piece;
  }
  return parts;
}

WaveFunction normalize(const WaveFunction &u) {
  const double total = norm_squared(u).total();
  if (!(total > 0.0) || !std::isfinite(total))
    throw DomainError("cannot normalize a zero wave function");
  WaveFunction out = u;
  out.scale = u.scale / std::sqrt(total);
  return out;
}

void export_grid_csv(const WaveFunction &u, const Vec3 &lo, const Vec3 &hi, const std::array<int, 3> &counts,
                     std::ostream &out) {
  for (int c : counts)
    if (c < 1)
      throw DomainError("grid counts must be positive");
  const auto coord = [&](int axis, int i) {
    return counts[axis] == 1 ? lo[axis] : lo[axis] + (hi[axis] - lo[axis]) * i / (counts[axis] - 1);
  };
  out << "x,y,z,Re u,Im u\n";
  out << std::setprecision(12);
  for (int i = 0; i < counts[0]; ++i)
    for (int j = 0; j < counts[1]; ++j)
      for (int l = 0; l < counts[2]; ++l) {
        const Vec3 p(coord(0, i), coord(1, j), coord(2, l));
        const cplx v = u.evaluate(p);
        out << p.x() << ',' << p.y() << ',' << p.z() << ',' << v.real() << ',' << v.imag() << '\n';
      }
}

} // namespace mst::wavefun
