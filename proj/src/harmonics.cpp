#include "mst/harmonics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>

namespace mst::harmonics {

AngularIndex AngularIndex::unpack(int idx) {
  const int l = static_cast<int>(std::sqrt(static_cast<double>(idx)));
  int ell = l;
  while (ell * ell > idx)
    --ell;
  while ((ell + 1) * (ell + 1) <= idx)
    ++ell;
  return {ell, idx - ell * ell - ell};
}

int ell_of(int packed) { return AngularIndex::unpack(packed).ell; }

void ylm_all(int L, const Vec3 &direction, std::span<double> out) {
  const double norm = direction.norm();
  if (std::abs(norm - 1.0) > 1e-12)
    throw DomainError("spherical harmonic direction must be a unit vector");
  const double ct = std::clamp(direction.z(), -1.0, 1.0);
  const double rho = std::hypot(direction.x(), direction.y());
  const double st = rho;
  const double cphi = rho > 0.0 ? direction.x() / rho : 1.0;
  const double sphi = rho > 0.0 ? direction.y() / rho : 0.0;

  // Fully normalized associated Legendre functions p_{lm}, m >= 0, including 1/sqrt(4 pi).
  std::vector<double> p(num_channels(L), 0.0);
  auto at = [&](int l, int m) -> double & { return p[l * l + l + m]; };
  at(0, 0) = 0.5 / std::sqrt(pi);
  for (int m = 1; m <= L; ++m)
    at(m, m) = std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * st * at(m - 1, m - 1);
  for (int m = 0; m < L; ++m)
    at(m + 1, m) = std::sqrt(2.0 * m + 3.0) * ct * at(m, m);
  for (int m = 0; m <= L; ++m) {
    for (int l = m + 2; l <= L; ++l) {
      const double a = std::sqrt((4.0 * l * l - 1.0) / (static_cast<double>(l * l - m * m)));
      const double b = std::sqrt((static_cast<double>((l - 1) * (l - 1) - m * m)) /
                                 (4.0 * (l - 1) * (l - 1) - 1.0));
      at(l, m) = a * (ct * at(l - 1, m) - b * at(l - 2, m));
    }
  }

  double cm = 1.0;
  double sm = 0.0;
  for (int m = 0; m <= L; ++m) {
    for (int l = m; l <= L; ++l) {
      const double plm = at(l, m);
      if (m == 0) {
        out[l * l + l] = plm;
      } else {
        out[l * l + l + m] = std::sqrt(2.0) * plm * cm;
        out[l * l + l - m] = std::sqrt(2.0) * plm * sm;
      }
    }
    const double c_next = cm * cphi - sm * sphi;
    sm = sm * cphi + cm * sphi;
    cm = c_next;
  }
}

std::vector<double> ylm_all(int L, const Vec3 &direction) {
  std::vector<double> out(num_channels(L));
  ylm_all(L, direction, out);
  return out;
}

double ylm(AngularIndex index, const Vec3 &direction) {
  if (index.ell < 0 || std::abs(index.m) > index.ell)
    throw DomainError("invalid angular index");
  return ylm_all(index.ell, direction)[index.packed()];
}

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  std::vector<double> x(n), w(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16)
        break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0, p1 = 0.0;
    for (int k = 1; k <= n; ++k) {
      const double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
    }
    dp = n * (z * p0 - p1) / (z * z - 1.0);
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  if (n % 2 == 1)
    x[n / 2] = 0.0;
  return {x, w};
}

SphereQuadrature sphere_quadrature(int degree) {
  if (degree < 0)
    throw DomainError("quadrature degree must be nonnegative");
  const int n_theta = degree / 2 + 1;
  const int n_phi = degree + 1;
  auto [x, w] = gauss_legendre(n_theta);
  SphereQuadrature q;
  q.degree = degree;
  q.nodes.reserve(n_theta * n_phi);
  q.weights.reserve(n_theta * n_phi);
  for (int i = 0; i < n_theta; ++i) {
    const double st = std::sqrt(std::max(0.0, 1.0 - x[i] * x[i]));
    for (int k = 0; k < n_phi; ++k) {
      const double phi = 2.0 * pi * k / n_phi;
      q.nodes.emplace_back(st * std::cos(phi), st * std::sin(phi), x[i]);
      q.weights.push_back(w[i] * 2.0 * pi / n_phi);
    }
  }
  return q;
}

bool gaunt_vanishes(AngularIndex a, AngularIndex b, AngularIndex c) {
  if ((a.ell + b.ell + c.ell) % 2 != 0)
    return true;
  if (c.ell < std::abs(a.ell - b.ell) || c.ell > a.ell + b.ell)
    return true;
  // Azimuthal factors are cos(m phi) (m >= 0) and sin(|m| phi) (m < 0):
  // an odd number of sines integrates to zero, and the frequencies must close.
  const int negatives = (a.m < 0) + (b.m < 0) + (c.m < 0);
  if (negatives % 2 != 0)
    return true;
  const int ma = std::abs(a.m), mb = std::abs(b.m), mc = std::abs(c.m);
  return !(ma + mb == mc || ma + mc == mb || mb + mc == ma);
}

double gaunt(AngularIndex a, AngularIndex b, AngularIndex c) {
  if (gaunt_vanishes(a, b, c))
    return 0.0;
  std::array<AngularIndex, 3> idx{a, b, c};
  std::sort(idx.begin(), idx.end(),
            [](AngularIndex x, AngularIndex y) { return x.packed() < y.packed(); });
  const int L = idx[2].ell;
  const auto quad = sphere_quadrature(idx[0].ell + idx[1].ell + idx[2].ell);
  std::vector<double> y(num_channels(L));
  double sum = 0.0;
  for (std::size_t q = 0; q < quad.nodes.size(); ++q) {
    ylm_all(L, quad.nodes[q], y);
    sum += quad.weights[q] * y[idx[0].packed()] * y[idx[1].packed()] * y[idx[2].packed()];
  }
  return sum;
}

GauntTable::GauntTable(int L_a, int L_b, int L_c) : L_a_(L_a), L_b_(L_b), L_c_(L_c) {
  const int Lmax = std::max({L_a, L_b, L_c});
  const auto quad = sphere_quadrature(L_a + L_b + L_c);
  const std::size_t nq = quad.nodes.size();
  const int nch = num_channels(Lmax);
  std::vector<double> y(nq * nch);
  for (std::size_t q = 0; q < nq; ++q)
    ylm_all(Lmax, quad.nodes[q], std::span<double>(y.data() + q * nch, nch));

  const int na = num_channels(L_a), nb = num_channels(L_b);
  offsets_.reserve(na * nb + 1);
  offsets_.push_back(0);
  std::vector<double> wab(nq);
  for (int ia = 0; ia < na; ++ia) {
    const auto a = AngularIndex::unpack(ia);
    for (int ib = 0; ib < nb; ++ib) {
      const auto b = AngularIndex::unpack(ib);
      for (std::size_t q = 0; q < nq; ++q)
        wab[q] = quad.weights[q] * y[q * nch + ia] * y[q * nch + ib];
      const int lo = std::abs(a.ell - b.ell);
      const int hi = std::min(a.ell + b.ell, L_c);
      for (int lc = lo; lc <= hi; lc += 2) {
        for (int mc = -lc; mc <= lc; ++mc) {
          const AngularIndex c{lc, mc};
          if (gaunt_vanishes(a, b, c))
            continue;
          const int ic = c.packed();
          double sum = 0.0;
          for (std::size_t q = 0; q < nq; ++q)
            sum += wab[q] * y[q * nch + ic];
          entries_.push_back({ic, sum});
        }
      }
      offsets_.push_back(entries_.size());
    }
  }
}

std::span<const GauntTable::Entry> GauntTable::row(int a, int b) const {
  const std::size_t k = static_cast<std::size_t>(a) * num_channels(L_b_) + b;
  return {entries_.data() + offsets_[k], offsets_[k + 1] - offsets_[k]};
}

double GauntTable::operator()(int a, int b, int c) const {
  if (a >= num_channels(L_a_) || b >= num_channels(L_b_) || c >= num_channels(L_c_))
    throw DomainError("Gaunt table index out of range");
  const auto entries = row(a, b);
  const auto it = std::lower_bound(entries.begin(), entries.end(), c,
                                   [](const Entry &e, int key) { return e.c < key; });
  return (it != entries.end() && it->c == c) ? it->value : 0.0;
}

} // namespace mst::harmonics
