#include "mst/structure.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace mst::kkr {

using harmonics::AngularIndex;
using harmonics::num_channels;

namespace {

// Integral of Yc_a Yc_b Yc_c without conjugation, where Yc are the complex
// harmonics built from the real ones. Only reachable through the mutation hook.
class ComplexGauntOracle {
public:
  ComplexGauntOracle(int L_a, int L_b, int L_c) : nch_(num_channels(std::max({L_a, L_b, L_c}))) {
    const int Lmax = std::max({L_a, L_b, L_c});
    const auto quad = harmonics::sphere_quadrature(L_a + L_b + L_c);
    weights_ = quad.weights;
    values_.resize(quad.nodes.size() * nch_);
    for (std::size_t q = 0; q < quad.nodes.size(); ++q) {
      const auto y = harmonics::ylm_all(Lmax, quad.nodes[q]);
      for (int i = 0; i < nch_; ++i) {
        const auto idx = AngularIndex::unpack(i);
        const double s = 1.0 / std::sqrt(2.0);
        const int pos = AngularIndex{idx.ell, std::abs(idx.m)}.packed();
        const int neg = AngularIndex{idx.ell, -std::abs(idx.m)}.packed();
        cplx v;
        if (idx.m == 0)
          v = y[i];
        else if (idx.m > 0)
          v = s * cplx(y[pos], y[neg]);
        else
          v = s * cplx(y[pos], -y[neg]);
        values_[q * nch_ + i] = v;
      }
    }
  }

  cplx operator()(int a, int b, int c) const {
    cplx sum = 0.0;
    for (std::size_t q = 0; q < weights_.size(); ++q)
      sum += weights_[q] * values_[q * nch_ + a] * values_[q * nch_ + b] * values_[q * nch_ + c];
    return sum;
  }

private:
  int nch_;
  std::vector<double> weights_;
  std::vector<cplx> values_;
};

cplx phase(int l, int lp, int lpp, const ConventionHooks &hooks) {
  return hooks.flip_phase ? ipow(l - lp + lpp) : ipow(l - lp - lpp);
}

} // namespace

std::vector<cplx> hankel_waves(int L, EnergyParameter z, const Vec3 &v) {
  const double r = v.norm();
  const auto h = specfun::hankel_h(L, z, r);
  const auto y = harmonics::ylm_all(L, v / r);
  std::vector<cplx> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i)
    out[i] = h[harmonics::ell_of(static_cast<int>(i))] * y[i];
  return out;
}

std::vector<cplx> bessel_waves(int L, EnergyParameter z, const Vec3 &v) {
  const double r = v.norm();
  std::vector<cplx> out(num_channels(L), 0.0);
  if (r == 0.0) {
    out[0] = 0.5 / std::sqrt(pi);
    return out;
  }
  const auto j = specfun::bessel_j(L, z, r);
  const auto y = harmonics::ylm_all(L, v / r);
  for (std::size_t i = 0; i < y.size(); ++i)
    out[i] = j[harmonics::ell_of(static_cast<int>(i))] * y[i];
  return out;
}

harmonics::GauntTable structure_gaunt_table(int L) { return harmonics::GauntTable(L, L, 2 * L); }

StructureConstants structure_constants(const std::vector<Vec3> &positions, EnergyParameter z, int L,
                                       const harmonics::GauntTable &gaunt, const ConventionHooks &hooks) {
  if (gaunt.L_a() < L || gaunt.L_b() < L || gaunt.L_c() < 2 * L)
    throw DomainError("Gaunt table too small for the requested cutoff");
  const int N = static_cast<int>(positions.size());
  const int b = num_channels(L);
  StructureConstants out;
  out.energy = z.z();
  out.L = L;
  out.sites = N;
  out.G = MatrixXc::Zero(N * b, N * b);

  std::unique_ptr<ComplexGauntOracle> complex_gaunt;
  if (hooks.complex_gaunt)
    complex_gaunt = std::make_unique<ComplexGauntOracle>(L, L, 2 * L);

  for (int n = 0; n < N; ++n) {
    for (int np = 0; np < N; ++np) {
      if (n == np)
        continue;
      const Vec3 d = positions[np] - positions[n];
      const auto H = hankel_waves(2 * L, z, d);
      for (int a = 0; a < b; ++a) {
        const int l = harmonics::ell_of(a);
        for (int c = 0; c < b; ++c) {
          const int lp = harmonics::ell_of(c);
          cplx sum = 0.0;
          if (complex_gaunt) {
            for (int e = 0; e < num_channels(2 * L); ++e)
              sum += phase(l, lp, harmonics::ell_of(e), hooks) * (*complex_gaunt)(a, c, e) * H[e];
          } else {
            for (const auto &entry : gaunt.row(a, c))
              sum += phase(l, lp, harmonics::ell_of(entry.c), hooks) * entry.value * H[entry.c];
          }
          out.G(n * b + a, np * b + c) = 4.0 * pi * sum;
        }
      }
    }
  }
  return out;
}

VectorXc structure_row(const Vec3 &d, AngularIndex source, int L_big, EnergyParameter z,
                       const ConventionHooks &hooks) {
  const int ls = source.ell;
  const int a = source.packed();
  const int nb = num_channels(L_big);
  const auto H = hankel_waves(ls + L_big, z, d);
  VectorXc row = VectorXc::Zero(nb);
  if (hooks.complex_gaunt) {
    const ComplexGauntOracle oracle(ls, L_big, ls + L_big);
    for (int c = 0; c < nb; ++c) {
      cplx sum = 0.0;
      for (int e = 0; e < num_channels(ls + L_big); ++e)
        sum += phase(ls, harmonics::ell_of(c), harmonics::ell_of(e), hooks) * oracle(a, c, e) * H[e];
      row[c] = 4.0 * pi * sum;
    }
    return row;
  }
  const harmonics::GauntTable table(ls, L_big, ls + L_big);
  for (int c = 0; c < nb; ++c) {
    cplx sum = 0.0;
    for (const auto &entry : table.row(a, c))
      sum += phase(ls, harmonics::ell_of(c), harmonics::ell_of(entry.c), hooks) * entry.value * H[entry.c];
    row[c] = 4.0 * pi * sum;
  }
  return row;
}

double expansion_residual(const Vec3 &center_n, const Vec3 &center_np, AngularIndex source, EnergyParameter z,
                          const std::vector<Vec3> &probes, int L_big, const ConventionHooks &hooks) {
  const Vec3 d = center_np - center_n;
  const double dist = d.norm();
  if (!(dist > 0.0))
    throw DomainError("expansion centers coincide");
  for (const auto &p : probes)
    if (!((p - center_np).norm() < dist))
      throw DomainError("probe lies outside the expansion region of the second center");
  const VectorXc row = structure_row(d, source, L_big, z, hooks);
  double worst = 0.0;
  for (const auto &p : probes) {
    const cplx exact = hankel_waves(source.ell, z, p - center_n)[source.packed()];
    const auto J = bessel_waves(L_big, z, p - center_np);
    cplx sum = 0.0;
    for (int c = 0; c < row.size(); ++c)
      sum += row[c] * J[c];
    worst = std::max(worst, std::abs(exact - sum) / std::abs(exact));
  }
  return worst;
}

} // namespace mst::kkr
