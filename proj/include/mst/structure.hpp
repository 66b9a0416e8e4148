#pragma once

// Structure constants re-expanding a Hankel wave about one site into Bessel
// waves about another:
//   H_L(r - R_n) = sum_L' g^{nn'}_{LL'} J_L'(r - R_n'),
//   g^{nn'}_{LL'} = 4 pi sum_L'' i^{l - l' - l''} C(L, L', L'') H_L''(R_n' - R_n).

#include <vector>

#include "mst/harmonics.hpp"
#include "mst/specfun.hpp"
#include "mst/types.hpp"

namespace mst::kkr {

using specfun::EnergyParameter;

/// Deliberate convention errors, used only to show that the expansion check
/// notices them.
struct ConventionHooks {
  bool flip_phase = false;     // i^{l - l' + l''} instead of i^{l - l' - l''}
  bool complex_gaunt = false;  // unconjugated triple product of complex harmonics
};

struct StructureConstants {
  double energy = 0.0;
  int L = 0;
  int sites = 0;
  MatrixXc G; // blocks g^{nn'} of size (L+1)^2; zero on the diagonal

  int block_size() const { return harmonics::num_channels(L); }
  auto block(int n, int np) const {
    const int b = block_size();
    return G.block(n * b, np * b, b, b);
  }
};

/// Gaunt table sized for structure constants at cutoff L.
harmonics::GauntTable structure_gaunt_table(int L);

/// All blocks g^{nn'} for l, l' <= L. `gaunt` must cover (L, L, 2L).
StructureConstants structure_constants(const std::vector<Vec3> &positions, EnergyParameter z, int L,
                                       const harmonics::GauntTable &gaunt, const ConventionHooks &hooks = {});

/// Row g^{nn'}_{L, L'} for one source index and all l' <= L_big,
/// with d = R_n' - R_n.
VectorXc structure_row(const Vec3 &d, harmonics::AngularIndex source, int L_big, EnergyParameter z,
                       const ConventionHooks &hooks = {});

/// max over probes of |H_L(r_n) - sum_{l' <= L_big} g^{nn'}_{LL'} J_L'(r_n')| / |H_L(r_n)|.
/// Probes are absolute points and must satisfy |r - R_n'| < |R_n - R_n'|.
double expansion_residual(const Vec3 &center_n, const Vec3 &center_np, harmonics::AngularIndex source,
                          EnergyParameter z, const std::vector<Vec3> &probes, int L_big,
                          const ConventionHooks &hooks = {});

/// H_L(v) = h_l(sqrt(z)|v|) Y_L(v^) and J_L(v) for l <= L.
std::vector<cplx> hankel_waves(int L, EnergyParameter z, const Vec3 &v);
std::vector<cplx> bessel_waves(int L, EnergyParameter z, const Vec3 &v);

} // namespace mst::kkr
