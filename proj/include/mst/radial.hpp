#pragma once

// Regular solutions of the radial Schrodinger equation inside one sphere.
//
// Integration runs in s = ln r on a geometric mesh with the scaled unknown
// w = chi / r^l, which is O(1) near the origin for every channel:
//   w_ss + (2l+1) w_s = r^2 (V - z) w            (single channel)
//   w_ss + (2l_j+1) w_s = r^2 (sum_k Vbar_jk r^{l_k - l_j} w_k - z w_j)
// A seven-stage sixth-order Runge-Kutta method is used on the uniform s grid.

#include <optional>
#include <vector>

#include "mst/harmonics.hpp"
#include "mst/potential.hpp"
#include "mst/specfun.hpp"
#include "mst/types.hpp"

namespace mst::radial {

using specfun::EnergyParameter;

inline constexpr int default_mesh_points = 4000;
inline constexpr double default_start_fraction = 1e-6;

/// r_i = r_0 exp(i h), r_0 = start_fraction * R, r_M = R.
struct RadialMesh {
  std::vector<double> r;
  double log_step = 0.0;

  static RadialMesh geometric(double R, int intervals = default_mesh_points,
                              double start_fraction = default_start_fraction);
  int intervals() const { return static_cast<int>(r.size()) - 1; }
  double radius() const { return r.back(); }
  double start() const { return r.front(); }
};

/// Regular radial solution on the mesh, launched with chi(r_0) = r_0^l.
struct RadialSolution {
  int ell = 0;
  std::vector<double> value; // chi(r_i)
  std::vector<double> deriv; // d chi / dr at r_i

  double value_at_R() const { return value.back(); }
  double deriv_at_R() const { return deriv.back(); }
};

/// int_{r_0}^{R} f(r) dr from samples g_i = f(r_i) r_i on the mesh (dr = r ds):
/// composite Boole rule in s. When the interval count is not a multiple of 4
/// the leftover intervals are taken by Simpson / 3/8 / trapezoid panels at the
/// inner end, where regular integrands are smallest.
template <class T> T integrate_log_mesh(const RadialMesh &mesh, const std::vector<T> &g) {
  const double h = mesh.log_step;
  const std::size_t n = g.size() - 1;
  T sum = T(g[0] * 0.0);
  const std::size_t rest = n % 4;
  if (rest == 1)
    sum += 0.5 * h * (g[0] + g[1]);
  else if (rest == 2)
    sum += h / 3.0 * (g[0] + 4.0 * g[1] + g[2]);
  else if (rest == 3)
    sum += 3.0 * h / 8.0 * (g[0] + 3.0 * g[1] + 3.0 * g[2] + g[3]);
  for (std::size_t i = rest; i + 4 <= n; i += 4)
    sum += 2.0 * h / 45.0 * (7.0 * g[i] + 32.0 * g[i + 1] + 12.0 * g[i + 2] + 32.0 * g[i + 3] + 7.0 * g[i + 4]);
  return sum;
}

RadialSolution solve_radial_spherical(const PotentialModel &model, int ell, EnergyParameter z,
                                      const RadialMesh &mesh);

/// Same as above but with an explicit launch value w(r_0) (linearity checks).
RadialSolution solve_radial_spherical(const PotentialModel &model, int ell, EnergyParameter z,
                                      const RadialMesh &mesh, double launch_scale);

/// Channel coupling Vbar_jk(r) = sum_c C(j, k, c) V_c(r) for packed j, k <= L_in.
class CouplingMatrix {
public:
  struct Term {
    int row;
    int col;
    int component; // position in components()
    double gaunt;
  };

  CouplingMatrix(const PotentialModel &model, int L_in);

  int L_in() const { return L_in_; }
  int size() const { return harmonics::num_channels(L_in_); }
  const std::vector<int> &components() const { return components_; }
  const std::vector<Term> &terms() const { return terms_; }
  /// Dense Vbar(r).
  Eigen::MatrixXd evaluate(const PotentialModel &model, double r) const;

private:
  int L_in_;
  std::vector<int> components_;
  std::vector<Term> terms_;
};

/// (L_in+1)^2 regular solutions; column j launched in channel j.
struct CoupledSolutionMatrix {
  double energy = 0.0;
  int L_in = 0;
  Eigen::MatrixXd X;  // chi_{row, col}(R)
  Eigen::MatrixXd Xp; // d chi_{row, col}/dr at R
  double condition = 0.0;
  // chi samples per mesh node (rows: channels, cols: launches), when requested.
  std::vector<Eigen::MatrixXd> samples;
};

CoupledSolutionMatrix solve_coupled_channels(const PotentialModel &model, int L_in, EnergyParameter z,
                                             const RadialMesh &mesh, bool keep_samples = false);

/// Channel functions of the single regular solution with launch vector w(r_0) = launch.
/// Returns (values, derivatives), each indexed [node](channel).
struct ChannelSamples {
  std::vector<Eigen::VectorXcd> value;
  std::vector<Eigen::VectorXcd> deriv;
};
ChannelSamples solve_coupled_launch(const PotentialModel &model, int L_in, EnergyParameter z,
                                    const RadialMesh &mesh, const Eigen::VectorXcd &launch);

} // namespace mst::radial
