#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "mst/radial.hpp"
#include "oracles.hpp"

using namespace mst;
using radial::RadialMesh;
using specfun::EnergyParameter;

TEST_CASE("log-derivative at R agrees with a Numerov shot", "[radial][oracle]") {
  const double Z = 10.0, R = 0.2;
  const PotentialModel well(CappedCoulomb{Z, R});
  const auto mesh = RadialMesh::geometric(R);
  for (int l : {0, 2}) {
    for (double E : {-60.0, -12.0, -1.0}) {
      const auto sol = radial::solve_radial_spherical(well, l, EnergyParameter(E), mesh);
      const auto shot = oracle::numerov(oracle::capped_coulomb(Z, R), -Z, l, E, R, 20000);
      // chi is the radial function itself, u = r chi.
      const double ours = sol.deriv_at_R() / sol.value_at_R();
      const double ref = shot.du / shot.u - 1.0 / R;
      INFO("l=" << l << " E=" << E);
      CHECK(ours == Catch::Approx(ref).epsilon(1e-7));
    }
  }
}

TEST_CASE("free solution is the modified Bessel function", "[radial]") {
  // A vanishing potential leaves chi proportional to j_l.
  const PotentialModel none(GaussianMultipole{{}, 0.5});
  const auto mesh = RadialMesh::geometric(0.5);
  const EnergyParameter z(-9.0);
  for (int l = 0; l <= 4; ++l) {
    const auto sol = radial::solve_radial_spherical(none, l, z, mesh);
    const auto b = specfun::radial_basis(l, z, 0.5);
    const cplx ratio = z.sqrt_z() * b.jp[l] / b.j[l];
    CHECK(sol.deriv_at_R() / sol.value_at_R() == Catch::Approx(ratio.real()).epsilon(1e-10));
  }
}

TEST_CASE("radial solutions scale linearly with the launch", "[radial][invariant]") {
  const PotentialModel well(CappedCoulomb{10.0, 0.2});
  const auto mesh = RadialMesh::geometric(0.2, 1000);
  const EnergyParameter z(-20.0);
  const auto a = radial::solve_radial_spherical(well, 1, z, mesh, 1.0);
  const auto b = radial::solve_radial_spherical(well, 1, z, mesh, -3.5);
  for (std::size_t i = 0; i < a.value.size(); i += 97)
    CHECK(b.value[i] == Catch::Approx(-3.5 * a.value[i]).epsilon(1e-13));
}

TEST_CASE("coupled sweep of a spherical potential is diagonal", "[radial]") {
  const PotentialModel well(GaussianMultipole{{{{0, 0}, -200.0, 0.1}}, 0.3});
  const auto mesh = RadialMesh::geometric(0.3, 2000);
  const EnergyParameter z(-5.0);
  const auto c = radial::solve_coupled_channels(well, 2, z, mesh);
  for (int j = 0; j < 9; ++j) {
    const int l = harmonics::ell_of(j);
    const auto s = radial::solve_radial_spherical(well, l, z, mesh);
    CHECK(c.Xp(j, j) / c.X(j, j) == Catch::Approx(s.deriv_at_R() / s.value_at_R()).epsilon(1e-10));
    for (int k = 0; k < 9; ++k)
      if (k != j)
        CHECK(std::abs(c.X(k, j)) < 1e-12 * std::abs(c.X(j, j)));
  }
}

TEST_CASE("Boole quadrature on the log mesh", "[radial]") {
  for (int M : {400, 401, 402, 403}) {
    const auto mesh = RadialMesh::geometric(2.0, M, 1e-4);
    std::vector<double> g;
    for (double r : mesh.r)
      g.push_back(std::exp(-r) * r * r); // f = r e^{-r}
    const double a = mesh.start(), b = mesh.radius();
    const double exact = (1 + a) * std::exp(-a) - (1 + b) * std::exp(-b);
    CHECK(radial::integrate_log_mesh(mesh, g) == Catch::Approx(exact).epsilon(1e-10));
  }
}

TEST_CASE("mesh layout", "[radial]") {
  const auto mesh = RadialMesh::geometric(0.35, 100);
  CHECK(mesh.intervals() == 100);
  CHECK(mesh.radius() == Catch::Approx(0.35).epsilon(1e-15));
  CHECK(mesh.start() == Catch::Approx(0.35e-6));
  CHECK(mesh.r[1] / mesh.r[0] == Catch::Approx(std::exp(mesh.log_step)));
}

TEST_CASE("log-derivative self-convergence under mesh doubling", "[radial]") {
  const PotentialModel well(CappedCoulomb{10.0, 0.2});
  const EnergyParameter z(-30.0);
  const auto a = radial::solve_radial_spherical(well, 0, z, RadialMesh::geometric(0.2, 4000));
  const auto b = radial::solve_radial_spherical(well, 0, z, RadialMesh::geometric(0.2, 8000));
  CHECK(a.deriv_at_R() / a.value_at_R() == Catch::Approx(b.deriv_at_R() / b.value_at_R()).epsilon(1e-8));
}

TEST_CASE("solutions start as r^l", "[radial]") {
  const PotentialModel well(CappedCoulomb{10.0, 0.2});
  const auto mesh = RadialMesh::geometric(0.2, 500);
  for (int l = 0; l <= 3; ++l) {
    const auto s = radial::solve_radial_spherical(well, l, EnergyParameter(-3.0), mesh);
    CHECK(s.value[0] == Catch::Approx(std::pow(mesh.start(), l)).epsilon(1e-10));
    for (double v : s.value)
      CHECK(std::isfinite(v));
  }
}

TEST_CASE("free coupled columns are Bessel functions", "[radial]") {
  const PotentialModel none(GaussianMultipole{{}, 0.4});
  const auto mesh = RadialMesh::geometric(0.4, 1000);
  const EnergyParameter z(-4.0);
  const auto c = radial::solve_coupled_channels(none, 2, z, mesh);
  const auto b = specfun::radial_basis(2, z, 0.4);
  for (int j = 0; j < 9; ++j) {
    const int l = harmonics::ell_of(j);
    CHECK(c.Xp(j, j) / c.X(j, j) == Catch::Approx((z.sqrt_z() * b.jp[l] / b.j[l]).real()).epsilon(1e-10));
  }
  CHECK((c.X - Eigen::MatrixXd(c.X.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0);
}
