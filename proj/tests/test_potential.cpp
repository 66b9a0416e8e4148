#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "mst/potential.hpp"

using namespace mst;

TEST_CASE("capped Coulomb values", "[potential]") {
  const PotentialModel m(CappedCoulomb{10.0, 0.2});
  CHECK(potential_channel(m, {0, 0}, 0.1) == Catch::Approx(-50.0));
  CHECK(m.spherical(0.1) == Catch::Approx(-50.0));
  CHECK(m.spherical(0.2) == Catch::Approx(0.0).margin(1e-13));
  CHECK(m.spherical(0.4) == 0.0);
  CHECK(m.is_spherical());
  CHECK(m.coulomb_strength() == 10.0);
}

TEST_CASE("Gaussian multipole channel", "[potential]") {
  const PotentialModel m(GaussianMultipole{{{{0, 0}, -700.0, 0.1}, {{1, 0}, -20.0, 0.04}}, 0.35});
  const double expected = -20.0 * 0.04 * (std::exp(-1.0) - std::exp(-std::pow(0.35 / 0.04, 2)));
  CHECK(potential_channel(m, {1, 0}, 0.04) == Catch::Approx(expected));
  CHECK(expected == Catch::Approx(-0.2943).epsilon(1e-4));
  CHECK(potential_channel(m, {1, 1}, 0.04) == 0.0);
  CHECK(m.multipole({1, 0}, 0.7) == 0.0);
  CHECK_FALSE(m.is_spherical());
  CHECK(m.max_degree() == 1);
  CHECK(m.components() == std::vector<int>{0, 2});
}

TEST_CASE("every model vanishes outside its sphere", "[potential][invariant]") {
  TabulatedRadial tab{{}, 0.3};
  tab.channels.emplace(0, CubicSpline({0.0, 0.1, 0.2, 0.3}, {-5.0, -3.0, -1.0, 0.0}));
  const std::vector<PotentialModel> models = {PotentialModel(CappedCoulomb{3.0, 0.25}),
                                              PotentialModel(GaussianMultipole{{{{2, -1}, 4.0, 0.1}}, 0.4}),
                                              PotentialModel(tab)};
  for (const auto &m : models) {
    const double R = m.radius();
    for (double f : {1.0, 1.5, 2.0})
      for (int c : {0, 5})
        CHECK(m.multipole(harmonics::AngularIndex::unpack(c), f * R) == 0.0);
  }
}

TEST_CASE("scaling multiplies every channel", "[potential]") {
  const PotentialModel m(GaussianMultipole{{{{0, 0}, -700.0, 0.1}, {{1, -1}, -30.0, 0.05}}, 0.35});
  const auto s = m.scaled(2.0);
  for (double r : {0.01, 0.1, 0.3})
    for (harmonics::AngularIndex i : {harmonics::AngularIndex{0, 0}, harmonics::AngularIndex{1, -1}})
      CHECK(s.multipole(i, r) == Catch::Approx(2.0 * m.multipole(i, r)));
}

TEST_CASE("cubic spline interpolates and clamps", "[potential]") {
  const CubicSpline s({0.0, 1.0, 2.0, 3.0}, {0.0, 1.0, 8.0, 27.0});
  CHECK(s(2.0) == Catch::Approx(8.0));
  CHECK(s(-1.0) == Catch::Approx(0.0));
  CHECK(s(5.0) == Catch::Approx(27.0));
  const CubicSpline line({0.0, 1.0, 2.0}, {1.0, 3.0, 5.0});
  CHECK(line(0.37) == Catch::Approx(1.74));
}

TEST_CASE("channel files with a header row", "[potential]") {
  const auto path = std::filesystem::temp_directory_path() / "mst_channel.csv";
  std::ofstream(path) << "r,v\n0.0,-4\n0.1,-2\n0.2,0\n";
  const auto s = load_channel_csv(path);
  CHECK(s.x().size() == 3);
  CHECK(s(0.1) == Catch::Approx(-2.0));
}
