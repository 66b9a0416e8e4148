#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "mst/harmonics.hpp"
#include "mst/selftest.hpp"

using namespace mst;
using harmonics::AngularIndex;

TEST_CASE("low-order real harmonics have no Condon-Shortley sign", "[harmonics]") {
  const Vec3 d = Vec3(0.3, -0.5, 0.81).normalized();
  const double c0 = 1.0 / std::sqrt(4 * pi), c1 = std::sqrt(3.0 / (4 * pi));
  CHECK(harmonics::ylm({0, 0}, d) == Catch::Approx(c0));
  CHECK(harmonics::ylm({1, -1}, d) == Catch::Approx(c1 * d.y()));
  CHECK(harmonics::ylm({1, 0}, d) == Catch::Approx(c1 * d.z()));
  CHECK(harmonics::ylm({1, 1}, d) == Catch::Approx(c1 * d.x()));
  const double c2 = std::sqrt(15.0 / (4 * pi));
  CHECK(harmonics::ylm({2, -2}, d) == Catch::Approx(c2 * d.x() * d.y()));
  CHECK(harmonics::ylm({2, 2}, d) == Catch::Approx(c2 / 2 * (d.x() * d.x() - d.y() * d.y())));
}

TEST_CASE("packed index round trip", "[harmonics]") {
  for (int p = 0; p < harmonics::num_channels(8); ++p) {
    const auto a = AngularIndex::unpack(p);
    CHECK(a.packed() == p);
    CHECK(harmonics::ell_of(p) == a.ell);
    CHECK(std::abs(a.m) <= a.ell);
  }
}

TEST_CASE("non-unit directions are rejected", "[harmonics]") {
  CHECK_THROWS_AS(harmonics::ylm({1, 0}, Vec3(0, 0, 2)), DomainError);
}

TEST_CASE("orthonormality under the product quadrature", "[harmonics][invariant]") {
  const int L = 8;
  const auto q = harmonics::sphere_quadrature(2 * L);
  const int n = harmonics::num_channels(L);
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < q.nodes.size(); ++i) {
    const auto y = harmonics::ylm_all(L, q.nodes[i]);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        M(a, b) += q.weights[i] * y[a] * y[b];
  }
  CHECK((M - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("gaunt coefficients match the Racah 3j oracle", "[harmonics][oracle]") {
  const int L = 4;
  double worst = 0.0;
  for (int a = 0; a < harmonics::num_channels(L); ++a)
    for (int b = 0; b < harmonics::num_channels(L); ++b)
      for (int c = 0; c < harmonics::num_channels(2 * L); ++c) {
        const auto A = AngularIndex::unpack(a), B = AngularIndex::unpack(b), C = AngularIndex::unpack(c);
        worst = std::max(worst, std::abs(harmonics::gaunt(A, B, C) - harness::gaunt_racah(A, B, C)));
      }
  CHECK(worst < 1e-12);
}

TEST_CASE("wigner 3j spot values", "[harmonics][oracle]") {
  CHECK(harness::wigner_3j(1, 1, 0, 0, 0, 0) == Catch::Approx(-1.0 / std::sqrt(3.0)));
  CHECK(harness::wigner_3j(1, 1, 2, 1, -1, 0) == Catch::Approx(1.0 / std::sqrt(30.0)));
  CHECK(harness::wigner_3j(2, 2, 2, 0, 0, 0) == Catch::Approx(-std::sqrt(2.0 / 35.0)));
  CHECK(harness::wigner_3j(1, 1, 3, 0, 0, 0) == 0.0);
}

TEST_CASE("gaunt selection rules and permutation symmetry", "[harmonics][invariant]") {
  const int L = 3;
  for (int a = 0; a < harmonics::num_channels(L); ++a)
    for (int b = 0; b < harmonics::num_channels(L); ++b)
      for (int c = 0; c < harmonics::num_channels(L); ++c) {
        const auto A = AngularIndex::unpack(a), B = AngularIndex::unpack(b), C = AngularIndex::unpack(c);
        const double g = harmonics::gaunt(A, B, C);
        if (harmonics::gaunt_vanishes(A, B, C))
          CHECK(std::abs(g) < 1e-14);
        CHECK(g == Catch::Approx(harmonics::gaunt(B, C, A)).margin(1e-14));
        CHECK(g == Catch::Approx(harmonics::gaunt(C, B, A)).margin(1e-14));
      }
  // Y_00 contracts to a Kronecker delta.
  const double y00 = 1.0 / std::sqrt(4 * pi);
  CHECK(harmonics::gaunt({2, 1}, {2, 1}, {0, 0}) == Catch::Approx(y00));
}

TEST_CASE("gaunt table agrees with direct evaluation", "[harmonics]") {
  const harmonics::GauntTable table(2, 3, 5);
  for (int a = 0; a < harmonics::num_channels(2); ++a)
    for (int b = 0; b < harmonics::num_channels(3); ++b) {
      for (const auto &e : table.row(a, b))
        CHECK(e.value == Catch::Approx(harmonics::gaunt(AngularIndex::unpack(a), AngularIndex::unpack(b),
                                                        AngularIndex::unpack(e.c)))
                             .margin(1e-15));
      for (int c = 0; c < harmonics::num_channels(5); ++c)
        CHECK(table(a, b, c) == Catch::Approx(harmonics::gaunt(AngularIndex::unpack(a), AngularIndex::unpack(b),
                                                               AngularIndex::unpack(c)))
                                    .margin(1e-14));
    }
}

TEST_CASE("spot values of harmonics, gaunt coefficients and quadrature", "[harmonics]") {
  CHECK(harmonics::ylm({0, 0}, Vec3(0.6, 0, 0.8)) == Catch::Approx(0.2820947918).epsilon(1e-10));
  CHECK(harmonics::ylm({1, 0}, Vec3(0, 0, 1)) == Catch::Approx(0.4886025119).epsilon(1e-10));
  CHECK(harmonics::gaunt({0, 0}, {0, 0}, {0, 0}) == Catch::Approx(0.2820947918).epsilon(1e-10));
  CHECK(std::abs(harmonics::gaunt({1, 0}, {1, 0}, {1, 0})) < 1e-16);

  const auto q = harmonics::sphere_quadrature(40);
  double tri = 0.0;
  for (std::size_t i = 0; i < q.nodes.size(); ++i) {
    const double y = harmonics::ylm({1, 0}, q.nodes[i]);
    tri += q.weights[i] * y * y * harmonics::ylm({2, 0}, q.nodes[i]);
  }
  CHECK(std::abs(harmonics::gaunt({1, 0}, {1, 0}, {2, 0}) - tri) < 1e-12);

  for (int degree : {0, 7, 30}) {
    const auto w = harmonics::sphere_quadrature(degree).weights;
    double total = 0.0;
    for (double x : w)
      total += x;
    CHECK(total == Catch::Approx(4 * pi).epsilon(1e-13));
  }
}
