#include <catch2/catch_amalgamated.hpp>

#include "mst/specfun.hpp"
#include "oracles.hpp"

using namespace mst;
using specfun::EnergyParameter;

TEST_CASE("bessel j matches its power series at imaginary argument", "[specfun]") {
  for (double k : {0.3, 1.0, 2.5}) {
    const EnergyParameter z(-k * k);
    for (double r : {0.01, 0.2, 1.0, 3.0}) {
      const auto j = specfun::bessel_j(12, z, r);
      const cplx x(0.0, k * r);
      for (int l = 0; l <= 12; ++l) {
        const cplx ref = oracle::series_j(l, x);
        INFO("k=" << k << " r=" << r << " l=" << l);
        CHECK(std::abs(j[l] - ref) <= 1e-13 * std::abs(ref));
      }
    }
  }
}

TEST_CASE("hankel h matches the upward recurrence from elementary h_{-1}, h_0", "[specfun]") {
  for (double kr : {0.5, 2.0, 10.0, 40.0}) {
    const EnergyParameter z(-1.0);
    const auto h = specfun::hankel_h(10, z, kr);
    const auto ref = oracle::upward_h(10, cplx(0.0, kr));
    for (int l = 0; l <= 10; ++l) {
      INFO("kr=" << kr << " l=" << l);
      CHECK(std::abs(h[l] - ref[l]) <= 1e-12 * std::abs(ref[l]));
    }
  }
}

TEST_CASE("phases at imaginary argument", "[specfun]") {
  const EnergyParameter z(-4.0);
  const auto j = specfun::bessel_j(4, z, 0.7);
  const auto h = specfun::hankel_h(4, z, 0.7);
  const auto iv = specfun::modified_i(4, 1.4);
  const auto kv = specfun::modified_k(4, 1.4);
  for (int l = 0; l <= 4; ++l) {
    CHECK(std::abs(j[l] - ipow(l) * iv[l]) < 1e-14 * iv[l]);
    CHECK(std::abs(h[l] + ipow(-l) * kv[l]) < 1e-14 * kv[l]);
    CHECK(iv[l] > 0.0);
    CHECK(kv[l] > 0.0);
  }
}

TEST_CASE("wronskian j h' - j' h = i / x^2", "[specfun][invariant]") {
  for (double k : {0.2, 1.0, 5.0}) {
    const EnergyParameter z(-k * k);
    for (double r : {0.05, 0.5, 2.0, 10.0}) {
      if (k * r > 60)
        continue;
      const auto b = specfun::radial_basis(10, z, r);
      const cplx x = z.sqrt_z() * r;
      for (int l = 0; l <= 10; ++l) {
        const cplx w = b.j[l] * b.hp[l] - b.jp[l] * b.h[l];
        const double scale = std::abs(b.j[l] * b.hp[l]) + std::abs(b.jp[l] * b.h[l]);
        CHECK(std::abs(w - imag_unit / (x * x)) <= 1e-12 * scale);
      }
    }
  }
}

TEST_CASE("energy parameter branch", "[specfun]") {
  const EnergyParameter z(-2.25);
  CHECK(z.k() == Catch::Approx(1.5));
  CHECK(z.sqrt_z() == cplx(0.0, 1.5));
  CHECK_THROWS_AS(EnergyParameter(0.0), DomainError);
  CHECK_THROWS_AS(EnergyParameter(1.0), DomainError);
}

TEST_CASE("modified functions stay finite for large l at small argument", "[specfun]") {
  const auto iv = specfun::modified_i(30, 1e-3);
  const auto kv = specfun::modified_k(30, 5.0);
  for (int l = 0; l <= 30; ++l) {
    CHECK(std::isfinite(iv[l]));
    CHECK(std::isfinite(kv[l]));
  }
  // Upward relation i_{l-1} - i_{l+1} = (2l+1)/x i_l.
  const auto v = specfun::modified_i(12, 3.0);
  for (int l = 1; l < 12; ++l)
    CHECK(v[l - 1] - v[l + 1] == Catch::Approx((2 * l + 1) / 3.0 * v[l]).epsilon(1e-12));
}

TEST_CASE("closed-form spot values", "[specfun]") {
  const EnergyParameter one(-1.0);
  CHECK(std::abs(specfun::bessel_j(0, one, 2.0)[0] - cplx(std::sinh(2.0) / 2.0)) < 1e-14);
  CHECK(std::abs(specfun::bessel_j(1, one, 1.0)[1] - cplx(0.0, std::exp(-1.0))) < 1e-14);
  CHECK(std::abs(specfun::hankel_h(0, one, 2.0)[0] - cplx(-std::exp(-2.0) / 2.0)) < 1e-15);
  CHECK(std::abs(specfun::hankel_h(1, one, 1.0)[1] - cplx(0.0, 2.0 * std::exp(-1.0))) < 1e-14);
  const auto j5 = specfun::bessel_j(5, one, 0.5)[5];
  const auto ref = oracle::series_j(5, cplx(0.0, 0.5));
  CHECK(std::abs(j5 - ref) <= 1e-12 * std::abs(ref));
}

TEST_CASE("h_10 equals its finite term sum", "[specfun][oracle]") {
  // h_l(x) = (-i)^{l+1} e^{ix}/x sum_m i^m (l+m)! / (m! (l-m)! (2x)^m)
  const int l = 10;
  const cplx x(0.0, 6.0);
  cplx sum = 0.0;
  for (int m = 0; m <= l; ++m)
    sum += std::pow(cplx(0, 1), m) * (std::tgamma(l + m + 1.0) / (std::tgamma(m + 1.0) * std::tgamma(l - m + 1.0))) /
           std::pow(2.0 * x, m);
  const cplx ref = std::pow(cplx(0, -1), l + 1) * std::exp(cplx(0, 1) * x) / x * sum;
  const cplx h = specfun::hankel_h(l, EnergyParameter(-4.0), 3.0)[l];
  CHECK(std::abs(h - ref) <= 1e-13 * std::abs(ref));
}
