#include "mst/specfun.hpp"

#include <cmath>
#include <string>

namespace mst::specfun {

namespace {

void check_arguments(int ell_max, EnergyParameter z, double r) {
  if (ell_max < 0)
    throw DomainError("ell_max must be nonnegative");
  if (!(r > 0.0))
    throw DomainError("radius must be positive, got " + std::to_string(r));
  if (z.k() * r > max_kr)
    throw DomainError("k r = " + std::to_string(z.k() * r) + " exceeds the representable range");
}

} // namespace

EnergyParameter::EnergyParameter(double z) : z_(z), k_(std::sqrt(-z)) {
  if (!(z < 0.0))
    throw DomainError("energy parameter must be negative, got " + std::to_string(z));
}

std::vector<double> modified_i(int ell_max, double x) {
  std::vector<double> out(ell_max + 1, 0.0);
  const int start = ell_max + 15 + static_cast<int>(std::ceil(x));
  constexpr double big = 1e250;

  // i_{l-1} = i_{l+1} + (2l+1)/x i_l, seeded with (0, tiny) above ell_max.
  double upper = 0.0;
  double current = 1e-300;
  for (int l = start; l > 0; --l) {
    const double lower = upper + (2.0 * l + 1.0) / x * current;
    upper = current;
    current = lower;
    if (l - 1 <= ell_max)
      out[l - 1] = current;
    if (std::abs(current) > big) {
      upper /= big;
      current /= big;
      for (int m = l - 1; m <= ell_max; ++m)
        out[m] /= big;
    }
  }
  const double i0 = (x < 1e-8) ? 1.0 + x * x / 6.0 : std::sinh(x) / x;
  const double scale = i0 / out[0];
  for (double &v : out)
    v *= scale;
  return out;
}

std::vector<double> modified_k(int ell_max, double x) {
  std::vector<double> out(ell_max + 1);
  const double prefactor = std::exp(-x) / x;
  for (int l = 0; l <= ell_max; ++l) {
    // term_n = (l+n)! / (n! (l-n)!) (2x)^{-n}
    double term = 1.0;
    double sum = 1.0;
    for (int n = 0; n < l; ++n) {
      term *= static_cast<double>(l + n + 1) * static_cast<double>(l - n) /
              (static_cast<double>(n + 1) * 2.0 * x);
      sum += term;
    }
    out[l] = prefactor * sum;
  }
  return out;
}

std::vector<cplx> bessel_j(int ell_max, EnergyParameter z, double r) {
  check_arguments(ell_max, z, r);
  const auto mag = modified_i(ell_max, z.k() * r);
  std::vector<cplx> out(ell_max + 1);
  for (int l = 0; l <= ell_max; ++l)
    out[l] = ipow(l) * mag[l];
  return out;
}

std::vector<cplx> hankel_h(int ell_max, EnergyParameter z, double r) {
  check_arguments(ell_max, z, r);
  const auto mag = modified_k(ell_max, z.k() * r);
  std::vector<cplx> out(ell_max + 1);
  for (int l = 0; l <= ell_max; ++l)
    out[l] = -ipow(-l) * mag[l];
  return out;
}

RadialBasisValues radial_derivatives(RadialBasisValues values) {
  const int n = values.ell_max;
  values.jp.assign(n + 1, cplx{});
  values.hp.assign(n + 1, cplx{});
  values.jp[0] = -values.j[1];
  values.hp[0] = -values.h[1];
  for (int l = 1; l <= n; ++l) {
    const double inv = 1.0 / (2.0 * l + 1.0);
    values.jp[l] = (static_cast<double>(l) * values.j[l - 1] - (l + 1.0) * values.j[l + 1]) * inv;
    values.hp[l] = (static_cast<double>(l) * values.h[l - 1] - (l + 1.0) * values.h[l + 1]) * inv;
  }
  return values;
}

RadialBasisValues radial_basis(int ell_max, EnergyParameter z, double r) {
  RadialBasisValues values{z, r, ell_max, bessel_j(ell_max + 1, z, r), hankel_h(ell_max + 1, z, r), {}, {}};
  return radial_derivatives(std::move(values));
}

} // namespace mst::specfun
