#pragma once

// Reference implementations that share no code with the library.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;

// j_l(x) from its power series; fine for |x| up to ~15.
inline cplx series_j(int l, cplx x) {
  double dfact = 1.0;
  for (int k = 1; k <= 2 * l + 1; k += 2)
    dfact *= k;
  cplx term = std::pow(x, l) / dfact;
  cplx sum = term;
  const cplx q = -x * x / 2.0;
  for (int k = 1; k < 200; ++k) {
    term *= q / (double(k) * double(2 * l + 2 * k + 1));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum))
      break;
  }
  return sum;
}

// h_0 .. h_lmax by the upward recurrence from h_{-1} = e^{ix}/x, h_0 = -i e^{ix}/x.
inline std::vector<cplx> upward_h(int lmax, cplx x) {
  const cplx i(0.0, 1.0);
  std::vector<cplx> h(lmax + 1);
  cplx prev = std::exp(i * x) / x;
  h[0] = -i * std::exp(i * x) / x;
  for (int l = 0; l < lmax; ++l) {
    h[l + 1] = double(2 * l + 1) / x * h[l] - prev;
    prev = h[l];
  }
  return h;
}

// -e^{-k d} / (4 pi d): the kernel that the partial-wave sum reproduces.
inline double screened_kernel(double k, double d) { return -std::exp(-k * d) / (4.0 * M_PI * d); }

struct Shot {
  double u;  // u(R) = R psi(R)
  double du; // u'(R)
};

// Numerov for u'' = (l(l+1)/r^2 + V(r) - E) u on a uniform grid, u(0) = 0.
// `v_times_r0` is lim_{r->0} r V(r) (e.g. -Z), needed only for l = 0.
inline Shot numerov(const std::function<double(double)> &V, double v_times_r0, int l, double E, double R,
                    int N) {
  const double h = R / N;
  auto f = [&](double r) { return l * (l + 1) / (r * r) + V(r) - E; };
  // f u at the origin for u ~ r^{l+1} with unit leading coefficient.
  double fu0 = 0.0;
  if (l == 0)
    fu0 = v_times_r0;
  else if (l == 1)
    fu0 = 2.0;
  double u_prev = 0.0;
  double u = std::pow(h, l + 1);
  double g_prev = -h * h * fu0 / 12.0; // u_0 (1 - h^2 f_0 / 12) with u_0 = 0
  std::vector<double> tail(3);
  for (int i = 1; i <= N; ++i) {
    const double r = i * h, rn = (i + 1) * h;
    const double fi = f(r), fn = f(rn);
    const double next = (2.0 * u * (1.0 + 5.0 * h * h * fi / 12.0) - g_prev) / (1.0 - h * h * fn / 12.0);
    g_prev = u * (1.0 - h * h * fi / 12.0);
    u_prev = u;
    u = next;
    if (i == N - 1)
      tail[0] = u_prev;
  }
  // u now holds u_{N+1}, u_prev holds u_N, tail[0] holds u_{N-1}.
  return {u_prev, (u - tail[0]) / (2.0 * h)};
}

// Zero of u'(R) + k u(R) (decaying l = 0 exterior e^{-kr}) by bisection.
inline double shooting_pole(const std::function<double(double)> &V, double v_times_r0, double R, double lo,
                            double hi, int N = 40000) {
  auto g = [&](double E) {
    const auto s = numerov(V, v_times_r0, 0, E, R, N);
    return s.du + std::sqrt(-E) * s.u;
  };
  double glo = g(lo);
  for (int it = 0; it < 200 && hi - lo > 1e-13 * std::abs(lo); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if ((gm < 0) == (glo < 0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Capped Coulomb v(r) = -Z/r + Z/R for r < R, zero outside.
inline std::function<double(double)> capped_coulomb(double Z, double R) {
  return [Z, R](double r) { return r < R ? -Z / r + Z / R : 0.0; };
}

} // namespace oracle
