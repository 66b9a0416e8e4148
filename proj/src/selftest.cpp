#include "mst/selftest.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <sstream>

#include "mst/harness.hpp"
#include "mst/scattering.hpp"

namespace mst::harness {

using harmonics::AngularIndex;
using specfun::EnergyParameter;

namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }

// Coefficient of Y_l^m in the real harmonic Y_{l mu}.
cplx real_from_complex(int mu, int m) {
  const double s = 1.0 / std::sqrt(2.0);
  const int p = std::abs(mu);
  const double sign = (p % 2 == 0) ? 1.0 : -1.0;
  if (mu == 0)
    return m == 0 ? 1.0 : 0.0;
  if (mu > 0) {
    if (m == p)
      return sign * s;
    return m == -p ? s : 0.0;
  }
  if (m == p)
    return sign * s / imag_unit;
  return m == -p ? -s / imag_unit : 0.0;
}

SelftestCheck timed(const std::string &name, const std::function<void(SelftestCheck &)> &body) {
  SelftestCheck c;
  c.name = name;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception &e) {
    c.pass = false;
    c.detail = std::string("exception: ") + e.what();
  }
  c.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return c;
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

PotentialModel example1_well() { return PotentialModel(CappedCoulomb{10.0, 0.2}); }

void check_wronskian(SelftestCheck &c) {
  c.threshold = 1e-12;
  for (double x : {0.05, 0.3, 1.0, 2.5, 7.0, 20.0, 60.0}) {
    const EnergyParameter z(-x * x);
    const auto b = specfun::radial_basis(10, z, 1.0);
    const cplx X = z.sqrt_z();
    for (int l = 0; l <= 10; ++l) {
      const cplx w = (b.j[l] * b.hp[l] - b.jp[l] * b.h[l]) * X * X / imag_unit;
      c.value = std::max(c.value, std::abs(w - 1.0));
    }
  }
  c.pass = c.value <= c.threshold;
  c.detail = "l <= 10, kr in [0.05, 60]";
}

void check_gaunt(SelftestCheck &c) {
  c.threshold = 1e-12;
  const int La = 4, Lb = 4, Lc = 8;
  const harmonics::GauntTable table(La, Lb, Lc);
  for (int a = 0; a < harmonics::num_channels(La); ++a)
    for (int b = 0; b < harmonics::num_channels(Lb); ++b)
      for (int k = 0; k < harmonics::num_channels(Lc); ++k) {
        const double ref =
            gaunt_racah(AngularIndex::unpack(a), AngularIndex::unpack(b), AngularIndex::unpack(k));
        c.value = std::max(c.value, std::abs(table(a, b, k) - ref));
      }
  c.pass = c.value <= c.threshold;
  c.detail = "table (4,4,8) vs Racah 3j";
}

void check_dual_t(SelftestCheck &c) {
  c.threshold = 1e-8;
  const auto model = example1_well();
  const auto mesh = radial::RadialMesh::geometric(model.radius());
  for (int i = 0; i < 12; ++i) {
    const double E = -60.0 + i * 55.0 / 11.0;
    const EnergyParameter z(E);
    for (int l = 0; l <= 4; ++l) {
      const auto sol = radial::solve_radial_spherical(model, l, z, mesh);
      const cplx a = scattering::t_matrix_log_derivative(sol, z, model.radius());
      const cplx b = scattering::t_matrix_lippmann_schwinger(model, l, z, mesh);
      c.value = std::max(c.value, std::abs(a - b) / std::abs(a));
    }
  }
  c.pass = c.value <= c.threshold;
  c.detail = "l <= 4, 12 energies in [-60, -5]";
}

void check_green(SelftestCheck &c) {
  c.threshold = 1e-9;
  const std::vector<std::pair<Vec3, Vec3>> geometries = {
      {{1, 0, 0}, {0, 0, 2}},         {{0.3, 0.2, 0.1}, {0.5, -0.4, 0.9}}, {{1, 1, 1}, {-0.4, 0.3, 0.2}},
      {{0.1, 0, 0}, {0, 0.25, 0}},    {{2, 0, 0}, {0, 0.9, 0}},            {{0.5, 0.5, 0}, {0, 0.8, 1.2}},
      {{0, 0, 1}, {0, 0, 3}},         {{1.2, -0.3, 0.4}, {0.2, 0.4, -0.3}}, {{0.2, 0.1, -0.2}, {-0.3, -0.6, 1.1}},
      {{1.5, 1.5, 0.5}, {0.4, -0.2, -0.1}}};
  for (double k : {0.5, 1.0, 2.0}) {
    const EnergyParameter z(-k * k);
    for (const auto &[r, rp] : geometries) {
      const double d = (r - rp).norm();
      const double exact = -std::exp(-k * d) / (4.0 * pi * d);
      const cplx sum = scattering::free_green_partial_wave(r, rp, z, 40);
      c.value = std::max(c.value, std::abs(sum - exact));
    }
  }
  c.pass = c.value <= c.threshold;
  c.detail = "ell_cut = 40, 10 geometries, k in {0.5, 1, 2}";
}

void check_expansion(SelftestCheck &c, const kkr::ConventionHooks &hooks) {
  c.threshold = 1e-6;
  const Vec3 c1(0.5, 1, 1), c2(1.5, 1, 1);
  const EnergyParameter z(-9.0);
  std::vector<Vec3> probes;
  for (int i = 0; i < 20; ++i) {
    const double th = 0.3 + i * 0.13, ph = i * 0.77;
    probes.push_back(c2 + 0.3 * Vec3(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)));
  }
  std::vector<double> res;
  for (int Lb : {4, 8, 16, 24})
    res.push_back(std::max(kkr::expansion_residual(c1, c2, {0, 0}, z, probes, Lb, hooks),
                           kkr::expansion_residual(c1, c2, {2, 1}, z, probes, Lb, hooks)));
  bool decreasing = true;
  for (std::size_t i = 1; i < res.size(); ++i)
    decreasing = decreasing && res[i] < res[i - 1];
  c.value = res.back();
  c.pass = decreasing && c.value <= c.threshold;
  c.detail = "L_big 4/8/16/24: " + sci(res[0]) + " " + sci(res[1]) + " " + sci(res[2]) + " " + sci(res[3]) +
             (decreasing ? "" : " (not decreasing)");
}

void check_far_separation(SelftestCheck &c) {
  c.threshold = 1e-6;
  const PotentialModel well(CappedCoulomb{30.0, 0.2});
  const auto mesh = radial::RadialMesh::geometric(0.2);
  const auto poles = scattering::find_t_pole(well, 0, -90.0, -60.0, mesh, 0.1, 1e-12);
  if (poles.size() != 1)
    throw std::runtime_error("expected one s-wave pole in [-90, -60]");
  kkr::SystemConfig cfg;
  cfg.L = 2;
  cfg.E_lo = poles[0] - 0.25;
  cfg.E_hi = poles[0] + 0.25;
  cfg.sites = {{Vec3(0, 0, 0), well}, {Vec3(4.0, 0, 0), well}};
  const auto trace = kkr::root_trace(cfg);
  if (trace.roots.empty())
    throw std::runtime_error("no root near the single-well pole");
  c.value = std::abs(trace.roots.front().energy - poles[0]);
  c.pass = c.value <= c.threshold;
  c.detail = "separation 20 R, pole " + std::to_string(poles[0]);
}

void check_symmetry(SelftestCheck &c, const kkr::ConventionHooks &hooks) {
  c.threshold = 1e-11;
  const std::vector<Vec3> pos = {{0.6, 0.6, 1.0}, {0.6, 1.2, 1.0}, {1.2, 0.6, 1.0}, {1.5, 1.4, 1.6}};
  const int L = 4;
  const auto gaunt = kkr::structure_gaunt_table(L);
  double worst = 0.0;
  for (double E : {-0.5, -9.0, -60.0}) {
    const auto g = kkr::structure_constants(pos, EnergyParameter(E), L, gaunt, hooks);
    const double scale = g.G.cwiseAbs().maxCoeff();
    for (int n = 0; n < g.sites; ++n)
      for (int np = 0; np < g.sites; ++np)
        worst = std::max(worst, (g.block(n, np) - g.block(np, n).transpose()).cwiseAbs().maxCoeff() / scale);
  }
  c.value = worst;
  c.pass = c.value <= c.threshold;
  c.detail = "g^{nn'}_{LL'} = g^{n'n}_{L'L}, relative to max |g|";
}

ExperimentSpec determinism_spec(int workers) {
  ExperimentSpec spec;
  auto &sys = spec.system;
  sys.kinetic = 0.5;
  for (const Vec3 &p : {Vec3(0.6, 0.6, 1), Vec3(0.6, 1.2, 1), Vec3(1.2, 0.6, 1), Vec3(1.2, 1.2, 1)})
    sys.sites.push_back({p, example1_well()});
  sys.E_lo = -6.7;
  sys.E_hi = -6.3;
  sys.step = 0.05;
  sys.workers = workers;
  spec.L_list = {0};
  spec.L_ref = 1;
  return spec;
}

void check_determinism(SelftestCheck &c) {
  c.threshold = 0.0;
  std::vector<std::string> scans, reports;
  for (int workers : {1, 2, 8, 1}) {
    const auto spec = determinism_spec(workers);
    std::ostringstream scan_out, report_out;
    write_scan_csv(run_scan(spec, 1), scan_out);
    write_report_csv(run_convergence(spec), report_out, false);
    scans.push_back(scan_out.str());
    reports.push_back(report_out.str());
  }
  int mismatches = 0;
  for (std::size_t i = 1; i < scans.size(); ++i)
    mismatches += (scans[i] != scans[0]) + (reports[i] != reports[0]);
  c.value = mismatches;
  c.pass = mismatches == 0;
  c.detail = "scan and report CSV bytes, workers 1/2/8 and a repeat";
}

} // namespace

double wigner_3j(int j1, int j2, int j3, int m1, int m2, int m3) {
  if (m1 + m2 + m3 != 0 || j3 < std::abs(j1 - j2) || j3 > j1 + j2)
    return 0.0;
  if (std::abs(m1) > j1 || std::abs(m2) > j2 || std::abs(m3) > j3)
    return 0.0;
  const double delta = factorial(j1 + j2 - j3) * factorial(j1 - j2 + j3) * factorial(-j1 + j2 + j3) /
                       factorial(j1 + j2 + j3 + 1);
  const double pre = std::sqrt(delta * factorial(j1 + m1) * factorial(j1 - m1) * factorial(j2 + m2) *
                               factorial(j2 - m2) * factorial(j3 + m3) * factorial(j3 - m3));
  const int kmin = std::max({0, j2 - j3 - m1, j1 - j3 + m2});
  const int kmax = std::min({j1 + j2 - j3, j1 - m1, j2 + m2});
  double sum = 0.0;
  for (int k = kmin; k <= kmax; ++k) {
    const double den = factorial(k) * factorial(j3 - j2 + k + m1) * factorial(j3 - j1 + k - m2) *
                       factorial(j1 + j2 - j3 - k) * factorial(j1 - k - m1) * factorial(j2 - k + m2);
    sum += ((k % 2 == 0) ? 1.0 : -1.0) / den;
  }
  const int phase = j1 - j2 - m3;
  return ((phase % 2 == 0) ? 1.0 : -1.0) * pre * sum;
}

double gaunt_racah(AngularIndex a, AngularIndex b, AngularIndex c) {
  const double norm = std::sqrt((2.0 * a.ell + 1) * (2.0 * b.ell + 1) * (2.0 * c.ell + 1) / (4.0 * pi));
  const double w0 = wigner_3j(a.ell, b.ell, c.ell, 0, 0, 0);
  if (w0 == 0.0)
    return 0.0;
  const auto orders = [](int mu) { return mu == 0 ? std::vector<int>{0} : std::vector<int>{mu, -mu}; };
  cplx sum = 0.0;
  for (int ma : orders(a.m))
    for (int mb : orders(b.m)) {
      const int mc = -ma - mb;
      if (std::abs(mc) != std::abs(c.m))
        continue;
      const cplx u = real_from_complex(a.m, ma) * real_from_complex(b.m, mb) * real_from_complex(c.m, mc);
      sum += u * wigner_3j(a.ell, b.ell, c.ell, ma, mb, mc);
    }
  return norm * w0 * sum.real();
}

std::vector<SelftestCheck> run_selftest(const SelftestOptions &options) {
  std::vector<SelftestCheck> out;
  out.push_back(timed("wronskian", check_wronskian));
  out.push_back(timed("gaunt_oracle", check_gaunt));
  out.push_back(timed("dual_t_matrix", check_dual_t));
  out.push_back(timed("green_function", check_green));
  out.push_back(timed("expansion_residual", [&](SelftestCheck &c) { check_expansion(c, options.hooks); }));
  out.push_back(timed("far_separation", check_far_separation));
  out.push_back(timed("structure_symmetry", [&](SelftestCheck &c) { check_symmetry(c, options.hooks); }));
  out.push_back(timed("determinism", check_determinism));
  return out;
}

void print_selftest(const std::vector<SelftestCheck> &checks, std::ostream &out) {
  char line[256];
  std::snprintf(line, sizeof line, "%-20s %-6s %-10s %-10s %8s  %s\n", "check", "result", "value", "threshold",
                "time_s", "detail");
  out << line;
  for (const auto &c : checks) {
    std::snprintf(line, sizeof line, "%-20s %-6s %-10s %-10s %8.2f  ", c.name.c_str(), c.pass ? "PASS" : "FAIL",
                  sci(c.value).c_str(), sci(c.threshold).c_str(), c.runtime);
    out << line << c.detail << '\n';
  }
}

} // namespace mst::harness
