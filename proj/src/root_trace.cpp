#include "mst/root_trace.hpp"

#include <algorithm>
#include <cmath>

#include "mst/parallel.hpp"

namespace mst::kkr {

void validate(const SystemConfig &config) {
  if (config.sites.empty())
    throw DomainError("system has no sites");
  if (!(config.kinetic > 0.0))
    throw DomainError("kinetic prefactor must be positive");
  if (config.L < 0)
    throw DomainError("cutoff L must be nonnegative");
  if (config.mesh_points < 8)
    throw DomainError("radial mesh needs at least 8 intervals");
  if (config.workers < 1)
    throw DomainError("worker count must be positive");
  if (!(config.E_hi < 0.0) || config.E_lo > config.E_hi)
    throw DomainError("energy window must satisfy E_lo <= E_hi < 0");
  if (!(config.step > 0.0))
    throw DomainError("scan step must be positive");
  if (!(config.singular_tol > 0.0) || !(config.refine_tol > 0.0) || !(config.assumption_tol >= 0.0))
    throw DomainError("tolerances must be positive");
  for (std::size_t n = 0; n < config.sites.size(); ++n) {
    for (std::size_t m = n + 1; m < config.sites.size(); ++m) {
      const double d = (config.sites[n].position - config.sites[m].position).norm();
      if (!(d > config.sites[n].radius() + config.sites[m].radius()))
        throw GeometryError("spheres of sites " + std::to_string(n) + " and " + std::to_string(m) +
                            " overlap");
    }
  }
}

KkrSystem::KkrSystem(SystemConfig config, ConventionHooks hooks)
    : config_(std::move(config)), hooks_(hooks), gaunt_(structure_gaunt_table(std::max(config_.L, 0))) {
  validate(config_);
  for (const auto &site : config_.sites) {
    meshes_.push_back(radial::RadialMesh::geometric(site.radius(), config_.mesh_points));
    internal_.push_back(site.potential.scaled(1.0 / config_.kinetic));
  }
}

std::vector<double> KkrSystem::radii() const {
  std::vector<double> out;
  for (const auto &s : config_.sites)
    out.push_back(s.radius());
  return out;
}

std::vector<Vec3> KkrSystem::positions() const {
  std::vector<Vec3> out;
  for (const auto &s : config_.sites)
    out.push_back(s.position);
  return out;
}

Evaluation KkrSystem::evaluate(double E) const {
  const EnergyParameter z(internal_energy(E));
  Evaluation ev;
  ev.energy = E;
  ev.internal = z.z();
  ev.launch.resize(size());
  for (int n = 0; n < size(); ++n) {
    const auto &model = internal_[n];
    try {
      if (model.is_spherical()) {
        ev.tmats.push_back(scattering::t_matrix_spherical(model, config_.L, z, meshes_[n], n));
      } else {
        const auto sol = radial::solve_coupled_channels(model, config_.L, z, meshes_[n]);
        ev.tmats.push_back(scattering::t_matrix_nonspherical(sol, z, model.radius(), n, &ev.launch[n]));
      }
    } catch (const AsymptoticProblem &e) {
      // Re-raise with the site index filled in.
      throw AsymptoticProblem(n, e.ell(), E, "matching failed");
    }
  }
  ev.g = structure_constants(positions(), z, config_.L, gaunt_, hooks_);
  ev.S = assemble_secular(ev.g, ev.tmats, radii());
  return ev;
}

MatrixXc KkrSystem::assumption(const Evaluation &ev) const {
  return assumption_matrix(ev.g, radii(), EnergyParameter(ev.internal));
}

double KkrSystem::sigma_min(double E) const { return smallest_singular_value(evaluate(E).S.scaled()); }

std::vector<double> scan_grid(double E_lo, double E_hi, double step) {
  if (E_lo > E_hi || !(step > 0.0))
    throw DomainError("invalid scan grid");
  const int n = static_cast<int>(std::llround((E_hi - E_lo) / step));
  if (n <= 0)
    return {E_lo};
  std::vector<double> out(n + 1);
  for (int i = 0; i <= n; ++i)
    out[i] = E_lo + i * (E_hi - E_lo) / n;
  out.back() = E_hi;
  return out;
}

std::vector<ScanPoint> scan(const KkrSystem &system, const std::vector<double> &energies) {
  std::vector<ScanPoint> out(energies.size());
  parallel_for(energies.size(), system.config().workers, [&](std::size_t i) {
    ScanPoint &p = out[i];
    p.energy = energies[i];
    try {
      const auto ev = system.evaluate(p.energy);
      const auto d = secular_diagnostics(ev.S, system.assumption(ev));
      p.sigma_min = d.sigma_min;
      p.abs_det = std::abs(d.det);
      p.det_P_abs = std::abs(d.det_P);
    } catch (const AsymptoticProblem &e) {
      p.valid = false;
      p.sigma_min = p.abs_det = p.det_P_abs = std::nan("");
      p.note = e.what();
    } catch (const IntegrationError &e) {
      p.valid = false;
      p.sigma_min = p.abs_det = p.det_P_abs = std::nan("");
      p.note = e.what();
    }
  });
  return out;
}

namespace {

// S(E) is undefined exactly at a single-site t-matrix pole, which is also where
// the roots of decoupled sites sit. Such energies move to a neighbor.
double pole_offset(double E) { return 1e-12 * std::max(1.0, std::abs(E)); }

double sigma_min_near(const KkrSystem &system, double E) {
  try {
    return system.sigma_min(E);
  } catch (const AsymptoticProblem &) {
    return system.sigma_min(E + pole_offset(E));
  }
}

} // namespace

std::pair<double, int> refine_minimum(const KkrSystem &system, double lo, double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = sigma_min_near(system, c);
  double fd = sigma_min_near(system, d);
  int iterations = 0;
  while (b - a > tol && iterations < 200) {
    ++iterations;
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = sigma_min_near(system, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = sigma_min_near(system, d);
    }
  }
  return {0.5 * (a + b), iterations};
}

EigenResult characterize(const KkrSystem &system, double E, int iterations) {
  Evaluation ev;
  try {
    ev = system.evaluate(E);
  } catch (const AsymptoticProblem &) {
    E += pole_offset(E);
    ev = system.evaluate(E);
  }
  const auto d = secular_diagnostics(ev.S, system.assumption(ev));
  EigenResult r;
  r.energy = E;
  r.iterations = iterations;
  r.sigma_min = d.sigma_min;
  r.abs_det = std::abs(d.det);
  r.det_P_abs = std::abs(d.det_P);
  r.assumption_violated = r.det_P_abs < system.config().assumption_tol;
  if (d.sigma_min < system.config().singular_tol) {
    auto ns = null_space(ev.S, ev.tmats, system.config().singular_tol);
    r.multiplicity = ns.multiplicity();
    r.a = std::move(ns.a);
    r.b = std::move(ns.b);
  }
  return r;
}

RootTraceResult root_trace(const KkrSystem &system) {
  const auto &cfg = system.config();
  RootTraceResult out;
  const auto grid = scan_grid(cfg.E_lo, cfg.E_hi, cfg.step);
  out.scan = scan(system, grid);
  for (const auto &p : out.scan)
    if (!p.valid)
      out.warnings.push_back("skipped E = " + std::to_string(p.energy) + ": " + p.note);

  // Local minima among valid points; each bracket spans the neighboring valid points.
  std::vector<std::size_t> valid;
  for (std::size_t i = 0; i < out.scan.size(); ++i)
    if (out.scan[i].valid)
      valid.push_back(i);
  std::vector<std::pair<double, double>> brackets;
  for (std::size_t k = 0; k < valid.size(); ++k) {
    const double s = out.scan[valid[k]].sigma_min;
    const bool left_ok = k == 0 || s <= out.scan[valid[k - 1]].sigma_min;
    const bool right_ok = k + 1 == valid.size() || s < out.scan[valid[k + 1]].sigma_min;
    if (!(left_ok && right_ok) || valid.size() < 2)
      continue;
    const double lo = out.scan[valid[k == 0 ? 0 : k - 1]].energy;
    const double hi = out.scan[valid[k + 1 == valid.size() ? k : k + 1]].energy;
    brackets.emplace_back(lo, hi);
  }
  if (valid.size() == 1 && out.scan[valid[0]].sigma_min < cfg.singular_tol)
    brackets.emplace_back(out.scan[valid[0]].energy, out.scan[valid[0]].energy);
  // A run of skipped points may hide a minimum (a root on a t-matrix pole).
  for (std::size_t i = 0; i < out.scan.size(); ++i) {
    if (out.scan[i].valid || (i > 0 && !out.scan[i - 1].valid))
      continue;
    std::size_t j = i;
    while (j < out.scan.size() && !out.scan[j].valid)
      ++j;
    const double lo = out.scan[i == 0 ? 0 : i - 1].energy;
    const double hi = out.scan[j == out.scan.size() ? j - 1 : j].energy;
    if (hi > lo)
      brackets.emplace_back(lo, hi);
  }

  std::vector<std::optional<EigenResult>> found(brackets.size());
  std::vector<std::string> errors(brackets.size());
  parallel_for(brackets.size(), cfg.workers, [&](std::size_t i) {
    try {
      const auto [lo, hi] = brackets[i];
      const auto [E, iters] = hi > lo ? refine_minimum(system, lo, hi, cfg.refine_tol) : std::pair{lo, 0};
      auto r = characterize(system, E, iters);
      if (r.multiplicity > 0)
        found[i] = std::move(r);
    } catch (const AsymptoticProblem &e) {
      errors[i] = e.what();
    } catch (const IntegrationError &e) {
      errors[i] = e.what();
    }
  });
  for (const auto &e : errors)
    if (!e.empty())
      out.warnings.push_back("refinement skipped: " + e);
  for (auto &f : found) {
    if (!f)
      continue;
    const bool duplicate = std::any_of(out.roots.begin(), out.roots.end(), [&](const EigenResult &r) {
      return std::abs(r.energy - f->energy) <= 10.0 * cfg.refine_tol;
    });
    if (!duplicate)
      out.roots.push_back(std::move(*f));
  }
  std::sort(out.roots.begin(), out.roots.end(),
            [](const EigenResult &x, const EigenResult &y) { return x.energy < y.energy; });
  return out;
}

RootTraceResult root_trace(const SystemConfig &config) { return root_trace(KkrSystem(config)); }

} // namespace mst::kkr
