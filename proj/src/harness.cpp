#include "mst/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace mst::harness {

namespace {

std::string fmt(double v) {
  if (std::isnan(v))
    return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

json complex_array(const VectorXc &v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out.push_back({v[i].real(), v[i].imag()});
  return out;
}

json nullable(bool present, double v) { return present && std::isfinite(v) ? json(v) : json(nullptr); }

const char *status(const ConvergenceRow &row) {
  if (!row.found)
    return "missing";
  return row.assumption_violated ? "assumption" : "ok";
}

// Root-trace one cutoff inside [lo, hi]; returns the root nearest `target`
// within `guard`, or the lowest root when there is no target yet.
ConvergenceRow track(const ExperimentSpec &spec, int L, double lo, double hi, const double *target,
                     std::vector<std::string> &flags) {
  kkr::SystemConfig cfg = spec.system;
  cfg.L = L;
  cfg.E_lo = lo;
  cfg.E_hi = hi;
  ConvergenceRow row;
  row.L = L;
  const auto t0 = std::chrono::steady_clock::now();
  const auto trace = kkr::root_trace(cfg);
  row.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  for (const auto &w : trace.warnings)
    flags.push_back("L=" + std::to_string(L) + ": " + w);
  const kkr::EigenResult *best = nullptr;
  for (const auto &r : trace.roots) {
    if (!target) {
      best = &r;
      break;
    }
    const double d = std::abs(r.energy - *target);
    if (d <= spec.guard && (!best || d < std::abs(best->energy - *target)))
      best = &r;
  }
  if (best) {
    row.found = true;
    row.energy = best->energy;
    row.sigma_min = best->sigma_min;
    row.det_P_abs = best->det_P_abs;
    row.multiplicity = best->multiplicity;
    row.assumption_violated = best->assumption_violated;
  }
  return row;
}

} // namespace

std::vector<kkr::ScanPoint> run_scan(const ExperimentSpec &spec, int L) {
  kkr::SystemConfig cfg = spec.system;
  cfg.L = L;
  const kkr::KkrSystem system(cfg);
  return kkr::scan(system, kkr::scan_grid(cfg.E_lo, cfg.E_hi, cfg.step));
}

void write_scan_csv(const std::vector<kkr::ScanPoint> &scan, std::ostream &out) {
  out << "E,sigma_min,abs_det,det_P_abs\n";
  for (const auto &p : scan)
    out << fmt(p.energy) << ',' << fmt(p.sigma_min) << ',' << fmt(p.abs_det) << ',' << fmt(p.det_P_abs) << '\n';
}

ConvergenceReport run_convergence(const ExperimentSpec &spec, const Progress &progress) {
  ConvergenceReport report;
  report.config_hash = config_hash(spec);
  report.resolved = to_json(spec);

  std::vector<int> cutoffs = spec.L_list;
  cutoffs.push_back(spec.L_ref);
  bool have_target = false;
  double target = 0.0;
  for (int L : cutoffs) {
    double lo = spec.system.E_lo, hi = spec.system.E_hi;
    if (have_target) {
      lo = std::max(lo, target - spec.guard);
      hi = std::min(hi, target + spec.guard);
    }
    auto row = track(spec, L, lo, hi, have_target ? &target : nullptr, report.flags);
    if (row.found) {
      target = row.energy;
      have_target = true;
    } else {
      report.flags.push_back("missing eigenvalue at L=" + std::to_string(L));
    }
    if (row.assumption_violated)
      report.flags.push_back("assumption violated at L=" + std::to_string(L) +
                             " (|det P| = " + fmt(row.det_P_abs) + ")");
    if (progress)
      progress(row);
    report.rows.push_back(row);
  }

  const auto &ref = report.rows.back();
  if (!ref.found)
    report.flags.push_back("reference eigenvalue missing at L_ref=" + std::to_string(spec.L_ref));
  for (auto &row : report.rows)
    row.error = (row.found && ref.found) ? std::abs(row.energy - ref.energy) : std::nan("");
  for (std::size_t i = 1; i + 1 < report.rows.size(); ++i) {
    const auto &a = report.rows[i - 1], &b = report.rows[i];
    if (std::isfinite(a.error) && std::isfinite(b.error) && !(b.error < a.error))
      report.flags.push_back("error not decreasing from L=" + std::to_string(a.L) + " to L=" +
                             std::to_string(b.L));
  }
  return report;
}

void write_report_csv(const ConvergenceReport &report, std::ostream &out, bool include_runtime) {
  const auto &cfg = report.resolved;
  out << "# tool_version=" << tool_version << '\n';
  out << "# config_hash=" << report.config_hash << '\n';
  out << "# kinetic=" << fmt(cfg.at("kinetic").get<double>()) << '\n';
  out << "# window=" << fmt(cfg.at("window")[0].get<double>()) << ':' << fmt(cfg.at("window")[1].get<double>())
      << '\n';
  out << "# step=" << fmt(cfg.at("step").get<double>()) << '\n';
  out << "# guard=" << fmt(cfg.at("convergence").at("guard").get<double>()) << '\n';
  out << "# L_ref=" << cfg.at("convergence").at("L_ref").get<int>() << '\n';
  out << "# mesh_points=" << cfg.at("mesh_points").get<int>() << '\n';
  out << "# tolerances=" << cfg.at("tolerances").dump() << '\n';
  out << "L,E_L,abs_error,sigma_min,det_P_abs,multiplicity,status" << (include_runtime ? ",runtime_s" : "") << '\n';
  for (const auto &row : report.rows) {
    const double nan = std::nan("");
    out << row.L << ',' << fmt(row.found ? row.energy : nan) << ',' << fmt(row.error) << ','
        << fmt(row.found ? row.sigma_min : nan) << ',' << fmt(row.found ? row.det_P_abs : nan) << ','
        << row.multiplicity << ',' << status(row);
    if (include_runtime) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3f", row.runtime);
      out << ',' << buf;
    }
    out << '\n';
  }
}

json summary_json(const ConvergenceReport &report) {
  json eig = json::array(), err = json::array();
  for (const auto &row : report.rows) {
    eig.push_back({{"L", row.L},
                   {"energy", nullable(row.found, row.energy)},
                   {"multiplicity", row.multiplicity},
                   {"sigma_min", nullable(row.found, row.sigma_min)},
                   {"det_P_abs", nullable(row.found, row.det_P_abs)},
                   {"status", status(row)},
                   {"reference", &row == &report.reference()}});
    err.push_back({{"L", row.L}, {"abs_error", nullable(true, row.error)}});
  }
  return {{"eigenvalues", eig},
          {"errors", err},
          {"flags", report.flags},
          {"metadata", {{"tool_version", tool_version}, {"config_hash", report.config_hash}, {"config", report.resolved}}}};
}

SolveResult run_solve(const ExperimentSpec &spec, int L) {
  kkr::SystemConfig cfg = spec.system;
  cfg.L = L;
  return {L, kkr::root_trace(cfg)};
}

json summary_json(const ExperimentSpec &spec, const SolveResult &result) {
  json eig = json::array();
  json flags = result.trace.warnings;
  for (const auto &r : result.trace.roots) {
    json a = json::array(), b = json::array();
    for (std::size_t k = 0; k < r.a.size(); ++k) {
      a.push_back(complex_array(r.a[k]));
      b.push_back(complex_array(r.b[k]));
    }
    eig.push_back({{"L", result.L},
                   {"energy", r.energy},
                   {"multiplicity", r.multiplicity},
                   {"sigma_min", r.sigma_min},
                   {"abs_det", r.abs_det},
                   {"det_P_abs", r.det_P_abs},
                   {"iterations", r.iterations},
                   {"assumption_violated", r.assumption_violated},
                   {"a", a},
                   {"b", b}});
    if (r.assumption_violated)
      flags.push_back("assumption violated at E=" + fmt(r.energy) + " (|det P| = " + fmt(r.det_P_abs) + ")");
  }
  if (result.trace.roots.empty())
    flags.push_back("no eigenvalue in window");
  return {{"eigenvalues", eig},
          {"errors", json::array()},
          {"flags", flags},
          {"metadata", {{"tool_version", tool_version}, {"config_hash", config_hash(spec)}, {"config", to_json(spec)}}}};
}

bool assumption_violated(const ConvergenceReport &report) {
  for (const auto &row : report.rows)
    if (row.found && row.assumption_violated)
      return true;
  return false;
}

bool assumption_violated(const SolveResult &result) {
  for (const auto &r : result.trace.roots)
    if (r.assumption_violated)
      return true;
  return false;
}

} // namespace mst::harness
