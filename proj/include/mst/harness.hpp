#pragma once

// Scans, eigenvalue solves and the L-convergence study behind the CLI.

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "mst/config.hpp"

namespace mst::harness {

inline constexpr const char *tool_version = "1.0.0";

/// Secular diagnostics on the configured grid at cutoff L.
std::vector<kkr::ScanPoint> run_scan(const ExperimentSpec &spec, int L);
/// Header "E,sigma_min,abs_det,det_P_abs"; skipped points print nan.
void write_scan_csv(const std::vector<kkr::ScanPoint> &scan, std::ostream &out);

struct ConvergenceRow {
  int L = 0;
  bool found = false;
  double energy = 0.0;
  double error = 0.0; // |E_L - E_ref|; meaningful when found and the reference was found
  double sigma_min = 0.0;
  double det_P_abs = 0.0;
  int multiplicity = 0;
  bool assumption_violated = false;
  double runtime = 0.0; // seconds
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows; // L_list ascending, then L_ref
  std::vector<std::string> flags;
  std::string config_hash;
  json resolved; // full resolved configuration

  const ConvergenceRow &reference() const { return rows.back(); }
};

using Progress = std::function<void(const ConvergenceRow &)>;

/// The first eigenvalue is taken as the lowest root of the configured window at
/// the smallest cutoff; every later cutoff searches [E - guard, E + guard]
/// around the previous match and keeps the nearest root. A cutoff without a
/// root in its guard window gives a row marked missing.
ConvergenceReport run_convergence(const ExperimentSpec &spec, const Progress &progress = {});

/// Rows "L,E_L,abs_error,sigma_min,det_P_abs,multiplicity,status,runtime_s"
/// after '#' metadata lines. Everything except runtime_s is deterministic.
void write_report_csv(const ConvergenceReport &report, std::ostream &out, bool include_runtime = true);

/// {eigenvalues, errors, flags, metadata}.
json summary_json(const ConvergenceReport &report);

/// Roots of the configured window at cutoff L with coefficients and diagnostics.
struct SolveResult {
  int L = 0;
  kkr::RootTraceResult trace;
};
SolveResult run_solve(const ExperimentSpec &spec, int L);
json summary_json(const ExperimentSpec &spec, const SolveResult &result);

/// True when some accepted eigenpair has |det P| below the assumption tolerance.
bool assumption_violated(const ConvergenceReport &report);
bool assumption_violated(const SolveResult &result);

} // namespace mst::harness
