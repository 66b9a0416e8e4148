// mstkkr: bound states of muffin-tin systems by KKR root tracing.
//
// Exit codes: 0 ok, 1 usage or invalid configuration, 2 numerical failure,
// 3 assumption violation (|det P| below tolerance) with no other failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mst/config.hpp"
#include "mst/harness.hpp"
#include "mst/selftest.hpp"
#include "mst/wavefun.hpp"

namespace fs = std::filesystem;
using namespace mst;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_numerical = 2;
constexpr int exit_assumption = 3;

struct Common {
  std::string config;
  std::optional<int> L;
  std::optional<std::string> out;
  std::optional<int> workers;
  std::optional<double> step;
};

void add_common(CLI::App *cmd, Common &c, bool with_L) {
  cmd->add_option("--config", c.config, "experiment configuration (JSON)")->required()->check(CLI::ExistingFile);
  if (with_L)
    cmd->add_option("--L", c.L, "angular-momentum cutoff (default: config L)")->check(CLI::NonNegativeNumber);
  cmd->add_option("--out", c.out, "output directory (default: config output)");
  cmd->add_option("--workers", c.workers, "worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--step", c.step, "energy scan step")->check(CLI::PositiveNumber);
}

harness::ExperimentSpec load(const Common &c) {
  auto spec = harness::load_config(c.config);
  if (c.out)
    spec.output = *c.out;
  if (c.workers)
    spec.system.workers = *c.workers;
  if (c.step)
    spec.system.step = *c.step;
  if (c.L)
    spec.system.L = *c.L;
  return spec;
}

fs::path prepare(const harness::ExperimentSpec &spec) {
  const fs::path dir = spec.output;
  fs::create_directories(dir);
  return dir;
}

void write_json(const fs::path &path, const harness::json &doc) {
  std::ofstream out(path);
  out << doc.dump(2) << '\n';
}

int cmd_scan(const Common &c) {
  const auto spec = load(c);
  const auto dir = prepare(spec);
  const auto scan = harness::run_scan(spec, spec.system.L);
  const auto path = dir / ("scan_L" + std::to_string(spec.system.L) + ".csv");
  std::ofstream out(path);
  harness::write_scan_csv(scan, out);
  int skipped = 0;
  for (const auto &p : scan)
    skipped += !p.valid;
  std::cout << "wrote " << path.string() << " (" << scan.size() << " energies, " << skipped << " skipped)\n";
  return exit_ok;
}

int cmd_solve(const Common &c) {
  const auto spec = load(c);
  const auto dir = prepare(spec);
  const auto result = harness::run_solve(spec, spec.system.L);
  write_json(dir / "summary.json", harness::summary_json(spec, result));
  for (const auto &r : result.trace.roots)
    std::printf("E = %.12f  multiplicity %d  sigma_min %.2e  |det P| %.3e%s\n", r.energy, r.multiplicity,
                r.sigma_min, r.det_P_abs, r.assumption_violated ? "  ASSUMPTION VIOLATED" : "");
  for (const auto &w : result.trace.warnings)
    std::cerr << "warning: " << w << '\n';
  if (result.trace.roots.empty()) {
    std::cerr << "no eigenvalue in the window\n";
    return exit_numerical;
  }
  if (spec.grid) {
    kkr::SystemConfig cfg = spec.system;
    const kkr::KkrSystem system(cfg);
    const auto u = wavefun::normalize(wavefun::build(system, result.trace.roots.front()));
    const auto path = dir / ("wavefunction_L" + std::to_string(spec.system.L) + ".csv");
    std::ofstream out(path);
    wavefun::export_grid_csv(u, spec.grid->lo, spec.grid->hi, spec.grid->counts, out);
    std::cout << "wrote " << path.string() << '\n';
  }
  return harness::assumption_violated(result) ? exit_assumption : exit_ok;
}

int cmd_converge(const Common &c) {
  const auto spec = load(c);
  const auto dir = prepare(spec);
  const auto report = harness::run_convergence(spec, [](const harness::ConvergenceRow &row) {
    if (row.found)
      std::fprintf(stderr, "L=%d  E=%.13f  (%.1f s)\n", row.L, row.energy, row.runtime);
    else
      std::fprintf(stderr, "L=%d  missing  (%.1f s)\n", row.L, row.runtime);
  });
  {
    std::ofstream out(dir / "convergence.csv");
    harness::write_report_csv(report, out);
  }
  write_json(dir / "summary.json", harness::summary_json(report));
  for (const auto &row : report.rows)
    std::printf("L=%-2d E=%.13f  error %.3e\n", row.L, row.energy, row.error);
  for (const auto &f : report.flags)
    std::cerr << "flag: " << f << '\n';
  bool missing = false;
  for (const auto &row : report.rows)
    missing = missing || !row.found;
  if (missing)
    return exit_numerical;
  return harness::assumption_violated(report) ? exit_assumption : exit_ok;
}

int cmd_selftest(const std::string &inject) {
  harness::SelftestOptions options;
  if (inject == "flip_phase")
    options.hooks.flip_phase = true;
  else if (inject == "complex_gaunt")
    options.hooks.complex_gaunt = true;
  const auto checks = harness::run_selftest(options);
  harness::print_selftest(checks, std::cout);
  for (const auto &c : checks)
    if (!c.pass)
      return exit_numerical;
  return exit_ok;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"KKR bound-state solver for muffin-tin potentials"};
  app.require_subcommand(1);
  app.set_version_flag("--version", harness::tool_version);

  Common scan_opts, solve_opts, converge_opts;
  auto *scan = app.add_subcommand("scan", "write sigma_min, |det S| and |det P| over the energy window");
  add_common(scan, scan_opts, true);
  auto *solve = app.add_subcommand("solve", "find eigenvalues in the window at one cutoff");
  add_common(solve, solve_opts, true);
  auto *converge = app.add_subcommand("converge", "track the first eigenvalue over the cutoffs in L_list");
  add_common(converge, converge_opts, false);
  auto *selftest = app.add_subcommand("selftest", "run the invariant suite");
  std::string inject = "none";
  selftest->add_option("--inject", inject, "deliberate convention error (testing the suite)")
      ->check(CLI::IsMember({"none", "flip_phase", "complex_gaunt"}))
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_usage;
  }

  try {
    if (*scan)
      return cmd_scan(scan_opts);
    if (*solve)
      return cmd_solve(solve_opts);
    if (*converge)
      return cmd_converge(converge_opts);
    if (*selftest)
      return cmd_selftest(inject);
  } catch (const ConfigError &e) {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_usage;
  } catch (const GeometryError &e) {
    std::cerr << "geometry error: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::exception &e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return exit_numerical;
  }
  return exit_usage;
}
