#pragma once

// Bound states of a muffin-tin system: scan sigma_min(S(E)) over an energy
// window, refine each local minimum by golden section, and keep the minima
// where S is singular to tolerance.

#include <optional>
#include <string>
#include <vector>

#include "mst/potential.hpp"
#include "mst/radial.hpp"
#include "mst/secular.hpp"

namespace mst::kkr {

struct AtomSite {
  Vec3 position;
  PotentialModel potential;

  double radius() const { return potential.radius(); }
};

/// The operator is -kinetic * Laplacian + V; kinetic = 1 is the plain
/// Schrodinger form, 0.5 the Hartree-style form. Internally the system is
/// solved as -Laplacian + V / kinetic at energy E / kinetic.
struct SystemConfig {
  std::vector<AtomSite> sites;
  double kinetic = 1.0;
  int L = 3;
  double E_lo = -60.0;
  double E_hi = -1.0;
  double step = 0.05;
  double singular_tol = 1e-7;
  double refine_tol = 1e-11;
  double assumption_tol = 1e-3; // roots with |det P| below this are flagged
  int mesh_points = radial::default_mesh_points;
  int workers = 1;
};

/// Throws GeometryError for overlapping spheres and DomainError for a window
/// that is not strictly negative or a nonpositive step.
void validate(const SystemConfig &config);

/// Everything the secular equation needs at one energy.
struct Evaluation {
  double energy = 0.0;   // physical energy E
  double internal = 0.0; // E / kinetic, the argument of all radial and free waves
  std::vector<scattering::TMatrix> tmats;
  std::vector<MatrixXc> launch; // matching amplitudes A per non-spherical site (empty otherwise)
  StructureConstants g;
  SecularMatrix S;
};

/// Fixed system at a fixed cutoff; immutable and safe to evaluate concurrently.
class KkrSystem {
public:
  explicit KkrSystem(SystemConfig config, ConventionHooks hooks = {});

  const SystemConfig &config() const { return config_; }
  int size() const { return static_cast<int>(config_.sites.size()); }
  const radial::RadialMesh &mesh(int site) const { return meshes_[site]; }
  std::vector<double> radii() const;
  std::vector<Vec3> positions() const;
  double internal_energy(double E) const { return E / config_.kinetic; }
  /// Site potential divided by the kinetic prefactor.
  const PotentialModel &internal_potential(int site) const { return internal_[site]; }

  Evaluation evaluate(double E) const;
  MatrixXc assumption(const Evaluation &ev) const;
  double sigma_min(double E) const;

private:
  SystemConfig config_;
  ConventionHooks hooks_;
  std::vector<radial::RadialMesh> meshes_;
  std::vector<PotentialModel> internal_;
  harmonics::GauntTable gaunt_;
};

struct ScanPoint {
  double energy = 0.0;
  double sigma_min = 0.0;
  double abs_det = 0.0;
  double det_P_abs = 0.0;
  bool valid = true;
  std::string note; // set when the point was skipped
};

struct EigenResult {
  double energy = 0.0;
  int multiplicity = 0;
  std::vector<VectorXc> a;
  std::vector<VectorXc> b;
  double sigma_min = 0.0;
  double abs_det = 0.0;
  double det_P_abs = 0.0;
  int iterations = 0;
  bool assumption_violated = false;
};

struct RootTraceResult {
  std::vector<EigenResult> roots; // ascending in energy
  std::vector<ScanPoint> scan;
  std::vector<std::string> warnings;
};

/// Energies E_lo + i (E_hi - E_lo)/n, i = 0..n, with n = round((E_hi - E_lo)/step).
std::vector<double> scan_grid(double E_lo, double E_hi, double step);

std::vector<ScanPoint> scan(const KkrSystem &system, const std::vector<double> &energies);

/// Golden-section minimization of sigma_min on [lo, hi] down to width `tol`;
/// returns (midpoint of the final bracket, iterations).
std::pair<double, int> refine_minimum(const KkrSystem &system, double lo, double hi, double tol);

RootTraceResult root_trace(const KkrSystem &system);
RootTraceResult root_trace(const SystemConfig &config);

/// Diagnostics and null basis at an accepted energy.
EigenResult characterize(const KkrSystem &system, double E, int iterations);

} // namespace mst::kkr
