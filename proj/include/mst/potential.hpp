#pragma once

// Muffin-tin site potentials. Every model vanishes identically for r >= R.

#include <filesystem>
#include <map>
#include <variant>
#include <vector>

#include "mst/harmonics.hpp"
#include "mst/types.hpp"

namespace mst {

using harmonics::AngularIndex;

/// v(r) = -Z/r + Z/R inside the sphere.
struct CappedCoulomb {
  double strength;
  double radius;
};

/// V(r, Omega) = sum_terms c r^l (e^{-(r/s)^2} - e^{-(R/s)^2}) Y_lm(Omega).
struct GaussianMultipole {
  struct Term {
    AngularIndex index;
    double amplitude;
    double width;
  };
  std::vector<Term> terms;
  double radius;
};

/// Natural cubic spline through (r, value) samples.
class CubicSpline {
public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> x, std::vector<double> y);
  /// Clamped to the end values outside the sample range.
  double operator()(double x) const;
  const std::vector<double> &x() const { return x_; }
  const std::vector<double> &y() const { return y_; }

private:
  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> second_;
};

/// Multipole components V_lm(r) sampled on their own meshes.
struct TabulatedRadial {
  std::map<int, CubicSpline> channels; // keyed by packed (l, m)
  double radius;
};

/// Read (r, value) rows from a CSV file; a non-numeric first row is a header.
CubicSpline load_channel_csv(const std::filesystem::path &path);

class PotentialModel {
public:
  using Variant = std::variant<CappedCoulomb, GaussianMultipole, TabulatedRadial>;

  PotentialModel(Variant model); // NOLINT(google-explicit-constructor)

  const Variant &model() const { return model_; }
  double radius() const;
  bool is_spherical() const;
  /// Largest l with a nonzero multipole component.
  int max_degree() const;
  /// Packed indices of the nonzero multipole components, ascending.
  std::vector<int> components() const;
  /// Coulomb strength for the near-origin series start, 0 otherwise.
  double coulomb_strength() const;

  /// Coefficient V_lm(r) in V(r, Omega) = sum_lm V_lm(r) Y_lm(Omega).
  double multipole(AngularIndex index, double r) const;
  /// Angular average of V, i.e. V_00(r) Y_00; the full potential when spherical.
  double spherical(double r) const;

  /// The same model with every channel multiplied by `factor`.
  PotentialModel scaled(double factor) const;
  double factor() const { return factor_; }

private:
  Variant model_;
  double factor_ = 1.0;
};

/// The model's own radial channel function: v(r) for a capped Coulomb well
/// (index (0,0) only), v_lm(r) for multipole models.
double potential_channel(const PotentialModel &model, AngularIndex index, double r);

} // namespace mst
