#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace mst {

using cplx = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using MatrixXc = Eigen::MatrixXcd;
using VectorXc = Eigen::VectorXcd;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr cplx imag_unit{0.0, 1.0};

/// i^n for any integer n, exact.
inline cplx ipow(int n) {
  switch (((n % 4) + 4) % 4) {
  case 0: return {1.0, 0.0};
  case 1: return {0.0, 1.0};
  case 2: return {-1.0, 0.0};
  default: return {0.0, -1.0};
  }
}

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// The radial integrator could not complete a sweep.
class IntegrationError : public std::runtime_error {
public:
  IntegrationError(const std::string &what, double radius)
      : std::runtime_error(what + " (r = " + std::to_string(radius) + ")"), radius_(radius) {}
  double radius() const { return radius_; }

private:
  double radius_;
};

/// Logarithmic-derivative matching breaks down: the interior solution
/// cannot be matched to j + t h (chi(R) = 0 or a singular matching system).
class AsymptoticProblem : public std::runtime_error {
public:
  AsymptoticProblem(int site, int ell, double energy, const std::string &detail = {})
      : std::runtime_error("asymptotic problem at site " + std::to_string(site) + ", l = " +
                           std::to_string(ell) + ", z = " + std::to_string(energy) +
                           (detail.empty() ? "" : ": " + detail)),
        site_(site), ell_(ell), energy_(energy) {}
  int site() const { return site_; }
  int ell() const { return ell_; }
  double energy() const { return energy_; }

private:
  int site_;
  int ell_;
  double energy_;
};

/// Null-space extraction requested for a matrix that is not singular to tolerance.
class NotSingular : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Atomic spheres overlap or otherwise violate the muffin-tin geometry.
class GeometryError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Configuration does not satisfy the schema.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace mst
