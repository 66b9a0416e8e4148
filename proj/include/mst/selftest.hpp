#pragma once

// Invariant suite run by `mstkkr selftest`.

#include <iosfwd>
#include <string>
#include <vector>

#include "mst/structure.hpp"

namespace mst::harness {

struct SelftestCheck {
  std::string name;
  double value = 0.0;     // measured residual
  double threshold = 0.0; // pass when value <= threshold (and any extra condition holds)
  bool pass = false;
  std::string detail;
  double runtime = 0.0;
};

struct SelftestOptions {
  /// Convention errors injected into the structure constants.
  kkr::ConventionHooks hooks;
};

std::vector<SelftestCheck> run_selftest(const SelftestOptions &options = {});
void print_selftest(const std::vector<SelftestCheck> &checks, std::ostream &out);

/// Wigner 3j symbol from the Racah formula.
double wigner_3j(int j1, int j2, int j3, int m1, int m2, int m3);
/// Real-harmonic triple product built from 3j symbols (complex harmonics with
/// the Condon-Shortley phase) through the unitary change of basis.
double gaunt_racah(harmonics::AngularIndex a, harmonics::AngularIndex b, harmonics::AngularIndex c);

} // namespace mst::harness
