#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace esmm {

struct CheckResult {
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  bool pass = false;
};

/// max |U − U⁰| after `steps` steps of a constant state on the deforming periodic mesh
double freestream_deviation(int dim, int w, int n, int steps, std::uint64_t seed);
/// worst relative SCL residual on the deforming mesh at a random time
double scl_residual(int dim, int w, int n, std::uint64_t seed);
/// |Σ V·d(JU)/dt + (η − V·U)·dJ/dt| relative to the sum of magnitudes, EC mode,
/// smooth periodic data on the moving mesh, worst over `steps` steps
double ec_entropy_identity(int dim, int w, int n, int steps, std::uint64_t seed);
/// relative drift of Σ JU ΠΔξ over `steps` ES steps on a periodic moving mesh
double conservation_drift(int n, int steps, std::uint64_t seed);

std::vector<CheckResult> property_suite(bool quick);

}  // namespace esmm
