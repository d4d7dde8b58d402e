#pragma once

#include "esmm/thermo.hpp"

#include <span>

namespace esmm {

/// Below this value of f² the log mean switches to its even series.
inline constexpr double kLogMeanSeriesThreshold = 1e-4;

/// Metric terms of one computational direction at one node.
struct DirectedMetric {
  double mt = 0.0;
  std::array<double, kMaxDim> m{};

  double length(int dim) const {
    double s = 0.0;
    for (int j = 0; j < dim; ++j) s += m[j] * m[j];
    return std::sqrt(s);
  }
};

struct AlphaCoeffs {
  int w = 1;
  std::array<double, 3> a{1.0, 0.0, 0.0};
  /// m runs 1..w
  double operator()(int m) const { return a[m - 1]; }
};

struct EcStateFluxes {
  Vec U;
  std::array<Vec, kMaxDim> F;
};

double log_mean(double a, double b);
AlphaCoeffs alpha_coeffs(int w);

EcStateFluxes ec_state_and_fluxes(const Conserved& Ul, const Conserved& Ur, const EosSpec& eos);
FluxVector ec_flux_rotated(const Conserved& Ul, const Conserved& Ur, double phi, double theta, const EosSpec& eos);
FluxVector ec_flux_curvilinear(const Conserved& Ul, const Conserved& Ur, const DirectedMetric& ml,
                               const DirectedMetric& mr, const EosSpec& eos);
/// states/metrics cover nodes i−w+1..i+w around interface i+½.
FluxVector highorder_ec_flux(std::span<const Conserved> states, std::span<const DirectedMetric> metrics, int w,
                             const EosSpec& eos);
double gcl_metric_flux(std::span<const double> samples, int w);
DirectedMetric gcl_metric_flux(std::span<const DirectedMetric> samples, int w, int dim);
double numerical_entropy_flux(const Conserved& Ul, const Conserved& Ur, const DirectedMetric& ml,
                              const DirectedMetric& mr, const EosSpec& eos);

// Hot-path kernel. The two-point flux is linear in the direction vector, so
// m̄t·Ũ + Σ m̄j·F̃j collapses to one evaluation with n = m̄.

struct FluxNode {
  std::array<double, kMaxSpecies> rho{};
  std::array<double, kMaxDim> v{};
  double beta = 0.0;  // 1/T
  double v2 = 0.0;
};

struct PairMeans {
  std::array<double, kMaxSpecies> lnrho{};
  std::array<double, kMaxSpecies> rho{};
  std::array<double, kMaxDim> v{};
  double v2 = 0.0;  // mean of |v|²
  double beta = 0.0;
  double lnbeta = 0.0;
};

FluxNode flux_node(const Primitive& w);
PairMeans pair_means(const FluxNode& a, const FluxNode& b, int ns, int dim);
/// out ← mt·Ũ + F̃(n), n not necessarily unit.
void ec_flux_kernel(const PairMeans& pm, double mt, const double* n, const EosSpec& eos, int dim, double* out);

}  // namespace esmm
