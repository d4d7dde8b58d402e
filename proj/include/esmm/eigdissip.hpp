#pragma once

#include "esmm/ecflux.hpp"
#include "esmm/wenomr.hpp"

namespace esmm {

struct RotationAngles {
  double theta = 0.0;
  double phi = 0.0;
};

struct InterfaceAvg {
  int nspecies = 1;
  int dim = 2;
  std::array<double, kMaxSpecies> rho{};
  double rho_total = 0.0;
  std::array<double, kMaxDim> v{};
  double T = 0.0;
  double p = 0.0;
  double R = 0.0;      // mixture gas constant
  double Gamma = 0.0;  // mixture index
  double rho_h = 0.0;  // Σ ρℓhℓ
};

struct EigSystem {
  Mat R;
  Mat Rtilde;
  Mat D;
  Vec lambda;
  double cs = 0.0;
  double H = 0.0;
  std::array<double, kMaxSpecies> h{};
  std::array<double, kMaxSpecies> d{};
  std::array<double, kMaxSpecies> Y{};
  Eigen::Matrix2d DY = Eigen::Matrix2d::Zero();
};

struct DissipationOperator {
  Mat T;
  Mat R;
  double lambda = 0.0;  // |Λ̃| = lambda·I
  RotationAngles angles;
};

RotationAngles rotation_angles(const DirectedMetric& m, int dim);
/// Expanded rotation: identity on species and energy slots.
Mat rotation_matrix(const RotationAngles& a, int nspecies, int dim);
/// d×d velocity block of the rotation.
Eigen::Matrix3d velocity_rotation(const RotationAngles& a);

InterfaceAvg interface_average(const Primitive& l, const Primitive& r, const EosSpec& eos);
InterfaceAvg interface_average(const Conserved& Ul, const Conserved& Ur, const EosSpec& eos);
InterfaceAvg rotate_average(const InterfaceAvg& avg, const RotationAngles& a);

EigSystem scaled_eigensystem(const InterfaceAvg& avg, const EosSpec& eos);
DissipationOperator dissipation_operator(const DirectedMetric& interface_metric, const InterfaceAvg& avg,
                                         const EosSpec& eos);

/// Diagonal of Y as 0/1 entries.
Vec sign_switch(const Vec& jump_reconstructed, const Vec& jump_firstorder);

/// T⁻¹R|Λ̃|Y[[W]] at interface i+½ given V at nodes i−2..i+3.
Vec es_dissipation(std::span<const Vec, 6> V, const InterfaceAvg& avg, const DirectedMetric& interface_metric,
                   const MRWeights& wt, const EosSpec& eos);

/// states/metrics cover nodes i−2..i+3.
FluxVector es_interface_flux(std::span<const Conserved, 6> states, std::span<const DirectedMetric, 6> metrics, int w,
                             const MRWeights& wt, const EosSpec& eos);

}  // namespace esmm
