#pragma once

#include "esmm/metrics.hpp"

#include <string>
#include <vector>

namespace esmm {

enum class DerivativeKind { Gradient, Laplacian };

struct MonitorTerm {
  std::string quantity = "rho";  // rho, rho1, rho2, p, v1, schlieren
  double alpha = 0.0;
  DerivativeKind kind = DerivativeKind::Gradient;
};

struct MonitorSpec {
  std::vector<MonitorTerm> terms;
  bool squared = true;  // false: the linear-ratio variant used for the vortex
  int filter_passes = 5;

  void validate() const;
};

struct MoveParams {
  int iterations = 10;
};

/// σ fields need one filled ghost layer; one field per term.
Field monitor(const std::vector<const Field*>& sigma, const MonitorSpec& spec, const Lattice& lat);
void fill_scalar_ghosts(Field& f, const Lattice& lat);
void smooth_monitor(Field& theta, int passes, const Lattice& lat);
Field jacobi_redistribute(const MeshBlock& mesh, const Field& theta, const MoveParams& params);

struct LimitedMove {
  double dtau = 1.0;
  Field displacement;  // Δτ·δτx on interior nodes
};
LimitedMove limit_displacement(const MeshBlock& old_mesh, const Field& proposed);
Field mesh_velocity(const Field& old_x, const Field& new_x, double dt);

/// Coordinates strictly increasing along every mesh line; throws MeshError.
void check_mesh_order(const MeshBlock& mesh);

}  // namespace esmm
