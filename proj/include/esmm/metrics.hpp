#pragma once

#include "esmm/ecflux.hpp"
#include "esmm/grid.hpp"

#include <optional>
#include <span>

namespace esmm {

inline constexpr int kGhost = 3;

struct MeshBlock {
  Lattice lat;
  Field x;     // dim components, kGhost halo
  Field xdot;  // node velocities, same layout

  MeshBlock() = default;
  explicit MeshBlock(const Lattice& l) : lat(l), x(l, l.dim, kGhost), xdot(l, l.dim, kGhost) {}
  /// Periodic wrap with shift or linear extrapolation into the halo.
  void fill_coordinate_ghosts();
  void fill_velocity_ghosts();
};

/// Per node and direction k: (mt, m_1..m_d) at component k*(d+1).
struct MetricField {
  Lattice lat;
  Field m;
  MetricField() = default;
  explicit MetricField(const Lattice& l) : lat(l), m(l, l.dim * (l.dim + 1), kGhost) {}

  DirectedMetric get(int i, int j, int k, int dir) const {
    const double* p = m.at(i, j, k) + dir * (lat.dim + 1);
    DirectedMetric d;
    d.mt = p[0];
    for (int q = 0; q < lat.dim; ++q) d.m[q] = p[1 + q];
    return d;
  }
};

struct GclReport {
  std::array<double, 3> scl{0.0, 0.0, 0.0};  // max |Σ_k D_k[Ĝ]/Δξ_k| per component j
  std::array<Index3, 3> scl_where{};
  double metric_scale = 0.0;  // max |metric|
  double vcl = 0.0;           // max |J − J_geom| / max J, when a J field is given
  Index3 vcl_where{0, 0, 0};
  double worst_relative() const;
};

/// δ[a] at each sample with a w-halo on both sides (not divided by Δξ).
std::vector<double> central_diff(std::span<const double> line, int w);

void scl_metrics(const MeshBlock& mesh, int w, MetricField& out);
void vcl_metrics(const MeshBlock& mesh, MetricField& inout);
Field init_jacobian(const MeshBlock& mesh, int w);
GclReport verify_gcl(const MeshBlock& mesh, const MetricField& metrics, int w, const Field* J = nullptr);

}  // namespace esmm
