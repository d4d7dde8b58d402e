#pragma once

#include "esmm/common.hpp"

#include <vector>

namespace esmm {

/// Computational lattice on ξ ∈ [0,1]^d. Periodic directions hold N nodes
/// for N cells, bounded ones N+1.
struct Lattice {
  int dim = 2;
  Index3 n{1, 1, 1};
  std::array<double, 3> dxi{1.0, 1.0, 1.0};
  std::array<bool, 3> periodic{false, false, false};
  std::array<double, 3> period{0.0, 0.0, 0.0};  // physical shift across a periodic seam

  static Lattice from_cells(int dim, const Index3& cells, const std::array<bool, 3>& periodic,
                            const std::array<double, 3>& period);
  long nodes() const { return static_cast<long>(n[0]) * n[1] * n[2]; }
  double cell_volume() const { return dxi[0] * dxi[1] * (dim == 3 ? dxi[2] : 1.0); }
  bool operator==(const Lattice&) const = default;
};

/// Node-centred array of ncomp doubles with a ghost halo in the active directions.
class Field {
 public:
  Field() = default;
  Field(const Lattice& lat, int ncomp, int ghost);

  int ncomp() const { return nc_; }
  int ghost() const { return ghost_; }
  const Index3& n() const { return n_; }
  int gh(int dir) const { return g_[dir]; }
  long stride(int dir) const { return stride_[dir]; }

  long offset(int i, int j, int k) const {
    return ((static_cast<long>(k + g_[2]) * ext_[1] + (j + g_[1])) * ext_[0] + (i + g_[0])) * nc_;
  }
  long offset(const Index3& p) const { return offset(p[0], p[1], p[2]); }
  double* at(int i, int j, int k) { return data_.data() + offset(i, j, k); }
  const double* at(int i, int j, int k) const { return data_.data() + offset(i, j, k); }
  double* at(const Index3& p) { return at(p[0], p[1], p[2]); }
  const double* at(const Index3& p) const { return at(p[0], p[1], p[2]); }
  double& operator()(int i, int j, int k, int c) { return data_[offset(i, j, k) + c]; }
  double operator()(int i, int j, int k, int c) const { return data_[offset(i, j, k) + c]; }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }
  void fill(double v) { std::fill(data_.begin(), data_.end(), v); }
  bool empty() const { return data_.empty(); }

 private:
  Index3 n_{0, 0, 0};
  Index3 g_{0, 0, 0};
  Index3 ext_{0, 0, 0};
  std::array<long, 3> stride_{0, 0, 0};
  int nc_ = 0;
  int ghost_ = 0;
  std::vector<double> data_;
};

/// Calls f(i,j,k) over interior nodes, i fastest.
template <class F>
void for_interior(const Lattice& lat, F&& f) {
  for (int k = 0; k < lat.n[2]; ++k)
    for (int j = 0; j < lat.n[1]; ++j)
      for (int i = 0; i < lat.n[0]; ++i) f(i, j, k);
}

/// Calls f(i,j,k) over interior plus `halo` layers in active directions.
template <class F>
void for_extended(const Lattice& lat, int halo, F&& f) {
  const int h1 = lat.dim >= 2 ? halo : 0, h2 = lat.dim >= 3 ? halo : 0;
  for (int k = -h2; k < lat.n[2] + h2; ++k)
    for (int j = -h1; j < lat.n[1] + h1; ++j)
      for (int i = -halo; i < lat.n[0] + halo; ++i) f(i, j, k);
}

/// Ghost fill along one direction, sweeping the full ghost range of lower
/// directions so edges and corners end up populated.
enum class GhostRule { Periodic, Copy, Linear };
void fill_ghosts_dir(Field& f, const Lattice& lat, int dir, int side, GhostRule rule, const double* shift = nullptr);

}  // namespace esmm
