#include "esmm/grid.hpp"

namespace esmm {

Lattice Lattice::from_cells(int dim, const Index3& cells, const std::array<bool, 3>& periodic,
                            const std::array<double, 3>& period) {
  if (dim != 2 && dim != 3) throw ConfigError("dimension must be 2 or 3");
  Lattice lat;
  lat.dim = dim;
  for (int d = 0; d < 3; ++d) {
    if (d < dim) {
      if (cells[d] < 1) throw ConfigError("resolution must be positive");
      lat.periodic[d] = periodic[d];
      lat.period[d] = period[d];
      lat.n[d] = periodic[d] ? cells[d] : cells[d] + 1;
      lat.dxi[d] = 1.0 / cells[d];
    } else {
      lat.n[d] = 1;
      lat.dxi[d] = 1.0;
    }
  }
  return lat;
}

Field::Field(const Lattice& lat, int ncomp, int ghost) : n_(lat.n), nc_(ncomp), ghost_(ghost) {
  for (int d = 0; d < 3; ++d) {
    g_[d] = d < lat.dim ? ghost : 0;
    ext_[d] = n_[d] + 2 * g_[d];
  }
  stride_[0] = nc_;
  stride_[1] = static_cast<long>(ext_[0]) * nc_;
  stride_[2] = static_cast<long>(ext_[0]) * ext_[1] * nc_;
  data_.assign(static_cast<size_t>(ext_[0]) * ext_[1] * ext_[2] * nc_, 0.0);
}

void fill_ghosts_dir(Field& f, const Lattice& lat, int dir, int side, GhostRule rule, const double* shift) {
  const int g = f.gh(dir);
  if (g == 0) return;
  const int n = lat.n[dir];
  const int nc = f.ncomp();
  // lower directions sweep their ghosts, higher ones stay interior
  Index3 lo{0, 0, 0}, hi{lat.n[0], lat.n[1], lat.n[2]};
  for (int d = 0; d < dir; ++d) {
    lo[d] = -f.gh(d);
    hi[d] = lat.n[d] + f.gh(d);
  }
  lo[dir] = hi[dir] = 0;
  hi[dir] = 1;
  Index3 p;
  for (p[2] = lo[2]; p[2] < hi[2]; ++p[2])
    for (p[1] = lo[1]; p[1] < hi[1]; ++p[1])
      for (p[0] = lo[0]; p[0] < hi[0]; ++p[0]) {
        for (int s = 1; s <= g; ++s) {
          Index3 dst = p, a = p, b = p;
          dst[dir] = side == 0 ? -s : n - 1 + s;
          double* out = f.at(dst);
          switch (rule) {
            case GhostRule::Periodic: {
              a[dir] = side == 0 ? n - s : s - 1;
              const double* src = f.at(a);
              const double sg = side == 0 ? -1.0 : 1.0;
              for (int c = 0; c < nc; ++c) out[c] = src[c] + (shift ? sg * shift[c] : 0.0);
              break;
            }
            case GhostRule::Copy: {
              a[dir] = side == 0 ? 0 : n - 1;
              const double* src = f.at(a);
              for (int c = 0; c < nc; ++c) out[c] = src[c];
              break;
            }
            case GhostRule::Linear: {
              a[dir] = side == 0 ? 0 : n - 1;
              b[dir] = side == 0 ? 1 : n - 2;
              const double* x0 = f.at(a);
              const double* x1 = f.at(b);
              for (int c = 0; c < nc; ++c) out[c] = x0[c] + s * (x0[c] - x1[c]);
              break;
            }
          }
        }
      }
}

}  // namespace esmm
