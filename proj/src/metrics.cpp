#include "esmm/metrics.hpp"

namespace esmm {

void MeshBlock::fill_coordinate_ghosts() {
  for (int d = 0; d < lat.dim; ++d) {
    if (lat.periodic[d]) {
      std::array<double, 3> shift{0.0, 0.0, 0.0};
      shift[d] = lat.period[d];
      fill_ghosts_dir(x, lat, d, 0, GhostRule::Periodic, shift.data());
      fill_ghosts_dir(x, lat, d, 1, GhostRule::Periodic, shift.data());
    } else {
      fill_ghosts_dir(x, lat, d, 0, GhostRule::Linear);
      fill_ghosts_dir(x, lat, d, 1, GhostRule::Linear);
    }
  }
}

void MeshBlock::fill_velocity_ghosts() {
  for (int d = 0; d < lat.dim; ++d) {
    const GhostRule r = lat.periodic[d] ? GhostRule::Periodic : GhostRule::Linear;
    fill_ghosts_dir(xdot, lat, d, 0, r);
    fill_ghosts_dir(xdot, lat, d, 1, r);
  }
}

double GclReport::worst_relative() const {
  const double s = metric_scale > 0.0 ? metric_scale : 1.0;
  return std::max({scl[0], scl[1], scl[2]}) / s;
}

std::vector<double> central_diff(std::span<const double> a, int w) {
  const AlphaCoeffs al = alpha_coeffs(w);
  const int n = static_cast<int>(a.size()) - 2 * w;
  if (n < 1) throw DomainError("central difference needs a w-wide halo");
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int m = 1; m <= w; ++m) s += al(m) * (a[w + i + m] - a[w + i - m]);
    out[i] = 0.5 * s;
  }
  return out;
}

namespace {

struct Diff {
  const Field& x;
  AlphaCoeffs al;
  int w;

  // δ_dir of coordinate component c at p
  double d1(const Index3& p, int dir, int c) const {
    double s = 0.0;
    Index3 a = p, b = p;
    for (int m = 1; m <= w; ++m) {
      a[dir] = p[dir] + m;
      b[dir] = p[dir] - m;
      s += al(m) * (x.at(a)[c] - x.at(b)[c]);
    }
    return 0.5 * s;
  }

  // δ_outer[ δ_inner[x_a] · x_b ] at p
  double d2(const Index3& p, int outer, int inner, int ca, int cb) const {
    double s = 0.0;
    Index3 a = p, b = p;
    for (int m = 1; m <= w; ++m) {
      a[outer] = p[outer] + m;
      b[outer] = p[outer] - m;
      s += al(m) * (d1(a, inner, ca) * x.at(a)[cb] - d1(b, inner, ca) * x.at(b)[cb]);
    }
    return 0.5 * s;
  }
};

template <class F>
void for_direction_region(const Lattice& lat, int dir, F&& f) {
  Index3 lo{0, 0, 0}, hi = lat.n;
  lo[dir] = -kGhost;
  hi[dir] = lat.n[dir] + kGhost;
  Index3 p;
  for (p[2] = lo[2]; p[2] < hi[2]; ++p[2])
    for (p[1] = lo[1]; p[1] < hi[1]; ++p[1])
      for (p[0] = lo[0]; p[0] < hi[0]; ++p[0]) f(p);
}

}  // namespace

void scl_metrics(const MeshBlock& mesh, int w, MetricField& out) {
  const Lattice& lat = mesh.lat;
  const int d = lat.dim;
  if (w > kGhost) throw DomainError("metric stencil exceeds the ghost layer");
  if (out.m.empty() || !(out.lat == lat)) out = MetricField(lat);
  const Diff D{mesh.x, alpha_coeffs(w), w};
  for (int k = 0; k < d; ++k) {
    for_direction_region(lat, k, [&](const Index3& p) {
      double* m = out.m.at(p) + k * (d + 1);
      if (d == 2) {
        const int o = 1 - k;
        const double inv = 1.0 / lat.dxi[o];
        const double dx1 = D.d1(p, o, 0), dx2 = D.d1(p, o, 1);
        if (k == 0) {
          m[1] = dx2 * inv;
          m[2] = -dx1 * inv;
        } else {
          m[1] = -dx2 * inv;
          m[2] = dx1 * inv;
        }
      } else {
        const int k1 = (k + 1) % 3, k2 = (k + 2) % 3;
        const double inv = 1.0 / (lat.dxi[k1] * lat.dxi[k2]);
        for (int j = 0; j < 3; ++j) {
          const int ca = (j + 1) % 3, cb = (j + 2) % 3;
          m[1 + j] = (D.d2(p, k2, k1, ca, cb) - D.d2(p, k1, k2, ca, cb)) * inv;
        }
      }
    });
  }
}

void vcl_metrics(const MeshBlock& mesh, MetricField& mf) {
  const Lattice& lat = mesh.lat;
  const int d = lat.dim;
  for (int k = 0; k < d; ++k) {
    for_direction_region(lat, k, [&](const Index3& p) {
      double* m = mf.m.at(p) + k * (d + 1);
      const double* v = mesh.xdot.at(p);
      double s = 0.0;
      for (int j = 0; j < d; ++j) s -= v[j] * m[1 + j];
      m[0] = s;
    });
  }
}

Field init_jacobian(const MeshBlock& mesh, int w) {
  const Lattice& lat = mesh.lat;
  const int d = lat.dim;
  Field J(lat, 1, 0);
  const Diff D{mesh.x, alpha_coeffs(w), w};
  for_interior(lat, [&](int i, int j, int k) {
    const Index3 p{i, j, k};
    Eigen::Matrix3d A = Eigen::Matrix3d::Identity();
    for (int c = 0; c < d; ++c)
      for (int q = 0; q < d; ++q) A(c, q) = D.d1(p, q, c) / lat.dxi[q];
    const double det = d == 2 ? A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0) : A.determinant();
    if (!(det > 0.0)) throw MeshError("tangled mesh: nonpositive Jacobian " + std::to_string(det), p);
    J(i, j, k, 0) = det;
  });
  return J;
}

GclReport verify_gcl(const MeshBlock& mesh, const MetricField& mf, int w, const Field* J) {
  const Lattice& lat = mesh.lat;
  const int d = lat.dim;
  GclReport rep;
  std::array<double, 6> buf{};
  const auto flux = [&](const Index3& p, int k, int c) {
    // Ĝ at p+½ in direction k, channel c
    Index3 q = p;
    for (int s = 0; s < 2 * w; ++s) {
      q[k] = p[k] - w + 1 + s;
      buf[s] = mf.m.at(q)[k * (d + 1) + c];
    }
    return gcl_metric_flux(std::span<const double>(buf.data(), 2 * w), w);
  };
  for_interior(lat, [&](int i, int j, int k) {
    const Index3 p{i, j, k};
    for (int c = 0; c < d; ++c) {
      double r = 0.0;
      for (int q = 0; q < d; ++q) {
        Index3 pm = p;
        pm[q] -= 1;
        r += (flux(p, q, 1 + c) - flux(pm, q, 1 + c)) / lat.dxi[q];
        rep.metric_scale = std::max(rep.metric_scale, std::abs(mf.m.at(p)[q * (d + 1) + 1 + c]));
      }
      if (std::abs(r) > rep.scl[c]) {
        rep.scl[c] = std::abs(r);
        rep.scl_where[c] = p;
      }
    }
  });
  if (J) {
    const Field Jg = init_jacobian(mesh, w);
    double jmax = 0.0, err = 0.0;
    for_interior(lat, [&](int i, int j, int k) {
      jmax = std::max(jmax, std::abs((*J)(i, j, k, 0)));
      const double e = std::abs((*J)(i, j, k, 0) - Jg(i, j, k, 0));
      if (e > err) {
        err = e;
        rep.vcl_where = {i, j, k};
      }
    });
    rep.vcl = jmax > 0.0 ? err / jmax : err;
  }
  return rep;
}

}  // namespace esmm
