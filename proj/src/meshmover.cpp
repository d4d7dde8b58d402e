#include "esmm/meshmover.hpp"

namespace esmm {

void MonitorSpec::validate() const {
  for (const auto& t : terms)
    if (!(t.alpha >= 0.0)) throw ConfigError("monitor coefficients must be nonnegative");
  if (filter_passes < 0) throw ConfigError("filter pass count must be nonnegative");
}

void fill_scalar_ghosts(Field& f, const Lattice& lat) {
  for (int d = 0; d < lat.dim; ++d) {
    const GhostRule r = lat.periodic[d] ? GhostRule::Periodic : GhostRule::Copy;
    fill_ghosts_dir(f, lat, d, 0, r);
    fill_ghosts_dir(f, lat, d, 1, r);
  }
}

Field monitor(const std::vector<const Field*>& sigma, const MonitorSpec& spec, const Lattice& lat) {
  if (sigma.size() != spec.terms.size()) throw ConfigError("one monitor field per term is required");
  Field theta(lat, 1, 1);
  Field acc(lat, 1, 0);
  Field der(lat, 1, 0);
  for (size_t t = 0; t < sigma.size(); ++t) {
    const Field& s = *sigma[t];
    double mx = 0.0;
    for_interior(lat, [&](int i, int j, int k) {
      double v = 0.0;
      const double c = s(i, j, k, 0);
      for (int d = 0; d < lat.dim; ++d) {
        Index3 a{i, j, k}, b{i, j, k};
        a[d] += 1;
        b[d] -= 1;
        const double sp = s.at(a)[0], sm = s.at(b)[0];
        if (spec.terms[t].kind == DerivativeKind::Gradient) {
          const double g = (sp - sm) / (2.0 * lat.dxi[d]);
          v += g * g;
        } else {
          v += (sp - 2.0 * c + sm) / (lat.dxi[d] * lat.dxi[d]);
        }
      }
      v = spec.terms[t].kind == DerivativeKind::Gradient ? std::sqrt(v) : std::abs(v);
      der(i, j, k, 0) = v;
      mx = std::max(mx, v);
    });
    const double a = spec.terms[t].alpha;
    for_interior(lat, [&](int i, int j, int k) {
      const double r = mx > 0.0 ? der(i, j, k, 0) / mx : 0.0;
      acc(i, j, k, 0) += spec.squared ? a * r * r : a * r;
    });
  }
  for_interior(lat, [&](int i, int j, int k) { theta(i, j, k, 0) = std::sqrt(1.0 + acc(i, j, k, 0)); });
  fill_scalar_ghosts(theta, lat);
  return theta;
}

void smooth_monitor(Field& theta, int passes, const Lattice& lat) {
  Field tmp(lat, 1, theta.ghost());
  const int d = lat.dim;
  for (int p = 0; p < passes; ++p) {
    fill_scalar_ghosts(theta, lat);
    for_interior(lat, [&](int i, int j, int k) {
      double s = 0.0;
      const int kk = d == 3 ? 1 : 0;
      for (int c = -kk; c <= kk; ++c)
        for (int b = -1; b <= 1; ++b)
          for (int a = -1; a <= 1; ++a) {
            const int e = std::abs(a) + std::abs(b) + std::abs(c) + d;
            s += std::ldexp(theta(i + a, j + b, k + c, 0), -e);
          }
      tmp(i, j, k, 0) = s;
    });
    for_interior(lat, [&](int i, int j, int k) { theta(i, j, k, 0) = tmp(i, j, k, 0); });
  }
  fill_scalar_ghosts(theta, lat);
}

namespace {

// bit d set when node sits on a bounded face normal to d
int boundary_mask(const Lattice& lat, const Index3& p) {
  int mask = 0;
  for (int d = 0; d < lat.dim; ++d)
    if (!lat.periodic[d] && (p[d] == 0 || p[d] == lat.n[d] - 1)) mask |= 1 << d;
  return mask;
}

int popcount(int m) { return __builtin_popcount(static_cast<unsigned>(m)); }

}  // namespace

Field jacobi_redistribute(const MeshBlock& mesh, const Field& theta_in, const MoveParams& params) {
  const Lattice& lat = mesh.lat;
  const int dim = lat.dim;
  MeshBlock cur = mesh;
  MeshBlock nxt = mesh;
  Field theta = theta_in;
  fill_scalar_ghosts(theta, lat);
  for (int it = 0; it < params.iterations; ++it) {
    cur.fill_coordinate_ghosts();
    for_interior(lat, [&](int i, int j, int k) {
      const Index3 p{i, j, k};
      const int mask = boundary_mask(lat, p);
      double* out = nxt.x.at(p);
      const double* x0 = cur.x.at(p);
      if (popcount(mask) >= 2) {
        for (int c = 0; c < dim; ++c) out[c] = x0[c];
        return;
      }
      std::array<double, 3> num{0.0, 0.0, 0.0};
      double den = 0.0;
      const double th = theta.at(p)[0];
      for (int d = 0; d < dim; ++d) {
        if (mask & (1 << d)) continue;
        Index3 a = p, b = p;
        a[d] += 1;
        b[d] -= 1;
        const double inv = 1.0 / (lat.dxi[d] * lat.dxi[d]);
        const double tp = 0.5 * (th + theta.at(a)[0]) * inv;
        const double tm = 0.5 * (th + theta.at(b)[0]) * inv;
        const double* xp = cur.x.at(a);
        const double* xm = cur.x.at(b);
        for (int c = 0; c < dim; ++c) num[c] += tp * xp[c] + tm * xm[c];
        den += tp + tm;
      }
      for (int c = 0; c < dim; ++c) out[c] = (mask & (1 << c)) ? x0[c] : num[c] / den;
    });
    std::swap(cur.x, nxt.x);
  }
  cur.fill_coordinate_ghosts();
  return cur.x;
}

LimitedMove limit_displacement(const MeshBlock& old_mesh, const Field& proposed) {
  const Lattice& lat = old_mesh.lat;
  const int dim = lat.dim;
  MeshBlock m = old_mesh;
  m.fill_coordinate_ghosts();
  LimitedMove r;
  r.displacement = Field(lat, dim, kGhost);
  double dtau = 1.0;
  for_interior(lat, [&](int i, int j, int k) {
    const Index3 p{i, j, k};
    const double* xo = m.x.at(p);
    const double* xn = proposed.at(p);
    for (int d = 0; d < dim; ++d) {
      const double dx = xn[d] - xo[d];
      Index3 q = p;
      if (dx > 0.0) {
        q[d] += 1;
        dtau = std::min(dtau, (m.x.at(q)[d] - xo[d]) / (2.0 * dx));
      } else if (dx < 0.0) {
        q[d] -= 1;
        dtau = std::min(dtau, -(xo[d] - m.x.at(q)[d]) / (2.0 * dx));
      }
    }
  });
  r.dtau = dtau;
  for_interior(lat, [&](int i, int j, int k) {
    const double* xo = m.x.at(i, j, k);
    const double* xn = proposed.at(i, j, k);
    double* out = r.displacement.at(i, j, k);
    for (int d = 0; d < dim; ++d) out[d] = dtau * (xn[d] - xo[d]);
  });
  return r;
}

Field mesh_velocity(const Field& old_x, const Field& new_x, double dt) {
  if (!(dt > 0.0)) throw DomainError("mesh velocity needs a positive time step");
  Field v = old_x;
  auto& out = v.data();
  const auto& a = old_x.data();
  const auto& b = new_x.data();
  for (size_t q = 0; q < out.size(); ++q) out[q] = (b[q] - a[q]) / dt;
  return v;
}

void check_mesh_order(const MeshBlock& mesh) {
  const Lattice& lat = mesh.lat;
  for_interior(lat, [&](int i, int j, int k) {
    const Index3 p{i, j, k};
    for (int d = 0; d < lat.dim; ++d) {
      Index3 q = p;
      q[d] += 1;
      if (q[d] >= lat.n[d] && !lat.periodic[d]) continue;
      if (!(mesh.x.at(q)[d] > mesh.x.at(p)[d]))
        throw MeshError("mesh line order violated in direction " + std::to_string(d + 1), p);
    }
  });
}

}  // namespace esmm
