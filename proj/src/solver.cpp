#include "esmm/solver.hpp"

#include "esmm/parallel.hpp"

#include <algorithm>
#include <limits>

namespace esmm {

void SolverConfig::validate(const Index3& cells) const {
  if (dim != 2 && dim != 3) throw ConfigError("dim must be 2 or 3");
  if (nspecies < 1 || nspecies > 2) throw ConfigError("nspecies must be 1 or 2");
  if (w < 1 || w > 3) throw ConfigError("w must be 1, 2 or 3");
  if (!(cfl > 0.0 && cfl <= 1.0)) throw ConfigError("cfl must lie in (0, 1]");
  if (!(t_end >= 0.0)) throw ConfigError("t_end must be nonnegative");
  weights.validate();
  monitor.validate();
  if (move.iterations < 1) throw ConfigError("jacobi iterations must be at least 1");
  static const char* face_names[3][2] = {{"x1_lo", "x1_hi"}, {"x2_lo", "x2_hi"}, {"x3_lo", "x3_hi"}};
  for (int d = 0; d < dim; ++d) {
    const bool p0 = bc[d][0].type == BcType::Periodic, p1 = bc[d][1].type == BcType::Periodic;
    if (p0 != p1) throw ConfigError(std::string("boundaries.") + face_names[d][0] + ": periodic faces must be paired");
    for (int s = 0; s < 2; ++s)
      if (bc[d][s].type == BcType::Inflow && !bc[d][s].inflow)
        throw ConfigError(std::string("boundaries.") + face_names[d][s] + ": inflow face needs a state");
    // periodic seams only need room for the ghost wrap; bounded lines need the full stencil
    const int need = p0 ? kGhost : 2 * w + 2;
    if (cells[d] < need)
      throw ConfigError("resolution in direction " + std::to_string(d + 1) + " must be at least " + std::to_string(need));
  }
}

namespace {

struct NodeData {
  FluxNode f;
  Primitive w;
  std::array<double, kMaxVars> V{};
  double phi = 0.0;
};

Vec as_vec(const double* p, int n) {
  Vec v(n);
  for (int q = 0; q < n; ++q) v[q] = p[q];
  return v;
}

}  // namespace

Solver::Solver(const CaseSpec& cs, const SolverConfig& cfg) : case_(cs), cfg_(cfg) {
  cfg_.dim = cs.dim;
  cfg_.nspecies = cs.eos.nspecies();
  cfg_.validate(cs.cells);
  if (!case_.initial) throw ConfigError("case has no initial condition");
  if (cfg_.mesh == MeshMode::Prescribed && !case_.motion) throw ConfigError("prescribed mesh mode needs a motion law");
  std::array<bool, 3> periodic{};
  std::array<double, 3> period{};
  for (int d = 0; d < cs.dim; ++d) {
    periodic[d] = cfg_.bc[d][0].type == BcType::Periodic;
    period[d] = cs.hi[d] - cs.lo[d];
  }
  lat_ = Lattice::from_cells(cs.dim, cs.cells, periodic, period);
  nv_ = nvars(cfg_.nspecies, cs.dim);
  mesh_ = MeshBlock(lat_);
  for_interior(lat_, [&](int i, int j, int k) {
    const Point3 xi{i * lat_.dxi[0], j * lat_.dxi[1], cs.dim == 3 ? k * lat_.dxi[2] : 0.0};
    double* x = mesh_.x.at(i, j, k);
    if (cfg_.mesh == MeshMode::Prescribed) {
      const Point3 p = case_.motion(xi, 0.0);
      for (int d = 0; d < cs.dim; ++d) x[d] = p[d];
    } else {
      for (int d = 0; d < cs.dim; ++d) x[d] = cs.lo[d] + (cs.hi[d] - cs.lo[d]) * xi[d];
    }
  });
  mesh_.fill_coordinate_ghosts();
  check_mesh_order(mesh_);
  metrics_ = MetricField(lat_);
  scl_metrics(mesh_, cfg_.w, metrics_);
  J_ = init_jacobian(mesh_, cfg_.w);
  JU_ = Field(lat_, nv_, 0);
  for_interior(lat_, [&](int i, int j, int k) {
    const double* x = mesh_.x.at(i, j, k);
    const Point3 p{x[0], x[1], cs.dim == 3 ? x[2] : 0.0};
    Primitive w = case_.initial(p);
    w.dim = cs.dim;
    const Conserved U = prim_to_cons(w, case_.eos);
    double* o = JU_.at(i, j, k);
    const double Jv = J_(i, j, k, 0);
    for (int q = 0; q < nv_; ++q) o[q] = Jv * U[q];
  });
  theta_ = Field(lat_, 1, 1);
  theta_.fill(1.0);
}

void Solver::set_velocity(const Field& xdot) {
  mesh_.xdot = xdot;
  mesh_.fill_velocity_ghosts();
}

void Solver::metric_refresh() {
  scl_metrics(mesh_, cfg_.w, metrics_);
  for (int k = 0; k < lat_.dim; ++k) {
    // zero the time metrics; the mesh is at rest between steps
    for_extended(lat_, kGhost, [&](int i, int j, int l) { metrics_.m(i, j, l, k * (lat_.dim + 1)) = 0.0; });
  }
}

Primitive Solver::primitive_at(int i, int j, int k) const {
  const double* ju = JU_.at(i, j, k);
  const double Jv = J_(i, j, k, 0);
  Conserved U(nv_);
  for (int q = 0; q < nv_; ++q) U[q] = ju[q] / Jv;
  return cons_to_prim(U, case_.eos, cfg_.floors);
}

void Solver::apply_bc(Field& U, const MetricField* mf) const {
  const int nc = U.ncomp();
  const int ns = cfg_.nspecies;
  const int dim = lat_.dim;
  for (int d = 0; d < dim; ++d) {
    for (int side = 0; side < 2; ++side) {
      const FaceBc& fb = cfg_.bc[d][side];
      if (fb.type == BcType::Periodic) {
        fill_ghosts_dir(U, lat_, d, side, GhostRule::Periodic);
        continue;
      }
      if (fb.type == BcType::Outflow) {
        fill_ghosts_dir(U, lat_, d, side, GhostRule::Copy);
        continue;
      }
      Conserved inflow;
      if (fb.type == BcType::Inflow) {
        Primitive w = *fb.inflow;
        w.dim = dim;
        inflow = prim_to_cons(w, case_.eos);
      }
      const int g = U.gh(d);
      const int n = lat_.n[d];
      Index3 lo{0, 0, 0}, hi = lat_.n;
      for (int q = 0; q < d; ++q) {
        lo[q] = -U.gh(q);
        hi[q] = lat_.n[q] + U.gh(q);
      }
      lo[d] = 0;
      hi[d] = 1;
      Index3 p;
      for (p[2] = lo[2]; p[2] < hi[2]; ++p[2])
        for (p[1] = lo[1]; p[1] < hi[1]; ++p[1])
          for (p[0] = lo[0]; p[0] < hi[0]; ++p[0]) {
            Index3 wall = p;
            wall[d] = side == 0 ? 0 : n - 1;
            std::array<double, 3> nrm{0.0, 0.0, 0.0};
            nrm[d] = 1.0;
            if (fb.type == BcType::Reflecting && mf) {
              bool inside = true;
              for (int q = 0; q < dim; ++q)
                if (q != d && (wall[q] < 0 || wall[q] >= lat_.n[q])) inside = false;
              if (inside) {
                const DirectedMetric m = mf->get(wall[0], wall[1], wall[2], d);
                const double L = m.length(dim);
                if (L > 0.0)
                  for (int q = 0; q < dim; ++q) nrm[q] = m.m[q] / L;
              }
            }
            for (int s = 1; s <= g; ++s) {
              Index3 dst = p, src = p;
              dst[d] = side == 0 ? -s : n - 1 + s;
              src[d] = side == 0 ? s : n - 1 - s;
              double* out = U.at(dst);
              if (fb.type == BcType::Inflow) {
                for (int c = 0; c < nc; ++c) out[c] = inflow[c];
                continue;
              }
              const double* in = U.at(src);
              for (int c = 0; c < nc; ++c) out[c] = in[c];
              double mn = 0.0;
              for (int q = 0; q < dim; ++q) mn += in[ns + q] * nrm[q];
              for (int q = 0; q < dim; ++q) out[ns + q] = in[ns + q] - 2.0 * mn * nrm[q];
            }
          }
    }
  }
}

Field Solver::state_with_ghosts(const Field& JU, const Field& J, const MetricField* mf, int stage) const {
  Field U(lat_, nv_, kGhost);
  for_interior(lat_, [&](int i, int j, int k) {
    const double* ju = JU.at(i, j, k);
    const double Jv = J(i, j, k, 0);
    double* u = U.at(i, j, k);
    if (!(Jv > 0.0))
      throw MeshError("nonpositive Jacobian " + std::to_string(Jv) + " at stage " + std::to_string(stage),
                      Index3{i, j, k});
    for (int q = 0; q < nv_; ++q) u[q] = ju[q] / Jv;
  });
  apply_bc(U, mf);
  return U;
}

Rates Solver::rhs(const Field& JU, const Field& J, const MetricField& mf, int stage) const {
  const Field U = state_with_ghosts(JU, J, &mf, stage);
  try {
    return rhs_from_state(U, mf);
  } catch (const AdmissibilityError& e) {
    throw e.with_context(e.node(), stage, t_);
  }
}

Rates Solver::rhs_from_state(const Field& U, const MetricField& mf) const {
  const int dim = lat_.dim;
  const int ns = cfg_.nspecies;
  const int nv = nv_;
  const int w = cfg_.w;
  const int g = kGhost;
  const EosSpec& eos = case_.eos;
  const bool es = cfg_.flux == FluxMode::ES;
  const AlphaCoeffs al = alpha_coeffs(w);

  // per-node thermodynamics over the interior and the face halos
  std::vector<NodeData> nd(U.data().size() / nv);
  {
    std::vector<Index3> pts;
    for_extended(lat_, g, [&](int i, int j, int k) {
      const Index3 p{i, j, k};
      int outside = 0;
      for (int d = 0; d < dim; ++d)
        if (p[d] < 0 || p[d] >= lat_.n[d]) ++outside;
      if (outside <= 1) pts.push_back(p);
    });
    parallel_for(static_cast<long>(pts.size()), [&](long lo, long hi) {
      Conserved u(nv);
      for (long q = lo; q < hi; ++q) {
        const Index3& p = pts[q];
        const long off = U.offset(p);
        for (int c = 0; c < nv; ++c) u[c] = U.data()[off + c];
        NodeData& n = nd[off / nv];
        try {
          n.w = cons_to_prim(u, eos, cfg_.floors);
        } catch (const AdmissibilityError& e) {
          throw e.with_context(p, -1, t_);
        }
        n.f = flux_node(n.w);
        const EntropyState s = entropy_bundle(n.w, eos);
        for (int c = 0; c < nv; ++c) n.V[c] = s.V[c];
        n.phi = s.phi;
      }
    });
  }

  Rates r;
  r.dJU = Field(lat_, nv, 0);
  r.dJ = Field(lat_, 1, 0);
  const long unv = nv;

  for (int k = 0; k < dim; ++k) {
    const int n = lat_.n[k];
    const int o1 = (k + 1) % 3, o2 = (k + 2) % 3;
    const long nlines = static_cast<long>(lat_.n[o1]) * lat_.n[o2];
    const double inv = 1.0 / lat_.dxi[k];
    double face = 1.0;
    for (int d = 0; d < dim; ++d)
      if (d != k) face *= lat_.dxi[d];
    const bool bounded = !lat_.periodic[k];
    std::vector<double> line_outflow(nlines, 0.0);

    parallel_for(nlines, [&](long lo, long hi) {
      const int L = n + 2 * g;
      std::vector<long> idx(L);
      std::vector<DirectedMetric> md(L);
      std::vector<double> P(static_cast<size_t>(w) * (n + w) * nv);
      std::vector<double> Fh(static_cast<size_t>(n + 1) * nv);
      std::vector<double> Gh(static_cast<size_t>(n + 1) * (dim + 1));
      std::vector<double> dis_lo(nv, 0.0), dis_hi(nv, 0.0);
      std::array<Vec, 6> Vs;
      const auto pair_index = [&](int m, int l) { return (static_cast<size_t>(m - 1) * (n + w) + (l + w)) * nv; };

      for (long line = lo; line < hi; ++line) {
        Index3 p{0, 0, 0};
        p[o1] = static_cast<int>(line % lat_.n[o1]);
        p[o2] = static_cast<int>(line / lat_.n[o1]);
        for (int l = -g; l < n + g; ++l) {
          p[k] = l;
          idx[l + g] = U.offset(p) / unv;
          const double* mp = mf.m.at(p) + k * (dim + 1);
          md[l + g].mt = mp[0];
          for (int q = 0; q < dim; ++q) md[l + g].m[q] = mp[1 + q];
        }
        const auto N = [&](int l) -> const NodeData& { return nd[idx[l + g]]; };
        const auto M = [&](int l) -> const DirectedMetric& { return md[l + g]; };

        for (int m = 1; m <= w; ++m)
          for (int l = -w; l <= n - 1; ++l) {
            const PairMeans pm = pair_means(N(l).f, N(l + m).f, ns, dim);
            const DirectedMetric& a = M(l);
            const DirectedMetric& b = M(l + m);
            double nn[3];
            for (int q = 0; q < dim; ++q) nn[q] = 0.5 * (a.m[q] + b.m[q]);
            ec_flux_kernel(pm, 0.5 * (a.mt + b.mt), nn, eos, dim, &P[pair_index(m, l)]);
          }
        for (int i = -1; i <= n - 1; ++i) {
          double* F = &Fh[static_cast<size_t>(i + 1) * nv];
          double* G = &Gh[static_cast<size_t>(i + 1) * (dim + 1)];
          for (int c = 0; c < nv; ++c) F[c] = 0.0;
          for (int c = 0; c <= dim; ++c) G[c] = 0.0;
          for (int m = 1; m <= w; ++m) {
            const double a = al(m);
            for (int s = 0; s < m; ++s) {
              const double* Pm = &P[pair_index(m, i - s)];
              for (int c = 0; c < nv; ++c) F[c] += a * Pm[c];
              const DirectedMetric& ml = M(i - s);
              const DirectedMetric& mr = M(i - s + m);
              G[0] += a * 0.5 * (ml.mt + mr.mt);
              for (int q = 0; q < dim; ++q) G[1 + q] += a * 0.5 * (ml.m[q] + mr.m[q]);
            }
          }
          if (es) {
            for (int j = 0; j < 6; ++j) Vs[j] = as_vec(N(i - 2 + j).V.data(), nv);
            DirectedMetric mI;
            mI.mt = G[0];
            for (int q = 0; q < dim; ++q) mI.m[q] = G[1 + q];
            const InterfaceAvg avg = interface_average(N(i).w, N(i + 1).w, eos);
            const Vec dis = es_dissipation(Vs, avg, mI, cfg_.weights, eos);
            for (int c = 0; c < nv; ++c) F[c] -= 0.5 * dis[c];
            if (i == -1)
              for (int c = 0; c < nv; ++c) dis_lo[c] = dis[c];
            if (i == n - 1)
              for (int c = 0; c < nv; ++c) dis_hi[c] = dis[c];
          }
        }
        // rates on the interior of the line
        for (int i = 0; i < n; ++i) {
          p[k] = i;
          double* out = r.dJU.at(p);
          const double* Fr = &Fh[static_cast<size_t>(i + 1) * nv];
          const double* Fl = &Fh[static_cast<size_t>(i) * nv];
          for (int c = 0; c < nv; ++c) out[c] -= (Fr[c] - Fl[c]) * inv;
          r.dJ.at(p)[0] -= (Gh[static_cast<size_t>(i + 1) * (dim + 1)] - Gh[static_cast<size_t>(i) * (dim + 1)]) * inv;
        }
        if (bounded) {
          const auto qhat = [&](int i, const std::vector<double>& dis) {
            double q = 0.0;
            for (int m = 1; m <= w; ++m) {
              double s = 0.0;
              for (int t = 0; t < m; ++t) {
                const int l = i - t, rr = l + m;
                const NodeData& A = N(l);
                const NodeData& B = N(rr);
                const double* Pm = &P[pair_index(m, l)];
                double e = 0.0;
                for (int c = 0; c < nv; ++c) e += 0.5 * (A.V[c] + B.V[c]) * Pm[c];
                e -= 0.25 * (M(l).mt + M(rr).mt) * (A.phi + B.phi);
                for (int j = 0; j < dim; ++j)
                  e -= 0.25 * (M(l).m[j] + M(rr).m[j]) * (A.phi * A.w.v[j] + B.phi * B.w.v[j]);
                s += e;
              }
              q += al(m) * s;
            }
            if (es) {
              const NodeData& A = N(i);
              const NodeData& B = N(i + 1);
              for (int c = 0; c < nv; ++c) q -= 0.25 * (A.V[c] + B.V[c]) * dis[c];
            }
            return q;
          };
          line_outflow[line] = (qhat(n - 1, dis_hi) - qhat(-1, dis_lo)) * face;
        }
      }
    });
    for (double v : line_outflow) r.entropy_outflow += v;
  }
  return r;
}

double Solver::cfl_dt(const Field& U, const MetricField& mf, const Field& J) const {
  const int dim = lat_.dim;
  double mx = 0.0;
  for_interior(lat_, [&](int i, int j, int k) {
    Conserved u = as_vec(U.at(i, j, k), nv_);
    const Primitive w = cons_to_prim(u, case_.eos, cfg_.floors);
    const double c = sound_speed(w, case_.eos);
    double s = 0.0;
    for (int d = 0; d < dim; ++d) {
      const DirectedMetric m = mf.get(i, j, k, d);
      const double L = m.length(dim);
      double vn = 0.0;
      for (int q = 0; q < dim; ++q) vn += w.v[q] * m.m[q];
      // L·v̂1 = v·m
      const double rho = std::max(std::abs(m.mt + vn - L * c), std::abs(m.mt + vn + L * c));
      s += rho / J(i, j, k, 0) / lat_.dxi[d];
    }
    mx = std::max(mx, s);
  });
  if (!(mx > 0.0)) return std::max(cfg_.t_end - t_, 0.0);
  return cfg_.cfl / mx;
}

void Solver::stage_mesh(double frac, double dt, MeshBlock& out) const {
  out = mesh_;
  const double h = frac * dt;
  for_interior(lat_, [&](int i, int j, int k) {
    double* x = out.x.at(i, j, k);
    const double* v = mesh_.xdot.at(i, j, k);
    for (int d = 0; d < lat_.dim; ++d) x[d] += h * v[d];
  });
  out.fill_coordinate_ghosts();
}

void Solver::step_ssprk3(double dt) {
  if (dt == 0.0) return;
  const bool moving = cfg_.mesh != MeshMode::Uniform;
  const Field JU0 = JU_, J0 = J_;
  MeshBlock ms;
  MetricField mf = metrics_;
  const auto stage_rates = [&](const Field& JU, const Field& J, double frac, int stage) {
    if (moving) {
      stage_mesh(frac, dt, ms);
      scl_metrics(ms, cfg_.w, mf);
      vcl_metrics(ms, mf);
    }
    try {
      return rhs(JU, J, mf, stage);
    } catch (const AdmissibilityError& e) {
      throw e.with_context(e.node(), stage, t_ + frac * dt);
    }
  };
  const auto axpy = [](Field& out, double a, const Field& x, double b, const Field& y, double c, const Field& z) {
    // out = a·x + b·(y + c·z)
    auto& o = out.data();
    const auto& xd = x.data();
    const auto& yd = y.data();
    const auto& zd = z.data();
    for (size_t q = 0; q < o.size(); ++q) o[q] = a * xd[q] + b * (yd[q] + c * zd[q]);
  };

  Rates r0 = stage_rates(JU0, J0, 0.0, 0);
  Field JU1 = JU0, J1 = J0;
  axpy(JU1, 0.0, JU0, 1.0, JU0, dt, r0.dJU);
  axpy(J1, 0.0, J0, 1.0, J0, dt, r0.dJ);
  Rates r1 = stage_rates(JU1, J1, 1.0, 1);
  Field JU2 = JU0, J2 = J0;
  axpy(JU2, 0.75, JU0, 0.25, JU1, dt, r1.dJU);
  axpy(J2, 0.75, J0, 0.25, J1, dt, r1.dJ);
  Rates r2 = stage_rates(JU2, J2, 0.5, 2);
  axpy(JU_, 1.0 / 3.0, JU0, 2.0 / 3.0, JU2, dt, r2.dJU);
  axpy(J_, 1.0 / 3.0, J0, 2.0 / 3.0, J2, dt, r2.dJ);
  outflow_ += dt * (r0.entropy_outflow / 6.0 + r1.entropy_outflow / 6.0 + 2.0 * r2.entropy_outflow / 3.0);

  if (moving) {
    for_interior(lat_, [&](int i, int j, int k) {
      double* x = mesh_.x.at(i, j, k);
      const double* v = mesh_.xdot.at(i, j, k);
      for (int d = 0; d < lat_.dim; ++d) x[d] += dt * v[d];
    });
    mesh_.fill_coordinate_ghosts();
    check_mesh_order(mesh_);
  }
}

Field Solver::monitor_quantity(const std::string& q, const Field& U) const {
  Field f(lat_, 1, 1);
  if (q == "schlieren") {
    const Field phi = schlieren();
    for_interior(lat_, [&](int i, int j, int k) { f(i, j, k, 0) = phi(i, j, k, 0); });
    fill_scalar_ghosts(f, lat_);
    return f;
  }
  const int ns = cfg_.nspecies;
  for_interior(lat_, [&](int i, int j, int k) {
    const double* u = U.at(i, j, k);
    double v = 0.0;
    if (q == "rho") {
      for (int l = 0; l < ns; ++l) v += u[l];
    } else if (q == "rho1") {
      v = u[0];
    } else if (q == "rho2") {
      if (ns < 2) throw ConfigError("monitor quantity rho2 needs two species");
      v = u[1];
    } else if (q == "p") {
      v = cons_to_prim(as_vec(u, nv_), case_.eos, cfg_.floors).p;
    } else if (q == "v1") {
      double rho = 0.0;
      for (int l = 0; l < ns; ++l) rho += u[l];
      v = u[ns] / rho;
    } else {
      throw ConfigError("unknown monitor quantity '" + q + "'");
    }
    f(i, j, k, 0) = v;
  });
  fill_scalar_ghosts(f, lat_);
  return f;
}

StepRecord Solver::advance(double t_stop) {
  const bool moving = cfg_.mesh == MeshMode::Moving;
  const Field U = state_with_ghosts(JU_, J_, &metrics_);
  LimitedMove lim;
  if (moving) {
    std::vector<Field> q;
    q.reserve(cfg_.monitor.terms.size());
    for (const auto& t : cfg_.monitor.terms) q.push_back(monitor_quantity(t.quantity, U));
    std::vector<const Field*> qp;
    for (const auto& f : q) qp.push_back(&f);
    theta_ = monitor(qp, cfg_.monitor, lat_);
    smooth_monitor(theta_, cfg_.monitor.filter_passes, lat_);
    const Field prop = jacobi_redistribute(mesh_, theta_, cfg_.move);
    lim = limit_displacement(mesh_, prop);
  }
  metric_refresh();
  double dt;
  if (cfg_.accuracy_dt) {
    double h = lat_.dxi[0];
    for (int d = 1; d < lat_.dim; ++d) h = std::min(h, lat_.dxi[d]);
    dt = cfg_.cfl * std::pow(h, 5.0 / 3.0);
  } else {
    dt = cfl_dt(U, metrics_, J_);
  }
  Field xdot(lat_, lat_.dim, kGhost);
  if (moving) {
    for_interior(lat_, [&](int i, int j, int k) {
      const double* s = lim.displacement.at(i, j, k);
      double* v = xdot.at(i, j, k);
      for (int d = 0; d < lat_.dim; ++d) v[d] = s[d] / dt;
    });
    set_velocity(xdot);
    if (!cfg_.accuracy_dt) {
      vcl_metrics(mesh_, metrics_);
      dt = std::min(dt, cfl_dt(U, metrics_, J_));
    }
  }
  bool last = false;
  if (t_ + dt >= t_stop) {
    dt = t_stop - t_;
    last = true;
  }
  if (cfg_.mesh == MeshMode::Prescribed && dt > 0.0) {
    for_interior(lat_, [&](int i, int j, int k) {
      const Point3 xi{i * lat_.dxi[0], j * lat_.dxi[1], lat_.dim == 3 ? k * lat_.dxi[2] : 0.0};
      const Point3 target = case_.motion(xi, t_ + dt);
      const double* x = mesh_.x.at(i, j, k);
      double* v = xdot.at(i, j, k);
      for (int d = 0; d < lat_.dim; ++d) v[d] = (target[d] - x[d]) / dt;
    });
    set_velocity(xdot);
  }
  if (cfg_.mesh == MeshMode::Uniform) set_velocity(xdot);
  step_ssprk3(dt);
  t_ = last ? t_stop : t_ + dt;
  ++nstep_;
  last_dt_ = dt;
  last_dtau_ = moving ? lim.dtau : 1.0;
  metric_refresh();
  if (cfg_.gcl_check) last_scl_ = verify_gcl(mesh_, metrics_, cfg_.w).worst_relative();
  return record();
}

Diagnostics Solver::run(const std::function<void(const Solver&, const StepRecord&, bool)>& observer) {
  Diagnostics diag;
  diag.entropy_scale = entropy_scale();
  std::vector<double> outs = cfg_.output_times;
  std::sort(outs.begin(), outs.end());
  size_t next = 0;
  while (next < outs.size() && outs[next] <= t_) ++next;
  const StepRecord r0 = record();
  diag.steps.push_back(r0);
  if (observer) observer(*this, r0, !cfg_.output_times.empty() && cfg_.output_times.front() <= t_);
  try {
    while (t_ < cfg_.t_end) {
      if (cfg_.max_steps > 0 && nstep_ >= cfg_.max_steps) break;
      double stop = cfg_.t_end;
      if (next < outs.size()) stop = std::min(stop, outs[next]);
      const StepRecord r = advance(stop);
      diag.steps.push_back(r);
      bool due = false;
      if (next < outs.size() && t_ >= outs[next]) {
        due = true;
        while (next < outs.size() && outs[next] <= t_) ++next;
      }
      if (t_ >= cfg_.t_end) due = true;
      if (observer) observer(*this, r, due);
    }
  } catch (const std::exception& e) {
    diag.failure = e.what();
    throw;
  }
  diag.completed = t_ >= cfg_.t_end;
  return diag;
}

double Solver::total_entropy() const {
  double s = 0.0;
  for_interior(lat_, [&](int i, int j, int k) {
    s += J_(i, j, k, 0) * entropy_density(primitive_at(i, j, k), case_.eos);
  });
  return s * lat_.cell_volume();
}

double Solver::entropy_scale() const {
  double s = 0.0;
  for_interior(lat_, [&](int i, int j, int k) {
    const double* ju = JU_.at(i, j, k);
    for (int l = 0; l < cfg_.nspecies; ++l) s += ju[l] * case_.eos[l].cv;
  });
  return s * lat_.cell_volume();
}

StepRecord Solver::record() const {
  StepRecord r;
  r.step = nstep_;
  r.t = t_;
  r.dt = last_dt_;
  r.dtau = last_dtau_;
  r.entropy_outflow = outflow_;
  r.scl = last_scl_;
  double s = 0.0;
  r.min_rho = std::numeric_limits<double>::infinity();
  r.min_pp = r.min_rho;
  r.min_J = r.min_rho;
  for_interior(lat_, [&](int i, int j, int k) {
    const Primitive w = primitive_at(i, j, k);
    const double Jv = J_(i, j, k, 0);
    s += Jv * entropy_density(w, case_.eos);
    for (int l = 0; l < w.nspecies; ++l) r.min_rho = std::min(r.min_rho, w.rho[l]);
    r.min_pp = std::min(r.min_pp, w.p + case_.eos.pinf());
    r.min_J = std::min(r.min_J, Jv);
  });
  r.entropy = s * lat_.cell_volume();
  return r;
}

ErrorNorms Solver::density_error() const {
  if (!case_.exact) throw ConfigError("case '" + case_.name + "' has no analytic solution");
  ErrorNorms e;
  for_interior(lat_, [&](int i, int j, int k) {
    const double* x = mesh_.x.at(i, j, k);
    const Point3 p{x[0], x[1], lat_.dim == 3 ? x[2] : 0.0};
    const double err = std::abs(primitive_at(i, j, k).rho[0] - case_.exact(p, t_).rho[0]);
    e.l1 += err;
    e.linf = std::max(e.linf, err);
  });
  e.l1 *= lat_.cell_volume();
  return e;
}

Field Solver::schlieren() const {
  Field rho(lat_, 1, 1), psi(lat_, 1, 0);
  for_interior(lat_, [&](int i, int j, int k) {
    const Primitive w = primitive_at(i, j, k);
    rho(i, j, k, 0) = w.density();
    psi(i, j, k, 0) = case_.schlieren_psi ? case_.schlieren_psi(w) : 1.0;
  });
  fill_scalar_ghosts(rho, lat_);
  return esmm::schlieren(rho, psi, metrics_, J_, lat_);
}

Field schlieren(const Field& rho, const Field& psi, const MetricField& mf, const Field& J, const Lattice& lat) {
  const int dim = lat.dim;
  Field g(lat, 1, 0), out(lat, 1, 0);
  double mx = 0.0;
  for_interior(lat, [&](int i, int j, int k) {
    std::array<double, 3> dr{0.0, 0.0, 0.0};
    for (int d = 0; d < dim; ++d) {
      Index3 a{i, j, k}, b{i, j, k};
      a[d] += 1;
      b[d] -= 1;
      dr[d] = (rho.at(a)[0] - rho.at(b)[0]) / (2.0 * lat.dxi[d]);
    }
    double s = 0.0;
    for (int q = 0; q < dim; ++q) {
      double gq = 0.0;
      for (int d = 0; d < dim; ++d) gq += mf.get(i, j, k, d).m[q] * dr[d];
      gq /= J(i, j, k, 0);
      s += gq * gq;
    }
    g(i, j, k, 0) = std::sqrt(s);
    mx = std::max(mx, g(i, j, k, 0));
  });
  for_interior(lat, [&](int i, int j, int k) {
    out(i, j, k, 0) = mx > 0.0 ? std::exp(-psi(i, j, k, 0) * g(i, j, k, 0) / mx) : 1.0;
  });
  return out;
}

}  // namespace esmm
