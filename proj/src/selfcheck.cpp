#include "esmm/selfcheck.hpp"

#include "esmm/cases.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace esmm {

namespace {

CaseSpec deforming(int dim, int n, std::uint64_t seed, bool smooth_data) {
  CaseSpec cs = make_case(dim == 3 ? "freestream3d" : "freestream2d", seed);
  cs.cells = {n, n, dim == 3 ? n : 1};
  if (smooth_data) {
    const EosSpec eos = cs.eos;
    cs.initial = [eos, dim](const Point3& x) {
      const double tp = 2.0 * std::numbers::pi;
      double s = 0.0;
      for (int d = 0; d < dim; ++d) s += std::sin(tp * x[d] + 0.3 * d);
      std::vector<double> v(dim);
      for (int d = 0; d < dim; ++d) v[d] = 0.5 + 0.2 * std::cos(tp * x[(d + 1) % dim]);
      return make_primitive({1.0 + 0.3 * s / dim}, v, 1.0 + 0.2 * std::cos(tp * x[0]), eos);
    };
    cs.exact = nullptr;
  }
  return cs;
}

SolverConfig deforming_config(const CaseSpec& cs, int w, FluxMode flux) {
  SolverConfig cfg = default_config(cs);
  cfg.w = w;
  cfg.flux = flux;
  cfg.t_end = 1e9;
  return cfg;
}

}  // namespace

double freestream_deviation(int dim, int w, int n, int steps, std::uint64_t seed) {
  const CaseSpec cs = deforming(dim, n, seed, false);
  Solver s(cs, deforming_config(cs, w, FluxMode::ES));
  const Conserved U0 = prim_to_cons(cs.initial(Point3{0, 0, 0}), cs.eos);
  double dev = 0.0;
  for (int q = 0; q < steps; ++q) {
    s.advance(1e9);
    for_interior(s.lattice(), [&](int i, int j, int k) {
      const double* ju = s.JU().at(i, j, k);
      const double J = s.J()(i, j, k, 0);
      for (int c = 0; c < U0.size(); ++c) dev = std::max(dev, std::abs(ju[c] / J - U0[c]));
    });
  }
  return dev;
}

double scl_residual(int dim, int w, int n, std::uint64_t seed) {
  const CaseSpec cs = deforming(dim, n, seed, false);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  const double t = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  SolverConfig cfg = deforming_config(cs, w, FluxMode::ES);
  const Solver s(cs, cfg);
  MeshBlock m(s.lattice());
  for_interior(s.lattice(), [&](int i, int j, int k) {
    const Point3 xi{i * s.lattice().dxi[0], j * s.lattice().dxi[1], dim == 3 ? k * s.lattice().dxi[2] : 0.0};
    const Point3 x = cs.motion(xi, t);
    for (int d = 0; d < dim; ++d) m.x(i, j, k, d) = x[d];
  });
  m.fill_coordinate_ghosts();
  MetricField mf(s.lattice());
  scl_metrics(m, w, mf);
  return verify_gcl(m, mf, w).worst_relative();
}

double ec_entropy_identity(int dim, int w, int n, int steps, std::uint64_t seed) {
  const CaseSpec cs = deforming(dim, n, seed, true);
  SolverConfig cfg = deforming_config(cs, w, FluxMode::EC);
  Solver s(cs, cfg);
  double worst = 0.0;
  for (int q = 0; q <= steps; ++q) {
    if (q > 0) s.advance(1e9);
    // velocity of the prescribed motion at the current time, by a tiny forward difference
    const double h = 1e-7;
    Field xdot(s.lattice(), dim, kGhost);
    for_interior(s.lattice(), [&](int i, int j, int k) {
      const Point3 xi{i * s.lattice().dxi[0], j * s.lattice().dxi[1], dim == 3 ? k * s.lattice().dxi[2] : 0.0};
      const Point3 a = cs.motion(xi, s.time()), b = cs.motion(xi, s.time() + h);
      for (int d = 0; d < dim; ++d) xdot(i, j, k, d) = (b[d] - a[d]) / h;
    });
    s.set_velocity(xdot);
    MetricField mf = s.metrics();
    scl_metrics(s.mesh(), w, mf);
    vcl_metrics(s.mesh(), mf);
    const Rates r = s.rhs(s.JU(), s.J(), mf);
    double sum = 0.0, mag = 0.0;
    for_interior(s.lattice(), [&](int i, int j, int k) {
      const Primitive pw = s.primitive_at(i, j, k);
      const Conserved U = prim_to_cons(pw, cs.eos);
      const Vec V = entropy_variables(pw, cs.eos);
      const double eta = entropy_density(pw, cs.eos);
      const double* du = r.dJU.at(i, j, k);
      double a = 0.0, vu = 0.0;
      for (int c = 0; c < U.size(); ++c) {
        a += V[c] * du[c];
        mag += std::abs(V[c] * du[c]);
        vu += V[c] * U[c];
      }
      const double b = (eta - vu) * r.dJ(i, j, k, 0);
      sum += a + b;
      mag += std::abs(b);
    });
    if (mag > 0.0) worst = std::max(worst, std::abs(sum) / mag);
  }
  return worst;
}

double conservation_drift(int n, int steps, std::uint64_t seed) {
  CaseSpec cs = make_case("vortex2d");
  cs.cells = {n, n, 1};
  SolverConfig cfg = default_config(cs);
  cfg.t_end = 1e9;
  (void)seed;
  Solver s(cs, cfg);
  const auto totals = [&]() {
    std::vector<double> t(s.JU().ncomp(), 0.0);
    for_interior(s.lattice(), [&](int i, int j, int k) {
      for (int c = 0; c < s.JU().ncomp(); ++c) t[c] += s.JU()(i, j, k, c);
    });
    return t;
  };
  const auto t0 = totals();
  for (int q = 0; q < steps; ++q) s.advance(1e9);
  const auto t1 = totals();
  double drift = 0.0;
  for (size_t c = 0; c < t0.size(); ++c) {
    // momenta can sum to zero; use the mass as the common scale
    const double scale = std::max(std::abs(t0[c]), std::abs(t0[0]));
    drift = std::max(drift, std::abs(t1[c] - t0[c]) / scale);
  }
  return drift;
}

std::vector<CheckResult> property_suite(bool quick) {
  std::vector<CheckResult> out;
  const auto add = [&](std::string name, double v, double lim) { out.push_back({std::move(name), v, lim, v <= lim}); };
  for (int w = 1; w <= 3; ++w) {
    add("freestream 2D w=" + std::to_string(w), freestream_deviation(2, w, quick ? 20 : 40, 10, 7), 1e-11);
    add("scl 2D w=" + std::to_string(w), scl_residual(2, w, 24, 11), 1e-12);
    add("scl 3D w=" + std::to_string(w), scl_residual(3, w, 12, 13), 1e-12);
  }
  if (!quick)
    for (int w = 1; w <= 3; ++w) add("freestream 3D w=" + std::to_string(w), freestream_deviation(3, w, 16, 10, 7), 1e-11);
  add("EC entropy identity 2D", ec_entropy_identity(2, 3, 24, 3, 5), 1e-10);
  add("conservation 2D", conservation_drift(24, quick ? 20 : 100, 0), 1e-11);
  return out;
}

}  // namespace esmm
