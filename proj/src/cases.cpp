#include "esmm/cases.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace esmm {

namespace {

constexpr double kPi = std::numbers::pi;

BcSet uniform_bc(BcType t) {
  BcSet bc;
  for (auto& d : bc)
    for (auto& f : d) f.type = t;
  return bc;
}

MonitorSpec simple_monitor(std::vector<std::pair<std::string, double>> terms) {
  MonitorSpec m;
  for (auto& [q, a] : terms) m.terms.push_back({q, a, DerivativeKind::Gradient});
  return m;
}

MonitorSpec vortex_monitor() {
  MonitorSpec m;
  m.squared = false;
  m.terms = {{"rho1", 20.0, DerivativeKind::Gradient}, {"rho1", 10.0, DerivativeKind::Laplacian}};
  return m;
}

Primitive prim(const EosSpec& eos, std::vector<double> rho, std::vector<double> v, double p) {
  return make_primitive(rho, v, p, eos);
}

double wrap(double x, double period) { return x - period * std::round(x / period); }

// 2D vortex centred at (−2,−2) at t=0 on the periodic box [−10,10]²
Primitive vortex2d_state(const Point3& x, double t, const EosSpec& eos) {
  const double eps = 5.0, g = eos[0].gamma;
  const double y1 = wrap(x[0] - t + 2.0, 20.0), y2 = wrap(x[1] - t + 2.0, 20.0);
  const double r2 = y1 * y1 + y2 * y2;
  const double a = eps / (2.0 * kPi) * std::exp(0.5 * (1.0 - r2));
  const double T = 1.0 - eps * eps / (8.0 * g * kPi * kPi) * std::exp(1.0 - r2);
  Primitive w;
  w.nspecies = 1;
  w.dim = 2;
  // δS = 0 around ρ=T=1 gives ρ = T^{c_v/R}
  w.rho[0] = std::pow(T, eos[0].cv / eos.R(0));
  w.v = {1.0 + a * y2, 1.0 - a * y1, 0.0};
  w.T = T;
  w.p = w.rho[0] * eos.R(0) * T - eos.pinf();
  return w;
}

Primitive vortex3d_state(const Point3& x, double t, const EosSpec& eos) {
  const double eps = 5.0, g = eos[0].gamma;
  const Point3 v0 = vortex3d_drift();
  const Point3 y{x[0] - v0[0] * t, x[1] - v0[1] * t, x[2] - v0[2] * t};
  const double h1 = wrap(-y[0] + y[1], 20.0), h2 = wrap(y[0] - y[2], 20.0);
  const double s6 = std::sqrt(6.0), s3 = std::sqrt(3.0), s2 = std::sqrt(2.0);
  const double t1 = (h1 + 2.0 * h2) / s6, t2 = s3 * h1 / s6;
  const double r2 = t1 * t1 + t2 * t2;
  const double T = 1.0 - eps * eps / (8.0 * g * kPi * kPi) * std::exp(1.0 - r2);
  const double a = eps / (2.0 * kPi) * std::exp(0.5 * (1.0 - r2));
  const double u1 = 1.0 + a * t2, u2 = 1.0 - a * t1;
  Primitive w;
  w.nspecies = 1;
  w.dim = 3;
  w.rho[0] = std::pow(T, 1.0 / (g - 1.0));
  w.v = {(u1 - s3 * u2 + s2) / s6, (u1 + s3 * u2 + s2) / s6, (-2.0 * u1 + s2) / s6};
  w.T = T;
  w.p = (g - 1.0) * w.rho[0] * eos[0].cv * T;
  return w;
}

CaseSpec base(const std::string& name, const std::string& desc, int dim) {
  CaseSpec cs;
  cs.name = name;
  cs.description = desc;
  cs.dim = dim;
  cs.cfl = dim == 3 ? 0.3 : 0.4;
  return cs;
}

std::function<double(const Primitive&)> psi_rule(double a1, double a2) {
  return [a1, a2](const Primitive& w) { return (a1 * w.rho[0] + a2 * w.rho[1]) / w.density(); };
}

}  // namespace

Point3 vortex3d_drift() {
  const double s6 = std::sqrt(6.0), s3 = std::sqrt(3.0), s2 = std::sqrt(2.0);
  return {(1.0 - s3 + s2) / s6, (1.0 + s3 + s2) / s6, (-2.0 + s2) / s6};
}

std::vector<std::string> case_names() {
  return {"vortex2d",      "shocktube_stiff",     "riemann1",      "riemann2",           "vortex3d",
          "sod3d",         "tripoint",            "shockbubble2d", "shockbubble2d_stiff", "shockbubble3d",
          "shockbubble3d_stiff", "freestream2d", "freestream3d"};
}

CaseSpec make_case(const std::string& name, std::uint64_t seed) {
  if (name == "vortex2d") {
    CaseSpec cs = base(name, "isentropic vortex on the periodic box [-10,10]^2", 2);
    cs.lo = {-10, -10, 0};
    cs.hi = {10, 10, 1};
    cs.cells = {80, 80, 1};
    cs.eos = EosSpec({{1.4, 1.0, 0.0}});
    const EosSpec eos = cs.eos;
    cs.initial = [eos](const Point3& x) { return vortex2d_state(x, 0.0, eos); };
    cs.exact = [eos](const Point3& x, double t) { return vortex2d_state(x, t, eos); };
    cs.bc = uniform_bc(BcType::Periodic);
    cs.monitor = vortex_monitor();
    cs.t_end = 4.0;
    return cs;
  }
  if (name == "vortex3d") {
    CaseSpec cs = base(name, "isentropic vortex along the cube diagonal on [-10,10]^3", 3);
    cs.lo = {-10, -10, -10};
    cs.hi = {10, 10, 10};
    cs.cells = {40, 40, 40};
    cs.eos = EosSpec({{1.4, 1.0, 0.0}});
    const EosSpec eos = cs.eos;
    cs.initial = [eos](const Point3& x) { return vortex3d_state(x, 0.0, eos); };
    cs.exact = [eos](const Point3& x, double t) { return vortex3d_state(x, t, eos); };
    cs.bc = uniform_bc(BcType::Periodic);
    cs.monitor = vortex_monitor();
    cs.t_end = 0.1;
    return cs;
  }
  if (name == "shocktube_stiff") {
    CaseSpec cs = base(name, "stiffened gas shock tube, quasi-2D on [0,1]x[0,0.05]", 2);
    cs.lo = {0, 0, 0};
    cs.hi = {1, 0.05, 1};
    cs.cells = {200, 5, 1};
    cs.eos = EosSpec({{3.0, 1.0, 1.0}});
    const EosSpec eos = cs.eos;
    cs.initial = [eos](const Point3& x) {
      // a node on the interface takes the mean conserved state (energy is linear in p)
      if (std::abs(x[0] - 0.5) <= 1e-12) return prim(eos, {0.875}, {0, 0}, 0.525);
      return x[0] < 0.5 ? prim(eos, {1.0}, {0, 0}, 1.0) : prim(eos, {0.75}, {0, 0}, 0.05);
    };
    cs.bc = uniform_bc(BcType::Outflow);
    cs.bc[1][0].type = cs.bc[1][1].type = BcType::Periodic;
    cs.monitor = simple_monitor({{"rho1", 1200.0}});
    cs.t_end = 0.15;
    cs.line_cuts = {{{0, 0.025, 0}, {1, 0.025, 0}, 400}};
    return cs;
  }
  if (name == "riemann1" || name == "riemann2") {
    const bool one = name == "riemann1";
    CaseSpec cs = base(name, one ? "2D Riemann problem with two shocks and two contacts"
                                 : "2D Riemann problem with four contacts", 2);
    cs.lo = {0, 0, 0};
    cs.hi = {1, 1, 1};
    cs.cells = {200, 200, 1};
    cs.eos = EosSpec({{1.4, 1.0, 0.0}});
    const EosSpec eos = cs.eos;
    if (one) {
      cs.initial = [eos](const Point3& x) {
        if (x[0] > 0.5 && x[1] > 0.5) return prim(eos, {0.5313}, {0, 0}, 0.4);
        if (x[0] < 0.5 && x[1] > 0.5) return prim(eos, {1.0}, {0.7276, 0}, 1.0);
        if (x[0] < 0.5 && x[1] < 0.5) return prim(eos, {0.8}, {0, 0}, 1.0);
        return prim(eos, {1.0}, {0, 0.7276}, 1.0);
      };
      cs.weights = MRWeights::sharp();
      cs.t_end = 0.25;
    } else {
      cs.initial = [eos](const Point3& x) {
        if (x[0] > 0.5 && x[1] > 0.5) return prim(eos, {1.0}, {0.75, -0.5}, 1.0);
        if (x[0] < 0.5 && x[1] > 0.5) return prim(eos, {2.0}, {0.75, 0.5}, 1.0);
        if (x[0] < 0.5 && x[1] < 0.5) return prim(eos, {1.0}, {-0.75, 0.5}, 1.0);
        return prim(eos, {3.0}, {-0.75, -0.5}, 1.0);
      };
      cs.t_end = 0.3;
    }
    cs.bc = uniform_bc(BcType::Outflow);
    cs.monitor = simple_monitor({{"rho1", 1200.0}});
    cs.line_cuts = {{{0, 0, 0}, {1, 1, 0}, 400}};
    return cs;
  }
  if (name == "sod3d") {
    CaseSpec cs = base(name, "spherical shock tube in the octant [0,1]^3", 3);
    cs.lo = {0, 0, 0};
    cs.hi = {1, 1, 1};
    cs.cells = {50, 50, 50};
    cs.eos = EosSpec({{1.4, 1.0, 0.0}});
    const EosSpec eos = cs.eos;
    cs.initial = [eos](const Point3& x) {
      const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
      return r < 0.5 ? prim(eos, {1.0}, {0, 0, 0}, 1.0) : prim(eos, {0.125}, {0, 0, 0}, 0.1);
    };
    // coordinate planes are symmetry planes of the sphere
    cs.bc = uniform_bc(BcType::Outflow);
    for (int d = 0; d < 3; ++d) cs.bc[d][0].type = BcType::Reflecting;
    cs.monitor = simple_monitor({{"rho1", 500.0}});
    cs.t_end = 0.2;
    cs.line_cuts = {{{0, 0, 0}, {1, 1, 1}, 400}};
    return cs;
  }
  if (name == "tripoint") {
    CaseSpec cs = base(name, "two-gas tri-point problem on [0,7]x[0,3]", 2);
    cs.lo = {0, 0, 0};
    cs.hi = {7, 3, 1};
    cs.cells = {350, 150, 1};
    cs.eos = EosSpec({{1.5, 1.0, 0.0}, {1.4, 1.0, 0.0}});
    const EosSpec eos = cs.eos;
    const double e = 1e-5;
    cs.initial = [eos, e](const Point3& x) {
      if (x[0] <= 1.0) return prim(eos, {1.0 - e, e}, {0, 0}, 1.0);
      if (x[1] >= 1.5) return prim(eos, {0.125 - e, e}, {0, 0}, 0.1);
      return prim(eos, {e, 1.0 - e}, {0, 0}, 0.1);
    };
    cs.bc = uniform_bc(BcType::Reflecting);
    cs.monitor = simple_monitor({{"rho", 1200.0}});
    cs.t_end = 5.0;
    cs.line_cuts = {{{2, 0, 0}, {7, 3, 0}, 400}};
    return cs;
  }
  if (name == "shockbubble2d" || name == "shockbubble3d") {
    const bool three = name == "shockbubble3d";
    CaseSpec cs = base(name, three ? "Mach 1.22 shock hitting a helium sphere" : "Mach 1.22 shock hitting a helium cylinder",
                       three ? 3 : 2);
    cs.lo = {0, -44.5, three ? -44.5 : 0.0};
    cs.hi = {445, 44.5, three ? 44.5 : 1.0};
    cs.cells = three ? Index3{400, 80, 80} : Index3{800, 160, 1};
    const double R1 = 0.287, R2 = 1.578, g1 = 1.4, g2 = 1.647;
    cs.eos = EosSpec({{g1, R1 / (g1 - 1.0), 0.0}, {g2, R2 / (g2 - 1.0), 0.0}});
    const EosSpec eos = cs.eos;
    const double e = 0.03;
    const int dim = cs.dim;
    const std::vector<double> zero(dim, 0.0);
    std::vector<double> post(dim, 0.0);
    post[0] = -113.5243;
    const Primitive bubble = prim(eos, {e, 1.225 * (R1 / R2) - e}, zero, 101325.0);
    const Primitive air = prim(eos, {1.225 - e, e}, zero, 101325.0);
    const Primitive shocked = prim(eos, {1.6861 - e, e}, post, 159060.0);
    cs.initial = [=](const Point3& x) {
      const double r2 = (x[0] - 225.0) * (x[0] - 225.0) + x[1] * x[1] + (dim == 3 ? x[2] * x[2] : 0.0);
      if (x[0] > 275.0) return shocked;
      return r2 < 25.0 * 25.0 ? bubble : air;
    };
    cs.bc = uniform_bc(BcType::Reflecting);
    cs.bc[0][0].type = BcType::Outflow;
    cs.bc[0][1].type = BcType::Inflow;
    cs.bc[0][1].inflow = shocked;
    if (three) {
      cs.monitor = simple_monitor({{"rho", 1200.0}});
      cs.weights = MRWeights::sharp();
      cs.schlieren_psi = psi_rule(10.0, 30.0);
      cs.t_end = 0.72;
    } else {
      cs.monitor = simple_monitor({{"rho", 1000.0}});
      cs.schlieren_psi = psi_rule(30.0, 150.0);
      cs.t_end = 0.676;
    }
    return cs;
  }
  if (name == "shockbubble2d_stiff" || name == "shockbubble3d_stiff") {
    const bool three = name == "shockbubble3d_stiff";
    CaseSpec cs = base(name, three ? "Mach 10 shock in stiffened gas hitting an ideal gas sphere"
                                   : "Mach 10 shock in stiffened gas hitting an ideal gas cylinder",
                       three ? 3 : 2);
    cs.lo = {0, -44.5, three ? -44.5 : 0.0};
    cs.hi = {445, 44.5, three ? 44.5 : 1.0};
    cs.cells = three ? Index3{400, 80, 80} : Index3{800, 160, 1};
    cs.eos = EosSpec({{3.0, 1.0, 100.0}, {1.4, 1.0, 0.0}});
    const EosSpec eos = cs.eos;
    const double e = 0.05;
    const int dim = cs.dim;
    const std::vector<double> zero(dim, 0.0);
    std::vector<double> post(dim, 0.0);
    post[0] = -121.2497;
    const Primitive bubble = prim(eos, {e, 5.0 - e}, zero, 100.0);
    const Primitive liquid = prim(eos, {1.0 - e, e}, zero, 100.0);
    const Primitive shocked = prim(eos, {1.980198 - e, e}, post, 29800.0);
    cs.initial = [=](const Point3& x) {
      const double r2 = (x[0] - 225.0) * (x[0] - 225.0) + x[1] * x[1] + (dim == 3 ? x[2] * x[2] : 0.0);
      if (x[0] > 275.0) return shocked;
      return r2 < 25.0 * 25.0 ? bubble : liquid;
    };
    cs.bc = uniform_bc(BcType::Reflecting);
    cs.bc[0][0].type = BcType::Outflow;
    cs.bc[0][1].type = BcType::Inflow;
    cs.bc[0][1].inflow = shocked;
    if (three) {
      cs.monitor = simple_monitor({{"rho1", 500.0}, {"p", 500.0}});
      cs.weights = MRWeights::sharp();
      cs.schlieren_psi = psi_rule(20.0, 5.0);
      cs.t_end = 0.64;
    } else {
      cs.monitor = simple_monitor(
          {{"schlieren", 600.0}, {"v1", 500.0}, {"rho1", 1200.0}, {"rho2", 1200.0}, {"p", 1200.0}});
      cs.schlieren_psi = psi_rule(120.0, 20.0);
      cs.t_end = 0.8;
    }
    return cs;
  }
  if (name == "freestream2d" || name == "freestream3d") {
    const int dim = name == "freestream3d" ? 3 : 2;
    CaseSpec cs = base(name, "uniform flow on a sinusoidally deforming periodic mesh", dim);
    cs.lo = {0, 0, 0};
    cs.hi = {1, 1, 1};
    cs.cells = dim == 3 ? Index3{16, 16, 16} : Index3{40, 40, 1};
    cs.eos = EosSpec({{1.4, 1.0, 0.0}});
    const EosSpec eos = cs.eos;
    const Primitive state =
        dim == 3 ? prim(eos, {1.0}, {1.0, -0.5, 0.25}, 1.0) : prim(eos, {1.0}, {1.0, -0.5}, 1.0);
    cs.initial = [state](const Point3&) { return state; };
    cs.exact = [state](const Point3&, double) { return state; };
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
    std::array<double, 3> ph{}, ps{};
    for (int d = 0; d < 3; ++d) {
      ph[d] = u(rng);
      ps[d] = u(rng);
    }
    const double amp = 0.04, freq = 5.0;
    cs.motion = [=](const Point3& xi, double t) {
      Point3 x{0, 0, 0};
      for (int d = 0; d < dim; ++d) {
        double s = std::sin(2.0 * kPi * freq * t + ph[d]);
        for (int q = 0; q < dim; ++q) s *= std::sin(2.0 * kPi * xi[q] + (q == d ? ps[d] : 0.0));
        x[d] = xi[d] + amp * s;
      }
      return x;
    };
    cs.bc = uniform_bc(BcType::Periodic);
    cs.t_end = 1.0;
    return cs;
  }
  throw ConfigError("unknown case '" + name + "'");
}

SolverConfig default_config(const CaseSpec& cs) {
  SolverConfig cfg;
  cfg.dim = cs.dim;
  cfg.nspecies = cs.eos.nspecies();
  cfg.bc = cs.bc;
  cfg.monitor = cs.monitor;
  cfg.weights = cs.weights;
  cfg.cfl = cs.cfl;
  cfg.t_end = cs.t_end;
  if (cs.motion) cfg.mesh = MeshMode::Prescribed;
  return cfg;
}

}  // namespace esmm
