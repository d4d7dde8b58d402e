#include "esmm/io.hpp"

#include "esmm/cases.hpp"

#include <Eigen/Dense>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace esmm {

using nlohmann::json;

namespace {

const char* kFaceNames[3][2] = {{"x1_lo", "x1_hi"}, {"x2_lo", "x2_hi"}, {"x3_lo", "x3_hi"}};

std::string bc_name(BcType t) {
  switch (t) {
    case BcType::Periodic: return "periodic";
    case BcType::Outflow: return "outflow";
    case BcType::Reflecting: return "reflecting";
    case BcType::Inflow: return "inflow";
  }
  return "outflow";
}

BcType bc_from(const std::string& s, const std::string& path) {
  if (s == "periodic") return BcType::Periodic;
  if (s == "outflow") return BcType::Outflow;
  if (s == "reflecting") return BcType::Reflecting;
  if (s == "inflow") return BcType::Inflow;
  throw ConfigError(path + ": unknown boundary type '" + s + "'");
}

json state_json(const Primitive& w) {
  json j;
  j["rho"] = std::vector<double>(w.rho.begin(), w.rho.begin() + w.nspecies);
  j["v"] = std::vector<double>(w.v.begin(), w.v.begin() + w.dim);
  j["p"] = w.p;
  return j;
}

json term_json(const MonitorTerm& t) {
  return {{"quantity", t.quantity}, {"alpha", t.alpha},
          {"kind", t.kind == DerivativeKind::Gradient ? "gradient" : "laplacian"}};
}

void check_keys(const json& patch, const json& schema, const std::string& path) {
  if (!patch.is_object()) return;
  for (auto it = patch.begin(); it != patch.end(); ++it) {
    const std::string p = path.empty() ? it.key() : path + "." + it.key();
    if (!schema.is_object() || !schema.contains(it.key())) throw ConfigError("unknown key '" + p + "'");
    const json& s = schema.at(it.key());
    if (it.key() == "terms" && it->is_array()) {
      const json tmpl = term_json(MonitorTerm{});
      for (size_t q = 0; q < it->size(); ++q) check_keys((*it)[q], tmpl, p + "[" + std::to_string(q) + "]");
    } else if (it.key() == "state") {
      if (!it->is_null()) check_keys(*it, json{{"rho", 0}, {"v", 0}, {"p", 0}}, p);
    } else if (s.is_object()) {
      check_keys(*it, s, p);
    }
  }
}

template <class T>
T read(const json& j, const std::string& key, const std::string& path) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError((path.empty() ? key : path + "." + key) + ": " + e.what());
  }
}

RunManifest defaults_for(const std::string& name, std::uint64_t seed) {
  RunManifest m;
  const CaseSpec cs = make_case(name, seed);
  m.case_name = name;
  m.seed = seed;
  m.cells = cs.cells;
  m.config = default_config(cs);
  return m;
}

}  // namespace

json to_json(const RunManifest& m) {
  const SolverConfig& c = m.config;
  json j;
  j["case"] = m.case_name;
  j["cells"] = std::vector<int>(m.cells.begin(), m.cells.begin() + c.dim);
  j["seed"] = m.seed;
  j["out"] = m.out_dir;
  j["snapshots"] = m.snapshots;
  j["version"] = m.version;
  j["flux"] = c.flux == FluxMode::EC ? "ec" : "es";
  j["w"] = c.w;
  j["weights"] = {c.weights.chi[0], c.weights.chi[1], c.weights.chi[2]};
  j["weno_eps"] = c.weights.eps;
  j["mesh"] = c.mesh == MeshMode::Uniform ? "uniform" : c.mesh == MeshMode::Moving ? "moving" : "prescribed";
  j["cfl"] = c.cfl;
  j["t_end"] = c.t_end;
  j["accuracy_dt"] = c.accuracy_dt;
  j["gcl_check"] = c.gcl_check;
  j["max_steps"] = c.max_steps;
  j["output_times"] = c.output_times;
  j["jacobi_iterations"] = c.move.iterations;
  j["floors"] = {{"density", c.floors.density}, {"temperature", c.floors.temperature}};
  json terms = json::array();
  for (const auto& t : c.monitor.terms) terms.push_back(term_json(t));
  j["monitor"] = {{"squared", c.monitor.squared}, {"filter_passes", c.monitor.filter_passes}, {"terms", terms}};
  json b = json::object();
  for (int d = 0; d < c.dim; ++d)
    for (int s = 0; s < 2; ++s) {
      const FaceBc& f = c.bc[d][s];
      b[kFaceNames[d][s]] = {{"type", bc_name(f.type)}, {"state", f.inflow ? state_json(*f.inflow) : json(nullptr)}};
    }
  j["boundaries"] = b;
  return j;
}

RunManifest manifest_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  if (!j.contains("case")) throw ConfigError("case: required");
  const std::string name = read<std::string>(j, "case", "");
  const std::uint64_t seed = j.contains("seed") ? read<std::uint64_t>(j, "seed", "") : 0;
  RunManifest m = defaults_for(name, seed);
  check_keys(j, to_json(m), "");
  SolverConfig& c = m.config;
  const CaseSpec cs = make_case(name, seed);

  if (j.contains("cells")) {
    const auto v = read<std::vector<int>>(j, "cells", "");
    if (static_cast<int>(v.size()) != c.dim)
      throw ConfigError("cells: expected " + std::to_string(c.dim) + " entries");
    for (int d = 0; d < c.dim; ++d) m.cells[d] = v[d];
  }
  if (j.contains("out")) m.out_dir = read<std::string>(j, "out", "");
  if (j.contains("snapshots")) m.snapshots = read<int>(j, "snapshots", "");
  if (j.contains("version")) m.version = read<std::string>(j, "version", "");
  if (j.contains("flux")) {
    const auto f = read<std::string>(j, "flux", "");
    if (f != "ec" && f != "es") throw ConfigError("flux: expected 'ec' or 'es'");
    c.flux = f == "ec" ? FluxMode::EC : FluxMode::ES;
  }
  if (j.contains("w")) c.w = read<int>(j, "w", "");
  if (j.contains("weights")) {
    const auto v = read<std::vector<double>>(j, "weights", "");
    if (v.size() != 3) throw ConfigError("weights: expected 3 entries");
    for (int q = 0; q < 3; ++q) c.weights.chi[q] = v[q];
  }
  if (j.contains("weno_eps")) c.weights.eps = read<double>(j, "weno_eps", "");
  if (j.contains("mesh")) {
    const auto s = read<std::string>(j, "mesh", "");
    if (s == "uniform") c.mesh = MeshMode::Uniform;
    else if (s == "moving") c.mesh = MeshMode::Moving;
    else if (s == "prescribed") c.mesh = MeshMode::Prescribed;
    else throw ConfigError("mesh: expected uniform, moving or prescribed");
  }
  if (j.contains("cfl")) c.cfl = read<double>(j, "cfl", "");
  if (j.contains("t_end")) c.t_end = read<double>(j, "t_end", "");
  if (j.contains("accuracy_dt")) c.accuracy_dt = read<bool>(j, "accuracy_dt", "");
  if (j.contains("gcl_check")) c.gcl_check = read<bool>(j, "gcl_check", "");
  if (j.contains("max_steps")) c.max_steps = read<long>(j, "max_steps", "");
  if (j.contains("output_times")) c.output_times = read<std::vector<double>>(j, "output_times", "");
  if (j.contains("jacobi_iterations")) c.move.iterations = read<int>(j, "jacobi_iterations", "");
  if (j.contains("floors")) {
    const json& f = j["floors"];
    if (f.contains("density")) c.floors.density = read<double>(f, "density", "floors");
    if (f.contains("temperature")) c.floors.temperature = read<double>(f, "temperature", "floors");
  }
  if (j.contains("monitor")) {
    const json& mo = j["monitor"];
    if (mo.contains("squared")) c.monitor.squared = read<bool>(mo, "squared", "monitor");
    if (mo.contains("filter_passes")) c.monitor.filter_passes = read<int>(mo, "filter_passes", "monitor");
    if (mo.contains("terms")) {
      c.monitor.terms.clear();
      int q = 0;
      for (const auto& t : mo["terms"]) {
        const std::string p = "monitor.terms[" + std::to_string(q++) + "]";
        MonitorTerm term;
        if (t.contains("quantity")) term.quantity = read<std::string>(t, "quantity", p);
        if (t.contains("alpha")) term.alpha = read<double>(t, "alpha", p);
        if (t.contains("kind")) {
          const auto k = read<std::string>(t, "kind", p);
          if (k == "gradient") term.kind = DerivativeKind::Gradient;
          else if (k == "laplacian") term.kind = DerivativeKind::Laplacian;
          else throw ConfigError(p + ".kind: expected gradient or laplacian");
        }
        c.monitor.terms.push_back(term);
      }
    }
  }
  if (j.contains("boundaries")) {
    const json& b = j["boundaries"];
    for (int d = 0; d < c.dim; ++d)
      for (int s = 0; s < 2; ++s) {
        const std::string face = kFaceNames[d][s];
        if (!b.contains(face)) continue;
        const json& f = b[face];
        const std::string p = "boundaries." + face;
        if (f.contains("type")) c.bc[d][s].type = bc_from(read<std::string>(f, "type", p), p);
        if (f.contains("state")) {
          if (f["state"].is_null()) {
            c.bc[d][s].inflow.reset();
          } else {
            const json& st = f["state"];
            const std::string sp = p + ".state";
            try {
              c.bc[d][s].inflow = make_primitive(read<std::vector<double>>(st, "rho", sp),
                                                 read<std::vector<double>>(st, "v", sp), read<double>(st, "p", sp),
                                                 cs.eos);
            } catch (const AdmissibilityError& e) {
              throw ConfigError(sp + ": " + e.what());
            }
          }
        }
        if (c.bc[d][s].type == BcType::Inflow && !c.bc[d][s].inflow)
          throw ConfigError(p + ": inflow face needs a state");
      }
  }
  c.validate(m.cells);
  return m;
}

RunManifest parse_config(const std::string& path, const json& overrides) {
  json j = json::object();
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw ConfigError(path + ": " + e.what());
    }
  }
  j.merge_patch(overrides);
  return manifest_from_json(j);
}

CaseSpec resolved_case(const RunManifest& m) {
  CaseSpec cs = make_case(m.case_name, m.seed);
  cs.cells = m.cells;
  cs.bc = m.config.bc;
  return cs;
}

std::string format_shortest(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string format_fixed17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

Snapshot snapshot_of(const Solver& s) {
  const Lattice& lat = s.lattice();
  const int ns = s.eos().nspecies();
  Snapshot snap;
  snap.lat = lat;
  const long n = lat.nodes();
  std::vector<std::vector<double>> rho(ns), sc(5);
  std::vector<double> vel;
  vel.reserve(3 * n);
  const Field phi = s.schlieren();
  const Field& theta = s.monitor_field();
  for_interior(lat, [&](int i, int j, int k) {
    const double* x = s.mesh().x.at(i, j, k);
    for (int d = 0; d < lat.dim; ++d) snap.x.push_back(x[d]);
    const Primitive w = s.primitive_at(i, j, k);
    for (int l = 0; l < ns; ++l) rho[l].push_back(w.rho[l]);
    sc[0].push_back(w.density());
    sc[1].push_back(w.p);
    sc[2].push_back(w.T);
    sc[3].push_back(phi(i, j, k, 0));
    sc[4].push_back(theta(i, j, k, 0));
    for (int d = 0; d < 3; ++d) vel.push_back(d < lat.dim ? w.v[d] : 0.0);
  });
  for (int l = 0; l < ns; ++l) snap.scalars.emplace_back("rho" + std::to_string(l + 1), rho[l]);
  const char* names[5] = {"rho", "p", "T", "Phi", "Theta"};
  for (int q = 0; q < 5; ++q) snap.scalars.emplace_back(names[q], sc[q]);
  std::vector<double> J;
  for_interior(lat, [&](int i, int j, int k) { J.push_back(s.J()(i, j, k, 0)); });
  snap.scalars.emplace_back("J", J);
  snap.vectors.emplace_back("v", vel);
  return snap;
}

std::string vtk_text(const Snapshot& snap, const std::string& title) {
  const Lattice& lat = snap.lat;
  const long n = lat.nodes();
  const int dim = lat.dim;
  std::ostringstream o;
  o << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET STRUCTURED_GRID\n";
  o << "DIMENSIONS " << lat.n[0] << ' ' << lat.n[1] << ' ' << (dim == 3 ? lat.n[2] : 1) << '\n';
  o << "POINTS " << n << " double\n";
  for (long p = 0; p < n; ++p) {
    for (int d = 0; d < 3; ++d) {
      if (d) o << ' ';
      o << format_fixed17(d < dim ? snap.x[p * dim + d] : 0.0);
    }
    o << '\n';
  }
  o << "POINT_DATA " << n << '\n';
  for (const auto& [name, v] : snap.scalars) {
    o << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (double x : v) o << format_fixed17(x) << '\n';
  }
  for (const auto& [name, v] : snap.vectors) {
    o << "VECTORS " << name << " double\n";
    for (long p = 0; p < n; ++p)
      o << format_fixed17(v[3 * p]) << ' ' << format_fixed17(v[3 * p + 1]) << ' ' << format_fixed17(v[3 * p + 2])
        << '\n';
  }
  return o.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

void write_vtk(const std::filesystem::path& path, const Snapshot& snap, const std::string& title) {
  write_text(path, vtk_text(snap, title));
}

namespace {

// Newton inversion of the d-linear map of one cell; true if the point lies inside.
bool invert_cell(const std::vector<Point3>& corners, int dim, const Point3& P, std::array<double, 3>& s) {
  const int nc = 1 << dim;
  s = {0.5, 0.5, 0.5};
  for (int it = 0; it < 30; ++it) {
    Eigen::Vector3d X = Eigen::Vector3d::Zero();
    Eigen::Matrix3d D = Eigen::Matrix3d::Zero();
    for (int c = 0; c < nc; ++c) {
      double wgt = 1.0;
      std::array<double, 3> dw{1.0, 1.0, 1.0};
      for (int d = 0; d < dim; ++d) {
        const bool hi = (c >> d) & 1;
        const double f = hi ? s[d] : 1.0 - s[d];
        wgt *= f;
        for (int e = 0; e < dim; ++e) dw[e] *= e == d ? (hi ? 1.0 : -1.0) : f;
      }
      for (int q = 0; q < dim; ++q) {
        X[q] += wgt * corners[c][q];
        for (int e = 0; e < dim; ++e) D(q, e) += dw[e] * corners[c][q];
      }
    }
    Eigen::Vector3d r = Eigen::Vector3d::Zero();
    for (int q = 0; q < dim; ++q) r[q] = P[q] - X[q];
    if (dim == 2) D(2, 2) = 1.0;
    const Eigen::Vector3d ds = D.partialPivLu().solve(r);
    double step = 0.0;
    for (int d = 0; d < dim; ++d) {
      s[d] += ds[d];
      step = std::max(step, std::abs(ds[d]));
    }
    if (step < 1e-13) break;
  }
  for (int d = 0; d < dim; ++d)
    if (s[d] < -1e-9 || s[d] > 1.0 + 1e-9) return false;
  return true;
}

}  // namespace

CutTable line_cut(const Solver& s, const LineCut& cut) {
  const Lattice& lat = s.lattice();
  const int dim = lat.dim, ns = s.eos().nspecies();
  CutTable t;
  t.columns.push_back("s");
  for (int d = 0; d < dim; ++d) t.columns.push_back("x" + std::to_string(d + 1));
  t.columns.push_back("rho");
  for (int l = 0; l < ns; ++l) t.columns.push_back("rho" + std::to_string(l + 1));
  for (int d = 0; d < dim; ++d) t.columns.push_back("v" + std::to_string(d + 1));
  t.columns.push_back("p");
  t.columns.push_back("T");

  const Field U = s.current_state();
  Index3 ncell{1, 1, 1};
  for (int d = 0; d < dim; ++d) ncell[d] = lat.periodic[d] ? lat.n[d] : lat.n[d] - 1;
  const int nc = 1 << dim;
  double len = 0.0;
  for (int d = 0; d < dim; ++d) len += (cut.b[d] - cut.a[d]) * (cut.b[d] - cut.a[d]);
  len = std::sqrt(len);
  const int m = std::max(cut.samples, 2);
  std::vector<Point3> corners(nc);
  std::vector<Index3> cidx(nc);
  for (int q = 0; q < m; ++q) {
    const double f = static_cast<double>(q) / (m - 1);
    Point3 P{0, 0, 0};
    for (int d = 0; d < dim; ++d) P[d] = cut.a[d] + f * (cut.b[d] - cut.a[d]);
    bool found = false;
    for (int k = 0; k < ncell[2] && !found; ++k)
      for (int j = 0; j < ncell[1] && !found; ++j)
        for (int i = 0; i < ncell[0] && !found; ++i) {
          Point3 lo{1e300, 1e300, 1e300}, hi{-1e300, -1e300, -1e300};
          for (int c = 0; c < nc; ++c) {
            cidx[c] = {i + (c & 1), j + ((c >> 1) & 1), k + ((c >> 2) & 1)};
            const double* x = s.mesh().x.at(cidx[c]);
            for (int d = 0; d < dim; ++d) {
              corners[c][d] = x[d];
              lo[d] = std::min(lo[d], x[d]);
              hi[d] = std::max(hi[d], x[d]);
            }
          }
          bool inbox = true;
          for (int d = 0; d < dim; ++d)
            if (P[d] < lo[d] - 1e-12 || P[d] > hi[d] + 1e-12) inbox = false;
          if (!inbox) continue;
          std::array<double, 3> sl;
          if (!invert_cell(corners, dim, P, sl)) continue;
          found = true;
          std::vector<double> acc(1 + ns + dim + 2, 0.0);
          for (int c = 0; c < nc; ++c) {
            double wgt = 1.0;
            for (int d = 0; d < dim; ++d) wgt *= ((c >> d) & 1) ? sl[d] : 1.0 - sl[d];
            Conserved u(U.ncomp());
            for (int q2 = 0; q2 < U.ncomp(); ++q2) u[q2] = U.at(cidx[c])[q2];
            const Primitive w = cons_to_prim(u, s.eos());
            acc[0] += wgt * w.density();
            for (int l = 0; l < ns; ++l) acc[1 + l] += wgt * w.rho[l];
            for (int d = 0; d < dim; ++d) acc[1 + ns + d] += wgt * w.v[d];
            acc[1 + ns + dim] += wgt * w.p;
            acc[2 + ns + dim] += wgt * w.T;
          }
          std::vector<double> row{f * len};
          for (int d = 0; d < dim; ++d) row.push_back(P[d]);
          row.insert(row.end(), acc.begin(), acc.end());
          t.rows.push_back(std::move(row));
        }
  }
  return t;
}

void write_csv(const std::filesystem::path& path, const CutTable& t) {
  std::string o;
  for (size_t c = 0; c < t.columns.size(); ++c) o += (c ? "," : "") + t.columns[c];
  o += '\n';
  for (const auto& r : t.rows) {
    for (size_t c = 0; c < r.size(); ++c) {
      if (c) o += ',';
      o += format_shortest(r[c]);
    }
    o += '\n';
  }
  write_text(path, o);
}

CutTable entropy_table(const Diagnostics& d) {
  CutTable t;
  t.columns = {"step", "t", "dt", "entropy", "outflow", "balance", "min_rho", "min_p_plus_pinf", "min_J", "dtau", "scl"};
  for (const auto& r : d.steps)
    t.rows.push_back({static_cast<double>(r.step), r.t, r.dt, r.entropy, r.entropy_outflow, r.balance(), r.min_rho,
                      r.min_pp, r.min_J, r.dtau, r.scl});
  return t;
}

std::vector<ConvergenceRow> convergence_table(const std::vector<std::pair<int, ErrorNorms>>& runs) {
  std::vector<ConvergenceRow> rows;
  for (size_t q = 0; q < runs.size(); ++q) {
    ConvergenceRow r;
    r.n = runs[q].first;
    r.err = runs[q].second;
    r.order_l1 = r.order_linf = std::nan("");
    if (q > 0) {
      const double ratio = std::log(static_cast<double>(r.n) / runs[q - 1].first);
      r.order_l1 = std::log(runs[q - 1].second.l1 / r.err.l1) / ratio;
      r.order_linf = std::log(runs[q - 1].second.linf / r.err.linf) / ratio;
    }
    rows.push_back(r);
  }
  return rows;
}

std::string convergence_text(const std::vector<ConvergenceRow>& rows) {
  std::ostringstream o;
  o << "n,l1,order_l1,linf,order_linf\n";
  for (const auto& r : rows)
    o << r.n << ',' << format_shortest(r.err.l1) << ',' << (std::isnan(r.order_l1) ? "" : format_shortest(r.order_l1))
      << ',' << format_shortest(r.err.linf) << ',' << (std::isnan(r.order_linf) ? "" : format_shortest(r.order_linf))
      << '\n';
  return o.str();
}

}  // namespace esmm
