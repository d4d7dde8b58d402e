#include "esmm/cases.hpp"
#include "esmm/io.hpp"
#include "esmm/selfcheck.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

using namespace esmm;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct RunFlags {
  std::string case_name, config, scheme, mesh, weights, out;
  int n = 0, n2 = 0, n3 = 0, w = 0, snapshots = -1;
  double cfl = 0.0, tend = -1.0;
  bool accuracy_dt = false, gcl_check = false;
  long max_steps = -1;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

json overrides_from(const RunFlags& f, CLI::App& run) {
  json o = json::object();
  if (!f.case_name.empty()) o["case"] = f.case_name;
  if (run.count("--seed")) o["seed"] = f.seed;
  if (f.n > 0) {
    // dimension comes from the case; resolve it first
    std::string name = f.case_name;
    if (name.empty() && !f.config.empty()) {
      std::ifstream in(f.config);
      json j;
      in >> j;
      name = j.value("case", "");
    }
    const int dim = make_case(name).dim;
    std::vector<int> cells{f.n, f.n2 > 0 ? f.n2 : f.n};
    if (dim == 3) cells.push_back(f.n3 > 0 ? f.n3 : f.n);
    o["cells"] = cells;
  }
  if (!f.scheme.empty()) o["flux"] = f.scheme;
  if (!f.mesh.empty()) o["mesh"] = f.mesh;
  if (f.w > 0) o["w"] = f.w;
  if (f.cfl > 0.0) o["cfl"] = f.cfl;
  if (f.tend >= 0.0) o["t_end"] = f.tend;
  if (f.accuracy_dt) o["accuracy_dt"] = true;
  if (f.gcl_check) o["gcl_check"] = true;
  if (f.max_steps >= 0) o["max_steps"] = f.max_steps;
  if (f.snapshots >= 0) o["snapshots"] = f.snapshots;
  if (!f.out.empty()) o["out"] = f.out;
  if (!f.weights.empty()) {
    std::vector<double> chi;
    std::stringstream ss(f.weights);
    std::string tok;
    while (std::getline(ss, tok, ',')) chi.push_back(std::stod(tok));
    o["weights"] = chi;
  }
  return o;
}

std::string stamp(int q) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d", q);
  return buf;
}

int do_run(const RunFlags& f, CLI::App& run) {
  RunManifest m = parse_config(f.config, overrides_from(f, run));
  const CaseSpec cs = resolved_case(m);
  if (m.snapshots > 0 && m.config.output_times.empty())
    for (int q = 1; q <= m.snapshots; ++q) m.config.output_times.push_back(m.config.t_end * q / (m.snapshots + 1));
  const fs::path out = m.out_dir;
  fs::create_directories(out);
  write_text(out / "manifest.json", to_json(m).dump(2) + "\n");

  Solver s(cs, m.config);
  int frame = 0;
  const auto dump = [&](const Solver& sv, const std::string& tag) {
    write_vtk(out / ("field_" + tag + ".vtk"), snapshot_of(sv), cs.name + " t=" + format_shortest(sv.time()));
    for (size_t c = 0; c < cs.line_cuts.size(); ++c)
      write_csv(out / ("cut" + std::to_string(c) + "_" + tag + ".csv"), line_cut(sv, cs.line_cuts[c]));
  };
  std::printf("%s: %dx%d%s cells, %s %s mesh, w=%d, t_end=%g\n", cs.name.c_str(), cs.cells[0], cs.cells[1],
              cs.dim == 3 ? ("x" + std::to_string(cs.cells[2])).c_str() : "",
              m.config.flux == FluxMode::ES ? "ES" : "EC",
              m.config.mesh == MeshMode::Uniform ? "uniform" : m.config.mesh == MeshMode::Moving ? "moving" : "prescribed",
              m.config.w, m.config.t_end);
  Diagnostics d;
  d.entropy_scale = s.entropy_scale();
  try {
    d = s.run([&](const Solver& sv, const StepRecord& r, bool due) {
      d.steps.push_back(r);
      if (r.step % 100 == 0)
        std::printf("step %6ld  t=%.6e  dt=%.3e  entropy=%.12e  min rho=%.3e\n", r.step, r.t, r.dt, r.entropy,
                    r.min_rho);
      if (due) dump(sv, stamp(frame++));
    });
  } catch (const std::exception& e) {
    std::fprintf(stderr, "run aborted at t=%.9e: %s\n", s.time(), e.what());
    write_csv(out / "entropy.csv", entropy_table(d));
    dump(s, "last_good");
    write_text(out / "failure.json", json{{"time", s.time()}, {"step", s.steps()}, {"error", e.what()}}.dump(2) + "\n");
    return 2;
  }
  write_csv(out / "entropy.csv", entropy_table(d));
  if (cs.exact) {
    const ErrorNorms e = s.density_error();
    write_text(out / "errors.json",
               json{{"n", cs.cells[0]}, {"t", s.time()}, {"l1", e.l1}, {"linf", e.linf}}.dump(2) + "\n");
    std::printf("rho1 error: l1=%.6e linf=%.6e\n", e.l1, e.linf);
  }
  std::printf("done: %ld steps, t=%.9g\n", s.steps(), s.time());
  return 0;
}

int do_table(const std::vector<std::string>& dirs, const std::string& out) {
  std::vector<std::pair<int, ErrorNorms>> runs;
  for (const auto& d : dirs) {
    std::ifstream in(fs::path(d) / "errors.json");
    if (!in) throw Error("no errors.json in '" + d + "' (case without an analytic solution?)");
    json j;
    in >> j;
    runs.push_back({j.at("n").get<int>(), {j.at("l1").get<double>(), j.at("linf").get<double>()}});
  }
  std::sort(runs.begin(), runs.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  const std::string text = convergence_text(convergence_table(runs));
  std::cout << text;
  if (!out.empty()) write_text(out, text);
  return 0;
}

int do_verify(bool quick) {
  bool ok = true;
  for (const auto& r : property_suite(quick)) {
    std::printf("%-28s %s  %.3e (limit %.0e)\n", r.name.c_str(), r.pass ? "PASS" : "FAIL", r.value, r.limit);
    ok = ok && r.pass;
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"entropy stable moving mesh solver"};
  app.require_subcommand(1);

  RunFlags f;
  CLI::App* run = app.add_subcommand("run", "run a case");
  run->add_option("--case", f.case_name, "case name (see `esmm list`)");
  run->add_option("--config", f.config, "JSON config; flags override it")->check(CLI::ExistingFile);
  run->add_option("--n", f.n, "cells along x1 (and the other directions unless given)");
  run->add_option("--n2", f.n2);
  run->add_option("--n3", f.n3);
  run->add_option("--scheme", f.scheme)->check(CLI::IsMember({"ec", "es"}));
  run->add_option("--mesh", f.mesh)->check(CLI::IsMember({"uniform", "moving", "prescribed"}));
  run->add_option("--w", f.w)->check(CLI::Range(1, 3));
  run->add_option("--cfl", f.cfl);
  run->add_option("--tend", f.tend);
  run->add_option("--out", f.out);
  run->add_flag("--accuracy-dt", f.accuracy_dt);
  run->add_option("--weights", f.weights, "chi1,chi2,chi3");
  run->add_flag("--gcl-check", f.gcl_check);
  run->add_option("--max-steps", f.max_steps);
  run->add_option("--snapshots", f.snapshots);
  run->add_option("--seed", f.seed);

  std::vector<std::string> dirs;
  std::string table_out;
  CLI::App* table = app.add_subcommand("table", "convergence table from run directories");
  table->add_option("--dir", dirs)->required();
  table->add_option("--out", table_out);

  bool quick = false;
  CLI::App* verify = app.add_subcommand("verify", "property checks");
  verify->add_flag("--quick", quick);

  CLI::App* list = app.add_subcommand("list", "case catalog");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) {
      if (f.case_name.empty() && f.config.empty()) throw ConfigError("--case or --config is required");
      return do_run(f, *run);
    }
    if (*table) return do_table(dirs, table_out);
    if (*verify) return do_verify(quick);
    if (*list) {
      for (const auto& n : case_names()) std::printf("%-22s %s\n", n.c_str(), make_case(n).description.c_str());
      return 0;
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
