#include <doctest.h>

#include "esmm/cases.hpp"
#include "esmm/io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace esmm;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("esmm_cli_io_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string config_error(const json& j) {
  try {
    manifest_from_json(j);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

// short riemann1 run on a coarse moving mesh
RunManifest small_run() {
  return manifest_from_json({{"case", "riemann1"}, {"cells", {16, 16}}, {"t_end", 0.05}, {"max_steps", 6}});
}

}  // namespace

TEST_SUITE("cli_io") {
  TEST_CASE("vortex flags resolve to the case defaults") {
    const RunManifest m =
        parse_config("", {{"case", "vortex2d"}, {"cells", {80, 80}}, {"flux", "es"}, {"mesh", "moving"}});
    CHECK(m.cells[0] == 80);
    CHECK(m.cells[1] == 80);
    CHECK(m.config.flux == FluxMode::ES);
    CHECK(m.config.mesh == MeshMode::Moving);
    CHECK(m.version == kVersion);
    const CaseSpec cs = resolved_case(m);
    CHECK(cs.lo[0] == -10.0);
    CHECK(cs.lo[1] == -10.0);
    CHECK(cs.hi[0] == 10.0);
    CHECK(cs.hi[1] == 10.0);
    for (int d = 0; d < 2; ++d)
      for (int s = 0; s < 2; ++s) CHECK(m.config.bc[d][s].type == BcType::Periodic);
    // vortex strength 5 at the centre (−2,−2)
    const double Tc = 1.0 - 25.0 / (8.0 * 1.4 * M_PI * M_PI) * std::exp(1.0);
    const Primitive w = cs.initial({-2.0, -2.0, 0.0});
    CHECK(w.T == doctest::Approx(Tc).epsilon(1e-14));
    CHECK(w.rho[0] == doctest::Approx(std::pow(Tc, 2.5)).epsilon(1e-14));
    CHECK(w.v[0] == doctest::Approx(1.0));
  }

  TEST_CASE("flags beat the file, the file beats the defaults") {
    const fs::path dir = scratch("precedence");
    const fs::path file = dir / "cfg.json";
    {
      std::ofstream o(file);
      o << json{{"case", "riemann1"}, {"cfl", 0.3}, {"w", 2}}.dump();
    }
    const RunManifest def = parse_config("", {{"case", "riemann1"}});
    const RunManifest from_file = parse_config(file.string(), json::object());
    CHECK(from_file.config.cfl == 0.3);
    CHECK(from_file.config.w == 2);
    CHECK(from_file.config.t_end == def.config.t_end);
    const RunManifest flagged = parse_config(file.string(), {{"cfl", 0.2}});
    CHECK(flagged.config.cfl == 0.2);
    CHECK(flagged.config.w == 2);
    // nested patch keeps siblings
    const RunManifest nested = parse_config(file.string(), {{"floors", {{"density", 1e-9}}}});
    CHECK(nested.config.floors.density == 1e-9);
    CHECK(nested.config.floors.temperature == def.config.floors.temperature);
    CHECK_THROWS_AS(parse_config((dir / "missing.json").string(), json::object()), ConfigError);
  }

  TEST_CASE("schema violations carry the key path") {
    CHECK(config_error({{"case", "vortex2d"}, {"cfll", 0.1}}).find("cfll") != std::string::npos);
    CHECK(config_error({{"case", "vortex2d"}, {"monitor", {{"bogus", 1}}}}).find("monitor.bogus") !=
          std::string::npos);
    CHECK(config_error({{"case", "vortex2d"}, {"monitor", {{"terms", {{{"alpha", 1}, {"kind2", "x"}}}}}}})
              .find("monitor.terms[0].kind2") != std::string::npos);
    CHECK(config_error({{"case", "vortex2d"}, {"cfl", "big"}}).find("cfl") != std::string::npos);
    CHECK(config_error({{"case", "vortex2d"}, {"cells", {10, 10, 10}}}).find("cells") != std::string::npos);
    CHECK(config_error({{"case", "vortex2d"}, {"flux", "upwind"}}).find("flux") != std::string::npos);
    CHECK(config_error({{"cfl", 0.1}}).find("case") != std::string::npos);
    CHECK_THROWS(manifest_from_json({{"case", "no_such_case"}}));
  }

  TEST_CASE("inflow face without a state is named") {
    const std::string e =
        config_error({{"case", "riemann1"}, {"boundaries", {{"x1_lo", {{"type", "inflow"}}}}}});
    CHECK(e.find("x1_lo") != std::string::npos);
    const std::string e2 = config_error(
        {{"case", "shockbubble2d"}, {"boundaries", {{"x1_hi", {{"type", "inflow"}, {"state", nullptr}}}}}});
    CHECK(e2.find("x1_hi") != std::string::npos);
    // with a state it is accepted
    const RunManifest m = manifest_from_json(
        {{"case", "riemann1"},
         {"boundaries", {{"x1_lo", {{"type", "inflow"}, {"state", {{"rho", {1.0}}, {"v", {0.1, 0.0}}, {"p", 1.0}}}}}}}});
    REQUIRE(m.config.bc[0][0].inflow);
    CHECK(m.config.bc[0][0].inflow->v[0] == 0.1);
  }

  TEST_CASE("manifest round trip is exact") {
    for (const auto& name : case_names()) {
      const RunManifest m = manifest_from_json({{"case", name}, {"seed", 7}});
      const json j = to_json(m);
      const json j2 = to_json(manifest_from_json(j));
      CHECK_MESSAGE(j == j2, name);
      // textual form reparses to the same document
      CHECK(json::parse(j.dump()) == j);
    }
  }

  TEST_CASE("float formatting") {
    CHECK(format_shortest(0.1) == "0.1");
    CHECK(format_shortest(1e-300) == "1e-300");
    CHECK(format_shortest(-2.5) == "-2.5");
    CHECK(std::stod(format_shortest(1.0 / 3.0)) == 1.0 / 3.0);
    CHECK(format_fixed17(1.0) == "1.0000000000000000e+00");
    CHECK(format_fixed17(-0.1) == "-1.0000000000000001e-01");
    CHECK(std::stod(format_fixed17(2.0 / 3.0)) == 2.0 / 3.0);
  }

  TEST_CASE("identity 2x2 snapshot matches the golden file") {
    Snapshot snap;
    snap.lat = Lattice::from_cells(2, {1, 1, 1}, {false, false, false}, {0, 0, 0});
    snap.x = {0, 0, 1, 0, 0, 1, 1, 1};
    snap.scalars.emplace_back("rho1", std::vector<double>{1.0, 0.5, 0.25, 0.125});
    snap.vectors.emplace_back("v", std::vector<double>{1, 0, 0, 0, 1, 0, 0, 0, 0, -1, 2, 0});
    const std::string golden =
        "# vtk DataFile Version 3.0\n"
        "golden\n"
        "ASCII\n"
        "DATASET STRUCTURED_GRID\n"
        "DIMENSIONS 2 2 1\n"
        "POINTS 4 double\n"
        "0.0000000000000000e+00 0.0000000000000000e+00 0.0000000000000000e+00\n"
        "1.0000000000000000e+00 0.0000000000000000e+00 0.0000000000000000e+00\n"
        "0.0000000000000000e+00 1.0000000000000000e+00 0.0000000000000000e+00\n"
        "1.0000000000000000e+00 1.0000000000000000e+00 0.0000000000000000e+00\n"
        "POINT_DATA 4\n"
        "SCALARS rho1 double 1\n"
        "LOOKUP_TABLE default\n"
        "1.0000000000000000e+00\n"
        "5.0000000000000000e-01\n"
        "2.5000000000000000e-01\n"
        "1.2500000000000000e-01\n"
        "VECTORS v double\n"
        "1.0000000000000000e+00 0.0000000000000000e+00 0.0000000000000000e+00\n"
        "0.0000000000000000e+00 1.0000000000000000e+00 0.0000000000000000e+00\n"
        "0.0000000000000000e+00 0.0000000000000000e+00 0.0000000000000000e+00\n"
        "-1.0000000000000000e+00 2.0000000000000000e+00 0.0000000000000000e+00\n";
    CHECK(vtk_text(snap, "golden") == golden);
    const fs::path dir = scratch("vtk");
    write_vtk(dir / "a.vtk", snap, "golden");
    CHECK(slurp(dir / "a.vtk") == golden);
    CHECK_THROWS_AS(write_vtk(dir / "a.vtk" / "nested.vtk", snap, "golden"), Error);
  }

  TEST_CASE("solver snapshot carries every field") {
    const RunManifest m = small_run();
    Solver s(resolved_case(m), m.config);
    const Snapshot snap = snapshot_of(s);
    CHECK(snap.x.size() == static_cast<size_t>(2 * snap.lat.nodes()));
    std::vector<std::string> names;
    for (const auto& [n, v] : snap.scalars) {
      names.push_back(n);
      CHECK(v.size() == static_cast<size_t>(snap.lat.nodes()));
    }
    for (const char* want : {"rho1", "rho", "p", "T", "Phi", "Theta", "J"})
      CHECK(std::find(names.begin(), names.end(), want) != names.end());
    REQUIRE(snap.vectors.size() == 1);
    CHECK(snap.vectors[0].second.size() == static_cast<size_t>(3 * snap.lat.nodes()));
    const std::string text = vtk_text(snap, "riemann1");
    CHECK(text == vtk_text(snap, "riemann1"));
  }

  TEST_CASE("line cut along the diagonal") {
    const RunManifest m = small_run();
    Solver s(resolved_case(m), m.config);
    const CaseSpec& cs = s.case_spec();
    LineCut cut;
    cut.a = cs.lo;
    cut.b = cs.hi;
    cut.samples = 33;
    const CutTable t = line_cut(s, cut);
    CHECK(t.columns.front() == "s");
    CHECK(t.rows.size() == 33);
    const double len = std::hypot(cs.hi[0] - cs.lo[0], cs.hi[1] - cs.lo[1]);
    for (size_t q = 1; q < t.rows.size(); ++q) CHECK(t.rows[q][0] > t.rows[q - 1][0]);
    CHECK(t.rows.back()[0] == doctest::Approx(len));
    // piecewise-constant initial data: corner values are recovered
    const Primitive w0 = cs.initial(cs.lo);
    CHECK(t.rows.front()[3] == doctest::Approx(w0.density()).epsilon(1e-12));
    const fs::path dir = scratch("cut");
    write_csv(dir / "cut.csv", t);
    std::ifstream in(dir / "cut.csv");
    std::string header, line;
    std::getline(in, header);
    CHECK(header.rfind("s,x1,x2,rho", 0) == 0);
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 33);
    // outside the domain: skipped
    LineCut out;
    out.a = {cs.hi[0] + 1, cs.hi[1] + 1, 0};
    out.b = {cs.hi[0] + 2, cs.hi[1] + 2, 0};
    CHECK(line_cut(s, out).rows.empty());
  }

  TEST_CASE("entropy history csv has increasing time") {
    const RunManifest m = small_run();
    Solver s(resolved_case(m), m.config);
    const Diagnostics d = s.run();
    const CutTable t = entropy_table(d);
    REQUIRE(t.rows.size() >= 3);
    CHECK(t.columns[1] == "t");
    CHECK(t.columns[3] == "entropy");
    for (size_t q = 1; q < t.rows.size(); ++q) CHECK(t.rows[q][1] > t.rows[q - 1][1]);
    const fs::path dir = scratch("entropy");
    write_csv(dir / "entropy.csv", t);
    std::ifstream in(dir / "entropy.csv");
    std::string line;
    std::getline(in, line);
    size_t q = 0;
    while (std::getline(in, line)) {
      std::stringstream ss(line);
      std::string cell;
      std::vector<double> vals;
      while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
      REQUIRE(q < t.rows.size());
      // shortest formatting round-trips
      CHECK(vals == t.rows[q]);
      ++q;
    }
    CHECK(q == t.rows.size());
  }

  TEST_CASE("convergence table orders") {
    const auto rows = convergence_table({{20, {1.0, 2.0}}, {40, {1.0 / 32, 0.25}}, {80, {1.0 / 1024, 1.0 / 32}}});
    REQUIRE(rows.size() == 3);
    CHECK(std::isnan(rows[0].order_l1));
    CHECK(rows[1].order_l1 == doctest::Approx(5.0).epsilon(1e-14));
    CHECK(rows[2].order_l1 == doctest::Approx(5.0).epsilon(1e-14));
    CHECK(rows[1].order_linf == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(rows[2].order_linf == doctest::Approx(3.0).epsilon(1e-14));
    // ratio formula on arbitrary numbers
    const auto r2 = convergence_table({{16, {3e-3, 7e-2}}, {32, {1.1e-4, 9e-3}}});
    CHECK(r2[1].order_l1 == doctest::Approx(std::log2(3e-3 / 1.1e-4)).epsilon(1e-14));
    CHECK(r2[1].order_linf == doctest::Approx(std::log2(7e-2 / 9e-3)).epsilon(1e-14));
    const std::string text = convergence_text(rows);
    CHECK(text.rfind("n,l1,order_l1,linf,order_linf\n20,1,,2,\n40,0.03125,5,0.25,3\n", 0) == 0);
  }

  TEST_CASE("exactly representable solution gives zero error rows") {
    // constant state as initial data and exact solution
    std::vector<std::pair<int, ErrorNorms>> runs;
    for (int n : {8, 16}) {
      CaseSpec cs = make_case("vortex2d");
      const EosSpec eos = cs.eos;
      cs.initial = [eos](const Point3&) { return make_primitive({1.0}, {1.0, 1.0}, 1.0, eos); };
      cs.exact = [eos](const Point3&, double) { return make_primitive({1.0}, {1.0, 1.0}, 1.0, eos); };
      cs.cells = {n, n, 1};
      SolverConfig cfg = default_config(cs);
      cfg.mesh = MeshMode::Uniform;
      Solver s(cs, cfg);
      for (int q = 0; q < 3; ++q) s.step_ssprk3(0.1);
      runs.push_back({n, s.density_error()});
    }
    const auto rows = convergence_table(runs);
    for (const auto& r : rows) {
      CHECK(r.err.l1 == 0.0);
      CHECK(r.err.linf == 0.0);
    }
    // a case without an analytic solution cannot be tabulated
    const RunManifest m = small_run();
    Solver s(resolved_case(m), m.config);
    CHECK_THROWS(s.density_error());
  }

  TEST_CASE("rerun from the serialized manifest is bit-identical") {
    const RunManifest m = small_run();
    const RunManifest back = manifest_from_json(json::parse(to_json(m).dump()));
    Solver a(resolved_case(m), m.config);
    Solver b(resolved_case(back), back.config);
    const Diagnostics da = a.run();
    const Diagnostics db = b.run();
    CHECK(a.steps() == b.steps());
    CHECK(a.time() == b.time());
    CHECK(a.JU().data() == b.JU().data());
    CHECK(a.J().data() == b.J().data());
    CHECK(a.mesh().x.data() == b.mesh().x.data());
    REQUIRE(da.steps.size() == db.steps.size());
    for (size_t q = 0; q < da.steps.size(); ++q) CHECK(da.steps[q].entropy == db.steps[q].entropy);
    CHECK(vtk_text(snapshot_of(a), "r") == vtk_text(snapshot_of(b), "r"));
  }
}
