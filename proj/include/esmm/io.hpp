#pragma once

#include "esmm/solver.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace esmm {

inline constexpr const char* kVersion = "0.3.1";

/// Fully resolved description of one run; serialized next to its outputs.
struct RunManifest {
  std::string case_name;
  Index3 cells{0, 0, 0};
  std::uint64_t seed = 0;
  std::string out_dir = "out";
  int snapshots = 0;  // evenly spaced field outputs, besides the final one
  SolverConfig config;
  std::string version = kVersion;
};

nlohmann::json to_json(const RunManifest& m);
/// Missing keys keep the case defaults; unknown keys raise ConfigError with their path.
RunManifest manifest_from_json(const nlohmann::json& j);
/// case defaults, then the file, then the overrides (flags win)
RunManifest parse_config(const std::string& path, const nlohmann::json& overrides);
CaseSpec resolved_case(const RunManifest& m);

// writers; all formatting is local to the call

std::string format_shortest(double v);
std::string format_fixed17(double v);

struct Snapshot {
  Lattice lat;
  std::vector<double> x;  // dim per node, interior only
  std::vector<std::pair<std::string, std::vector<double>>> scalars;
  std::vector<std::pair<std::string, std::vector<double>>> vectors;  // 3 per node
};

Snapshot snapshot_of(const Solver& s);
std::string vtk_text(const Snapshot& snap, const std::string& title);
void write_vtk(const std::filesystem::path& path, const Snapshot& snap, const std::string& title);

struct CutTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};
/// Samples along a segment by inverting the d-linear cell maps; points outside are skipped.
CutTable line_cut(const Solver& s, const LineCut& cut);
void write_csv(const std::filesystem::path& path, const CutTable& t);
CutTable entropy_table(const Diagnostics& d);

struct ConvergenceRow {
  int n = 0;
  ErrorNorms err;
  double order_l1 = 0.0;  // NaN on the first row
  double order_linf = 0.0;
};
std::vector<ConvergenceRow> convergence_table(const std::vector<std::pair<int, ErrorNorms>>& runs);
std::string convergence_text(const std::vector<ConvergenceRow>& rows);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace esmm
