#pragma once

#include "esmm/solver.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace esmm {

std::vector<std::string> case_names();
/// seed only matters for the randomized free-stream meshes
CaseSpec make_case(const std::string& name, std::uint64_t seed = 0);
/// Solver config carrying the case's boundaries, monitor, weights, CFL and end time.
SolverConfig default_config(const CaseSpec& cs);

/// Vortex translation speed for the 3D diagonal vortex.
Point3 vortex3d_drift();

}  // namespace esmm
