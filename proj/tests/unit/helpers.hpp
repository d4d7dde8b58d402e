#pragma once

#include "esmm/thermo.hpp"
#include "oracles/thermo_ref.hpp"

#include <random>
#include <string>
#include <vector>

namespace th {

struct EosCase {
  std::string name;
  esmm::EosSpec eos;
};

inline std::vector<EosCase> eos_cases() {
  using esmm::Species;
  return {
      {"ideal N=1", esmm::EosSpec({Species{1.4, 1.0, 0.0}})},
      {"stiff N=1", esmm::EosSpec({Species{3.0, 1.0, 1.0}})},
      {"ideal N=2", esmm::EosSpec({Species{1.4, 0.7175, 0.0}, Species{1.647, 2.439, 0.0}})},
      {"stiff N=2", esmm::EosSpec({Species{3.0, 1.0, 100.0}, Species{1.4, 1.0, 0.0}})},
  };
}

inline oracle::Mix mix_of(const esmm::EosSpec& e) {
  oracle::Mix m;
  for (int l = 0; l < e.nspecies(); ++l) m.s.push_back({e[l].gamma, e[l].cv, e[l].pinf});
  return m;
}

struct Rng {
  std::mt19937_64 g;
  explicit Rng(std::uint64_t seed) : g(seed) {}
  double uni(double a, double b) { return std::uniform_real_distribution<double>(a, b)(g); }
};

/// Admissible primitive state; pressures kept above −p∞ with margin.
inline esmm::Primitive random_prim(Rng& r, const esmm::EosSpec& eos, int dim) {
  std::vector<double> rho(eos.nspecies()), v(dim);
  for (auto& x : rho) x = r.uni(0.1, 3.0);
  for (auto& x : v) x = r.uni(-2.0, 2.0);
  const double p = -eos.pinf() + r.uni(0.2, 3.0) * (1.0 + eos.pinf());
  return esmm::make_primitive(rho, v, p, eos);
}

inline oracle::Vec to_ld(const esmm::Vec& v) {
  oracle::Vec o(v.size());
  for (int q = 0; q < v.size(); ++q) o[q] = v[q];
  return o;
}

inline double rel(double a, double b, double scale = 0.0) {
  const double s = std::max({std::abs(a), std::abs(b), scale, 1e-300});
  return std::abs(a - b) / s;
}

}  // namespace th
