#pragma once

#include "esmm/common.hpp"

#include <initializer_list>
#include <vector>

namespace esmm {

struct Species {
  double gamma = 1.4;
  double cv = 1.0;
  double pinf = 0.0;
  double R() const { return cv * (gamma - 1.0); }
};

/// Stiffened-gas parameters for one or two species.
class EosSpec {
 public:
  EosSpec() : EosSpec({Species{}}) {}
  EosSpec(std::initializer_list<Species> sp) : EosSpec(std::vector<Species>(sp)) {}
  explicit EosSpec(const std::vector<Species>& sp);

  int nspecies() const { return n_; }
  const Species& operator[](int l) const { return sp_[l]; }
  double R(int l) const { return R_[l]; }
  double pinf() const { return pinf_; }
  bool ideal() const { return pinf_ == 0.0; }

 private:
  std::array<Species, kMaxSpecies> sp_{};
  std::array<double, kMaxSpecies> R_{};
  double pinf_ = 0.0;
  int n_ = 0;
};

struct Primitive {
  int nspecies = 1;
  int dim = 2;
  std::array<double, kMaxSpecies> rho{};
  std::array<double, kMaxDim> v{};
  double p = 0.0;
  double T = 0.0;

  double density() const {
    double r = 0.0;
    for (int l = 0; l < nspecies; ++l) r += rho[l];
    return r;
  }
};

struct EntropyState {
  Vec V;
  double eta = 0.0;
  std::array<double, kMaxDim> q{};
  double phi = 0.0;
  std::array<double, kMaxDim> psi{};
  double Gamma = 0.0;
  double R = 0.0;
  std::array<double, kMaxSpecies> S{};
};

using ParamVector = Vec;

/// Optional clamps; zero (the default) means strict admissibility checks.
struct Floors {
  double density = 0.0;
  double temperature = 0.0;
  bool active() const { return density > 0.0 || temperature > 0.0; }
};

int nvars(int nspecies, int dim);
inline int dim_of(const Conserved& U, const EosSpec& eos) { return static_cast<int>(U.size()) - eos.nspecies() - 1; }

double mixture_gamma(const double* rho, const EosSpec& eos);
/// Σ(Γℓ−1)c_vℓρℓ/ρ
double mixture_R(const double* rho, const EosSpec& eos);

/// Fills T (and checks) from ρℓ, v, p.
Primitive make_primitive(const std::vector<double>& rho, const std::vector<double>& v, double p, const EosSpec& eos);

Conserved prim_to_cons(const Primitive& w, const EosSpec& eos);
Primitive cons_to_prim(const Conserved& U, const EosSpec& eos, const Floors& floors = {});
FluxVector physical_flux(const Conserved& U, int k, const EosSpec& eos);
EntropyState entropy_bundle(const Conserved& U, const EosSpec& eos);
EntropyState entropy_bundle(const Primitive& w, const EosSpec& eos);
ParamVector param_vector(const Conserved& U, const EosSpec& eos);
double sound_speed(const Primitive& w, const EosSpec& eos);

/// Entropy variables only; cheaper than the full bundle.
Vec entropy_variables(const Primitive& w, const EosSpec& eos);
double entropy_density(const Primitive& w, const EosSpec& eos);

}  // namespace esmm
