#include "esmm/thermo.hpp"

#include <sstream>

namespace esmm {

namespace {

[[noreturn]] void inadmissible(const char* what, double value) {
  std::ostringstream os;
  os.precision(17);
  os << "inadmissible state: " << what << " = " << value;
  throw AdmissibilityError(os.str());
}

}  // namespace

EosSpec::EosSpec(const std::vector<Species>& sp) {
  if (sp.empty() || sp.size() > static_cast<size_t>(kMaxSpecies))
    throw ConfigError("EOS needs 1 or 2 species");
  n_ = static_cast<int>(sp.size());
  for (int l = 0; l < n_; ++l) {
    const auto& s = sp[l];
    if (!(s.gamma > 1.0)) throw ConfigError("species gamma must exceed 1");
    if (!(s.cv > 0.0)) throw ConfigError("species cv must be positive");
    if (!(s.pinf >= 0.0)) throw ConfigError("species pinf must be nonnegative");
    sp_[l] = s;
    R_[l] = s.R();
    pinf_ += s.pinf;
  }
}

int nvars(int nspecies, int dim) { return nspecies + dim + 1; }

double mixture_gamma(const double* rho, const EosSpec& eos) {
  double num = 0.0, den = 0.0;
  for (int l = 0; l < eos.nspecies(); ++l) {
    const double c = eos[l].cv * rho[l];
    num += eos[l].gamma * c;
    den += c;
  }
  return num / den;
}

double mixture_R(const double* rho, const EosSpec& eos) {
  double num = 0.0, r = 0.0;
  for (int l = 0; l < eos.nspecies(); ++l) {
    num += (eos[l].gamma - 1.0) * eos[l].cv * rho[l];
    r += rho[l];
  }
  return num / r;
}

Primitive make_primitive(const std::vector<double>& rho, const std::vector<double>& v, double p,
                         const EosSpec& eos) {
  if (static_cast<int>(rho.size()) != eos.nspecies()) throw ConfigError("species count mismatch");
  if (v.size() < 2 || v.size() > 3) throw ConfigError("velocity needs 2 or 3 components");
  Primitive w;
  w.nspecies = eos.nspecies();
  w.dim = static_cast<int>(v.size());
  double rR = 0.0;
  for (int l = 0; l < w.nspecies; ++l) {
    if (!(rho[l] > 0.0)) inadmissible("partial density", rho[l]);
    w.rho[l] = rho[l];
    rR += rho[l] * eos.R(l);
  }
  for (int k = 0; k < w.dim; ++k) w.v[k] = v[k];
  w.p = p;
  w.T = (p + eos.pinf()) / rR;
  if (!(w.T > 0.0)) inadmissible("temperature", w.T);
  return w;
}

Conserved prim_to_cons(const Primitive& w, const EosSpec& eos) {
  const int ns = eos.nspecies();
  const int d = w.dim;
  for (int l = 0; l < ns; ++l)
    if (!(w.rho[l] > 0.0)) inadmissible("partial density", w.rho[l]);
  if (!(w.T > 0.0)) inadmissible("temperature", w.T);
  Conserved U(ns + d + 1);
  double rho = 0.0;
  for (int l = 0; l < ns; ++l) {
    U[l] = w.rho[l];
    rho += w.rho[l];
  }
  double v2 = 0.0;
  for (int k = 0; k < d; ++k) {
    U[ns + k] = rho * w.v[k];
    v2 += w.v[k] * w.v[k];
  }
  const double G = mixture_gamma(w.rho.data(), eos);
  const double pinf = eos.pinf();
  const double rhoe = (w.p + pinf) / (G - 1.0) + pinf;
  U[ns + d] = rhoe + 0.5 * rho * v2;
  return U;
}

Primitive cons_to_prim(const Conserved& U, const EosSpec& eos, const Floors& floors) {
  const int ns = eos.nspecies();
  const int d = dim_of(U, eos);
  Primitive w;
  w.nspecies = ns;
  w.dim = d;
  double rho = 0.0;
  for (int l = 0; l < ns; ++l) {
    double r = U[l];
    if (!(r > 0.0)) {
      if (floors.density > 0.0 && std::isfinite(r))
        r = floors.density;
      else
        inadmissible("partial density", r);
    }
    w.rho[l] = r;
    rho += r;
  }
  double ke = 0.0;
  for (int k = 0; k < d; ++k) {
    w.v[k] = U[ns + k] / rho;
    ke += U[ns + k] * w.v[k];
  }
  ke *= 0.5;
  const double G = mixture_gamma(w.rho.data(), eos);
  const double pinf = eos.pinf();
  double rR = 0.0;
  for (int l = 0; l < ns; ++l) rR += w.rho[l] * eos.R(l);
  w.p = (G - 1.0) * (U[ns + d] - ke - pinf) - pinf;
  w.T = (w.p + pinf) / rR;
  if (!(w.T > 0.0)) {
    if (floors.temperature > 0.0 && std::isfinite(w.T)) {
      w.T = floors.temperature;
      w.p = rR * w.T - pinf;
    } else {
      inadmissible("temperature", w.T);
    }
  }
  return w;
}

FluxVector physical_flux(const Conserved& U, int k, const EosSpec& eos) {
  const Primitive w = cons_to_prim(U, eos);
  const int ns = eos.nspecies();
  const int d = w.dim;
  FluxVector F(U.size());
  const double vk = w.v[k];
  for (int l = 0; l < ns; ++l) F[l] = w.rho[l] * vk;
  for (int j = 0; j < d; ++j) F[ns + j] = U[ns + j] * vk;
  F[ns + k] += w.p;
  F[ns + d] = (U[ns + d] + w.p) * vk;
  return F;
}

double entropy_density(const Primitive& w, const EosSpec& eos) {
  const double lnT = std::log(w.T);
  double eta = 0.0;
  for (int l = 0; l < w.nspecies; ++l) eta -= w.rho[l] * (eos[l].cv * lnT - eos.R(l) * std::log(w.rho[l]));
  return eta;
}

Vec entropy_variables(const Primitive& w, const EosSpec& eos) {
  const int ns = w.nspecies;
  const int d = w.dim;
  Vec V(ns + d + 1);
  const double lnT = std::log(w.T);
  const double beta = 1.0 / w.T;
  double v2 = 0.0;
  for (int k = 0; k < d; ++k) v2 += w.v[k] * w.v[k];
  for (int l = 0; l < ns; ++l) {
    const double S = eos[l].cv * lnT - eos.R(l) * std::log(w.rho[l]);
    V[l] = -S - 0.5 * v2 * beta + eos[l].cv * eos[l].gamma;
  }
  for (int k = 0; k < d; ++k) V[ns + k] = w.v[k] * beta;
  V[ns + d] = -beta;
  return V;
}

EntropyState entropy_bundle(const Primitive& w, const EosSpec& eos) {
  const int ns = w.nspecies;
  const int d = w.dim;
  EntropyState s;
  s.V.resize(ns + d + 1);
  const double lnT = std::log(w.T);
  const double beta = 1.0 / w.T;
  double v2 = 0.0;
  for (int k = 0; k < d; ++k) v2 += w.v[k] * w.v[k];
  s.eta = 0.0;
  s.phi = 0.0;
  for (int l = 0; l < ns; ++l) {
    s.S[l] = eos[l].cv * lnT - eos.R(l) * std::log(w.rho[l]);
    s.eta -= w.rho[l] * s.S[l];
    s.phi += eos.R(l) * w.rho[l] - eos[l].pinf * beta;
    s.V[l] = -s.S[l] - 0.5 * v2 * beta + eos[l].cv * eos[l].gamma;
  }
  for (int k = 0; k < d; ++k) {
    s.V[ns + k] = w.v[k] * beta;
    s.q[k] = s.eta * w.v[k];
    s.psi[k] = s.phi * w.v[k];
  }
  s.V[ns + d] = -beta;
  s.Gamma = mixture_gamma(w.rho.data(), eos);
  s.R = mixture_R(w.rho.data(), eos);
  return s;
}

EntropyState entropy_bundle(const Conserved& U, const EosSpec& eos) {
  return entropy_bundle(cons_to_prim(U, eos), eos);
}

ParamVector param_vector(const Conserved& U, const EosSpec& eos) {
  const Primitive w = cons_to_prim(U, eos);
  const int ns = w.nspecies;
  const int d = w.dim;
  ParamVector z(ns + d + 1);
  for (int l = 0; l < ns; ++l) z[l] = w.rho[l];
  for (int k = 0; k < d; ++k) z[ns + k] = w.v[k];
  z[ns + d] = 1.0 / w.T;
  return z;
}

double sound_speed(const Primitive& w, const EosSpec& eos) {
  if (!(w.T > 0.0)) inadmissible("temperature", w.T);
  const double c2 = mixture_R(w.rho.data(), eos) * mixture_gamma(w.rho.data(), eos) * w.T;
  if (!(c2 > 0.0)) inadmissible("sound speed squared", c2);
  return std::sqrt(c2);
}

}  // namespace esmm
