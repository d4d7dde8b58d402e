#include "esmm/ecflux.hpp"

#include "esmm/eigdissip.hpp"

namespace esmm {

double log_mean(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("log_mean needs positive arguments");
  // Fixed operand order keeps the result bitwise symmetric.
  if (b < a) std::swap(a, b);
  const double zeta = a / b;
  const double f = (zeta - 1.0) / (zeta + 1.0);
  const double u = f * f;
  double F;
  if (u < kLogMeanSeriesThreshold)
    F = 1.0 + u * (1.0 / 3.0 + u * (1.0 / 5.0 + u * (1.0 / 7.0)));
  else
    F = std::log(zeta) / (2.0 * f);
  return (a + b) / (2.0 * F);
}

AlphaCoeffs alpha_coeffs(int w) {
  AlphaCoeffs c;
  c.w = w;
  switch (w) {
    case 1: c.a = {1.0, 0.0, 0.0}; break;
    case 2: c.a = {4.0 / 3.0, -1.0 / 6.0, 0.0}; break;
    case 3: c.a = {3.0 / 2.0, -3.0 / 10.0, 1.0 / 30.0}; break;
    default: throw ConfigError("order parameter w must be 1, 2 or 3");
  }
  return c;
}

FluxNode flux_node(const Primitive& w) {
  FluxNode n;
  n.rho = w.rho;
  n.v = w.v;
  n.beta = 1.0 / w.T;
  for (int k = 0; k < w.dim; ++k) n.v2 += w.v[k] * w.v[k];
  return n;
}

PairMeans pair_means(const FluxNode& a, const FluxNode& b, int ns, int dim) {
  PairMeans pm;
  for (int l = 0; l < ns; ++l) {
    pm.lnrho[l] = log_mean(a.rho[l], b.rho[l]);
    pm.rho[l] = 0.5 * (a.rho[l] + b.rho[l]);
  }
  for (int k = 0; k < dim; ++k) pm.v[k] = 0.5 * (a.v[k] + b.v[k]);
  pm.v2 = 0.5 * (a.v2 + b.v2);
  pm.beta = 0.5 * (a.beta + b.beta);
  pm.lnbeta = log_mean(a.beta, b.beta);
  return pm;
}

void ec_flux_kernel(const PairMeans& pm, double mt, const double* n, const EosSpec& eos, int dim, double* out) {
  const int ns = eos.nspecies();
  double vn = 0.0, vbar2 = 0.0;
  for (int k = 0; k < dim; ++k) {
    vn += pm.v[k] * n[k];
    vbar2 += pm.v[k] * pm.v[k];
  }
  const double un = mt + vn;  // mass carried across the moving face
  double mass = 0.0, P = -eos.pinf(), e_int = 0.0;
  for (int l = 0; l < ns; ++l) {
    const double f = pm.lnrho[l] * un;
    out[l] = f;
    mass += f;
    P += eos.R(l) * pm.rho[l] / pm.beta;
    e_int += f * (eos[l].cv / pm.lnbeta - 0.5 * pm.v2);
  }
  double ke = 0.0;
  for (int k = 0; k < dim; ++k) {
    const double mk = pm.v[k] * mass + P * n[k];
    out[ns + k] = mk;
    ke += pm.v[k] * mk;
  }
  out[ns + dim] = e_int + ke + eos.pinf() * un;
}

namespace {

PairMeans means_of(const Conserved& Ul, const Conserved& Ur, const EosSpec& eos, int dim) {
  return pair_means(flux_node(cons_to_prim(Ul, eos)), flux_node(cons_to_prim(Ur, eos)), eos.nspecies(), dim);
}

Vec eval_kernel(const PairMeans& pm, double mt, const std::array<double, kMaxDim>& n, const EosSpec& eos,
                int dim) {
  Vec out(eos.nspecies() + dim + 1);
  ec_flux_kernel(pm, mt, n.data(), eos, dim, out.data());
  return out;
}

// Literal closed forms of Ũ and F̃1, kept separate from the kernel.
Vec state_closed_form(const PairMeans& pm, const EosSpec& eos, int dim) {
  const int ns = eos.nspecies();
  Vec U(ns + dim + 1);
  double lnsum = 0.0, e = 0.0;
  double vbar2 = 0.0;
  for (int k = 0; k < dim; ++k) vbar2 += pm.v[k] * pm.v[k];
  for (int l = 0; l < ns; ++l) {
    U[l] = pm.lnrho[l];
    lnsum += pm.lnrho[l];
    e += (eos[l].cv / pm.lnbeta - 0.5 * pm.v2 + vbar2) * pm.lnrho[l];
  }
  for (int k = 0; k < dim; ++k) U[ns + k] = pm.v[k] * lnsum;
  U[ns + dim] = e + eos.pinf();
  return U;
}

Vec flux1_closed_form(const PairMeans& pm, const EosSpec& eos, int dim) {
  const int ns = eos.nspecies();
  Vec F(ns + dim + 1);
  double mass = 0.0, P = -eos.pinf(), e = 0.0;
  for (int l = 0; l < ns; ++l) {
    F[l] = pm.lnrho[l] * pm.v[0];
    mass += F[l];
    P += eos.R(l) * pm.rho[l] / pm.beta;
  }
  F[ns] = pm.v[0] * mass + P;
  for (int k = 1; k < dim; ++k) F[ns + k] = pm.v[k] * mass;
  for (int l = 0; l < ns; ++l) e += (eos[l].cv / pm.lnbeta - 0.5 * pm.v2) * F[l];
  for (int k = 0; k < dim; ++k) e += pm.v[k] * F[ns + k];
  F[ns + dim] = e + eos.pinf() * pm.v[0];
  return F;
}

}  // namespace

FluxVector ec_flux_rotated(const Conserved& Ul, const Conserved& Ur, double phi, double theta, const EosSpec& eos) {
  const int dim = dim_of(Ul, eos);
  const Mat T = rotation_matrix(RotationAngles{theta, phi}, eos.nspecies(), dim);
  const Conserved a = T * Ul, b = T * Ur;
  const Vec F1 = flux1_closed_form(means_of(a, b, eos, dim), eos, dim);
  return T.transpose() * F1;
}

EcStateFluxes ec_state_and_fluxes(const Conserved& Ul, const Conserved& Ur, const EosSpec& eos) {
  const int dim = dim_of(Ul, eos);
  const PairMeans pm = means_of(Ul, Ur, eos, dim);
  EcStateFluxes r;
  r.U = state_closed_form(pm, eos, dim);
  r.F[0] = flux1_closed_form(pm, eos, dim);
  r.F[1] = ec_flux_rotated(Ul, Ur, 0.0, M_PI / 2, eos);
  if (dim == 3) r.F[2] = ec_flux_rotated(Ul, Ur, M_PI / 2, 0.0, eos);
  return r;
}

FluxVector ec_flux_curvilinear(const Conserved& Ul, const Conserved& Ur, const DirectedMetric& ml,
                               const DirectedMetric& mr, const EosSpec& eos) {
  const int dim = dim_of(Ul, eos);
  const PairMeans pm = means_of(Ul, Ur, eos, dim);
  std::array<double, kMaxDim> n{};
  for (int j = 0; j < dim; ++j) n[j] = 0.5 * (ml.m[j] + mr.m[j]);
  return eval_kernel(pm, 0.5 * (ml.mt + mr.mt), n, eos, dim);
}

FluxVector highorder_ec_flux(std::span<const Conserved> states, std::span<const DirectedMetric> metrics, int w,
                             const EosSpec& eos) {
  if (static_cast<int>(states.size()) < 2 * w || static_cast<int>(metrics.size()) < 2 * w)
    throw DomainError("high-order flux window needs 2w points");
  const AlphaCoeffs al = alpha_coeffs(w);
  const int c = w - 1;  // local index of node i
  FluxVector F = FluxVector::Zero(states[0].size());
  for (int m = 1; m <= w; ++m) {
    FluxVector s = FluxVector::Zero(F.size());
    for (int q = 0; q < m; ++q) s += ec_flux_curvilinear(states[c - q], states[c - q + m], metrics[c - q], metrics[c - q + m], eos);
    F += al(m) * s;
  }
  return F;
}

double gcl_metric_flux(std::span<const double> a, int w) {
  if (static_cast<int>(a.size()) < 2 * w) throw DomainError("metric flux window needs 2w points");
  const AlphaCoeffs al = alpha_coeffs(w);
  const int c = w - 1;
  double G = 0.0;
  for (int m = 1; m <= w; ++m) {
    double s = 0.0;
    for (int q = 0; q < m; ++q) s += 0.5 * (a[c - q] + a[c - q + m]);
    G += al(m) * s;
  }
  return G;
}

DirectedMetric gcl_metric_flux(std::span<const DirectedMetric> samples, int w, int dim) {
  std::array<double, 6> buf{};
  DirectedMetric out;
  const int n = 2 * w;
  if (static_cast<int>(samples.size()) < n) throw DomainError("metric flux window needs 2w points");
  for (int q = 0; q < n; ++q) buf[q] = samples[q].mt;
  out.mt = gcl_metric_flux(std::span<const double>(buf.data(), n), w);
  for (int j = 0; j < dim; ++j) {
    for (int q = 0; q < n; ++q) buf[q] = samples[q].m[j];
    out.m[j] = gcl_metric_flux(std::span<const double>(buf.data(), n), w);
  }
  return out;
}

double numerical_entropy_flux(const Conserved& Ul, const Conserved& Ur, const DirectedMetric& ml,
                              const DirectedMetric& mr, const EosSpec& eos) {
  const int dim = dim_of(Ul, eos);
  const EntropyState sl = entropy_bundle(Ul, eos), sr = entropy_bundle(Ur, eos);
  const FluxVector F = ec_flux_curvilinear(Ul, Ur, ml, mr, eos);
  double q = 0.5 * (sl.V + sr.V).dot(F) - 0.25 * (ml.mt + mr.mt) * (sl.phi + sr.phi);
  for (int j = 0; j < dim; ++j) q -= 0.25 * (ml.m[j] + mr.m[j]) * (sl.psi[j] + sr.psi[j]);
  return q;
}

}  // namespace esmm
