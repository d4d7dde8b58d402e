#include "esmm/eigdissip.hpp"

namespace esmm {

RotationAngles rotation_angles(const DirectedMetric& m, int dim) {
  if (!(m.length(dim) > 0.0)) throw DomainError("degenerate metric: zero direction vector");
  RotationAngles a;
  a.theta = std::atan2(m.m[1], m.m[0]);
  a.phi = dim == 3 ? std::atan2(m.m[2], std::hypot(m.m[0], m.m[1])) : 0.0;
  return a;
}

Eigen::Matrix3d velocity_rotation(const RotationAngles& a) {
  const double ct = std::cos(a.theta), st = std::sin(a.theta);
  const double cp = std::cos(a.phi), sp = std::sin(a.phi);
  Eigen::Matrix3d Q;
  Q << cp * ct, cp * st, sp,
       -st, ct, 0.0,
       -sp * ct, -sp * st, cp;
  return Q;
}

Mat rotation_matrix(const RotationAngles& a, int nspecies, int dim) {
  const int n = nspecies + dim + 1;
  Mat T = Mat::Identity(n, n);
  const Eigen::Matrix3d Q = velocity_rotation(a);
  T.block(nspecies, nspecies, dim, dim) = Q.topLeftCorner(dim, dim);
  return T;
}

InterfaceAvg interface_average(const Primitive& l, const Primitive& r, const EosSpec& eos) {
  InterfaceAvg a;
  const int ns = eos.nspecies();
  a.nspecies = ns;
  a.dim = l.dim;
  for (int k = 0; k < a.dim; ++k) a.v[k] = 0.5 * (l.v[k] + r.v[k]);
  const double pinf = eos.pinf();
  if (ns == 1) {
    a.rho[0] = log_mean(l.rho[0], r.rho[0]);
    a.rho_total = a.rho[0];
    const double pp = a.rho[0] / log_mean(l.rho[0] / (l.p + pinf), r.rho[0] / (r.p + pinf));
    a.p = pp - pinf;
    a.R = eos.R(0);
    a.Gamma = eos[0].gamma;
    a.T = pp / (a.rho[0] * a.R);
    a.rho_h = eos[0].cv * a.rho[0] * a.T + pinf + a.p;
    return a;
  }
  for (int l2 = 0; l2 < ns; ++l2) a.rho[l2] = log_mean(l.rho[l2], r.rho[l2]);
  a.rho_total = log_mean(l.density(), r.density());
  a.T = 1.0 / log_mean(1.0 / l.T, 1.0 / r.T);
  a.R = 0.5 * (mixture_R(l.rho.data(), eos) + mixture_R(r.rho.data(), eos));
  a.Gamma = 0.5 * (mixture_gamma(l.rho.data(), eos) + mixture_gamma(r.rho.data(), eos));
  a.p = 0.5 * (l.p + r.p);
  a.rho_h = a.p;
  for (int q = 0; q < ns; ++q) a.rho_h += eos[q].cv * a.rho[q] * a.T + eos[q].pinf;
  return a;
}

InterfaceAvg interface_average(const Conserved& Ul, const Conserved& Ur, const EosSpec& eos) {
  return interface_average(cons_to_prim(Ul, eos), cons_to_prim(Ur, eos), eos);
}

InterfaceAvg rotate_average(const InterfaceAvg& avg, const RotationAngles& a) {
  InterfaceAvg r = avg;
  const Eigen::Matrix3d Q = velocity_rotation(a);
  for (int i = 0; i < avg.dim; ++i) {
    double s = 0.0;
    for (int j = 0; j < avg.dim; ++j) s += Q(i, j) * avg.v[j];
    r.v[i] = s;
  }
  return r;
}

EigSystem scaled_eigensystem(const InterfaceAvg& a, const EosSpec& eos) {
  const int ns = a.nspecies, d = a.dim, n = ns + d + 1;
  const int iE = ns + d;
  EigSystem e;
  const double c2 = a.R * a.Gamma * a.T;
  if (!(c2 > 0.0) || !(a.rho_total > 0.0)) throw AdmissibilityError("inadmissible averaged state: c_s^2 = " + std::to_string(c2));
  const double c = std::sqrt(c2);
  e.cs = c;
  double v2 = 0.0;
  for (int k = 0; k < d; ++k) v2 += a.v[k] * a.v[k];
  e.H = a.rho_h / a.rho_total + 0.5 * v2;
  const double v1 = a.v[0];

  e.lambda = Vec::Constant(n, v1);
  e.lambda[0] = v1 - c;
  e.lambda[n - 1] = v1 + c;

  Mat Rt = Mat::Zero(n, n);
  Mat D = Mat::Zero(n, n);
  const double rho = a.rho_total;
  // acoustic columns
  for (int side = 0; side < 2; ++side) {
    const int col = side == 0 ? 0 : n - 1;
    const double s = side == 0 ? -1.0 : 1.0;
    for (int l = 0; l < ns; ++l) Rt(l, col) = ns == 1 ? 1.0 : a.rho[l] / rho;
    Rt(ns, col) = v1 + s * c;
    for (int k = 1; k < d; ++k) Rt(ns + k, col) = a.v[k];
    Rt(iE, col) = e.H + s * c * v1;
  }
  if (ns == 1) {
    Rt(0, 1) = 1.0;
    for (int k = 0; k < d; ++k) Rt(1 + k, 1) = a.v[k];
    Rt(iE, 1) = 0.5 * v2;
    for (int k = 1; k < d; ++k) {
      Rt(1 + k, 1 + k) = 1.0;
      Rt(iE, 1 + k) = a.v[k];
    }
    const double G = a.Gamma, R = a.R, cv = eos[0].cv;
    D(0, 0) = D(n - 1, n - 1) = std::sqrt(rho / (2.0 * G * R));
    D(1, 1) = std::sqrt(rho / (cv * G));
    for (int k = 1; k < d; ++k) D(1 + k, 1 + k) = std::sqrt(rho * a.T);
    e.Y[0] = 1.0;
    e.h[0] = (cv + R) * a.T;
    e.d[0] = e.h[0] - G * cv * a.T;
  } else {
    const double G = a.Gamma;
    for (int l = 0; l < 2; ++l) {
      e.Y[l] = a.rho[l] / rho;
      e.h[l] = (eos[l].cv + eos.R(l)) * a.T;
      e.d[l] = e.h[l] - G * eos[l].cv * a.T;
      const int col = 1 + l;
      Rt(l, col) = 1.0;
      for (int k = 0; k < d; ++k) Rt(2 + k, col) = a.v[k];
      Rt(iE, col) = 0.5 * v2 - e.d[l] / (G - 1.0);
    }
    for (int k = 1; k < d; ++k) {
      Rt(2 + k, 2 + k) = c;
      Rt(iE, 2 + k) = c * a.v[k];
    }
    const double R1 = eos.R(0), R2 = eos.R(1);
    const double Y1 = e.Y[0], Y2 = e.Y[1];
    const double sy = std::sqrt(Y1 * Y2), sg = std::sqrt(G - 1.0);
    e.DY << -sy * std::sqrt(G * R2 / R1), Y1 * sg,
             sy * std::sqrt(G * R1 / R2), Y2 * sg;
    const double pre = std::sqrt(rho / (G * a.R));
    D(0, 0) = D(n - 1, n - 1) = pre / std::sqrt(2.0);
    D.block(1, 1, 2, 2) = pre * e.DY;
    for (int k = 1; k < d; ++k) D(2 + k, 2 + k) = pre;
  }
  e.Rtilde = Rt;
  e.D = D;
  e.R = Rt * D;
  return e;
}

DissipationOperator dissipation_operator(const DirectedMetric& mI, const InterfaceAvg& avg, const EosSpec& eos) {
  DissipationOperator op;
  const int d = avg.dim;
  op.angles = rotation_angles(mI, d);
  op.T = rotation_matrix(op.angles, avg.nspecies, d);
  const EigSystem e = scaled_eigensystem(rotate_average(avg, op.angles), eos);
  op.R = e.R;
  const double L = mI.length(d);
  op.lambda = std::max(std::abs(mI.mt + L * e.lambda[0]), std::abs(mI.mt + L * e.lambda[e.lambda.size() - 1]));
  return op;
}

Vec sign_switch(const Vec& jr, const Vec& jf) {
  Vec y(jr.size());
  for (int m = 0; m < jr.size(); ++m) y[m] = ((jr[m] > 0.0 && jf[m] > 0.0) || (jr[m] < 0.0 && jf[m] < 0.0)) ? 1.0 : 0.0;
  return y;
}

Vec es_dissipation(std::span<const Vec, 6> V, const InterfaceAvg& avg, const DirectedMetric& mI, const MRWeights& wt,
                   const EosSpec& eos) {
  const int ns = avg.nspecies, d = avg.dim, n = ns + d + 1;
  const DissipationOperator op = dissipation_operator(mI, avg, eos);
  const Eigen::Matrix3d Q = velocity_rotation(op.angles);
  std::array<Vec, 6> W;
  for (int j = 0; j < 6; ++j) {
    Vec tv = V[j];
    for (int r = 0; r < d; ++r) {
      double s = 0.0;
      for (int q = 0; q < d; ++q) s += Q(r, q) * V[j][ns + q];
      tv[ns + r] = s;
    }
    W[j] = op.R.transpose() * tv;
  }
  Vec g(n);
  for (int m = 0; m < n; ++m) {
    const std::array<double, 5> left{W[0][m], W[1][m], W[2][m], W[3][m], W[4][m]};
    const std::array<double, 5> right{W[1][m], W[2][m], W[3][m], W[4][m], W[5][m]};
    const double jr = interface_jump(left, right, wt);
    const double jf = W[3][m] - W[2][m];
    const bool agree = (jr > 0.0 && jf > 0.0) || (jr < 0.0 && jf < 0.0);
    g[m] = agree ? op.lambda * jr : 0.0;
  }
  Vec rg = op.R * g;
  // T⁻¹ = Tᵀ acts on the velocity block only
  Vec out = rg;
  for (int r = 0; r < d; ++r) {
    double s = 0.0;
    for (int q = 0; q < d; ++q) s += Q(q, r) * rg[ns + q];
    out[ns + r] = s;
  }
  return out;
}

FluxVector es_interface_flux(std::span<const Conserved, 6> states, std::span<const DirectedMetric, 6> metrics, int w,
                             const MRWeights& wt, const EosSpec& eos) {
  const int d = dim_of(states[0], eos);
  const int o = 3 - w;
  const FluxVector Fec = highorder_ec_flux(states.subspan(o, 2 * w), metrics.subspan(o, 2 * w), w, eos);
  const DirectedMetric mI = gcl_metric_flux(metrics.subspan(o, 2 * w), w, d);
  std::array<Vec, 6> V;
  std::array<Primitive, 6> prim;
  for (int j = 0; j < 6; ++j) {
    prim[j] = cons_to_prim(states[j], eos);
    V[j] = entropy_variables(prim[j], eos);
  }
  const InterfaceAvg avg = interface_average(prim[2], prim[3], eos);
  return Fec - 0.5 * es_dissipation(V, avg, mI, wt, eos);
}

}  // namespace esmm
