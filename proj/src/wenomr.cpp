#include "esmm/wenomr.hpp"

namespace esmm {

void MRWeights::validate() const {
  for (double c : chi)
    if (!(c > 0.0)) throw ConfigError("linear weights must be positive");
  if (std::abs(chi[0] + chi[1] + chi[2] - 1.0) > 1e-15) throw ConfigError("linear weights must sum to 1");
  if (!(eps > 0.0)) throw ConfigError("weight regularizer must be positive");
}

namespace {

double reconstruct(double wm2, double wm1, double w0, double wp1, double wp2, const MRWeights& wt) {
  const double a2 = 0.5 * (wp1 - wm1);
  const double a3 = 0.5 * ((wm1 - w0) + (wp1 - w0));
  const double b2 = (11.0 * (wm2 - wp2) + 82.0 * (wp1 - wm1)) / 120.0;
  const double b3 = (-3.0 * ((wm2 - w0) + (wp2 - w0)) + 40.0 * ((wm1 - w0) + (wp1 - w0))) / 56.0;
  const double b4 = ((wp2 - wm2) + 2.0 * (wm1 - wp1)) / 12.0;
  const double b5 = ((wm2 - w0) + (wp2 - w0) - 4.0 * ((wm1 - w0) + (wp1 - w0))) / 24.0;

  const double dl = w0 - wm1, dr = wp1 - w0;
  const double beta1 = std::min(dl * dl, dr * dr);
  const double beta2 = a2 * a2 + 13.0 / 3.0 * a3 * a3;
  const double c1 = b2 + 0.1 * b4;
  const double c2 = b3 + 123.0 / 455.0 * b5;
  const double beta3 = c1 * c1 + 13.0 / 3.0 * c2 * c2 + 781.0 / 20.0 * b4 * b4 + 1421461.0 / 2275.0 * b5 * b5;

  const double t = 0.5 * (std::abs(beta3 - beta1) + std::abs(beta3 - beta2));
  const double tau = t * t;
  const double o1 = wt.chi[0] * (1.0 + tau / (wt.eps + beta1));
  const double o2 = wt.chi[1] * (1.0 + tau / (wt.eps + beta2));
  const double o3 = wt.chi[2] * (1.0 + tau / (wt.eps + beta3));
  const double s = o1 + o2 + o3;

  // h_m(j+½) − h1, so constants come back untouched
  const double d2 = 0.5 * a2 + a3 / 6.0;
  const double d3 = 0.5 * b2 + b3 / 6.0 + b4 / 20.0 + b5 / 70.0;
  return w0 + (o2 / s) * d2 + (o3 / s / wt.chi[2]) * (d3 - wt.chi[1] * d2);
}

}  // namespace

double reconstruct_right(std::span<const double, 5> W, const MRWeights& wt) {
  return reconstruct(W[0], W[1], W[2], W[3], W[4], wt);
}

double reconstruct_left(std::span<const double, 5> W, const MRWeights& wt) {
  return reconstruct(W[4], W[3], W[2], W[1], W[0], wt);
}

double interface_jump(std::span<const double, 5> left, std::span<const double, 5> right, const MRWeights& wt) {
  return reconstruct_left(right, wt) - reconstruct_right(left, wt);
}

}  // namespace esmm
