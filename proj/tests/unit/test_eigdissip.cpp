#include "esmm/ecflux.hpp"
#include "esmm/eigdissip.hpp"
#include "helpers.hpp"

#include <doctest.h>

#include <numbers>

using namespace esmm;

namespace {

DirectedMetric random_metric(th::Rng& r, int dim) {
  DirectedMetric m;
  m.mt = r.uni(-1, 1);
  for (int j = 0; j < dim; ++j) m.m[j] = r.uni(-1, 1);
  return m;
}

Mat dUdV(const Primitive& w, const EosSpec& eos) {
  const auto mix = th::mix_of(eos);
  const auto J = oracle::dUdV_fd(th::to_ld(entropy_variables(w, eos)), mix, w.dim);
  const int n = (int)J.size();
  Mat A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = (double)J[i][j];
  return A;
}

double inf_norm(const Mat& A) { return A.cwiseAbs().rowwise().sum().maxCoeff(); }

}  // namespace

TEST_SUITE("eigdissip") {

TEST_CASE("rotation angles") {
  DirectedMetric m;
  m.m = {1, 0, 0};
  auto a = rotation_angles(m, 3);
  CHECK(a.theta == 0.0);
  CHECK(a.phi == 0.0);
  m.m = {0, 1, 0};
  a = rotation_angles(m, 3);
  CHECK(a.theta == doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));
  CHECK(a.phi == 0.0);
  m.m = {0, 0, 0};
  CHECK_THROWS_AS(rotation_angles(m, 3), DomainError);

  th::Rng r(21);
  for (int dim = 2; dim <= 3; ++dim)
    for (int n = 0; n < 1000; ++n) {
      const DirectedMetric q = random_metric(r, dim);
      const RotationAngles ang = rotation_angles(q, dim);
      if (dim == 2) REQUIRE(ang.phi == 0.0);
      const Mat T = rotation_matrix(ang, 2, dim);
      REQUIRE((T * T.transpose() - Mat::Identity(T.rows(), T.cols())).cwiseAbs().maxCoeff() <= 1e-14);
      Vec v(dim);
      for (int j = 0; j < dim; ++j) v[j] = r.uni(-2, 2);
      const Vec tv = T.block(2, 2, dim, dim) * v;
      double proj = 0;
      for (int j = 0; j < dim; ++j) proj += v[j] * q.m[j];
      REQUIRE(std::abs(tv[0] - proj / q.length(dim)) <= 1e-13);
    }
}

TEST_CASE("interface average examples") {
  const EosSpec eos({{1.4, 1.0, 0.0}});
  const Primitive l = make_primitive({1.0}, {0.3, 0.1}, 1.0, eos), r = make_primitive({2.0}, {0.5, -0.1}, 2.0, eos);
  const InterfaceAvg a = interface_average(l, r, eos);
  CHECK(a.rho[0] == doctest::Approx(1.442695040888963).epsilon(1e-15));
  CHECK(a.p == doctest::Approx(a.rho[0]).epsilon(1e-15));
  CHECK(a.v[0] == doctest::Approx(0.4));
  CHECK(std::abs(a.v[1]) <= 1e-17);

  th::Rng g(22);
  for (const auto& ec : th::eos_cases())
    for (int n = 0; n < 100; ++n) {
      const Primitive w = th::random_prim(g, ec.eos, 3);
      const InterfaceAvg s = interface_average(w, w, ec.eos);
      for (int q = 0; q < ec.eos.nspecies(); ++q) REQUIRE(s.rho[q] == w.rho[q]);
      for (int j = 0; j < 3; ++j) REQUIRE(s.v[j] == w.v[j]);
      REQUIRE(th::rel(s.T, w.T) <= 1e-15);
      REQUIRE(th::rel(s.p, w.p, 1 + ec.eos.pinf()) <= 1e-14);
    }
}

TEST_CASE("eigenvalues at the reference state") {
  const EosSpec eos({{1.4, 1.0, 0.0}});
  const Primitive w = make_primitive({1.0}, {0, 0}, 0.4, eos);  // T = 1
  const EigSystem e = scaled_eigensystem(interface_average(w, w, eos), eos);
  const double cs = std::sqrt(0.56);
  CHECK(e.cs == doctest::Approx(cs).epsilon(1e-15));
  REQUIRE(e.lambda.size() == 4);
  CHECK(e.lambda[0] == doctest::Approx(-cs).epsilon(1e-15));
  CHECK(e.lambda[1] == 0.0);
  CHECK(e.lambda[2] == 0.0);
  CHECK(e.lambda[3] == doctest::Approx(cs).epsilon(1e-15));
}

TEST_CASE("scaled eigenvectors reproduce dU/dV") {
  th::Rng r(23);
  for (const auto& ec : th::eos_cases())
    for (int dim = 2; dim <= 3; ++dim)
      for (int n = 0; n < 150; ++n) {
        const Primitive w = th::random_prim(r, ec.eos, dim);
        const EigSystem e = scaled_eigensystem(interface_average(w, w, ec.eos), ec.eos);
        const Mat A = dUdV(w, ec.eos);
        REQUIRE(inf_norm(e.R * e.R.transpose() - A) <= 1e-6 * inf_norm(A));
        // rotated frame: Tᵀ R Rᵀ T is the same Jacobian
        const DirectedMetric m = random_metric(r, dim);
        const DissipationOperator op = dissipation_operator(m, interface_average(w, w, ec.eos), ec.eos);
        const Mat B = op.T.transpose() * op.R * op.R.transpose() * op.T;
        REQUIRE(inf_norm(B - A) <= 1e-6 * inf_norm(A));
      }
}

TEST_CASE("two-species scaling block") {
  th::Rng r(24);
  const EosSpec eos({{3.0, 1.0, 100.0}, {1.4, 1.0, 0.0}});
  for (int n = 0; n < 200; ++n) {
    const Primitive w = th::random_prim(r, eos, 2);
    const InterfaceAvg a = interface_average(w, w, eos);
    const EigSystem e = scaled_eigensystem(a, eos);
    const double Y1 = e.Y[0], Y2 = e.Y[1], G = a.Gamma, R1 = eos.R(0), R2 = eos.R(1);
    Eigen::Matrix2d D2;
    D2 << (G - 1) * Y1 / Y2 + G * R2 / R1, -1, -1, (G - 1) * Y2 / Y1 + G * R1 / R2;
    D2 *= Y1 * Y2;
    REQUIRE((e.DY * e.DY.transpose() - D2).cwiseAbs().maxCoeff() <= 1e-13 * D2.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("degenerate mixture matches one species") {
  const EosSpec one({{1.4, 1.0, 0.0}});
  const EosSpec two({{1.4, 1.0, 0.0}, {1.4, 1.0, 0.0}});
  const Primitive a = make_primitive({1.2}, {0.3, -0.4}, 0.9, one);
  const Primitive b = make_primitive({0.5, 0.7}, {0.3, -0.4}, 0.9, two);
  const EigSystem ea = scaled_eigensystem(interface_average(a, a, one), one);
  const EigSystem eb = scaled_eigensystem(interface_average(b, b, two), two);
  CHECK(eb.cs == doctest::Approx(ea.cs).epsilon(1e-14));
  CHECK(eb.H == doctest::Approx(ea.H).epsilon(1e-14));
  CHECK(eb.lambda[0] == doctest::Approx(ea.lambda[0]).epsilon(1e-14));
  CHECK(eb.lambda[eb.lambda.size() - 1] == doctest::Approx(ea.lambda[ea.lambda.size() - 1]).epsilon(1e-14));
}

TEST_CASE("dissipation operator eigenvalue scale") {
  const EosSpec eos({{1.4, 1.0, 0.0}});
  const Primitive w = make_primitive({1.3}, {0.6, -0.2}, 1.1, eos);
  const InterfaceAvg a = interface_average(w, w, eos);
  const double cs = std::sqrt(1.4 * 1.1 / 1.3);
  DirectedMetric m;
  m.m = {1, 0, 0};
  CHECK(dissipation_operator(m, a, eos).lambda == doctest::Approx(0.6 + cs).epsilon(1e-14));
  m.m = {0.6, 0.8, 0};
  const double vn = 0.6 * 0.6 - 0.2 * 0.8;
  m.mt = -vn;
  CHECK(dissipation_operator(m, a, eos).lambda == doctest::Approx(cs).epsilon(1e-14));
  m.m = {1.2, 1.6, 0};  // L = 2
  m.mt = -2 * vn;
  CHECK(dissipation_operator(m, a, eos).lambda == doctest::Approx(2 * cs).epsilon(1e-14));
  th::Rng r(25);
  for (int n = 0; n < 500; ++n) REQUIRE(dissipation_operator(random_metric(r, 2), a, eos).lambda >= 0.0);
}

TEST_CASE("sign switch") {
  Vec a(3), b(3);
  a << 1, -2, 0;
  b << 1, -2, 0;
  Vec y = sign_switch(a, b);
  CHECK(y[0] == 1.0);
  CHECK(y[1] == 1.0);
  CHECK(y[2] == 0.0);
  b << -1, -0.1, 3;
  y = sign_switch(a, b);
  CHECK(y[0] == 0.0);
  CHECK(y[1] == 1.0);
  CHECK(y[2] == 0.0);
}

TEST_CASE("first-order dissipation is entropy dissipative") {
  th::Rng r(26);
  for (const auto& ec : th::eos_cases())
    for (int dim = 2; dim <= 3; ++dim)
      for (int n = 0; n < 300; ++n) {
        const Primitive wl = th::random_prim(r, ec.eos, dim), wr = th::random_prim(r, ec.eos, dim);
        const Vec dV = entropy_variables(wr, ec.eos) - entropy_variables(wl, ec.eos);
        const DissipationOperator op = dissipation_operator(random_metric(r, dim), interface_average(wl, wr, ec.eos), ec.eos);
        const Vec W = op.R.transpose() * (op.T * dV);
        const Vec dis = op.T.transpose() * (op.R * (op.lambda * W));
        REQUIRE(dV.dot(dis) >= -1e-12 * dV.cwiseAbs().dot(dis.cwiseAbs()));

        // Riemann data through the reconstruction and switch
        std::array<Vec, 6> V;
        for (int j = 0; j < 6; ++j) V[j] = entropy_variables(j < 3 ? wl : wr, ec.eos);
        DirectedMetric m = random_metric(r, dim);
        const Vec d2 = es_dissipation(V, interface_average(wl, wr, ec.eos), m, MRWeights::defaults(), ec.eos);
        REQUIRE(dV.dot(d2) >= -1e-12 * dV.cwiseAbs().dot(d2.cwiseAbs()));
      }
}

TEST_CASE("entropy-stable interface flux") {
  th::Rng r(27);
  for (const auto& ec : th::eos_cases()) {
    const Conserved U = prim_to_cons(th::random_prim(r, ec.eos, 2), ec.eos);
    std::array<Conserved, 6> s;
    std::array<DirectedMetric, 6> m;
    for (int j = 0; j < 6; ++j) {
      s[j] = U;
      m[j] = random_metric(r, 2);
    }
    for (int w = 1; w <= 3; ++w) {
      const FluxVector Fes = es_interface_flux(s, m, w, MRWeights::defaults(), ec.eos);
      const FluxVector Fec = highorder_ec_flux(std::span(s).subspan(3 - w, 2 * w), std::span(m).subspan(3 - w, 2 * w), w, ec.eos);
      REQUIRE(Fes == Fec);
    }
  }

  // smooth data: ES and EC differ at fifth order
  const EosSpec eos({{1.4, 1.0, 0.0}});
  auto state = [&](double x) {
    return prim_to_cons(make_primitive({1 + 0.2 * std::sin(x)}, {0.5 + 0.1 * std::cos(x), 0.2}, 1 + 0.2 * std::sin(x + 1), eos), eos);
  };
  DirectedMetric e1;
  e1.m[0] = 1.0;
  double prev = 0;
  for (int lev = 0; lev < 3; ++lev) {
    const double h = 0.1 / (1 << lev);
    std::array<Conserved, 6> s;
    std::array<DirectedMetric, 6> m;
    for (int j = 0; j < 6; ++j) {
      s[j] = state(0.4 + (j - 2) * h);
      m[j] = e1;
    }
    const FluxVector Fes = es_interface_flux(s, m, 3, MRWeights::defaults(), eos);
    const FluxVector Fec = highorder_ec_flux(std::span(s).subspan(0, 6), std::span(m).subspan(0, 6), 3, eos);
    const double diff = (Fes - Fec).cwiseAbs().maxCoeff();
    if (lev > 0) CHECK(std::log2(prev / diff) >= 4.5);
    prev = diff;
  }
}

}  // TEST_SUITE
