#include "helpers.hpp"

#include <doctest.h>

using namespace esmm;

TEST_SUITE("thermo") {

TEST_CASE("prim_to_cons ideal gas at rest") {
  const EosSpec eos({{1.4, 1.0, 0.0}});
  const Conserved U = prim_to_cons(make_primitive({1.0}, {0, 0}, 1.0, eos), eos);
  CHECK(U.size() == 4);
  CHECK(U[0] == doctest::Approx(1.0));
  CHECK(U[1] == 0.0);
  CHECK(U[2] == 0.0);
  CHECK(U[3] == doctest::Approx(2.5).epsilon(1e-15));
}

TEST_CASE("prim_to_cons stiffened gas") {
  const EosSpec eos({{3.0, 1.0, 1.0}});
  const Primitive w = make_primitive({1.0}, {0, 0}, 1.0, eos);
  CHECK(w.T == doctest::Approx(1.0).epsilon(1e-15));
  const Conserved U = prim_to_cons(w, eos);
  CHECK(U[3] == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("cons_to_prim inverts the ideal example") {
  const EosSpec eos({{1.4, 1.0, 0.0}});
  Conserved U(4);
  U << 1.0, 0.0, 0.0, 2.5;
  const Primitive w = cons_to_prim(U, eos);
  CHECK(w.p == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(w.T == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(w.v[0] == 0.0);
  CHECK(w.v[1] == 0.0);
}

TEST_CASE("roundtrip on random states") {
  th::Rng r(1);
  for (const auto& ec : th::eos_cases())
    for (int dim = 2; dim <= 3; ++dim)
      for (int n = 0; n < 2000; ++n) {
        const Primitive w = th::random_prim(r, ec.eos, dim);
        const Primitive b = cons_to_prim(prim_to_cons(w, ec.eos), ec.eos);
        for (int l = 0; l < ec.eos.nspecies(); ++l) REQUIRE(th::rel(b.rho[l], w.rho[l]) <= 1e-13);
        for (int j = 0; j < dim; ++j) REQUIRE(th::rel(b.v[j], w.v[j], 1.0) <= 1e-13);
        REQUIRE(th::rel(b.T, w.T) <= 1e-13);
        REQUIRE(th::rel(b.p, w.p, 1.0 + ec.eos.pinf()) <= 1e-13);
      }
}

TEST_CASE("cons agrees with the reference energy form") {
  th::Rng r(2);
  for (const auto& ec : th::eos_cases()) {
    const auto mix = th::mix_of(ec.eos);
    for (int n = 0; n < 500; ++n) {
      const Primitive w = th::random_prim(r, ec.eos, 3);
      oracle::Prim o;
      for (int l = 0; l < ec.eos.nspecies(); ++l) o.rho[l] = w.rho[l];
      for (int j = 0; j < 3; ++j) o.v[j] = w.v[j];
      o.p = w.p;
      const auto Uo = oracle::cons(o, mix, 3);
      const Conserved U = prim_to_cons(w, ec.eos);
      for (int q = 0; q < U.size(); ++q) REQUIRE(th::rel(U[q], (double)Uo[q], 1.0) <= 1e-13);
    }
  }
}

TEST_CASE("degenerate two-species mixture equals one species") {
  const EosSpec one({{1.4, 1.0, 0.0}});
  const EosSpec two({{1.4, 1.0, 0.0}, {1.4, 1.0, 0.0}});
  Conserved U1(4), U2(5);
  U1 << 1.5, 0.3, -0.2, 4.0;
  U2 << 0.5, 1.0, 0.3, -0.2, 4.0;
  const Primitive a = cons_to_prim(U1, one), b = cons_to_prim(U2, two);
  CHECK(b.p == doctest::Approx(a.p).epsilon(1e-14));
  CHECK(b.T == doctest::Approx(a.T).epsilon(1e-14));
  CHECK(sound_speed(b, two) == doctest::Approx(sound_speed(a, one)).epsilon(1e-14));
}

TEST_CASE("inadmissible states raise") {
  const EosSpec eos({{1.4, 1.0, 0.0}});
  Conserved U(4);
  U << 1.0, 0.0, 0.0, -1.0;
  CHECK_THROWS_AS(cons_to_prim(U, eos), AdmissibilityError);
  U << -1.0, 0.0, 0.0, 1.0;
  CHECK_THROWS_AS(cons_to_prim(U, eos), AdmissibilityError);
  CHECK_THROWS_AS(make_primitive({1.0}, {0, 0}, -2.0, eos), AdmissibilityError);
}

TEST_CASE("floors clamp only when enabled") {
  const EosSpec eos({{1.4, 1.0, 0.0}});
  Conserved U(4);
  U << 1.0, 0.0, 0.0, -1.0;
  Floors f;
  f.temperature = 1e-6;
  const Primitive w = cons_to_prim(U, eos, f);
  CHECK(w.T == doctest::Approx(1e-6));
}

TEST_CASE("physical flux examples") {
  const EosSpec eos({{1.4, 1.0, 0.0}});
  Conserved U(4);
  U << 1.0, 0.0, 0.0, 2.5;
  const FluxVector F = physical_flux(U, 0, eos);
  CHECK(F[0] == 0.0);
  CHECK(F[1] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(F[2] == 0.0);
  CHECK(F[3] == 0.0);
  const FluxVector G = physical_flux(U, 1, eos);
  CHECK(G[2] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(G[1] == 0.0);
}

TEST_CASE("physical flux against the reference") {
  th::Rng r(3);
  for (const auto& ec : th::eos_cases()) {
    const auto mix = th::mix_of(ec.eos);
    for (int n = 0; n < 300; ++n) {
      const Primitive w = th::random_prim(r, ec.eos, 3);
      const Conserved U = prim_to_cons(w, ec.eos);
      for (int k = 0; k < 3; ++k) {
        const auto Fo = oracle::flux(th::to_ld(U), mix, 3, k);
        const FluxVector F = physical_flux(U, k, ec.eos);
        double sc = 0;
        for (auto x : Fo) sc = std::max(sc, (double)std::fabs(x));
        for (int q = 0; q < F.size(); ++q) REQUIRE(std::abs(F[q] - (double)Fo[q]) <= 1e-12 * sc);
      }
    }
  }
}

TEST_CASE("entropy at the reference state") {
  const EosSpec eos({{1.4, 1.0, 0.0}});
  const Primitive w = make_primitive({1.0}, {0.5, 0}, 0.4, eos);  // T = 1
  const EntropyState s = entropy_bundle(w, eos);
  CHECK(std::abs(s.S[0]) <= 1e-15);
  CHECK(std::abs(s.eta) <= 1e-15);
  CHECK(s.phi == doctest::Approx(eos.R(0)).epsilon(1e-15));
}

TEST_CASE("entropy variables match the gradient of eta") {
  th::Rng r(4);
  for (const auto& ec : th::eos_cases()) {
    const auto mix = th::mix_of(ec.eos);
    for (int dim = 2; dim <= 3; ++dim)
      for (int n = 0; n < 200; ++n) {
        const Primitive w = th::random_prim(r, ec.eos, dim);
        const Conserved U = prim_to_cons(w, ec.eos);
        const auto Vo = oracle::entropy_vars_fd(th::to_ld(U), mix, dim);
        const Vec V = entropy_variables(w, ec.eos);
        const EntropyState s = entropy_bundle(U, ec.eos);
        double sc = 0;
        for (auto x : Vo) sc = std::max(sc, (double)std::fabs(x));
        for (int q = 0; q < V.size(); ++q) {
          REQUIRE(std::abs(V[q] - (double)Vo[q]) <= 1e-9 * sc);
          REQUIRE(std::abs(s.V[q] - V[q]) <= 1e-13 * sc);
        }
        REQUIRE(th::rel(s.eta, (double)oracle::eta(th::to_ld(U), mix, dim), 1.0) <= 1e-12);
      }
  }
}

TEST_CASE("potential identities") {
  th::Rng r(5);
  for (const auto& ec : th::eos_cases())
    for (int dim = 2; dim <= 3; ++dim)
      for (int n = 0; n < 2500; ++n) {
        const Primitive w = th::random_prim(r, ec.eos, dim);
        const Conserved U = prim_to_cons(w, ec.eos);
        const EntropyState s = entropy_bundle(U, ec.eos);
        const double vu = s.V.dot(U);
        REQUIRE(std::abs(vu - s.eta - s.phi) <= 1e-12 * (std::abs(vu) + std::abs(s.eta) + std::abs(s.phi)));
        for (int k = 0; k < dim; ++k) {
          const double vf = s.V.dot(physical_flux(U, k, ec.eos));
          REQUIRE(std::abs(vf - s.q[k] - s.psi[k]) <= 1e-12 * (std::abs(vf) + std::abs(s.q[k]) + std::abs(s.psi[k])));
          REQUIRE(s.q[k] == doctest::Approx(s.eta * w.v[k]));
        }
      }
}

TEST_CASE("potential matches the reference V.U - eta") {
  th::Rng r(6);
  for (const auto& ec : th::eos_cases()) {
    const auto mix = th::mix_of(ec.eos);
    for (int n = 0; n < 100; ++n) {
      const Primitive w = th::random_prim(r, ec.eos, 2);
      const Conserved U = prim_to_cons(w, ec.eos);
      const double ref = (double)oracle::phi(th::to_ld(U), mix, 2);
      REQUIRE(th::rel(entropy_bundle(U, ec.eos).phi, ref, 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("dU/dV is symmetric positive definite") {
  th::Rng r(7);
  for (const auto& ec : th::eos_cases()) {
    const auto mix = th::mix_of(ec.eos);
    for (int n = 0; n < 100; ++n) {
      const Primitive w = th::random_prim(r, ec.eos, 3);
      const Vec V = entropy_variables(w, ec.eos);
      const auto J = oracle::dUdV_fd(th::to_ld(V), mix, 3);
      const int m = V.size();
      Mat A(m, m);
      double sc = 0;
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          A(i, j) = (double)J[i][j];
          sc = std::max(sc, std::abs(A(i, j)));
        }
      REQUIRE((A - A.transpose()).cwiseAbs().maxCoeff() <= 1e-5 * sc);
      const Mat S = 0.5 * (A + A.transpose());
      Eigen::SelfAdjointEigenSolver<Mat> es(S);
      REQUIRE(es.eigenvalues().minCoeff() > 0.0);
    }
  }
}

TEST_CASE("ideal gas reduction matches the textbook path") {
  th::Rng r(8);
  const EosSpec eos({{1.4, 1.0, 0.0}});
  for (int n = 0; n < 1000; ++n) {
    const Primitive w = th::random_prim(r, eos, 2);
    const Conserved U = prim_to_cons(w, eos);
    const double p = (double)oracle::ideal_pressure(th::to_ld(U), 1.4, 2);
    REQUIRE(th::rel(cons_to_prim(U, eos).p, p) <= 1e-13);
    const double c = std::sqrt(1.4 * p / U[0]);
    REQUIRE(th::rel(sound_speed(cons_to_prim(U, eos), eos), c) <= 1e-13);
  }
}

TEST_CASE("param vector") {
  const EosSpec eos({{1.4, 1.0, 0.0}});
  const Primitive w = make_primitive({2.0}, {1.0, 0.0}, 2.0 * 0.4 * 0.5, eos);
  const ParamVector z = param_vector(prim_to_cons(w, eos), eos);
  REQUIRE(z.size() == 4);
  CHECK(z[0] == doctest::Approx(2.0));
  CHECK(z[1] == doctest::Approx(1.0));
  CHECK(z[2] == doctest::Approx(0.0));
  CHECK(z[3] == doctest::Approx(2.0));
  const EosSpec two({{1.4, 1.0, 0.0}, {1.6, 2.0, 0.0}});
  const Primitive w2 = make_primitive({0.3, 0.7}, {1.0, -1.0, 0.5}, 1.0, two);
  const ParamVector z2 = param_vector(prim_to_cons(w2, two), two);
  REQUIRE(z2.size() == 6);
  CHECK(z2[0] == doctest::Approx(0.3));
  CHECK(z2[1] == doctest::Approx(0.7));
  CHECK(z2[4] == doctest::Approx(0.5));
  CHECK(z2[5] == doctest::Approx(1.0 / w2.T));
}

TEST_CASE("sound speed examples") {
  const EosSpec ideal({{1.4, 1.0, 0.0}});
  Conserved U(4);
  U << 1.0, 0.0, 0.0, 2.5;
  CHECK(sound_speed(cons_to_prim(U, ideal), ideal) == doctest::Approx(std::sqrt(1.4)).epsilon(1e-15));
  const EosSpec stiff({{3.0, 1.0, 1.0}});
  const Primitive w = make_primitive({1.0}, {0, 0}, 1.0, stiff);
  CHECK(sound_speed(w, stiff) == doctest::Approx(std::sqrt(6.0)).epsilon(1e-15));
}

TEST_CASE("eos validation") {
  CHECK_THROWS_AS(EosSpec({{1.0, 1.0, 0.0}}), ConfigError);
  CHECK_THROWS_AS(EosSpec({{1.4, 0.0, 0.0}}), ConfigError);
  CHECK_THROWS_AS(EosSpec({{1.4, 1.0, -1.0}}), ConfigError);
  CHECK_THROWS_AS(EosSpec(std::vector<Species>{}), ConfigError);
  const EosSpec e({{1.4, 2.0, 0.5}, {1.6, 1.0, 0.25}});
  CHECK(e.R(0) == 2.0 * (1.4 - 1.0));
  CHECK(e.pinf() == 0.75);
}

}  // TEST_SUITE
