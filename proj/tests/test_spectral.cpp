#include <doctest.h>

#include "gptt/spectral.hpp"
#include "gptt/zoo.hpp"
#include "helpers.hpp"

using namespace gptt;

TEST_CASE("quantum spectra match the Jacobi oracle") {
  std::mt19937_64 orng(21);
  for (int n = 2; n <= 4; ++n) {
    auto q = quantum(n);
    for (int t = 0; t < 20; ++t) {
      const CMat rho = oracle::random_density(n, orng);
      const Vec got = diagonalize(state_from_matrix(q, rho)).eigenvalues;
      CHECK((got - oracle::hermitian_eigenvalues(rho)).cwiseAbs().maxCoeff() < 1e-8);
    }
  }
}

TEST_CASE("rebit spectra match the oracle") {
  std::mt19937_64 orng(22);
  auto r = real_quantum(3);
  for (int t = 0; t < 20; ++t) {
    const CMat rho = oracle::random_density(3, orng, true);
    const Vec got = diagonalize(state_from_matrix(r, rho)).eigenvalues;
    CHECK((got - oracle::jacobi_eigenvalues(rho.real())).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("invariant states have a flat spectrum") {
  for (auto m : {classical(3), quantum(2), quantum(4), rebit(), doubled_quantum(2), extended_classical(3, 2),
                 square_bit(), diamond_bit()}) {
    const Vec ev = diagonalize(chi(m)).eigenvalues;
    REQUIRE(ev.size() == m->capacity);
    CHECK((ev - Vec::Constant(m->capacity, 1.0 / m->capacity)).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("pure states have spectrum (1, 0, ...)") {
  Rng rng(23);
  for (auto m : {quantum(3), doubled_quantum(2), extended_classical(2, 2)}) {
    for (int t = 0; t < 10; ++t) {
      const Vec ev = diagonalize(random_pure_state(m, rng)).eigenvalues;
      CHECK(ev(0) == doctest::Approx(1.0));
      CHECK(ev.tail(ev.size() - 1).cwiseAbs().maxCoeff() < 1e-9);
    }
  }
}

TEST_CASE("decompositions reconstruct the state with distinguishable eigenstates") {
  Rng rng(24);
  for (auto m : {quantum(3), doubled_quantum(2), classical(4), rebit()}) {
    for (int t = 0; t < 10; ++t) {
      const StateVec rho = random_state(m, rng);
      const auto d = diagonalize(rho);
      CHECK((d.reconstruct() - rho.coords()).cwiseAbs().maxCoeff() < 1e-10);
      for (std::size_t i = 0; i < d.eigenstates.size(); ++i)
        for (std::size_t j = 0; j < d.eigenstates.size(); ++j)
          CHECK(pairing(d.dagger_effects[i], d.eigenstates[j]) == doctest::Approx(i == j ? 1.0 : 0.0));
    }
  }
}

TEST_CASE("peel path agrees with the fast path") {
  Rng rng(25);
  for (auto m : {classical(2), classical(3), classical(5), quantum(2), quantum(3)}) {
    for (int t = 0; t < 10; ++t) {
      const StateVec rho = random_state(m, rng);
      const Vec fast = diagonalize(rho, DiagMethod::Fast).eigenvalues;
      const Vec peel = diagonalize(rho, DiagMethod::Peel).eigenvalues;
      CHECK((fast - peel).cwiseAbs().maxCoeff() < 1e-7);
    }
  }
}

TEST_CASE("spectrum is invariant under reversible maps") {
  Rng rng(26);
  for (auto m : {quantum(3), doubled_quantum(2), extended_classical(3, 1), square_bit()}) {
    for (int t = 0; t < 20; ++t) {
      std::uniform_real_distribution<double> u01;
      const double w = u01(rng);
      const StateVec rho = m->quantum_like()
                               ? random_state(m, rng)
                               : StateVec(m, w * m->pure_vertices.col(0) + (1 - w) * m->pure_vertices.col(2));
      const Vec a = diagonalize(rho).eigenvalues;
      const Vec b = diagonalize(apply(random_reversible(m, rng), rho)).eigenvalues;
      CHECK((a - b).cwiseAbs().maxCoeff() < 1e-8);
    }
  }
}

TEST_CASE("square bit off-diagonal interior point fails to diagonalize") {
  auto sq = square_bit();
  Vec x(3);
  x << 0.3, 0.1, 1;
  try {
    diagonalize(StateVec(sq, x));
    FAIL("expected a diagonalization failure");
  } catch (const DiagonalizationFailure& e) {
    CHECK(e.residue().size() == 3);
  }
  // Points on a diagonal between opposite vertices do diagonalize.
  Vec y(3);
  y << 0.4, -0.4, 1;
  const Vec ev = diagonalize(StateVec(sq, y)).eigenvalues;
  CHECK(ev(0) == doctest::Approx(0.7));
  CHECK(ev(1) == doctest::Approx(0.3));
}

TEST_CASE("maximum eigenvalue peel on classical states") {
  auto c = classical(3);
  const Peel p = max_eigenvalue_peel(chi(c));
  CHECK(p.p == doctest::Approx(1.0 / 3.0));
  REQUIRE(p.rest);

  Vec x(3);
  x << 0.7, 0.3, 0;
  const Peel q = max_eigenvalue_peel(StateVec(c, x));
  CHECK(q.p == doctest::Approx(0.7));
  CHECK(q.alpha.coords()(0) == doctest::Approx(1.0));

  const Peel pure = max_eigenvalue_peel(StateVec(c, Vec::Unit(3, 1)));
  CHECK(pure.p == doctest::Approx(1.0));
  CHECK_FALSE(pure.rest);
}

TEST_CASE("dagger of pure states") {
  Rng rng(27);
  auto q = quantum(3);
  const StateVec psi = random_pure_state(q, rng);
  CHECK((to_matrix(dagger(psi)) - to_matrix(psi)).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(pairing(dagger(psi), psi) == doctest::Approx(1.0));

  auto c = classical(3);
  const EffectVec d1 = dagger(StateVec(c, Vec::Unit(3, 1)));
  CHECK((d1.coords() - Vec::Unit(3, 1)).cwiseAbs().maxCoeff() < 1e-12);

  for (auto m : {quantum(3), square_bit(), classical(4)}) {
    const EffectVec dc = dagger_extend(m, chi(m).coords());
    for (int t = 0; t < 5; ++t)
      CHECK(pairing(dc, random_pure_state(m, rng)) == doctest::Approx(1.0 / m->capacity));
  }
}

TEST_CASE("functional calculus") {
  auto c = classical(2);
  Vec h(2);
  h << 0, 1;
  const auto d = diagonalize_vector(c, h);
  const EffectVec same = functional_calculus(d, [](double x) { return x; });
  CHECK((same.coords() - h).cwiseAbs().maxCoeff() < 1e-12);

  const double beta = std::log(3.0);
  const EffectVec g = functional_calculus(d, [&](double x) { return std::exp(-beta * x); });
  CHECK(g.coords()(0) == doctest::Approx(1.0));
  CHECK(g.coords()(1) == doctest::Approx(1.0 / 3.0));

  auto q = quantum(3);
  const auto dchi = diagonalize(chi(q));
  const EffectVec s = functional_calculus(dchi, [](double x) { return -std::log(x); });
  CHECK((s.coords() - std::log(3.0) * q->unit_effect).cwiseAbs().maxCoeff() < 1e-10);

  const auto dpure = diagonalize(StateVec(c, Vec::Unit(2, 0)));
  CHECK_THROWS_AS(functional_calculus(dpure, [](double x) { return std::log(x); }), DomainError);
}

TEST_CASE("effect and state norms through diagonalization") {
  auto c = classical(2);
  Vec e(2);
  e << 0.3, 0.7;
  CHECK(effect_norm(*c, e) == doctest::Approx(0.7));
  CHECK(state_norm(*c, Vec::Unit(2, 0) - Vec::Unit(2, 1)) == doctest::Approx(2.0));
  CHECK(state_norm(*c, Vec::Zero(2)) == doctest::Approx(0.0));
}

TEST_CASE("transition matrices") {
  auto q = quantum(2);
  const auto comp = pure_maximal_set(q);
  CHECK((transition_matrix(comp, comp) - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);

  MaximalSet had;
  for (double sgn : {1.0, -1.0}) {
    CVec v(2);
    v << 1, sgn;
    v /= std::sqrt(2.0);
    had.states.push_back(pure_state(q, v));
    had.daggers.push_back(dagger(had.states.back()));
  }
  CHECK((transition_matrix(comp, had) - Mat::Constant(2, 2, 0.5)).cwiseAbs().maxCoeff() < 1e-12);

  Rng rng(28);
  auto q3 = quantum(3);
  for (int t = 0; t < 10; ++t) {
    const auto a = diagonalize(random_state(q3, rng));
    const auto b = diagonalize(random_state(q3, rng));
    const Mat tm = transition_matrix(a, b);
    CHECK((tm.rowwise().sum() - Vec::Ones(3)).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((tm.colwise().sum().transpose() - Vec::Ones(3)).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("Schmidt decomposition") {
  auto q = quantum(2);
  auto qq = compose_systems(q, q);
  CVec bell = CVec::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  const auto s = schmidt(pure_state(qq, bell));
  REQUIRE(s.coefficients.size() == 2);
  CHECK(s.coefficients(0) == doctest::Approx(0.5));
  CHECK(s.coefficients(1) == doctest::Approx(0.5));

  Rng rng(29);
  const StateVec prod = product_state(qq, random_pure_state(q, rng), random_pure_state(q, rng));
  CHECK(schmidt(prod).coefficients.size() == 1);

  auto dq = doubled_quantum(2);
  auto dd = compose_systems(dq, dq);
  const CVec psi = (kron(CVec::Unit(4, 0), CVec::Unit(4, 0)) + kron(CVec::Unit(4, 2), CVec::Unit(4, 2))) /
                   std::sqrt(2.0);
  const auto ds = schmidt(pure_state(dd, psi));
  REQUIRE(ds.coefficients.size() == 2);
  CHECK(ds.coefficients(0) == doctest::Approx(0.5));
  // One measurement effect in each sector.
  const Vec w0 = ds.measurement_a[0].coords().segment(0, 2);
  const Vec w1 = ds.measurement_a[1].coords().segment(0, 2);
  CHECK(std::abs(w0.sum() - w1.sum()) == doctest::Approx(1.0));
}

TEST_CASE("Schmidt measurements are correlated on random pure states") {
  Rng rng(30);
  for (auto pair : {std::pair{quantum(2), quantum(3)}, std::pair{doubled_quantum(2), doubled_quantum(1)}}) {
    auto ab = compose_systems(pair.first, pair.second);
    for (int t = 0; t < 10; ++t) {
      const StateVec psi = random_pure_state(ab, rng);
      const auto s = schmidt(psi);
      CHECK(s.coefficients.sum() == doctest::Approx(1.0));
      const std::size_t r = static_cast<std::size_t>(s.coefficients.size());
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) {
          const EffectVec e = product_effect(ab, s.measurement_a[i], s.measurement_b[j]);
          CHECK(pairing(e, psi) == doctest::Approx(i == j ? s.coefficients(static_cast<Eigen::Index>(i)) : 0.0));
        }
      // Both marginals carry the Schmidt spectrum.
      const Vec ea = diagonalize(marginal(psi, Factor::A)).eigenvalues;
      const Vec eb = diagonalize(marginal(psi, Factor::B)).eigenvalues;
      for (Eigen::Index i = 0; i < s.coefficients.size(); ++i) {
        CHECK(ea(i) == doctest::Approx(s.coefficients(i)).epsilon(1e-8));
        CHECK(eb(i) == doctest::Approx(s.coefficients(i)).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("state vectors and purity") {
  Rng rng(31);
  auto q = quantum(3);
  const StateVec psi = random_pure_state(q, rng);
  CHECK(is_pure(psi));
  const CVec v = state_vector(psi);
  CHECK(((v * v.adjoint()) - to_matrix(psi)).cwiseAbs().maxCoeff() < 1e-10);
  CHECK_FALSE(is_pure(chi(q)));
  CHECK_THROWS_AS(state_vector(chi(q)), InvalidArgument);
}
