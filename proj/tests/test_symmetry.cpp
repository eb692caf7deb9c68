#include <doctest.h>

#include "gptt/symmetry.hpp"
#include "gptt/zoo.hpp"
#include "helpers.hpp"

using namespace gptt;

namespace {

// Regular half-polygon on the upper unit semicircle with the mirror x -> -x.
ModelPtr half_disk(int segments) {
  const double pi = std::acos(-1.0);
  Mat verts(3, segments + 1);
  for (int k = 0; k <= segments; ++k) verts.col(k) << std::cos(pi * k / segments), std::sin(pi * k / segments), 1;
  // One facet functional c - n.x per edge, the last edge being the diameter.
  Mat effects(3, segments + 1);
  for (int k = 0; k <= segments; ++k) {
    const Vec a = verts.col(k), b = verts.col((k + 1) % (segments + 1));
    Vec n(2);
    n << b(1) - a(1), a(0) - b(0);
    if (n.dot(a.head(2)) < 0) n = -n;
    const double c = n.dot(a.head(2));
    Vec e(3);
    e << -n(0), -n(1), c;
    effects.col(k) = e / (e.transpose() * verts).maxCoeff();
  }
  Mat mirror = Mat::Identity(3, 3);
  mirror(0, 0) = -1;
  Vec u(3);
  u << 0, 0, 1;
  return polytope("half_disk", u, verts, effects, {mirror});
}

}  // namespace

TEST_CASE("invariant states of the built-in models") {
  const auto q = invariant_state(quantum(3));
  REQUIRE(q.state);
  CHECK((to_matrix(*q.state) - CMat::Identity(3, 3) / 3.0).cwiseAbs().maxCoeff() < 1e-12);

  for (auto m : {square_bit(), diamond_bit()}) {
    const auto r = invariant_state(m);
    REQUIRE(r.state);
    CHECK(r.fixed_dimension == 0);
    CHECK(r.state->coords()(0) == doctest::Approx(0.0));
    CHECK(r.state->coords()(1) == doctest::Approx(0.0));
    CHECK(r.state->coords()(2) == doctest::Approx(1.0));
  }
}

TEST_CASE("non-unique invariant set on a mirror-symmetric polytope") {
  auto hd = half_disk(4);
  CHECK_FALSE(hd->invariant);
  const auto inv = invariant_state(hd);
  CHECK_FALSE(inv.state);
  CHECK(inv.fixed_dimension == 1);
  CHECK(inv.basis.cols() == 2);

  const StateVec v(hd, hd->pure_vertices.col(1));
  const TwirlResult t = twirl(v);
  CHECK_FALSE(t.unique);
  CHECK(t.state.coords()(0) == doctest::Approx(0.0));
  CHECK(t.state.coords()(1) == doctest::Approx(v.coords()(1)));
  CHECK(t.state.normalized());
  CHECK_FALSE(is_transitive(hd));
  CHECK_THROWS_AS(chi(hd), StructureError);
}

TEST_CASE("transitivity") {
  CHECK(is_transitive(square_bit()));
  CHECK_FALSE(is_transitive(diamond_bit()));
  CHECK(is_transitive(quantum(3)));
  CHECK(is_transitive(classical(4)));
  CHECK(is_transitive(restricted_trit()));
  CHECK(group_orbit(*square_bit(), square_bit()->pure_vertices.col(0)).size() == 4);
  CHECK(group_orbit(*diamond_bit(), diamond_bit()->pure_vertices.col(0)).size() == 2);
}

TEST_CASE("invariant state of a transitive polytope is the vertex average") {
  for (auto m : {square_bit(), restricted_trit()}) {
    const Vec avg = m->pure_vertices.rowwise().mean();
    CHECK((avg - *m->invariant).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("twirling") {
  Rng rng(71);
  auto q = quantum(3);
  const StateVec psi = random_pure_state(q, rng);
  CHECK((twirl(psi).state.coords() - chi(q).coords()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((twirl(chi(q)).state.coords() - chi(q).coords()).cwiseAbs().maxCoeff() < 1e-12);

  auto sq = square_bit();
  const TwirlResult t = twirl(StateVec(sq, sq->pure_vertices.col(2)));
  CHECK(t.unique);
  CHECK((t.state.coords() - *sq->invariant).cwiseAbs().maxCoeff() < 1e-12);

  for (auto m : {square_bit(), diamond_bit(), half_disk(3), doubled_quantum(2)}) {
    for (int k = 0; k < 10; ++k) {
      const StateVec once = twirl(random_state(m, rng)).state;
      CHECK((twirl(once).state.coords() - once.coords()).cwiseAbs().maxCoeff() < 1e-9);
    }
  }
}

TEST_CASE("informational equilibrium") {
  for (auto pair : {std::pair{classical(2), classical(3)}, std::pair{quantum(2), quantum(2)},
                    std::pair{doubled_quantum(2), doubled_quantum(2)},
                    std::pair{extended_classical(3, 1), extended_classical(2, 2)}}) {
    const auto r = informational_equilibrium_check(pair.first, pair.second);
    CHECK(r.pass);
    CHECK(r.residual < 1e-8);
  }
}

TEST_CASE("perfect distinguishability searches") {
  auto trit = restricted_trit();
  std::vector<StateVec> v;
  for (int i = 0; i < 3; ++i) v.emplace_back(trit, trit->pure_vertices.col(i));
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) CHECK_FALSE(perfectly_distinguishable_search(trit, {v[i], v[j]}));
  CHECK_FALSE(perfectly_distinguishable_search(trit, v));

  auto c = classical(3);
  const auto basis = perfectly_distinguishable_search(
      c, {StateVec(c, Vec::Unit(3, 0)), StateVec(c, Vec::Unit(3, 1)), StateVec(c, Vec::Unit(3, 2))});
  REQUIRE(basis);
  for (int i = 0; i < 3; ++i) CHECK(((*basis)[i].coords() - Vec::Unit(3, i)).cwiseAbs().maxCoeff() < 1e-9);

  auto q = quantum(3);
  CVec plus(3), minus(3);
  plus << 1, 1, 0;
  minus << 1, -1, 0;
  plus /= std::sqrt(2.0);
  minus /= std::sqrt(2.0);
  const StateVec a = pure_state(q, plus), b = pure_state(q, minus);
  const auto proj = perfectly_distinguishable_search(q, {a, b});
  REQUIRE(proj);
  REQUIRE(proj->size() == 3);
  CHECK((to_matrix((*proj)[0]) - plus * plus.adjoint()).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((to_matrix((*proj)[1]) - minus * minus.adjoint()).cwiseAbs().maxCoeff() < 1e-9);
  CMat last = CMat::Zero(3, 3);
  last(2, 2) = 1;
  CHECK((to_matrix((*proj)[2]) - last).cwiseAbs().maxCoeff() < 1e-9);

  Rng rng(72);
  const StateVec r1 = random_pure_state(q, rng), r2 = random_pure_state(q, rng);
  CHECK_FALSE(perfectly_distinguishable_search(q, {r1, r2}));
}
