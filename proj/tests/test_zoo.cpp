#include <doctest.h>

#include <nlohmann/json.hpp>

#include "gptt/resource.hpp"
#include "gptt/spectral.hpp"
#include "gptt/symmetry.hpp"
#include "gptt/zoo.hpp"
#include "helpers.hpp"

using namespace gptt;

namespace {

// |s, i> of a doubled qubit: sector s, local index i.
CVec doubled_ket(int s, int i) { return CVec::Unit(4, 2 * s + i); }

}  // namespace

TEST_CASE("capacities and vector dimensions of the built-in models") {
  CHECK(quantum(2)->capacity == 2);
  CHECK(quantum(2)->vector_dim == 4);
  CHECK(real_quantum(3)->vector_dim == 6);
  CHECK(rebit()->vector_dim == 3);
  CHECK(classical(5)->vector_dim == 5);

  auto dq = doubled_quantum(2);
  CHECK(dq->capacity == 4);
  CHECK(dq->vector_dim == 8);
  CHECK(dq->sectors().sector_count() == 2);

  auto ec = extended_classical(3, 2);
  CHECK(ec->capacity == 6);
  CHECK(ec->vector_dim == 12);

  CHECK(square_bit()->capacity == 2);
  CHECK(diamond_bit()->capacity == 2);
  CHECK(restricted_trit()->capacity == 1);
  CHECK(restricted_trit()->pure_vertices.cols() == 3);
}

TEST_CASE("restricted trit effect generators are the half sums of the vertex duals") {
  auto t = restricted_trit();
  const Mat& e = t->effect_cone.generators;
  REQUIRE(e.cols() == 3);
  // Each generator pairs to 1/2 with two vertices and 0 with the third.
  const Mat table = e.transpose() * t->pure_vertices;
  for (int i = 0; i < 3; ++i) {
    CHECK(table.row(i).sum() == doctest::Approx(1.0));
    CHECK(table.row(i).maxCoeff() == doctest::Approx(0.5));
    CHECK(table.row(i).minCoeff() == doctest::Approx(0.0));
  }
}

TEST_CASE("classical composites are classical") {
  auto c = compose_systems(classical(2), classical(3));
  CHECK(c->family == Family::Classical);
  CHECK(c->capacity == 6);
  CHECK(c->vector_dim == 6);
}

TEST_CASE("doubled composites double the product dimension") {
  auto a = doubled_quantum(2);
  auto ab = compose_systems(a, a);
  CHECK(ab->family == Family::DoubledQuantum);
  CHECK(ab->vector_dim == 128);
  CHECK(ab->vector_dim == 2 * a->vector_dim * a->vector_dim);
  CHECK(ab->capacity == a->capacity * a->capacity);
}

TEST_CASE("extended composites exceed the product dimension by N") {
  for (int n_sec : {2, 3}) {
    for (int n : {1, 2}) {
      auto a = extended_classical(n_sec, n);
      auto ab = compose_systems(a, a);
      const int d_a = a->vector_dim;
      CHECK(ab->vector_dim == n_sec * d_a * d_a);
      // M N^2 m^2 n^2 against M N m^2 n^2 with M = N, m = n.
      CHECK(ab->vector_dim == n_sec * n_sec * n_sec * n * n * n * n);
    }
  }
  auto bit = extended_classical(2, 1);
  auto two = compose_systems(bit, bit);
  CHECK(two->sectors().sector_count() == 2);
  CHECK(two->sectors().sector_dim(0) == 2);
  CHECK(two->sectors().sector_dim(1) == 2);
}

TEST_CASE("composition errors") {
  CHECK_THROWS_AS(compose_systems(square_bit(), square_bit()), CompositionError);
  CHECK_THROWS_AS(compose_systems(rebit(), quantum(2)), CompositionError);
  CHECK_THROWS_AS(compose_systems(doubled_quantum(2), quantum(2)), CompositionError);
  auto hybrid = compose_systems(classical(2), quantum(2));
  CHECK(hybrid->family == Family::Hybrid);
  CHECK(hybrid->sectors().sector_count() == 2);
}

TEST_CASE("products of pure maximal sets are maximal sets of the composite") {
  for (auto m : {quantum(2), doubled_quantum(1), extended_classical(3, 1), classical(2)}) {
    auto mm = compose_systems(m, m);
    const auto set = pure_maximal_set(m);
    std::vector<StateVec> prods;
    for (const auto& x : set.states)
      for (const auto& y : set.states) prods.push_back(product_state(mm, x, y));
    CHECK(static_cast<int>(prods.size()) == mm->capacity);
    const auto test = perfectly_distinguishable_search(mm, prods);
    REQUIRE(test);
    for (std::size_t i = 0; i < prods.size(); ++i)
      for (std::size_t j = 0; j < prods.size(); ++j)
        CHECK(pairing((*test)[i], prods[j]) == doctest::Approx(i == j ? 1.0 : 0.0));
  }
}

TEST_CASE("sector weights of the doubled-qubit counterexample") {
  auto dq = doubled_quantum(2);
  const auto [rho, sigma] = sector_counterexample(dq);
  const Vec w_rho = sector_weights(rho), w_sigma = sector_weights(sigma);
  CHECK(w_rho(0) == doctest::Approx(1.0));
  CHECK(w_rho(1) == doctest::Approx(0.0));
  CHECK(w_sigma(0) == doctest::Approx(0.5));
  CHECK(w_sigma(1) == doctest::Approx(0.5));
  CHECK_THROWS_AS(sector_weights(chi(quantum(2))), StructureError);
}

TEST_CASE("pure states of extended classical systems sit in one sector") {
  Rng rng(11);
  auto ec = extended_classical(3, 2);
  for (int t = 0; t < 30; ++t) {
    const Vec w = sector_weights(random_pure_state(ec, rng));
    CHECK(w.maxCoeff() == doctest::Approx(1.0));
    CHECK(w.sum() == doctest::Approx(1.0));
  }
}

TEST_CASE("reversible maps of the doubled theory permute sector weights") {
  Rng rng(12);
  auto dq = doubled_quantum(2);
  for (int t = 0; t < 50; ++t) {
    const StateVec rho = random_state(dq, rng);
    const Vec w = sector_weights(rho);
    const Vec w2 = sector_weights(apply(random_reversible(dq, rng), rho));
    CHECK((sorted_desc(w) - sorted_desc(w2)).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("maximal sets of the built-in models") {
  const auto c3 = pure_maximal_set(classical(3));
  REQUIRE(c3.states.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(c3.states[i].coords()(i) == doctest::Approx(1.0));

  const auto q = pure_maximal_set(quantum(3));
  Vec sum = Vec::Zero(q.states.front().coords().size());
  for (const auto& s : q.states) sum += s.coords();
  CHECK((sum / 3.0 - chi(quantum(3)).coords()).cwiseAbs().maxCoeff() < 1e-12);

  const auto sq = pure_maximal_set(square_bit());
  CHECK(sq.states.size() == 2);
  CHECK_THROWS_AS(pure_maximal_set(restricted_trit()), StructureError);
}

TEST_CASE("polytope validation rejects inconsistent data") {
  Vec u(2);
  u << 0, 1;
  Mat seg(2, 2);
  seg << -1, 1, 1, 1;
  Mat eff(2, 2);
  eff << 0.5, -0.5, 0.5, 0.5;
  CHECK_NOTHROW(polytope("segment", u, seg, eff, {}));

  Mat unnormalized = seg;
  unnormalized(1, 0) = 2;
  CHECK_THROWS_AS(polytope("bad", u, unnormalized, eff, {}), InvalidArgument);

  Mat shear(2, 2);
  shear << 1, 0.5, 0, 1;
  CHECK_THROWS_AS(polytope("bad", u, seg, eff, {shear}), InvalidArgument);
}

TEST_CASE("model references and JSON round trip") {
  CHECK(parse_model_ref("quantum:3")->capacity == 3);
  CHECK(parse_model_ref("extended_classical:3:2")->capacity == 6);
  CHECK(parse_model_ref("rebit")->id == "rebit");
  CHECK_THROWS_AS(parse_model_ref("quantum"), InvalidArgument);
  CHECK_THROWS_AS(parse_model_ref("quantum:x"), InvalidArgument);
  CHECK_THROWS_AS(parse_model_ref("no_such_model"), InvalidArgument);

  for (auto m : {doubled_quantum(2), rebit(), classical(4)}) {
    auto back = model_from_json(model_to_json(*m));
    CHECK(same_system(m, back));
  }
  auto sq = square_bit();
  auto j = model_to_json(*sq);
  auto back = model_from_json(j);
  CHECK(back->vector_dim == 3);
  CHECK(back->capacity == 2);
  REQUIRE(back->invariant);
  CHECK((*back->invariant - *sq->invariant).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("Bell marginals are maximally mixed") {
  auto q = quantum(2);
  auto qq = compose_systems(q, q);
  CVec bell = CVec::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  const StateVec psi = pure_state(qq, bell);
  CHECK((to_matrix(marginal(psi, Factor::A)) - 0.5 * CMat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((to_matrix(marginal(psi, Factor::B)) - 0.5 * CMat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("marginal of the entangled doubled-qubit state is block diagonal") {
  auto dq = doubled_quantum(2);
  auto dd = compose_systems(dq, dq);
  // (|0,0>|0,0> + |1,0>|1,0>) / sqrt 2 lives in the even sector.
  const CVec psi = (kron(doubled_ket(0, 0), doubled_ket(0, 0)) + kron(doubled_ket(1, 0), doubled_ket(1, 0))) /
                   std::sqrt(2.0);
  const StateVec s = pure_state(dd, psi);
  CMat expected = CMat::Zero(4, 4);
  expected(0, 0) = expected(2, 2) = 0.5;
  CHECK((to_matrix(marginal(s, Factor::A)) - expected).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((to_matrix(marginal(s, Factor::B)) - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("random states are valid and reproducible") {
  for (auto m : {quantum(3), doubled_quantum(2), square_bit(), diamond_bit(), rebit()}) {
    Rng a(99), b(99);
    for (int t = 0; t < 10; ++t) {
      const StateVec x = random_state(m, a);
      const StateVec y = random_state(m, b);
      CHECK(x.coords() == y.coords());
      CHECK(x.normalized());
      CHECK(cone_membership(x.coords(), m->state_cone).inside);
    }
  }
}
