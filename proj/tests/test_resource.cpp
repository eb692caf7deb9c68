#include <doctest.h>

#include "gptt/resource.hpp"
#include "gptt/thermo.hpp"
#include "gptt/zoo.hpp"
#include "helpers.hpp"

using namespace gptt;

namespace {

Vec v3(double a, double b, double c) {
  Vec x(3);
  x << a, b, c;
  return x;
}

// Random doubly stochastic matrix as a mixture of random permutations.
Mat random_doubly_stochastic(int d, Rng& rng) {
  std::vector<int> perm(d);
  std::iota(perm.begin(), perm.end(), 0);
  const Vec w = random_distribution(d + 2, rng);
  Mat out = Mat::Zero(d, d);
  for (int k = 0; k < d + 2; ++k) {
    std::shuffle(perm.begin(), perm.end(), rng);
    out += w(k) * permutation_matrix(perm);
  }
  return out;
}

}  // namespace

TEST_CASE("majorization examples") {
  Vec one(2), half(2);
  one << 1, 0;
  half << 0.5, 0.5;
  CHECK(majorizes(one, half));
  CHECK_FALSE(majorizes(half, one));

  const Vec p = v3(0.6, 0.2, 0.2), q = v3(0.5, 0.5, 0);
  const auto pq = majorization(p, q);
  CHECK_FALSE(pq.holds);
  CHECK(pq.violated_prefix == 2);
  CHECK(pq.slack == doctest::Approx(-0.2));
  const auto qp = majorization(q, p);
  CHECK_FALSE(qp.holds);
  CHECK(qp.violated_prefix == 1);

  Rng rng(41);
  for (int t = 0; t < 20; ++t) CHECK(majorizes(random_distribution(4, rng), Vec::Constant(4, 0.25)));
  CHECK_THROWS_AS(majorization(v3(0.5, 0.5, 0.5), q), InvalidArgument);
}

TEST_CASE("majorization agrees with the permutohedron oracle") {
  Rng rng(42);
  int yes = 0;
  for (int t = 0; t < 300; ++t) {
    const Vec p = random_distribution(3, rng), q = random_distribution(3, rng);
    const bool m = majorizes(p, q);
    CHECK(m == oracle::in_permutohedron3(p, q));
    yes += m;
  }
  CHECK(yes > 10);
}

TEST_CASE("T-transform chains map p to q") {
  Rng rng(43);
  for (int d = 2; d <= 6; ++d) {
    for (int t = 0; t < 10; ++t) {
      const Vec p = sorted_desc(random_distribution(d, rng));
      const Vec q = sorted_desc(random_doubly_stochastic(d, rng) * p);
      const Mat dmat = t_transform_chain(p, q);
      CHECK(is_doubly_stochastic(dmat));
      CHECK((dmat * p - q).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("Birkhoff decomposition") {
  const auto id = birkhoff_decompose(Mat::Identity(3, 3));
  REQUIRE(id.size() == 1);
  CHECK(id[0].weight == doctest::Approx(1.0));
  CHECK(id[0].perm == std::vector<int>{0, 1, 2});

  Mat shift = Mat::Zero(3, 3);
  shift(1, 0) = shift(2, 1) = shift(0, 2) = 1;
  const auto two = birkhoff_decompose(0.5 * Mat::Identity(3, 3) + 0.5 * shift);
  REQUIRE(two.size() == 2);
  CHECK(two[0].weight == doctest::Approx(0.5));
  CHECK(two[1].weight == doctest::Approx(0.5));

  Rng rng(44);
  for (int d = 2; d <= 6; ++d) {
    for (int t = 0; t < 10; ++t) {
      const Mat m = random_doubly_stochastic(d, rng);
      const auto terms = birkhoff_decompose(m);
      CHECK(static_cast<int>(terms.size()) <= (d - 1) * (d - 1) + 1);
      Mat back = Mat::Zero(d, d);
      double total = 0;
      for (const auto& term : terms) {
        CHECK(term.weight > 0);
        back += term.weight * permutation_matrix(term.perm);
        total += term.weight;
      }
      CHECK(total == doctest::Approx(1.0));
      CHECK((back - m).cwiseAbs().maxCoeff() < 1e-9);
    }
  }
  CHECK_THROWS_AS(birkhoff_decompose(Mat::Ones(2, 2)), InvalidArgument);
}

TEST_CASE("unital channels exist exactly under majorization") {
  std::mt19937_64 orng(45);
  auto q = quantum(3);
  const StateVec c = chi(q);
  for (int t = 0; t < 100; ++t) {
    const StateVec rho = state_from_matrix(q, oracle::random_density(3, orng));
    const StateVec sigma = state_from_matrix(q, oracle::random_density(3, orng));
    const bool m = majorizes(oracle::hermitian_eigenvalues(to_matrix(rho)),
                             oracle::hermitian_eigenvalues(to_matrix(sigma)));
    const auto ch = build_unital_channel(rho, sigma);
    CHECK(ch.has_value() == m);
    if (ch) {
      CHECK((apply(*ch, rho).coords() - sigma.coords()).cwiseAbs().maxCoeff() < 1e-8);
      CHECK((apply(*ch, c).coords() - c.coords()).cwiseAbs().maxCoeff() < 1e-8);
      CHECK(ch->channel_residual() < 1e-9);
    }
  }
}

TEST_CASE("unital channel to the invariant state and to itself") {
  Rng rng(46);
  auto q = quantum(3);
  const StateVec rho = random_state(q, rng);
  const auto self = build_unital_channel(rho, rho);
  REQUIRE(self);
  CHECK((apply(*self, rho).coords() - rho.coords()).cwiseAbs().maxCoeff() < 1e-9);
  const auto to_chi = build_unital_channel(rho, chi(q));
  REQUIRE(to_chi);
}

TEST_CASE("rare channels on flagged models") {
  Rng rng(47);
  auto q = quantum(2);
  CMat r = CMat::Zero(2, 2);
  r(0, 0) = 0.7;
  r(1, 1) = 0.3;
  const auto ch = build_rare_channel(state_from_matrix(q, r), chi(q));
  REQUIRE(ch);
  CHECK(ch->witness().size() == 2);
  CHECK((apply(*ch, state_from_matrix(q, r)).coords() - chi(q).coords()).cwiseAbs().maxCoeff() < 1e-9);

  for (auto m : {quantum(3), rebit(), classical(4)}) {
    for (int t = 0; t < 10; ++t) {
      const StateVec psi = random_pure_state(m, rng);
      const StateVec sigma = random_state(m, rng);
      const auto c = build_rare_channel(psi, sigma);
      REQUIRE(c);
      CHECK((apply(*c, psi).coords() - sigma.coords()).cwiseAbs().maxCoeff() < 1e-8);
      for (const auto& term : c->witness()) {
        REQUIRE(term.unitary);
        const CMat& u = *term.unitary;
        CHECK((u.adjoint() * u - CMat::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() < 1e-9);
      }
    }
  }
  CHECK_THROWS_AS(build_rare_channel(chi(doubled_quantum(2)), chi(doubled_quantum(2))), UnsupportedError);
  CHECK_FALSE(build_rare_channel(chi(quantum(2)), pure_state(quantum(2), CVec::Unit(2, 0))));
}

TEST_CASE("doubled-qubit counterexample verdicts") {
  auto dq = doubled_quantum(2);
  const auto [rho, sigma] = sector_counterexample(dq);
  const Vec er = diagonalize(rho).eigenvalues, es = diagonalize(sigma).eigenvalues;
  CHECK((er - es).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(er(0) == doctest::Approx(0.5));
  CHECK(er(1) == doctest::Approx(0.5));

  const auto unital = convertible(rho, sigma, Theory::Unital);
  CHECK(unital.answer == Answer::Yes);
  REQUIRE(unital.channel);
  CHECK((apply(*unital.channel, rho).coords() - sigma.coords()).cwiseAbs().maxCoeff() < 1e-9);

  const auto rare = convertible(rho, sigma, Theory::Rare);
  CHECK(rare.answer == Answer::No);
  REQUIRE(rare.weights_rho);
  REQUIRE(rare.weights_sigma);
  CHECK(rare.weights_rho->maxCoeff() == doctest::Approx(1.0));
  CHECK(rare.weights_sigma->maxCoeff() == doctest::Approx(0.5));
  CHECK(rare.certificate.find("sector") != std::string::npos);

  CHECK(convertible(rho, sigma, Theory::Noisy).answer == Answer::Unknown);
  CHECK_FALSE(rare_equivalent_doubled(rho, sigma));
  CHECK(rare_equivalent_doubled(rho, rho));
}

TEST_CASE("sector swap is a reversible equivalence") {
  Rng rng(48);
  auto dq = doubled_quantum(2);
  CMat swap = CMat::Zero(4, 4);
  swap(2, 0) = swap(3, 1) = swap(0, 2) = swap(1, 3) = 1;
  const auto s = ChannelMap::unitary(dq, swap);
  for (int t = 0; t < 10; ++t) {
    const StateVec rho = random_state(dq, rng);
    const StateVec img = apply(s, rho);
    CHECK(rare_equivalent_doubled(rho, img));
    const auto u = sector_equivalence(rho, apply(random_reversible(dq, rng), rho));
    REQUIRE(u);
    CHECK(convertible(rho, img, Theory::Rare).answer == Answer::Yes);
  }
  CHECK_THROWS_AS(rare_equivalent_doubled(chi(quantum(2)), chi(quantum(2))), StructureError);
}

TEST_CASE("pure targets are unreachable from the invariant state") {
  auto q = quantum(3);
  const auto v = convertible(chi(q), pure_state(q, CVec::Unit(3, 0)), Theory::Unital);
  CHECK(v.answer == Answer::No);
  CHECK(v.violated_prefix == 1);
}

TEST_CASE("sandwich soundness across models") {
  Rng rng(49);
  for (auto m : {quantum(2), quantum(3), classical(3), doubled_quantum(2), extended_classical(3, 1),
                 extended_classical(2, 2)}) {
    for (int t = 0; t < 30; ++t) {
      const StateVec rho = t % 3 == 0 ? random_pure_state(m, rng) : random_state(m, rng);
      const StateVec sigma = random_state(m, rng);
      const auto rare = convertible(rho, sigma, Theory::Rare);
      const auto unital = convertible(rho, sigma, Theory::Unital);
      const auto noisy = convertible(rho, sigma, Theory::Noisy);
      if (rare.answer == Answer::Yes) {
        CHECK(unital.answer == Answer::Yes);
        CHECK(noisy.answer == Answer::Yes);
      }
      if (unital.answer == Answer::No) {
        CHECK(rare.answer == Answer::No);
        CHECK(noisy.answer == Answer::No);
      }
      for (const auto* v : {&rare, &unital, &noisy}) {
        if (v->answer != Answer::Yes) continue;
        for (double alpha : {0.0, 0.5, 1.0, 2.0, kInf})
          CHECK(entropy(sigma, alpha) >= entropy(rho, alpha) - 1e-8);
        if (v->channel) CHECK((apply(*v->channel, rho).coords() - sigma.coords()).cwiseAbs().maxCoeff() < 1e-8);
      }
    }
  }
}

TEST_CASE("polytope convertibility") {
  auto sq = square_bit();
  const Vec& c = *sq->invariant;
  const StateVec v0(sq, sq->pure_vertices.col(0));
  CHECK(convertible(v0, StateVec(sq, c), Theory::Rare).answer == Answer::Yes);
  CHECK(convertible(StateVec(sq, c), v0, Theory::Rare).answer == Answer::No);
  // Edge midpoint and the center share the spectrum (1/2, 1/2).
  const StateVec mid(sq, 0.5 * (sq->pure_vertices.col(0) + sq->pure_vertices.col(1)));
  CHECK(convertible(mid, StateVec(sq, c), Theory::Rare).answer == Answer::Yes);
  CHECK(convertible(StateVec(sq, c), mid, Theory::Rare).answer == Answer::No);
}

TEST_CASE("unrestricted reversibility reports") {
  for (auto m : {quantum(2), quantum(3), rebit()}) {
    const auto r = check_unrestricted_reversibility(m);
    CHECK(r.permutability == std::optional<bool>(true));
    CHECK(r.strong_symmetry == std::optional<bool>(true));
  }
  const auto sq = check_unrestricted_reversibility(square_bit());
  CHECK(sq.permutability == std::optional<bool>(true));
  CHECK(sq.strong_symmetry == std::optional<bool>(false));
  REQUIRE(sq.counterexample);
  const Vec a = diagonalize(sq.counterexample->first).eigenvalues;
  const Vec b = diagonalize(sq.counterexample->second).eigenvalues;
  CHECK((a - b).cwiseAbs().maxCoeff() < 1e-9);

  const auto dq = check_unrestricted_reversibility(doubled_quantum(2));
  CHECK(dq.strong_symmetry == std::optional<bool>(false));
  REQUIRE(dq.counterexample);

  const auto dia = check_unrestricted_reversibility(diamond_bit());
  CHECK(dia.permutability == std::optional<bool>(false));

  const auto trit = check_unrestricted_reversibility(restricted_trit());
  CHECK(trit.permutability == std::optional<bool>(true));
}

TEST_CASE("theory names") {
  for (auto t : {Theory::Rare, Theory::Noisy, Theory::Unital}) CHECK(parse_theory(to_string(t)) == t);
  CHECK_THROWS_AS(parse_theory("thermal"), InvalidArgument);
}
