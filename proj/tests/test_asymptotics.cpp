#include <doctest.h>

#include "support.hpp"

using namespace vt;

namespace {

// gamma rebuilt from explicit dense products: scalar factors over the
// complement, then the dense spectator chain adjoint at k_j.
CVectord gamma_oracle(std::size_t j, const std::vector<std::size_t>& spectators, const SolitonDatad& d) {
  Complexd pre(1);
  for (std::size_t p = 0; p < d.size(); ++p)
    if (p != j && std::find(spectators.begin(), spectators.end(), p) == spectators.end()) pre *= f(d.k(p), std::conj(d.k(j)));
  return pre * dense_eval(dense_chain(d, spectators), d.n(), d.k(j)).adjoint() * d.beta(j);
}

}  // namespace

TEST_CASE("beta in and out") {
  SUBCASE("single soliton") {
    const auto d = make_data(2, {{{0.2, 0.6}, vec({1.0, {0.0, 0.5}})}});
    CHECK(max_abs(CVectord(beta_in<double>(0, d).vector() - d.beta(0))) == 0.0);
    CHECK(max_abs(CVectord(beta_out<double>(0, d).vector() - d.beta(0))) == 0.0);
  }
  SUBCASE("fastest soliton in-state is a scalar multiple") {
    Sampler s(201);
    const auto d = s.soliton_data(3, 3, true, 0.05);
    const auto b = beta_in<double>(2, d);
    Complexd pre = f(d.k(0), std::conj(d.k(2))) * f(d.k(1), std::conj(d.k(2)));
    CHECK(max_abs(CVectord(b.vector() - pre * d.beta(2))) < 1e-14);
  }
  SUBCASE("unsorted data rejected") {
    const auto d = make_data(1, {{{0.5, 0.5}, unit(1, 0)}, {{-0.5, 0.5}, unit(1, 0)}});
    CHECK_THROWS_AS(beta_in<double>(0, d), Error);
    const auto ctx = CollisionContextd::from_unsorted(d);
    CHECK(ctx.original == std::vector<std::size_t>{1, 0});
    CHECK_NOTHROW(beta_in<double>(0, ctx.data));
  }
}

TEST_CASE("intermediate gamma") {
  Sampler s(202);
  const auto d = s.soliton_data(3, 3, true, 0.05);
  SUBCASE("matches the dense oracle") {
    for (std::size_t j = 0; j < 3; ++j)
      for (const auto& sp : std::vector<std::vector<std::size_t>>{{}, {(j + 1) % 3}, {(j + 2) % 3}, {(j + 1) % 3, (j + 2) % 3}}) {
        CHECK(max_abs(CVectord(intermediate_gamma<double>(j, sp, d) - gamma_oracle(j, sp, d))) < 1e-13);
      }
  }
  SUBCASE("spectator order does not matter") {
    const std::vector<std::size_t> a{1, 2}, b{2, 1};
    CHECK(max_abs(CVectord(intermediate_gamma<double>(0, a, d) - intermediate_gamma<double>(0, b, d))) < 1e-13);
  }
  SUBCASE("in-state coincides with gamma over faster solitons") {
    const std::vector<std::size_t> faster{2};
    CHECK(max_abs(CVectord(intermediate_gamma<double>(1, faster, d) - beta_in<double>(1, d).vector())) == 0.0);
  }
  SUBCASE("no spectators for one soliton") {
    const auto one = make_data(2, {{{0.1, 0.3}, vec({0.2, 1.0})}});
    CHECK(intermediate_gamma<double>(0, std::vector<std::size_t>{}, one) == one.beta(0));
  }
  SUBCASE("soliton cannot spectate itself") {
    CHECK_THROWS_AS(intermediate_gamma<double>(0, std::vector<std::size_t>{0}, d), Error);
  }
}

TEST_CASE("pairwise collision relations") {
  Sampler s(203);
  SUBCASE("two solitons") {
    for (int trial = 0; trial < 20; ++trial) {
      const auto d = s.soliton_data(2 + trial % 2, 2, true, 0.05);
      CHECK(collision_consistency_residual<double>(0, 1, {}, d) <= 1e-10);
    }
  }
  SUBCASE("three solitons with one spectator") {
    for (int trial = 0; trial < 20; ++trial) {
      const auto d = s.soliton_data(3, 3, true, 0.05);
      const std::vector<std::size_t> s2{2}, s1{1}, s0{0};
      CHECK(collision_consistency_residual<double>(0, 1, s2, d) <= 1e-10);
      CHECK(collision_consistency_residual<double>(0, 2, s1, d) <= 1e-10);
      CHECK(collision_consistency_residual<double>(1, 2, s0, d) <= 1e-10);
    }
  }
  SUBCASE("orthogonal polarizations reduce to rescalings") {
    const auto d = make_data(2, {{{-0.4, 0.5}, unit(2, 0)}, {{0.3, 0.4}, unit(2, 1)}});
    CHECK(collision_consistency_residual<double>(0, 1, {}, d) <= 1e-12);
    CHECK(collision_xi<double>(0, 1, {}, d) == doctest::Approx(std::abs(f(d.k(0), std::conj(d.k(1))))).epsilon(1e-14));
  }
  SUBCASE("Xi is symmetric and equals the norm ratio") {
    for (int trial = 0; trial < 20; ++trial) {
      const auto d = s.soliton_data(3, 3, true, 0.05);
      const std::vector<std::size_t> sp{1};
      const double xi = collision_xi<double>(0, 2, sp, d);
      CHECK(std::abs(xi - collision_xi<double>(2, 0, sp, d)) <= 1e-12);
      const std::vector<std::size_t> with_l{2, 1};
      CHECK(std::abs(xi - intermediate_gamma<double>(0, sp, d).norm() / intermediate_gamma<double>(0, with_l, d).norm()) <= 1e-12);
    }
  }
}

TEST_CASE("asymptotic profile") {
  SUBCASE("single soliton") {
    const auto d = make_data(2, {{{0.2, 0.6}, vec({1.0, {0.0, 0.5}})}});
    for (double x : {-1.0, 0.0, 2.0})
      CHECK(max_abs(CVectord(asymptotic_profile<double>(d, x, 0.7, AsymptoticDirection::In) -
                             one_soliton_field<double>(d.point(0), d[0].beta, x, 0.7))) == 0.0);
  }
  SUBCASE("two solitons far from the collision") {
    // v = 1 for both, velocities -2u differ by 2
    const auto d = make_data(2, {{{-0.25, 0.5}, vec({1.0, 0.5})}, {{0.25, 0.5}, vec({{0.0, 0.3}, 1.0})}});
    for (double x = -70; x <= 70; x += 0.7) {
      CHECK(max_abs(CVectord(reconstruct_field<double>(d, x, -30.0) -
                             asymptotic_profile<double>(d, x, -30.0, AsymptoticDirection::In))) < 1e-8);
      CHECK(max_abs(CVectord(reconstruct_field<double>(d, x, 30.0) -
                             asymptotic_profile<double>(d, x, 30.0, AsymptoticDirection::Out))) < 1e-8);
    }
  }
}

TEST_CASE("factorization through the Yang-Baxter map") {
  Sampler s(204);
  for (int trial = 0; trial < 20; ++trial) {
    const auto d = s.soliton_data(2 + trial % 2, 2 + trial % 3, true, 0.05);
    CHECK(factorization_residual<double>(d) <= 1e-10);
  }
}
