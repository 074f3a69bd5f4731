#include <doctest.h>

#include "support.hpp"

using namespace vt;

namespace {
const std::vector<double> kSteps{0.04, 0.02, 0.01};
}

TEST_CASE("grid shape") {
  const auto zero = [](double, double) { return CVectord::Zero(2).eval(); };
  CHECK_THROWS_AS(sample_grid<double>(zero, 2, 0, 1, 0, 1, 4, 5), Error);
  const auto g = sample_grid<double>(zero, 2, 0, 1, 0, 2, 5, 5);
  CHECK(g.hx() == 0.25);
  CHECK(g.ht() == 0.5);
  CHECK(g.t(4) == 2.0);
  CHECK(pde_residual(g) == 0.0);
}

TEST_CASE("PDE residual of the one-soliton") {
  const auto d = make_data(2, {{{0.3, 0.5}, vec({1.0, {0.5, 0.5}})}});
  const std::function<CVectord(double, double)> field = [&](double x, double t) { return reconstruct_field<double>(d, x, t); };
  const auto g = sample_grid<double>(field, 2, -2.0, 2.0, -0.2, 0.2, 401, 41);
  double peak = 0;
  for (Eigen::Index c = 0; c < g.values.cols(); ++c) peak = std::max(peak, g.values.col(c).norm());
  CHECK(pde_residual(g) < 1e-2 * peak);

  const auto seq = pde_residual_sequence<double>(field, 2, -2.0, 2.0, -0.3, 0.3, kSteps);
  const auto fit = convergence_order<double>(kSteps, seq);
  CHECK(fit.monotone);
  CHECK(fit.order == doctest::Approx(2.0).epsilon(0.15));
  CHECK(seq[1] / seq[2] == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("PDE residual of a two-soliton collision") {
  Sampler s(501);
  const auto d = s.soliton_data(2, 2);
  const std::function<CVectord(double, double)> field = [&](double x, double t) { return reconstruct_field<double>(d, x, t); };
  const auto fit = convergence_order<double>(kSteps, pde_residual_sequence<double>(field, 2, -2.0, 2.0, -0.3, 0.3, kSteps));
  CHECK(std::abs(fit.order - 2.0) <= 0.3);
}

TEST_CASE("boundary residuals") {
  const std::vector<double> times{-0.7, 0.0, 0.4};
  SUBCASE("mixed single soliton") {
    const auto hl = solve_mirror_norming(make_data(2, {{{0.5, 0.5}, unit(2, 0)}}), BoundarySpecd::mixed({-1, 1}));
    const auto seq = boundary_residual_sequence<double>(hl, times, kSteps);
    CHECK(seq[2] < 1e-3);
    // the Dirichlet component vanishes identically
    for (double t : times) CHECK(std::abs(halfline_field(hl, 0.0, t)[1]) < 1e-12);
  }
  SUBCASE("Robin converges at second order") {
    const auto hl = solve_mirror_norming(make_data(2, {{{0.4, 0.6}, vec({1.0, {0.3, -0.2}})}}), BoundarySpecd::robin(0.8));
    const auto fit = convergence_order<double>(kSteps, boundary_residual_sequence<double>(hl, times, kSteps));
    CHECK(std::abs(fit.order - 2.0) <= 0.3);
  }
  SUBCASE("generic two-soliton data") {
    Sampler hs(502, SamplingRanges{0.1, 2.0, 0.2, 2.0, true});
    const auto real = hs.soliton_data(3, 2, true, 0.05);
    const auto robin = solve_mirror_norming(real, BoundarySpecd::robin(-0.5));
    CHECK(std::abs(convergence_order<double>(kSteps, boundary_residual_sequence<double>(robin, times, kSteps)).order - 2.0) <= 0.3);
    // Neumann components are even in x, so the h^2 R_xxx term of the
    // one-sided stencil vanishes and the error drops at third order.
    for (const auto& spec : {BoundarySpecd::mixed({1, -1, -1}), BoundarySpecd::rotated_mixed(hs.unitary(3), {1, 1, -1})}) {
      CAPTURE(spec.name());
      const auto fit = convergence_order<double>(kSteps, boundary_residual_sequence<double>(solve_mirror_norming(real, spec), times, kSteps));
      CHECK(std::abs(fit.order - 3.0) <= 0.3);
    }
  }
}

TEST_CASE("asymptotic extraction") {
  SUBCASE("single soliton") {
    const auto d = make_data(2, {{{0.25, 0.5}, vec({2.0, {0.0, 1.0}})}});
    const double t = 3.0;
    const auto r = extract_asymptotic_polarization<double>(d, 0, t);
    CHECK(projective_distance(r.polarization, polarization_of(d[0].beta)) <= 1e-10);
    CHECK(r.position == doctest::Approx(d[0].beta.position_shift(d.point(0)) + d.point(0).velocity() * t).epsilon(1e-8));
  }
  SUBCASE("two solitons at both ends") {
    Sampler s(503);
    for (int trial = 0; trial < 5; ++trial) {
      const auto d = s.soliton_data(2, 2, true, 0.3);
      const double gap = 2.0 * (d.point(1).u() - d.point(0).u());
      const double t = 18.0 / (std::min(d.point(0).v(), d.point(1).v()) * gap) + 1.0;
      for (std::size_t j = 0; j < 2; ++j) {
        const auto in = extract_asymptotic_polarization<double>(d, j, -t);
        const auto out = extract_asymptotic_polarization<double>(d, j, t);
        const auto bi = beta_in<double>(j, d), bo = beta_out<double>(j, d);
        CHECK(projective_distance(in.polarization, polarization_of(bi)) <= 1e-4);
        CHECK(projective_distance(out.polarization, polarization_of(bo)) <= 1e-4);
        CHECK(std::abs(in.position - (bi.position_shift(d.point(j)) - d.point(j).velocity() * t)) <= 1e-3);
        CHECK(std::abs(out.position - (bo.position_shift(d.point(j)) + d.point(j).velocity() * t)) <= 1e-3);
      }
    }
  }
  SUBCASE("too early") {
    const auto d = make_data(1, {{{-0.5, 0.5}, unit(1, 0)}, {{0.5, 0.5}, unit(1, 0)}});
    CHECK_THROWS_AS(extract_asymptotic_polarization<double>(d, 0, 1.0), Error);
  }
}

TEST_CASE("convergence order") {
  const std::vector<double> h{0.1, 0.05, 0.025, 0.0125};
  std::vector<double> r;
  for (double x : h) r.push_back(3.0 * x * x);
  CHECK(convergence_order<double>(h, r).order == doctest::Approx(2.0).epsilon(1e-12));
  r[2] = r[0];
  CHECK_FALSE(convergence_order<double>(h, r).monotone);
  CHECK_THROWS_AS(convergence_order<double>(std::vector<double>{0.1, 0.05}, std::vector<double>{1.0, 0.5}), Error);
}

TEST_CASE("data digest") {
  const auto a = make_data(2, {{{0.5, 0.5}, unit(2, 0)}});
  const auto b = make_data(2, {{{0.5, 0.5}, unit(2, 1)}});
  CHECK(data_digest(a) == data_digest(make_data(2, {{{0.5, 0.5}, unit(2, 0)}})));
  CHECK(data_digest(a) != data_digest(b));
}
