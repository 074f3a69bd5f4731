#include <doctest.h>

#include "support.hpp"

using namespace vt;

TEST_CASE("spectral point") {
  const SpectralPointd p(0.6, 1.2);
  CHECK(p.k() == Complexd(0.3, 0.6));
  CHECK(p.velocity() == doctest::Approx(-1.2));
  CHECK(p.mirror().u() == -0.6);
  CHECK(p.mirror().v() == 1.2);
  CHECK(p.mirror().k() == -std::conj(p.k()));
  CHECK_THROWS_WITH_AS(SpectralPointd(0.0, 0.0), doctest::Contains("lower half plane"), Error);
  CHECK_THROWS_AS(SpectralPointd::from_k({0.0, -0.5}), Error);
}

TEST_CASE("polarization_of") {
  auto p = polarization_of(NormingVectord(vec({1.0, 0.0})));
  CHECK(max_abs(CVectord(p.vector() - vec({1.0, 0.0}))) == 0.0);

  p = polarization_of(NormingVectord(vec({0.0, {0.0, 2.0}})));
  CHECK(max_abs(CVectord(p.vector() - vec({0.0, 1.0}))) < 1e-15);

  // largest component 4i becomes real; the result is (3,4i)/5 times -i
  p = polarization_of(NormingVectord(vec({3.0, {0.0, 4.0}})));
  CHECK(projective_distance<double>(p.vector(), vec({0.6, {0.0, 0.8}})) < 1e-15);
  CHECK(p.vector()[1].imag() == 0.0);
  CHECK(p.vector()[1].real() == doctest::Approx(0.8));

  CHECK_THROWS_WITH_AS(NormingVectord(vec({0.0, 0.0})), doctest::Contains("degenerate norming constant"), Error);
}

TEST_CASE("canonical phase ties resolve to the lowest index") {
  const Polarizationd p(vec({{0.0, 1.0}, {1.0, 0.0}}));
  CHECK(p.vector()[0].imag() == 0.0);
  CHECK(p.vector()[0].real() == doctest::Approx(std::sqrt(0.5)));
}

TEST_CASE("projective distance examples") {
  const CVectord e1 = unit(2, 0), e2 = unit(2, 1);
  CHECK(projective_distance(e1, e1) == 0.0);
  CHECK(projective_distance(e1, e2) == 1.0);
  CHECK(projective_distance<double>(e1, (e1 + e2) / std::sqrt(2.0)) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
}

TEST_CASE("projective distance is symmetric and phase invariant") {
  Sampler s(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index n = 1 + trial % 4;
    const CVectord a = s.gaussian_vector(n), b = s.gaussian_vector(n);
    const double theta = s.uniform(0, 6.283185307179586);
    const double d = projective_distance(a, b);
    CHECK(std::abs(d - projective_distance(b, a)) <= 1e-12);
    CHECK(std::abs(d - projective_distance<double>(a, std::polar(1.0, theta) * b)) <= 1e-12);
    CHECK(d >= 0.0);
    CHECK(d <= 1.0);
  }
}

TEST_CASE("polarization is invariant under complex scaling") {
  Sampler s(12);
  for (int trial = 0; trial < 100; ++trial) {
    const CVectord b = s.gaussian_vector(3);
    const Complexd c(s.normal(), s.normal());
    const auto p = polarization_of(NormingVectord(b));
    const auto q = polarization_of(NormingVectord(c * b));
    CHECK(projective_distance(p, q) <= 1e-12);
    // canonical phase makes them equal as plain vectors
    CHECK(max_abs(CVectord(p.vector() - q.vector())) <= 1e-12);
    CHECK(std::abs(p.vector().norm() - 1.0) <= 1e-14);
  }
}

TEST_CASE("validate") {
  CHECK_NOTHROW(make_data(2, {{{0.0, 0.5}, unit(2, 0)}}));
  CHECK_THROWS_WITH_AS(make_data(2, {{{0.0, 0.5}, unit(2, 0)}, {{0.0, 0.5}, unit(2, 1)}}),
                       doctest::Contains("coincident poles"), Error);
  CHECK_THROWS_WITH_AS(make_data(2, {{{0.0, 0.5}, unit(2, 0)}, {{1e-13, 0.5}, unit(2, 1)}}),
                       doctest::Contains("coincident poles"), Error);
  CHECK_NOTHROW(make_data(2, {{{0.0, 0.5}, unit(2, 0)}, {{1e-9, 0.5}, unit(2, 1)}}));
  CHECK_THROWS_WITH_AS(make_data(2, {{{0.0, -0.5}, unit(2, 0)}}), doctest::Contains("lower half plane"), Error);
  CHECK_THROWS_WITH_AS(make_data(3, {{{0.0, 0.5}, unit(2, 0)}}), doctest::Contains("length"), Error);
}

TEST_CASE("boundary spec checks") {
  CHECK_NOTHROW(BoundarySpecd::mixed({1, -1}).check(2));
  CHECK_THROWS_AS(BoundarySpecd::mixed({1, -1}).check(3), Error);
  CHECK_THROWS_AS(BoundarySpecd::mixed({1, 0}).check(2), Error);
  CMatrixd bad = CMatrixd::Identity(2, 2);
  bad(0, 1) = 1e-6;
  CHECK_THROWS_WITH_AS(BoundarySpecd::rotated_mixed(bad, {1, -1}).check(2), doctest::Contains("unitary"), Error);
  Sampler s(3);
  CHECK_NOTHROW(BoundarySpecd::rotated_mixed(s.unitary(3), {1, -1, 1}).check(3));
  CHECK(BoundarySpecd::robin(0.5).name() == "robin");
}
