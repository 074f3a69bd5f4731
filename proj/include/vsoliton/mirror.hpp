#pragma once

// Half-line N-soliton data by the mirror image method: the combined 2N data
// carry real points k_1..k_N (u > 0) followed by mirrors -conj(k_j), whose
// norming vectors are fixed by the boundary matrix M(k).

#include <Eigen/SVD>
#include <algorithm>
#include <numeric>

#include "vsoliton/asymptotics.hpp"

namespace vsoliton {

/// M(k) in the normalization used for the mirror constraint. With this sign
/// choice a Robin parameter alpha gives R_x(0,t) = 2 alpha R(0,t) and a mixed
/// sign +1 gives a Dirichlet component (-1 Neumann), in the basis U.
template <typename Real>
CMatrix<Real> big_m(Complex<Real> k, const BoundarySpec<Real>& spec, Eigen::Index n) {
  if (spec.is_robin()) {
    const Real alpha = std::get<RobinBoundary<Real>>(spec.kind()).alpha;
    const Complex<Real> i(0, 1);
    const Complex<Real> den = k - i * alpha;
    if (std::abs(den) <= Real(1e-14)) throw Error(Error::Kind::Pole, "boundary matrix pole at k = i alpha");
    return identity<Real>(n) * ((k + i * alpha) / den);
  }
  const auto& s = spec.signs();
  CVector<Real> diag(n);
  for (Eigen::Index j = 0; j < n; ++j) diag[j] = -Real(s.at(static_cast<std::size_t>(j)));
  const CMatrix<Real> u = spec.basis(n);
  return u.adjoint() * diag.asDiagonal() * u;
}

/// A_j = prod_{i != j} f_i(k_j) [d_{2N}^{-1} ... d_{j+1}^{-1}] pi_j [d_{j-1}^{-1} ... d_1^{-1}],
/// all at k_j, for the chain in canonical order. j is zero-based.
template <typename Real>
CMatrix<Real> a_matrix(std::size_t j, const SolitonData<Real>& data) {
  if (j >= data.size()) throw Error(Error::Kind::Validation, "soliton index out of range");
  const auto chain = build_reduced_chain<Real>(data);
  const auto& facs = chain.factors();
  const Complex<Real> kj = data.k(j);
  Complex<Real> c(1);
  for (std::size_t i = 0; i < data.size(); ++i)
    if (i != j) c *= blaschke_factor<Real>(data.k(i), kj);
  CMatrix<Real> m = identity<Real>(data.n());
  for (std::size_t q = facs.size(); q-- > j + 1;) m = m * facs[q].inverse(kj);
  m = m * facs[j].projector();
  for (std::size_t q = j; q-- > 0;) m = m * facs[q].inverse(kj);
  return c * m;
}

template <typename Real>
struct HalfLineData {
  SolitonData<Real> real_data;    // N points, 0 < u_1 < ... < u_N
  SolitonData<Real> mirror_data;  // k_{j+N} = -conj(k_j)
  BoundarySpec<Real> spec;
  SolitonData<Real> combined;     // real then mirror

  std::size_t size() const { return real_data.size(); }
  Eigen::Index n() const { return real_data.n(); }
};

namespace detail {

template <typename Real>
void require_halfline_points(const SolitonData<Real>& real) {
  for (std::size_t j = 0; j < real.size(); ++j) {
    const Real u = real.point(j).u();
    if (std::abs(u) <= Real(1e-12))
      throw Error(Error::Kind::Domain, "imaginary axis: u = 0 makes a soliton coincide with its mirror image");
    if (u < Real(0)) throw Error(Error::Kind::Validation, "half-line solitons need u > 0");
    if (j > 0 && !(real.point(j - 1).u() < u))
      throw Error(Error::Kind::Validation, "half-line solitons must be ordered by strictly increasing u");
  }
}

// log-space product of Blaschke factors, exponentiated once
template <typename Real>
Complex<Real> blaschke_product(std::span<const Complex<Real>> poles, Complex<Real> k) {
  Complex<Real> log_sum(0);
  for (const auto& kp : poles) log_sum += std::log(blaschke_factor<Real>(kp, k));
  return std::exp(log_sum);
}

template <typename Real>
CVector<Real> guarded_solve(const CMatrix<Real>& a, const CVector<Real>& b, const char* what) {
  Eigen::JacobiSVD<CMatrix<Real>> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const Real smax = s.maxCoeff();
  const Real smin = s.minCoeff();
  if (!(smin > Real(0)) || smax / smin > Real(1e12))
    throw Error(Error::Kind::Singular, std::string("singular linear system in ") + what);
  return svd.solve(b);
}

}  // namespace detail

/// Solves the mirror constraints beta_j beta_{j+N}^dagger = M(conj k_j) A_{j+N}
/// for the mirror norming vectors, descending from j = N to 1. Each step uses
/// only the mirror projectors already found; the mirror betas are recovered
/// at the end from d^dagger_{1..j+N-1}(k_{j+N}) beta_{j+N} = xi_{j+N}.
template <typename Real>
HalfLineData<Real> solve_mirror_norming(const SolitonData<Real>& real, const BoundarySpec<Real>& spec) {
  detail::require_halfline_points(real);
  spec.check(real.n());
  const std::size_t count = real.size();
  const Eigen::Index n = real.n();

  std::vector<Complex<Real>> ks;
  for (std::size_t j = 0; j < count; ++j) ks.push_back(real.k(j));
  for (std::size_t j = 0; j < count; ++j) ks.push_back(real.point(j).mirror().k());

  const auto real_chain = build_reduced_chain<Real>(real);
  std::vector<std::optional<RankOneFactor<Real>>> mirror(count);
  std::vector<CVector<Real>> xi(count);
  for (std::size_t j = count; j-- > 0;) {
    const Complex<Real> km = ks[j + count];
    std::vector<Complex<Real>> others;
    for (std::size_t i = 0; i < 2 * count; ++i)
      if (i != j + count) others.push_back(ks[i]);
    const Complex<Real> c = detail::blaschke_product<Real>(others, km);
    CMatrix<Real> l = identity<Real>(n);
    for (std::size_t q = count; q-- > j + 1;) l = l * mirror[q]->inverse(km);
    const CMatrix<Real> a = big_m<Real>(std::conj(real.k(j)), spec, n) * (c * l);
    const CVector<Real> v = detail::guarded_solve<Real>(a, real.beta(j), "mirror projector");
    xi[j] = v / v.squaredNorm();
    const Real nrm = xi[j].norm();
    mirror[j] = RankOneFactor<Real>{km, xi[j] / nrm, nrm};
  }

  std::vector<SolitonEntry<Real>> mirror_entries;
  for (std::size_t j = 0; j < count; ++j) {
    const Complex<Real> km = ks[j + count];
    // (d_1 ... d_{j+N-1})(k_{j+N})^dagger assembled factor by factor
    CMatrix<Real> d = identity<Real>(n);
    for (const auto& f : real_chain.factors()) d = d * f.matrix(km);
    for (std::size_t q = 0; q < j; ++q) d = d * mirror[q]->matrix(km);
    const CVector<Real> beta = detail::guarded_solve<Real>(d.adjoint(), xi[j], "mirror norming recovery");
    mirror_entries.push_back({real.point(j).mirror(), NormingVector<Real>(beta)});
  }

  std::vector<SolitonEntry<Real>> all = real.entries();
  all.insert(all.end(), mirror_entries.begin(), mirror_entries.end());
  return HalfLineData<Real>{real, SolitonData<Real>(n, mirror_entries), spec, SolitonData<Real>(n, std::move(all))};
}

/// Rebuilds HalfLineData from given combined data without solving, e.g. to
/// inspect externally supplied or perturbed mirror norming vectors.
template <typename Real>
HalfLineData<Real> assemble_halfline(const SolitonData<Real>& combined, const BoundarySpec<Real>& spec) {
  if (combined.size() % 2 != 0) throw Error(Error::Kind::Validation, "combined half-line data need 2N points");
  const std::size_t count = combined.size() / 2;
  std::vector<SolitonEntry<Real>> re(combined.entries().begin(), combined.entries().begin() + count);
  std::vector<SolitonEntry<Real>> mi(combined.entries().begin() + count, combined.entries().end());
  SolitonData<Real> real(combined.n(), re);
  detail::require_halfline_points(real);
  for (std::size_t j = 0; j < count; ++j)
    if (!(mi[j].point == real.point(j).mirror()))
      throw Error(Error::Kind::Validation, "mirror point " + std::to_string(j) + " is not -conj(k_j)");
  spec.check(combined.n());
  return HalfLineData<Real>{real, SolitonData<Real>(combined.n(), mi), spec, combined};
}

/// max_j || beta_j beta_{j+N}^dagger - M(conj k_j) A_{j+N} ||_inf
template <typename Real>
Real mirror_constraint_residual(const HalfLineData<Real>& hl) {
  const std::size_t count = hl.size();
  Real worst = 0;
  for (std::size_t j = 0; j < count; ++j) {
    const CMatrix<Real> lhs = hl.combined.beta(j) * hl.combined.beta(j + count).adjoint();
    const CMatrix<Real> rhs = big_m<Real>(std::conj(hl.combined.k(j)), hl.spec, hl.n()) * a_matrix<Real>(j + count, hl.combined);
    worst = std::max(worst, max_abs(CMatrix<Real>(lhs - rhs)));
  }
  return worst;
}

/// Projective residual of the mirror polarization relations on the combined
/// data, with gamma as in intermediate_gamma (zero-based, mirror of j is j+N):
///   for every ordering (i_1..i_N) and position a:
///     gamma_{i_a+N, {i_1..i_N, i_1+N..i_{a-1}+N}}  ~  m(k_{i_a}) gamma_{i_a, {i_{a+1}..i_N}}
///   and for every j:
///     gamma_{j+N, {1..N}}  ~  m(k_j) gamma_{j, {1..N} \ {j}}
template <typename Real>
Real mirror_polarization_residual(const HalfLineData<Real>& hl) {
  const std::size_t count = hl.size();
  const auto& data = hl.combined;
  Real worst = 0;
  std::vector<std::size_t> perm(count);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  do {
    for (std::size_t a = 0; a < count; ++a) {
      const std::size_t ia = perm[a];
      std::vector<std::size_t> lhs_set(perm.begin(), perm.end());
      for (std::size_t q = 0; q < a; ++q) lhs_set.push_back(perm[q] + count);
      const std::vector<std::size_t> rhs_set(perm.begin() + static_cast<std::ptrdiff_t>(a) + 1, perm.end());
      const CVector<Real> lhs = intermediate_gamma<Real>(ia + count, lhs_set, data);
      const CVector<Real> rhs = boundary_small_m<Real>(data.k(ia), hl.spec, hl.n()) * intermediate_gamma<Real>(ia, rhs_set, data);
      worst = std::max(worst, projective_distance<Real>(lhs, rhs));
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  std::vector<std::size_t> reals(count);
  std::iota(reals.begin(), reals.end(), std::size_t{0});
  for (std::size_t j = 0; j < count; ++j) {
    std::vector<std::size_t> others;
    for (std::size_t q = 0; q < count; ++q)
      if (q != j) others.push_back(q);
    const CVector<Real> lhs = intermediate_gamma<Real>(j + count, reals, data);
    const CVector<Real> rhs = boundary_small_m<Real>(data.k(j), hl.spec, hl.n()) * intermediate_gamma<Real>(j, others, data);
    worst = std::max(worst, projective_distance<Real>(lhs, rhs));
  }
  return worst;
}

/// Field of the half-line solution at x >= 0.
template <typename Real>
CVector<Real> halfline_field(const HalfLineData<Real>& hl, Real x, Real t) {
  if (x < Real(0)) throw Error(Error::Kind::Domain, "half-line field requested at x < 0");
  return reconstruct_field<Real>(hl.combined, x, t);
}

/// Norming vector of real soliton j as t -> -infinity on the half-line:
/// only faster real solitons have passed it.
template <typename Real>
NormingVector<Real> halfline_beta_in(std::size_t j, const HalfLineData<Real>& hl) {
  std::vector<std::size_t> faster;
  for (std::size_t i = j + 1; i < hl.size(); ++i) faster.push_back(i);
  return NormingVector<Real>(intermediate_gamma<Real>(j, faster, hl.combined));
}

/// Norming vector of the reflected soliton j (parameter -conj k_j) as
/// t -> +infinity: the mirrors of faster solitons lie beyond it.
template <typename Real>
NormingVector<Real> halfline_beta_out(std::size_t j, const HalfLineData<Real>& hl) {
  std::vector<std::size_t> slower;
  for (std::size_t i = j + 1; i < hl.size(); ++i) slower.push_back(i + hl.size());
  return NormingVector<Real>(intermediate_gamma<Real>(j + hl.size(), slower, hl.combined));
}

/// Pushes the incoming polarizations through every boundary reflection and
/// collision (two event schedules) and compares with the outgoing ones read
/// off the combined data. Max projective distance.
template <typename Real>
Real reflection_consistency_residual(const HalfLineData<Real>& hl) {
  MapState<Real> start;
  for (std::size_t j = 0; j < hl.size(); ++j)
    start.emplace_back(polarization_of(halfline_beta_in<Real>(j, hl)), hl.real_data.k(j));
  Real worst = 0;
  for (auto schedule : {CollisionSchedule::LeftmostFirst, CollisionSchedule::RightmostFirst}) {
    const auto end = reflect_and_collide<Real>(start, hl.spec, schedule);
    for (std::size_t j = 0; j < hl.size(); ++j) {
      if (end[j].k != hl.mirror_data.k(j)) return std::numeric_limits<Real>::infinity();
      worst = std::max(worst, projective_distance(end[j].p, polarization_of(halfline_beta_out<Real>(j, hl))));
    }
  }
  return worst;
}

using HalfLineDatad = HalfLineData<double>;

}  // namespace vsoliton
