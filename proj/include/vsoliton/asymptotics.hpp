#pragma once

// Asymptotic norming vectors of a line N-soliton solution, intermediate
// polarizations between collisions, and the pairwise collision relations.
// Functions here expect data indexed by strictly increasing u.

#include <numeric>
#include <span>
#include <vector>

#include "vsoliton/maps.hpp"

namespace vsoliton {

/// Data reordered by increasing u, with the map back to the caller's indices.
template <typename Real>
struct CollisionContext {
  SolitonData<Real> data;
  std::vector<std::size_t> original;  // original[i] = caller index of sorted soliton i

  static CollisionContext from_unsorted(const SolitonData<Real>& input) {
    std::vector<std::size_t> order(input.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return input.point(a).u() < input.point(b).u(); });
    CollisionContext ctx{input.permuted(order), order};
    ctx.check();
    return ctx;
  }

  void check() const {
    for (std::size_t i = 1; i < data.size(); ++i)
      if (!(data.point(i - 1).u() < data.point(i).u()))
        throw Error(Error::Kind::Validation, "collision analysis needs pairwise distinct velocities");
  }
};

namespace detail {

template <typename Real>
void require_increasing_u(const SolitonData<Real>& data) {
  for (std::size_t i = 1; i < data.size(); ++i)
    if (!(data.point(i - 1).u() < data.point(i).u()))
      throw Error(Error::Kind::Validation, "soliton data must be ordered by strictly increasing u");
}

template <typename Real>
std::vector<std::size_t> index_range(std::size_t first, std::size_t last) {
  std::vector<std::size_t> out;
  for (std::size_t i = first; i < last; ++i) out.push_back(i);
  return out;
}

}  // namespace detail

/// gamma_{j,S} = prod_{p not in {j} u S} f_p(conj k_j) * d^dagger_S(k_j) beta_j.
/// The order of S does not matter (the chain product is order independent).
template <typename Real>
CVector<Real> intermediate_gamma(std::size_t j, std::span<const std::size_t> spectators,
                                 const SolitonData<Real>& data) {
  if (j >= data.size()) throw Error(Error::Kind::Validation, "soliton index out of range");
  if (std::find(spectators.begin(), spectators.end(), j) != spectators.end())
    throw Error(Error::Kind::Validation, "soliton cannot be its own spectator");
  const Complex<Real> kj = data.k(j);
  Complex<Real> prefactor(1);
  for (std::size_t p = 0; p < data.size(); ++p) {
    if (p == j || std::find(spectators.begin(), spectators.end(), p) != spectators.end()) continue;
    prefactor *= blaschke_factor<Real>(data.k(p), std::conj(kj));
  }
  const auto chain = build_reduced_chain<Real>(data, spectators);
  return prefactor * chain.apply_adjoint(kj, data.beta(j));
}

/// Norming vector of soliton j as t -> -infinity (slower solitons 0..j-1
/// contribute scalar factors, faster ones the chain).
template <typename Real>
NormingVector<Real> beta_in(std::size_t j, const SolitonData<Real>& data) {
  detail::require_increasing_u(data);
  const auto s = detail::index_range<Real>(j + 1, data.size());
  return NormingVector<Real>(intermediate_gamma<Real>(j, s, data));
}

/// Norming vector of soliton j as t -> +infinity.
template <typename Real>
NormingVector<Real> beta_out(std::size_t j, const SolitonData<Real>& data) {
  detail::require_increasing_u(data);
  const auto s = detail::index_range<Real>(0, j);
  return NormingVector<Real>(intermediate_gamma<Real>(j, s, data));
}

/// Xi_{lj} = |f_j(conj k_l)| sqrt(1 + 4 Im k_j Im k_l |p_{jl}|^2 / |k_l - k_j|^2)
/// with p_{jl} = p_{l,S}^dagger p_{j,{l}+S}.
template <typename Real>
Real collision_xi(std::size_t j, std::size_t l, std::span<const std::size_t> spectators,
                  const SolitonData<Real>& data) {
  std::vector<std::size_t> with_l{l};
  with_l.insert(with_l.end(), spectators.begin(), spectators.end());
  const CVector<Real> pl = intermediate_gamma<Real>(l, spectators, data).normalized();
  const CVector<Real> pj = intermediate_gamma<Real>(j, with_l, data).normalized();
  const Complex<Real> kj = data.k(j);
  const Complex<Real> kl = data.k(l);
  const Real overlap2 = std::norm(pl.dot(pj));
  const Real ratio = Real(4) * kj.imag() * kl.imag() / std::norm(kl - kj);
  return std::abs(blaschke_factor<Real>(kj, std::conj(kl))) * std::sqrt(Real(1) + ratio * overlap2);
}

/// Residual of the two exact (phase-including) pairwise collision relations
///   p_{l,{j}+S} = (c1 / Xi) (I + (c1 - 1) P(p_{j,{l}+S})) p_{l,S},   c1 = conj f_j(conj k_l)
///   p_{j,S}     = (c2 / Xi) (I + (c2 - 1) P(p_{l,S})) p_{j,{l}+S},   c2 = f_l(conj k_j)
/// where p = gamma / |gamma| without canonical phase. Max vector inf-norm.
template <typename Real>
Real collision_consistency_residual(std::size_t j, std::size_t l, std::span<const std::size_t> spectators,
                                    const SolitonData<Real>& data) {
  detail::require_increasing_u(data);
  if (!(j < l)) throw Error(Error::Kind::Validation, "collision relation needs u_j < u_l");
  for (std::size_t s : spectators)
    if (s == j || s == l) throw Error(Error::Kind::Validation, "colliding solitons cannot be spectators");
  std::vector<std::size_t> with_j{j};
  with_j.insert(with_j.end(), spectators.begin(), spectators.end());
  std::vector<std::size_t> with_l{l};
  with_l.insert(with_l.end(), spectators.begin(), spectators.end());

  const CVector<Real> pl_js = intermediate_gamma<Real>(l, with_j, data).normalized();
  const CVector<Real> pj_s = intermediate_gamma<Real>(j, spectators, data).normalized();
  const CVector<Real> pl_s = intermediate_gamma<Real>(l, spectators, data).normalized();
  const CVector<Real> pj_ls = intermediate_gamma<Real>(j, with_l, data).normalized();
  const Real xi = collision_xi<Real>(j, l, spectators, data);

  const Complex<Real> c1 = std::conj(blaschke_factor<Real>(data.k(j), std::conj(data.k(l))));
  const Complex<Real> c2 = blaschke_factor<Real>(data.k(l), std::conj(data.k(j)));
  const CVector<Real> rhs1 = (c1 / xi) * detail::rank_one_update<Real>(pj_ls, c1, pl_s);
  const CVector<Real> rhs2 = (c2 / xi) * detail::rank_one_update<Real>(pl_s, c2, pj_ls);
  return std::max(max_abs(CVector<Real>(rhs1 - pl_js)), max_abs(CVector<Real>(rhs2 - pj_s)));
}

enum class AsymptoticDirection { In, Out };

/// Sum of one-soliton fields built from beta_in (t -> -inf) or beta_out.
template <typename Real>
CVector<Real> asymptotic_profile(const SolitonData<Real>& data, Real x, Real t, AsymptoticDirection direction) {
  detail::require_increasing_u(data);
  CVector<Real> r = CVector<Real>::Zero(data.n());
  for (std::size_t j = 0; j < data.size(); ++j) {
    const auto beta = direction == AsymptoticDirection::In ? beta_in<Real>(j, data) : beta_out<Real>(j, data);
    r += one_soliton_field<Real>(data.point(j), beta, x, t);
  }
  return r;
}

/// In-polarizations pushed through all collisions by the Yang-Baxter map.
template <typename Real>
std::vector<Polarization<Real>> collision_pipeline(const SolitonData<Real>& data, CollisionSchedule schedule) {
  detail::require_increasing_u(data);
  std::vector<Complex<Real>> ks;
  std::vector<Polarization<Real>> p;
  for (std::size_t j = 0; j < data.size(); ++j) {
    ks.push_back(data.k(j));
    p.push_back(polarization_of(beta_in<Real>(j, data)));
  }
  return propagate_collisions<Real>(ks, std::move(p), schedule);
}

/// max_j d(p_out_j, pipeline_j) over both collision schedules.
template <typename Real>
Real factorization_residual(const SolitonData<Real>& data) {
  Real worst = 0;
  for (auto schedule : {CollisionSchedule::LeftmostFirst, CollisionSchedule::RightmostFirst}) {
    const auto piped = collision_pipeline<Real>(data, schedule);
    for (std::size_t j = 0; j < data.size(); ++j)
      worst = std::max(worst, projective_distance(piped[j], polarization_of(beta_out<Real>(j, data))));
  }
  return worst;
}

using CollisionContextd = CollisionContext<double>;

}  // namespace vsoliton
