#pragma once

// Degree-one dressing factors I + (f_j(k) - 1) P_j with rank-one orthogonal
// projectors P_j, chained in an arbitrary order. Reduced chains act on C^n and
// carry the matrix a+(k); full chains act on C^{n+1}, depend on (x, t) and
// reconstruct the field.

#include <cmath>
#include <span>
#include <vector>

#include "vsoliton/soliton_data.hpp"

namespace vsoliton {

/// f_j(k) = (k - k_j) / (k - conj(k_j))
template <typename Real>
Complex<Real> blaschke_factor(Complex<Real> kj, Complex<Real> k) {
  const Complex<Real> denom = k - std::conj(kj);
  if (std::abs(denom) <= Real(1e-14) * (Real(1) + std::abs(kj)))
    throw Error(Error::Kind::Pole, "Blaschke factor evaluated at its pole conj(k_j)");
  return (k - kj) / denom;
}

template <typename Real>
Complex<Real> blaschke_factor(const SpectralPoint<Real>& point, Complex<Real> k) {
  return blaschke_factor<Real>(point.k(), k);
}

/// One factor I + (f(k) - 1) d d^dagger with unit direction d.
template <typename Real>
struct RankOneFactor {
  Complex<Real> pole_k;       // k_j (zero of f)
  CVector<Real> direction;    // unit vector spanning the projector range
  Real raw_norm = Real(1);    // |xi| or |zeta| before normalization

  CMatrix<Real> projector() const { return direction * direction.adjoint(); }

  CMatrix<Real> matrix(Complex<Real> k) const {
    return identity<Real>(direction.size()) + (blaschke_factor<Real>(pole_k, k) - Real(1)) * projector();
  }

  /// Analytic inverse I + (1/f(k) - 1) P.
  CMatrix<Real> inverse(Complex<Real> k) const {
    return identity<Real>(direction.size()) + (Real(1) / blaschke_factor<Real>(pole_k, k) - Real(1)) * projector();
  }

  /// (I + (f(k) - 1) P)^dagger v
  CVector<Real> apply_adjoint(Complex<Real> k, const CVector<Real>& v) const {
    const Complex<Real> c = std::conj(blaschke_factor<Real>(pole_k, k)) - Real(1);
    return v + c * direction * direction.dot(v);
  }
};

/// d_{i_1 ... i_m}(k) = d_{i_1}(k) d_{i_2,{i_1}}(k) ... for an ordered index list.
template <typename Real>
class ReducedChain {
 public:
  ReducedChain(Eigen::Index n, std::vector<std::size_t> order, std::vector<RankOneFactor<Real>> factors)
      : n_(n), order_(std::move(order)), factors_(std::move(factors)) {}

  Eigen::Index n() const { return n_; }
  const std::vector<std::size_t>& order() const { return order_; }
  const std::vector<RankOneFactor<Real>>& factors() const { return factors_; }
  std::size_t size() const { return factors_.size(); }

  /// Ordered product of the first `count` factors at k.
  CMatrix<Real> evaluate(Complex<Real> k, std::size_t count) const {
    CMatrix<Real> m = identity<Real>(n_);
    for (std::size_t i = 0; i < count; ++i) m = m * factors_[i].matrix(k);
    return m;
  }
  CMatrix<Real> evaluate(Complex<Real> k) const { return evaluate(k, factors_.size()); }

  /// (d_1 ... d_count)(k)^dagger v
  CVector<Real> apply_adjoint(Complex<Real> k, CVector<Real> v, std::size_t count) const {
    for (std::size_t i = 0; i < count; ++i) v = factors_[i].apply_adjoint(k, v);
    return v;
  }
  CVector<Real> apply_adjoint(Complex<Real> k, const CVector<Real>& v) const {
    return apply_adjoint(k, v, factors_.size());
  }

  /// Inverse of the full product, assembled from analytic factor inverses.
  CMatrix<Real> inverse(Complex<Real> k) const {
    CMatrix<Real> m = identity<Real>(n_);
    for (auto it = factors_.rbegin(); it != factors_.rend(); ++it) m = m * it->inverse(k);
    return m;
  }

 private:
  Eigen::Index n_;
  std::vector<std::size_t> order_;
  std::vector<RankOneFactor<Real>> factors_;
};

/// Builds the reduced chain for the given (possibly partial) ordered index
/// list: xi = d^dagger_{preceding}(k_idx) beta_idx at every step.
template <typename Real>
ReducedChain<Real> build_reduced_chain(const SolitonData<Real>& data, std::span<const std::size_t> order) {
  std::vector<RankOneFactor<Real>> factors;
  factors.reserve(order.size());
  std::vector<std::size_t> used;
  for (std::size_t idx : order) {
    if (idx >= data.size()) throw Error(Error::Kind::Validation, "chain order references a missing soliton");
    if (std::find(used.begin(), used.end(), idx) != used.end())
      throw Error(Error::Kind::Validation, "chain order repeats an index");
    used.push_back(idx);

    const Complex<Real> kj = data.k(idx);
    CVector<Real> xi = data.beta(idx);
    for (const auto& f : factors) xi = f.apply_adjoint(kj, xi);
    const Real nrm = xi.norm();
    if (!(nrm > Real(1e-13) * data.beta(idx).norm()))
      throw Error(Error::Kind::DegenerateChain, "dressing direction vanished for soliton " + std::to_string(idx));
    factors.push_back(RankOneFactor<Real>{kj, xi / nrm, nrm});
  }
  return ReducedChain<Real>(data.n(), std::vector<std::size_t>(order.begin(), order.end()), std::move(factors));
}

template <typename Real>
ReducedChain<Real> build_reduced_chain(const SolitonData<Real>& data) {
  const auto order = data.canonical_order();
  return build_reduced_chain<Real>(data, order);
}

template <typename Real>
CMatrix<Real> eval_chain(const ReducedChain<Real>& chain, Complex<Real> k) {
  return chain.evaluate(k);
}

/// phi(x, t, k) = k x + 2 k^2 t
template <typename Real>
Complex<Real> phase(Real x, Real t, Complex<Real> k) {
  return k * x + Real(2) * k * k * t;
}

/// (n+1)-dimensional chain at fixed (x, t).
template <typename Real>
class FullChain {
 public:
  FullChain(Eigen::Index n, std::vector<std::size_t> order, Real x, Real t, std::vector<RankOneFactor<Real>> factors)
      : n_(n), order_(std::move(order)), x_(x), t_(t), factors_(std::move(factors)) {}

  Eigen::Index n() const { return n_; }
  Real x() const { return x_; }
  Real t() const { return t_; }
  const std::vector<std::size_t>& order() const { return order_; }
  const std::vector<RankOneFactor<Real>>& factors() const { return factors_; }

  CMatrix<Real> evaluate(Complex<Real> k) const {
    CMatrix<Real> m = identity<Real>(n_ + 1);
    for (const auto& f : factors_) m = m * f.matrix(k);
    return m;
  }

  /// Q(x, t) = sum_j i (k_j - conj k_j) [Sigma_3, Pi_j]; the field is the
  /// top-right n x 1 block, 2 i (k_j - conj k_j) (Pi_j)_{top,right} per factor.
  CVector<Real> field() const {
    CVector<Real> r = CVector<Real>::Zero(n_);
    for (const auto& f : factors_) {
      const Complex<Real> weight = Complex<Real>(0, 2) * (f.pole_k - std::conj(f.pole_k));
      r += weight * f.direction.head(n_) * std::conj(f.direction[n_]);
    }
    return r;
  }

 private:
  Eigen::Index n_;
  std::vector<std::size_t> order_;
  Real x_;
  Real t_;
  std::vector<RankOneFactor<Real>> factors_;
};

/// exp(-i phi(x,t,conj k) Sigma_3) (beta; -1), rescaled by exp(-|Im phi|).
/// Only the direction enters the projector, so the rescaling is exact and
/// keeps both blocks representable for any (x, t).
template <typename Real>
CVector<Real> seed_direction(const CVector<Real>& beta, Complex<Real> k, Real x, Real t) {
  const Complex<Real> phi = phase<Real>(x, t, std::conj(k));
  const Real shift = std::abs(phi.imag());
  const Complex<Real> i(0, 1);
  const Eigen::Index n = beta.size();
  CVector<Real> z(n + 1);
  z.head(n) = std::exp(-i * phi - shift) * beta;
  z[n] = -std::exp(i * phi - shift);
  return z;
}

template <typename Real>
FullChain<Real> build_full_chain(const SolitonData<Real>& data, std::span<const std::size_t> order, Real x, Real t) {
  std::vector<RankOneFactor<Real>> factors;
  factors.reserve(order.size());
  for (std::size_t idx : order) {
    if (idx >= data.size()) throw Error(Error::Kind::Validation, "chain order references a missing soliton");
    const Complex<Real> kj = data.k(idx);
    CVector<Real> zeta = seed_direction<Real>(data.beta(idx), kj, x, t);
    for (const auto& f : factors) zeta = f.apply_adjoint(kj, zeta);
    const Real nrm = zeta.norm();
    if (!(nrm > Real(0)) || !std::isfinite(nrm))
      throw Error(Error::Kind::DegenerateChain, "full dressing direction vanished for soliton " + std::to_string(idx));
    factors.push_back(RankOneFactor<Real>{kj, zeta / nrm, nrm});
  }
  return FullChain<Real>(data.n(), std::vector<std::size_t>(order.begin(), order.end()), x, t, std::move(factors));
}

template <typename Real>
CVector<Real> reconstruct_field(const SolitonData<Real>& data, Real x, Real t, std::span<const std::size_t> order) {
  return build_full_chain<Real>(data, order, x, t).field();
}

template <typename Real>
CVector<Real> reconstruct_field(const SolitonData<Real>& data, Real x, Real t) {
  const auto order = data.canonical_order();
  return reconstruct_field<Real>(data, x, t, order);
}

/// Closed-form one-soliton p v exp(-i(u x + (u^2 - v^2) t)) / cosh(v (x + 2 u t - dx)).
/// Uses beta/|beta| as is, so a global phase on beta carries through.
template <typename Real>
CVector<Real> one_soliton_field(const SpectralPoint<Real>& point, const NormingVector<Real>& beta, Real x, Real t) {
  const Real u = point.u();
  const Real v = point.v();
  const Real dx = beta.position_shift(point);
  const Complex<Real> carrier = std::exp(Complex<Real>(0, -(u * x + (u * u - v * v) * t)));
  const Real envelope = v / std::cosh(v * (x + Real(2) * u * t - dx));
  return (beta.vector() / beta.norm()) * (carrier * envelope);
}

/// Max over sample points of the entrywise distance between the two reduced
/// chains, the two full chains, and the two reconstructed fields.
template <typename Real>
Real permutation_residual(const SolitonData<Real>& data, std::span<const std::size_t> order_a,
                          std::span<const std::size_t> order_b, std::span<const Complex<Real>> sample_ks,
                          std::span<const std::pair<Real, Real>> sample_xt = {}) {
  const auto a = build_reduced_chain<Real>(data, order_a);
  const auto b = build_reduced_chain<Real>(data, order_b);
  Real worst = 0;
  for (const auto& k : sample_ks) worst = std::max(worst, max_abs(CMatrix<Real>(a.evaluate(k) - b.evaluate(k))));
  for (const auto& [x, t] : sample_xt) {
    const auto fa = build_full_chain<Real>(data, order_a, x, t);
    const auto fb = build_full_chain<Real>(data, order_b, x, t);
    worst = std::max(worst, max_abs(CVector<Real>(fa.field() - fb.field())));
    for (const auto& k : sample_ks)
      worst = std::max(worst, max_abs(CMatrix<Real>(fa.evaluate(k) - fb.evaluate(k))));
  }
  return worst;
}

using ReducedChaind = ReducedChain<double>;
using FullChaind = FullChain<double>;

}  // namespace vsoliton
