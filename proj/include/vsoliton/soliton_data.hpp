#pragma once

// Domain types for discrete spectral data: spectral points, norming vectors,
// polarizations, N-soliton data sets and boundary specifications.

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "vsoliton/types.hpp"

namespace vsoliton {

/// A discrete eigenvalue k = (u + i v) / 2 in the upper half plane.
///
/// u is twice the real part (soliton velocity is -2u), v twice the imaginary
/// part (soliton amplitude).
template <typename Real>
class SpectralPoint {
 public:
  SpectralPoint(Real u, Real v) : u_(u), v_(v), k_(u / Real(2), v / Real(2)) {
    if (!(v > Real(0))) throw Error(Error::Kind::Validation, "lower half plane: spectral point requires v > 0");
    if (!std::isfinite(u) || !std::isfinite(v)) throw Error(Error::Kind::Validation, "non-finite spectral point");
  }

  static SpectralPoint from_k(Complex<Real> k) { return SpectralPoint(Real(2) * k.real(), Real(2) * k.imag()); }

  Real u() const { return u_; }
  Real v() const { return v_; }
  Complex<Real> k() const { return k_; }
  Complex<Real> k_conj() const { return std::conj(k_); }
  Real velocity() const { return Real(-2) * u_; }

  /// -conj(k): same amplitude, opposite velocity.
  SpectralPoint mirror() const { return SpectralPoint(-u_, v_); }

  friend bool operator==(const SpectralPoint& a, const SpectralPoint& b) { return a.u_ == b.u_ && a.v_ == b.v_; }

 private:
  Real u_;
  Real v_;
  Complex<Real> k_;
};

/// Nonzero vector attached to a spectral point. Its direction is the
/// polarization, its log-norm over v the envelope position.
template <typename Real>
class NormingVector {
 public:
  explicit NormingVector(CVector<Real> beta) : beta_(std::move(beta)) {
    if (beta_.size() == 0 || !(beta_.norm() > Real(0)))
      throw Error(Error::Kind::Validation, "degenerate norming constant: beta must be nonzero");
    if (!beta_.allFinite()) throw Error(Error::Kind::Validation, "degenerate norming constant: non-finite entries");
  }

  const CVector<Real>& vector() const { return beta_; }
  Eigen::Index size() const { return beta_.size(); }
  Real norm() const { return beta_.norm(); }

  /// ln|beta| / v
  Real position_shift(const SpectralPoint<Real>& point) const { return std::log(norm()) / point.v(); }

 private:
  CVector<Real> beta_;
};

namespace detail {

// Index of the first component whose modulus is within relative 1e-12 of the
// largest; ties resolve to the lowest index.
template <typename Real>
Eigen::Index canonical_pivot(const CVector<Real>& p) {
  const Real biggest = p.cwiseAbs().maxCoeff();
  const Real cutoff = biggest * (Real(1) - Real(1e-12));
  for (Eigen::Index i = 0; i < p.size(); ++i)
    if (std::abs(p[i]) >= cutoff) return i;
  return 0;
}

}  // namespace detail

/// Unit vector in C^n stored in canonical phase: the largest-modulus
/// component is real and non-negative.
template <typename Real>
class Polarization {
 public:
  explicit Polarization(const CVector<Real>& raw) {
    const Real nrm = raw.norm();
    if (raw.size() == 0 || !(nrm > Real(0)) || !std::isfinite(nrm))
      throw Error(Error::Kind::Validation, "polarization of a zero or non-finite vector");
    p_ = raw / nrm;
    const Complex<Real> pivot = p_[detail::canonical_pivot(p_)];
    p_ *= std::conj(pivot) / std::abs(pivot);
  }

  const CVector<Real>& vector() const { return p_; }
  Eigen::Index size() const { return p_.size(); }

  /// p p^dagger
  CMatrix<Real> projector() const { return p_ * p_.adjoint(); }

 private:
  CVector<Real> p_;
};

template <typename Real>
Polarization<Real> polarization_of(const NormingVector<Real>& beta) {
  return Polarization<Real>(beta.vector());
}

/// Fubini-Study chordal distance sqrt(1 - |p^dagger q|^2), evaluated as the
/// norm of the component of q orthogonal to p, which keeps full relative
/// accuracy near zero.
template <typename Real>
Real projective_distance(const CVector<Real>& a, const CVector<Real>& b) {
  const CVector<Real> p = a / a.norm();
  const CVector<Real> q = b / b.norm();
  const Complex<Real> overlap = p.dot(q);  // p^dagger q
  const Real d = (q - p * overlap).norm();
  return std::clamp(d, Real(0), Real(1));
}

template <typename Real>
Real projective_distance(const Polarization<Real>& p, const Polarization<Real>& q) {
  return projective_distance<Real>(p.vector(), q.vector());
}

template <typename Real>
struct SolitonEntry {
  SpectralPoint<Real> point;
  NormingVector<Real> beta;
};

/// Separation below which two spectral points count as the same pole.
template <typename Real>
constexpr Real coincident_pole_tolerance = Real(1e-12);

/// Checks pole separation and component counts; throws Error::Kind::Validation.
template <typename Real>
void validate(Eigen::Index n, std::span<const SolitonEntry<Real>> entries) {
  if (n < 1) throw Error(Error::Kind::Validation, "number of components n must be positive");
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].beta.size() != n)
      throw Error(Error::Kind::Validation, "norming vector " + std::to_string(i) + " has length " +
                                               std::to_string(entries[i].beta.size()) + ", expected " +
                                               std::to_string(n));
    if (!(entries[i].point.v() > Real(0))) throw Error(Error::Kind::Validation, "lower half plane");
    for (std::size_t j = 0; j < i; ++j)
      if (std::abs(entries[i].point.k() - entries[j].point.k()) <= coincident_pole_tolerance<Real>)
        throw Error(Error::Kind::Validation,
                    "coincident poles: entries " + std::to_string(j) + " and " + std::to_string(i));
  }
}

/// Validated N-soliton data: n components, ordered list of (k_j, beta_j).
template <typename Real>
class SolitonData {
 public:
  SolitonData(Eigen::Index n, std::vector<SolitonEntry<Real>> entries) : n_(n), entries_(std::move(entries)) {
    validate<Real>(n_, entries_);
  }

  Eigen::Index n() const { return n_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  const SolitonEntry<Real>& operator[](std::size_t i) const { return entries_[i]; }
  const SpectralPoint<Real>& point(std::size_t i) const { return entries_[i].point; }
  const CVector<Real>& beta(std::size_t i) const { return entries_[i].beta.vector(); }
  Complex<Real> k(std::size_t i) const { return entries_[i].point.k(); }
  const std::vector<SolitonEntry<Real>>& entries() const { return entries_; }

  std::vector<std::size_t> canonical_order() const {
    std::vector<std::size_t> order(size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    return order;
  }

  /// Reordered copy: entry i of the result is entry order[i] of this.
  SolitonData permuted(std::span<const std::size_t> order) const {
    std::vector<SolitonEntry<Real>> out;
    out.reserve(order.size());
    for (auto idx : order) out.push_back(entries_.at(idx));
    return SolitonData(n_, std::move(out));
  }

 private:
  Eigen::Index n_;
  std::vector<SolitonEntry<Real>> entries_;
};

// Boundary specifications ----------------------------------------------------

template <typename Real>
struct RobinBoundary {
  Real alpha;
};

template <typename Real>
struct MixedBoundary {
  std::vector<int> signs;  // +1: Dirichlet component, -1: Neumann component
};

template <typename Real>
struct RotatedMixedBoundary {
  CMatrix<Real> unitary;
  std::vector<int> signs;
};

template <typename Real>
class BoundarySpec {
 public:
  using Variant = std::variant<RobinBoundary<Real>, MixedBoundary<Real>, RotatedMixedBoundary<Real>>;

  static BoundarySpec robin(Real alpha) { return BoundarySpec(RobinBoundary<Real>{alpha}); }
  static BoundarySpec mixed(std::vector<int> signs) { return BoundarySpec(MixedBoundary<Real>{std::move(signs)}); }
  static BoundarySpec rotated_mixed(CMatrix<Real> unitary, std::vector<int> signs) {
    return BoundarySpec(RotatedMixedBoundary<Real>{std::move(unitary), std::move(signs)});
  }

  const Variant& kind() const { return kind_; }
  bool is_robin() const { return std::holds_alternative<RobinBoundary<Real>>(kind_); }
  std::string name() const {
    if (is_robin()) return "robin";
    if (std::holds_alternative<MixedBoundary<Real>>(kind_)) return "mixed";
    return "rotated_mixed";
  }

  /// Sign pattern for the mixed kinds, empty for Robin.
  const std::vector<int>& signs() const {
    static const std::vector<int> none;
    if (auto* m = std::get_if<MixedBoundary<Real>>(&kind_)) return m->signs;
    if (auto* r = std::get_if<RotatedMixedBoundary<Real>>(&kind_)) return r->signs;
    return none;
  }

  /// Basis in which the mixed condition is diagonal (identity unless rotated).
  CMatrix<Real> basis(Eigen::Index n) const {
    if (auto* r = std::get_if<RotatedMixedBoundary<Real>>(&kind_)) return r->unitary;
    return identity<Real>(n);
  }

  /// Checks the spec against a component count n.
  void check(Eigen::Index n) const {
    if (is_robin()) {
      if (!std::isfinite(std::get<RobinBoundary<Real>>(kind_).alpha))
        throw Error(Error::Kind::Validation, "Robin parameter must be finite");
      return;
    }
    const auto& s = signs();
    if (static_cast<Eigen::Index>(s.size()) != n)
      throw Error(Error::Kind::Validation, "boundary sign pattern has length " + std::to_string(s.size()) +
                                               ", expected " + std::to_string(n));
    for (int sigma : s)
      if (sigma != 1 && sigma != -1) throw Error(Error::Kind::Validation, "boundary signs must be +1 or -1");
    if (auto* r = std::get_if<RotatedMixedBoundary<Real>>(&kind_)) {
      if (r->unitary.rows() != n || r->unitary.cols() != n)
        throw Error(Error::Kind::Validation, "boundary rotation must be n x n");
      const Real defect = max_abs(CMatrix<Real>(r->unitary.adjoint() * r->unitary - identity<Real>(n)));
      if (defect > Real(1e-12)) throw Error(Error::Kind::Validation, "boundary rotation is not unitary");
    }
  }

 private:
  explicit BoundarySpec(Variant v) : kind_(std::move(v)) {}
  Variant kind_;
};

using SpectralPointd = SpectralPoint<double>;
using NormingVectord = NormingVector<double>;
using Polarizationd = Polarization<double>;
using SolitonEntryd = SolitonEntry<double>;
using SolitonDatad = SolitonData<double>;
using BoundarySpecd = BoundarySpec<double>;

}  // namespace vsoliton
