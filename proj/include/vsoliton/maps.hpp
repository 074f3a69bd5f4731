#pragma once

// Polarization maps on CP^{n-1}: the two-soliton Yang-Baxter map, boundary
// reflection maps, lazily composed maps on tuples of (polarization, k), and
// residual checkers for the algebraic identities they satisfy.

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vsoliton/dressing.hpp"

namespace vsoliton {

/// A polarization carried together with its spectral parameter. The
/// parameter travels with the point through every map application.
template <typename Real>
struct ExtendedPoint {
  Polarization<Real> p;
  Complex<Real> k;

  ExtendedPoint(Polarization<Real> pol, Complex<Real> param) : p(std::move(pol)), k(param) {
    if (!(std::abs(k.real()) > Real(1e-12)))
      throw Error(Error::Kind::Domain, "extended point requires Re k != 0");
  }
};

template <typename Real>
using MapState = std::vector<ExtendedPoint<Real>>;

namespace detail {

// (I + (c - 1) q q^dagger / q^dagger q) v
template <typename Real>
CVector<Real> rank_one_update(const CVector<Real>& q, Complex<Real> c, const CVector<Real>& v) {
  return v + (c - Real(1)) * q * (q.dot(v) / q.squaredNorm());
}

template <typename Real>
Complex<Real> checked_ratio(Complex<Real> num, Complex<Real> den, const char* what) {
  if (std::abs(den) <= Real(1e-14) * (Real(1) + std::abs(num)))
    throw Error(Error::Kind::Pole, std::string("Yang-Baxter map pole: ") + what);
  return num / den;
}

}  // namespace detail

/// R(k1, k2): (p1, p2) -> (p1', p2') with
///   p1' = (I + ((k1* - k2)/(k1* - k2*) - 1) P2) p1
///   p2' = (I + ((k2 - k1*)/(k2 - k1) - 1) P1) p2
template <typename Real>
std::pair<Polarization<Real>, Polarization<Real>> yb_map(Complex<Real> k1, Complex<Real> k2, const Polarization<Real>& p1,
                                                         const Polarization<Real>& p2) {
  if (!(k1.imag() > Real(0)) || !(k2.imag() > Real(0)))
    throw Error(Error::Kind::Domain, "Yang-Baxter map parameters must lie in the upper half plane");
  const Complex<Real> c1 = detail::checked_ratio<Real>(std::conj(k1) - k2, std::conj(k1) - std::conj(k2), "k1 = k2");
  const Complex<Real> c2 = detail::checked_ratio<Real>(k2 - std::conj(k1), k2 - k1, "k1 = k2");
  return {Polarization<Real>(detail::rank_one_update<Real>(p2.vector(), c1, p1.vector())),
          Polarization<Real>(detail::rank_one_update<Real>(p1.vector(), c2, p2.vector()))};
}

/// Small boundary matrix m(k): (h/|h|) I with h = (k - i alpha)/(k + i alpha)
/// for Robin, diag(sigma) for mixed, U^dagger diag(sigma) U when rotated.
template <typename Real>
CMatrix<Real> boundary_small_m(Complex<Real> k, const BoundarySpec<Real>& spec, Eigen::Index n) {
  if (spec.is_robin()) {
    const Real alpha = std::get<RobinBoundary<Real>>(spec.kind()).alpha;
    const Complex<Real> i(0, 1);
    const Complex<Real> den = k + i * alpha;
    if (std::abs(den) <= Real(1e-14)) throw Error(Error::Kind::Pole, "Robin boundary matrix pole at k = -i alpha");
    const Complex<Real> h = (k - i * alpha) / den;
    return identity<Real>(n) * (h / std::abs(h));
  }
  const auto& s = spec.signs();
  CVector<Real> diag(n);
  for (Eigen::Index j = 0; j < n; ++j) diag[j] = Real(s.at(static_cast<std::size_t>(j)));
  const CMatrix<Real> u = spec.basis(n);
  return u.adjoint() * diag.asDiagonal() * u;
}

/// B: (p, k) -> ((I + (k - k*)/(k + k*) P) m(k) p, -k*).
template <typename Real>
ExtendedPoint<Real> reflection_map(Complex<Real> k, const Polarization<Real>& p, const BoundarySpec<Real>& spec) {
  if (!(std::abs(k.real()) > Real(1e-12)))
    throw Error(Error::Kind::Domain, "reflection map undefined on the imaginary axis");
  const CMatrix<Real> m = boundary_small_m<Real>(k, spec, p.size());
  const Complex<Real> c = (k - std::conj(k)) / (k + std::conj(k));
  const CVector<Real> mp = m * p.vector();
  const CVector<Real> out = mp + c * p.vector() * p.vector().dot(mp);
  return ExtendedPoint<Real>(Polarization<Real>(out), -std::conj(k));
}

// Map objects ---------------------------------------------------------------

/// A map on tuples of extended points, stored as a flat sequence of named
/// site operations. Composition concatenates sequences, so it is associative;
/// nothing runs until apply().
template <typename Real>
class MapObject {
 public:
  using SiteOp = std::function<void(MapState<Real>&)>;

  static MapObject identity() { return MapObject(); }

  static MapObject leaf(std::string name, SiteOp op) {
    MapObject m;
    m.ops_.push_back({std::move(name), std::move(op)});
    return m;
  }

  /// (*this) after `rhs`: rhs is applied first.
  MapObject operator*(const MapObject& rhs) const {
    MapObject out = rhs;
    out.ops_.insert(out.ops_.end(), ops_.begin(), ops_.end());
    return out;
  }

  MapState<Real> apply(MapState<Real> state) const {
    for (const auto& [name, op] : ops_) {
      try {
        op(state);
      } catch (const Error& e) {
        throw Error(e.kind(), "while applying " + name + ": " + e.what());
      }
    }
    return state;
  }

  std::size_t length() const { return ops_.size(); }

  /// Names in application order.
  std::vector<std::string> trace() const {
    std::vector<std::string> names;
    for (const auto& op : ops_) names.push_back(op.first);
    return names;
  }

 private:
  std::vector<std::pair<std::string, SiteOp>> ops_;
};

/// R_{ij}: slot i receives the first output of R(k_i, k_j)(p_i, p_j), slot j
/// the second. Indices are zero-based; R_{ji} is the flipped action.
template <typename Real>
MapObject<Real> yb_site(std::size_t i, std::size_t j) {
  return MapObject<Real>::leaf("R_" + std::to_string(i + 1) + std::to_string(j + 1), [i, j](MapState<Real>& s) {
    auto [a, b] = yb_map<Real>(s.at(i).k, s.at(j).k, s.at(i).p, s.at(j).p);
    s[i].p = std::move(a);
    s[j].p = std::move(b);
  });
}

template <typename Real>
MapObject<Real> reflection_site(std::size_t j, BoundarySpec<Real> spec) {
  return MapObject<Real>::leaf("B_" + std::to_string(j + 1), [j, spec](MapState<Real>& s) {
    s.at(j) = reflection_map<Real>(s[j].k, s[j].p, spec);
  });
}

/// S: (p, k) -> (p, -k*).
template <typename Real>
MapObject<Real> twist_site(std::size_t j) {
  return MapObject<Real>::leaf("S_" + std::to_string(j + 1), [j](MapState<Real>& s) {
    s.at(j) = ExtendedPoint<Real>(s[j].p, -std::conj(s[j].k));
  });
}

/// Max projective distance per slot; infinity if any parameter differs.
template <typename Real>
Real state_distance(const MapState<Real>& a, const MapState<Real>& b) {
  if (a.size() != b.size()) return std::numeric_limits<Real>::infinity();
  Real worst = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].k != b[i].k) return std::numeric_limits<Real>::infinity();
    worst = std::max(worst, projective_distance(a[i].p, b[i].p));
  }
  return worst;
}

namespace detail {

template <typename Real>
Real polarization_pair_distance(const std::vector<Polarization<Real>>& a, const std::vector<Polarization<Real>>& b) {
  Real worst = 0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, projective_distance(a[i], b[i]));
  return worst;
}

// Applies R_{ij} with fixed parameters on a plain polarization tuple.
template <typename Real>
void apply_yb(std::vector<Polarization<Real>>& p, std::span<const Complex<Real>> ks, std::size_t i, std::size_t j) {
  auto [a, b] = yb_map<Real>(ks[i], ks[j], p[i], p[j]);
  p[i] = std::move(a);
  p[j] = std::move(b);
}

}  // namespace detail

/// R12 R13 R23 against R23 R13 R12 (rightmost applied first).
template <typename Real>
Real ybe_residual(Complex<Real> k1, Complex<Real> k2, Complex<Real> k3, const Polarization<Real>& p1,
                  const Polarization<Real>& p2, const Polarization<Real>& p3) {
  const std::vector<Complex<Real>> ks{k1, k2, k3};
  std::vector<Polarization<Real>> lhs{p1, p2, p3};
  detail::apply_yb<Real>(lhs, ks, 1, 2);
  detail::apply_yb<Real>(lhs, ks, 0, 2);
  detail::apply_yb<Real>(lhs, ks, 0, 1);
  std::vector<Polarization<Real>> rhs{p1, p2, p3};
  detail::apply_yb<Real>(rhs, ks, 0, 1);
  detail::apply_yb<Real>(rhs, ks, 0, 2);
  detail::apply_yb<Real>(rhs, ks, 1, 2);
  return detail::polarization_pair_distance(lhs, rhs);
}

/// R21(k2, k1) R12(k1, k2) against the identity.
template <typename Real>
Real reversibility_residual(Complex<Real> k1, Complex<Real> k2, const Polarization<Real>& p1,
                            const Polarization<Real>& p2) {
  const std::vector<Complex<Real>> ks{k1, k2};
  std::vector<Polarization<Real>> p{p1, p2};
  detail::apply_yb<Real>(p, ks, 0, 1);
  detail::apply_yb<Real>(p, ks, 1, 0);
  return std::max(projective_distance(p[0], p1), projective_distance(p[1], p2));
}

/// B1 R21 B2 R12 against R21 B2 R12 B1 on the extended carrier; the
/// parameters appearing in each R are the ones the points carry at that
/// stage, which reproduces the (-k*) arguments of the reflection equation.
template <typename Real>
Real reflection_equation_residual(Complex<Real> k1, Complex<Real> k2, const Polarization<Real>& p1,
                                  const Polarization<Real>& p2, const BoundarySpec<Real>& spec) {
  const MapState<Real> start{ExtendedPoint<Real>(p1, k1), ExtendedPoint<Real>(p2, k2)};
  const auto lhs = reflection_site<Real>(0, spec) * yb_site<Real>(1, 0) * reflection_site<Real>(1, spec) *
                   yb_site<Real>(0, 1);
  const auto rhs = yb_site<Real>(1, 0) * reflection_site<Real>(1, spec) * yb_site<Real>(0, 1) *
                   reflection_site<Real>(0, spec);
  return state_distance(lhs.apply(start), rhs.apply(start));
}

/// B(-k*) B(k) against the identity; the parameter must return exactly.
template <typename Real>
Real involution_residual(Complex<Real> k, const Polarization<Real>& p, const BoundarySpec<Real>& spec) {
  const auto once = reflection_map<Real>(k, p, spec);
  const auto twice = reflection_map<Real>(once.k, once.p, spec);
  if (twice.k != k) return std::numeric_limits<Real>::infinity();
  return projective_distance(twice.p, p);
}

/// S1 S2 R12 S1 S2 against R21.
template <typename Real>
Real s_twist_residual(Complex<Real> k1, Complex<Real> k2, const Polarization<Real>& p1, const Polarization<Real>& p2) {
  const MapState<Real> start{ExtendedPoint<Real>(p1, k1), ExtendedPoint<Real>(p2, k2)};
  const auto twist = twist_site<Real>(0) * twist_site<Real>(1);
  const auto lhs = twist * yb_site<Real>(0, 1) * twist;
  return state_distance(lhs.apply(start), yb_site<Real>(1, 0).apply(start));
}

/// R(V p1, V p2) against V R(p1, p2) for a unitary V.
template <typename Real>
Real unitary_invariance_residual(Complex<Real> k1, Complex<Real> k2, const Polarization<Real>& p1,
                                 const Polarization<Real>& p2, const CMatrix<Real>& v) {
  const auto [a, b] = yb_map<Real>(k1, k2, p1, p2);
  const auto [va, vb] = yb_map<Real>(k1, k2, Polarization<Real>(v * p1.vector()), Polarization<Real>(v * p2.vector()));
  return std::max(projective_distance<Real>(v * a.vector(), va.vector()),
                  projective_distance<Real>(v * b.vector(), vb.vector()));
}

// Transfer maps --------------------------------------------------------------

template <typename Real>
struct TransferMaps {
  /// Builds R_{ij} for zero-based sites.
  std::function<MapObject<Real>(std::size_t, std::size_t)> r = [](std::size_t i, std::size_t j) {
    return yb_site<Real>(i, j);
  };
  /// Reflection maps at site j; identity when empty.
  std::function<MapObject<Real>(std::size_t)> b_plus;
  std::function<MapObject<Real>(std::size_t)> b_minus;
};

/// T_j = R_{j+1,j}..R_{N,j} B-_j R_{j,N}..R_{j,j+1} R_{j,j-1}..R_{j,1} B+_j R_{1,j}..R_{j-1,j}
/// as a composed map object (j zero-based).
template <typename Real>
MapObject<Real> transfer_map_object(std::size_t j, std::size_t count, const TransferMaps<Real>& maps) {
  if (count < 2) throw Error(Error::Kind::Domain, "transfer maps need at least two sites");
  if (j >= count) throw Error(Error::Kind::Domain, "transfer map index out of range");
  auto site_b = [](const auto& fn, std::size_t s) { return fn ? fn(s) : MapObject<Real>::identity(); };
  MapObject<Real> t = MapObject<Real>::identity();
  // Build the product left to right; `*` puts its right operand first in time.
  for (std::size_t i = j + 1; i < count; ++i) t = t * maps.r(i, j);
  t = t * site_b(maps.b_minus, j);
  for (std::size_t i = count; i-- > j + 1;) t = t * maps.r(j, i);
  for (std::size_t i = j; i-- > 0;) t = t * maps.r(j, i);
  t = t * site_b(maps.b_plus, j);
  for (std::size_t i = 0; i < j; ++i) t = t * maps.r(i, j);
  return t;
}

template <typename Real>
MapState<Real> transfer_map(std::size_t j, const TransferMaps<Real>& maps, const MapState<Real>& state) {
  return transfer_map_object<Real>(j, state.size(), maps).apply(state);
}

template <typename Real>
Real transfer_commutator_residual(std::size_t j, std::size_t l, const TransferMaps<Real>& maps,
                                  const MapState<Real>& state) {
  const auto tj = transfer_map_object<Real>(j, state.size(), maps);
  const auto tl = transfer_map_object<Real>(l, state.size(), maps);
  return state_distance((tj * tl).apply(state), (tl * tj).apply(state));
}

// Collision pipelines ----------------------------------------------------------

enum class CollisionSchedule {
  LeftmostFirst,   // resolve the leftmost pending overtaking first
  RightmostFirst,  // resolve the rightmost pending overtaking first
};

/// Propagates asymptotic in-polarizations through all pairwise collisions of
/// a line configuration. Solitons must be indexed by increasing u (the
/// initial left-to-right order); each overtaking of l by a faster j applies
/// R(k_j, k_l)(p_j, p_l). Returns the out-polarizations by index.
template <typename Real>
std::vector<Polarization<Real>> propagate_collisions(std::span<const Complex<Real>> ks,
                                                     std::vector<Polarization<Real>> p, CollisionSchedule schedule) {
  const std::size_t count = ks.size();
  for (std::size_t i = 1; i < count; ++i)
    if (!(ks[i - 1].real() < ks[i].real()))
      throw Error(Error::Kind::Validation, "collision pipeline needs strictly increasing u");
  std::vector<std::size_t> at(count);  // soliton index at each position
  for (std::size_t i = 0; i < count; ++i) at[i] = i;
  while (true) {
    std::vector<std::size_t> pending;
    for (std::size_t a = 0; a + 1 < count; ++a)
      if (at[a] < at[a + 1]) pending.push_back(a);
    if (pending.empty()) break;
    const std::size_t a = schedule == CollisionSchedule::LeftmostFirst ? pending.front() : pending.back();
    detail::apply_yb<Real>(p, ks, at[a], at[a + 1]);
    std::swap(at[a], at[a + 1]);
  }
  return p;
}

/// Half-line pipeline on x > 0. Position 0 is closest to the boundary. A
/// soliton with Re k > 0 moves toward the boundary; at position 0 it is
/// reflected by B. Adjacent solitons collide while the inner one has the
/// smaller Re k. Returns the final extended points, in the input order.
template <typename Real>
MapState<Real> reflect_and_collide(MapState<Real> points, const BoundarySpec<Real>& spec, CollisionSchedule schedule) {
  const std::size_t count = points.size();
  std::vector<std::size_t> at(count);
  for (std::size_t i = 0; i < count; ++i) at[i] = i;
  for (std::size_t steps = 0; steps < 4 * count * count + 4; ++steps) {
    // Candidate events: -1 stands for the reflection at position 0.
    std::vector<long> pending;
    if (count > 0 && points[at[0]].k.real() > Real(0)) pending.push_back(-1);
    for (std::size_t a = 0; a + 1 < count; ++a)
      if (points[at[a]].k.real() < points[at[a + 1]].k.real()) pending.push_back(static_cast<long>(a));
    if (pending.empty()) return points;
    const long ev = schedule == CollisionSchedule::LeftmostFirst ? pending.front() : pending.back();
    if (ev < 0) {
      auto& s = points[at[0]];
      s = reflection_map<Real>(s.k, s.p, spec);
    } else {
      auto& inner = points[at[static_cast<std::size_t>(ev)]];
      auto& outer = points[at[static_cast<std::size_t>(ev) + 1]];
      auto [a, b] = yb_map<Real>(inner.k, outer.k, inner.p, outer.p);
      inner.p = std::move(a);
      outer.p = std::move(b);
      std::swap(at[static_cast<std::size_t>(ev)], at[static_cast<std::size_t>(ev) + 1]);
    }
  }
  throw Error(Error::Kind::Domain, "half-line pipeline did not terminate");
}

using ExtendedPointd = ExtendedPoint<double>;
using MapObjectd = MapObject<double>;

}  // namespace vsoliton
