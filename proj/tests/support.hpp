#pragma once

// Shared test helpers: fixed vectors, and brute-force oracles that rebuild
// quantities from explicit dense matrices instead of the library's rank-one
// updates.

#include <vector>

#include "vsoliton/sampling.hpp"
#include "vsoliton/verification.hpp"

namespace vt {

using namespace vsoliton;

inline CVectord vec(std::initializer_list<Complexd> xs) {
  CVectord v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (const auto& x : xs) v[i++] = x;
  return v;
}

inline CVectord unit(Eigen::Index n, Eigen::Index i) {
  CVectord v = CVectord::Zero(n);
  v[i] = 1.0;
  return v;
}

inline SolitonDatad make_data(Eigen::Index n, std::vector<std::pair<Complexd, CVectord>> items) {
  std::vector<SolitonEntryd> entries;
  for (auto& [k, b] : items) entries.push_back({SpectralPointd::from_k(k), NormingVectord(b)});
  return SolitonDatad(n, std::move(entries));
}

inline Complexd f(Complexd kj, Complexd k) { return (k - kj) / (k - std::conj(kj)); }

inline CMatrixd outer_proj(const CVectord& x) { return x * x.adjoint() / x.squaredNorm(); }

// Dense reduced chain in a given order: returns the list of (k, projector).
inline std::vector<std::pair<Complexd, CMatrixd>> dense_chain(const SolitonDatad& d, const std::vector<std::size_t>& order) {
  std::vector<std::pair<Complexd, CMatrixd>> facs;
  const auto n = d.n();
  for (auto idx : order) {
    CMatrixd m = CMatrixd::Identity(n, n);
    for (auto& [kk, p] : facs) m = m * (CMatrixd::Identity(n, n) + (f(kk, d.k(idx)) - 1.0) * p);
    facs.emplace_back(d.k(idx), outer_proj(m.adjoint() * d.beta(idx)));
  }
  return facs;
}

inline CMatrixd dense_eval(const std::vector<std::pair<Complexd, CMatrixd>>& facs, Eigen::Index n, Complexd k) {
  CMatrixd m = CMatrixd::Identity(n, n);
  for (auto& [kk, p] : facs) m = m * (CMatrixd::Identity(n, n) + (f(kk, k) - 1.0) * p);
  return m;
}

// Dense field: explicit (n+1)x(n+1) chain with unscaled exponentials.
inline CVectord dense_field(const SolitonDatad& d, double x, double t) {
  const auto n = d.n();
  const Complexd i(0, 1);
  CVectord r = CVectord::Zero(n);
  std::vector<std::pair<Complexd, CMatrixd>> facs;
  for (std::size_t j = 0; j < d.size(); ++j) {
    const Complexd kc = std::conj(d.k(j));
    const Complexd phi = kc * x + 2.0 * kc * kc * t;
    CVectord z(n + 1);
    z.head(n) = std::exp(-i * phi) * d.beta(j);
    z[n] = -std::exp(i * phi);
    CMatrixd m = CMatrixd::Identity(n + 1, n + 1);
    for (auto& [kk, p] : facs) m = m * (CMatrixd::Identity(n + 1, n + 1) + (f(kk, d.k(j)) - 1.0) * p);
    const CMatrixd p = outer_proj(m.adjoint() * z);
    facs.emplace_back(d.k(j), p);
    r += 2.0 * i * (d.k(j) - kc) * p.block(0, n, n, 1);
  }
  return r;
}

inline std::vector<std::vector<std::size_t>> all_orders(std::size_t count) {
  std::vector<std::size_t> p(count);
  for (std::size_t i = 0; i < count; ++i) p[i] = i;
  std::vector<std::vector<std::size_t>> out;
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

}  // namespace vt
