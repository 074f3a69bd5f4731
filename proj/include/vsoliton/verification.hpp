#pragma once

// Finite-difference certification of reconstructed fields: VNLS residual,
// boundary residuals at x = 0, asymptotic polarization extraction and
// convergence orders.

#include <cstdint>
#include <functional>
#include <optional>

#include "vsoliton/mirror.hpp"

namespace vsoliton {

/// Field sampled on a uniform (x, t) lattice. Column index is it * nx + ix
/// (row-major in t, then x); each column is one complex n-vector.
template <typename Real>
struct FieldGrid {
  Real x0 = 0, x1 = 0, t0 = 0, t1 = 0;
  Eigen::Index nx = 0, nt = 0;
  CMatrix<Real> values;     // n x (nx * nt)
  std::uint64_t digest = 0; // digest of the generating data set

  Eigen::Index n() const { return values.rows(); }
  Real hx() const { return (x1 - x0) / Real(nx - 1); }
  Real ht() const { return (t1 - t0) / Real(nt - 1); }
  Real x(Eigen::Index ix) const { return x0 + Real(ix) * hx(); }
  Real t(Eigen::Index it) const { return t0 + Real(it) * ht(); }
  auto at(Eigen::Index ix, Eigen::Index it) const { return values.col(it * nx + ix); }
  auto at(Eigen::Index ix, Eigen::Index it) { return values.col(it * nx + ix); }
};

template <typename Real>
void check_grid_shape(Real x0, Real x1, Real t0, Real t1, Eigen::Index nx, Eigen::Index nt) {
  if (nx < 5 || nt < 5) throw Error(Error::Kind::Validation, "grid needs at least 5 samples per axis");
  if (!(x1 > x0) || !(t1 > t0)) throw Error(Error::Kind::Validation, "grid bounds must be increasing");
}

/// FNV-1a over the bit patterns of n, every k and every beta entry.
template <typename Real>
std::uint64_t data_digest(const SolitonData<Real>& data) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const void* p, std::size_t len) {
    const auto* bytes = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= bytes[i];
      h *= 1099511628211ull;
    }
  };
  const auto n = static_cast<std::int64_t>(data.n());
  mix(&n, sizeof n);
  for (std::size_t j = 0; j < data.size(); ++j) {
    const Real parts[2] = {data.point(j).u(), data.point(j).v()};
    mix(parts, sizeof parts);
    for (Eigen::Index i = 0; i < data.n(); ++i) {
      const Real c[2] = {data.beta(j)[i].real(), data.beta(j)[i].imag()};
      mix(c, sizeof c);
    }
  }
  return h;
}

/// Samples an arbitrary field function on the lattice.
template <typename Real>
FieldGrid<Real> sample_grid(const std::function<CVector<Real>(Real, Real)>& field, Eigen::Index n, Real x0, Real x1,
                            Real t0, Real t1, Eigen::Index nx, Eigen::Index nt) {
  check_grid_shape<Real>(x0, x1, t0, t1, nx, nt);
  FieldGrid<Real> g{x0, x1, t0, t1, nx, nt, CMatrix<Real>(n, nx * nt), 0};
  for (Eigen::Index it = 0; it < nt; ++it)
    for (Eigen::Index ix = 0; ix < nx; ++ix) g.at(ix, it) = field(g.x(ix), g.t(it));
  return g;
}

template <typename Real>
FieldGrid<Real> sample_grid(const SolitonData<Real>& data, Real x0, Real x1, Real t0, Real t1, Eigen::Index nx,
                            Eigen::Index nt) {
  auto g = sample_grid<Real>([&](Real x, Real t) { return reconstruct_field<Real>(data, x, t); }, data.n(), x0, x1,
                             t0, t1, nx, nt);
  g.digest = data_digest(data);
  return g;
}

/// max over interior points of |i R_t + R_xx + 2 (R^dagger R) R|, central
/// second-order differences in both directions.
template <typename Real>
Real pde_residual(const FieldGrid<Real>& g) {
  const Real hx = g.hx();
  const Real ht = g.ht();
  const Complex<Real> i(0, 1);
  Real worst = 0;
  for (Eigen::Index it = 1; it + 1 < g.nt; ++it)
    for (Eigen::Index ix = 1; ix + 1 < g.nx; ++ix) {
      const CVector<Real> r = g.at(ix, it);
      const CVector<Real> rt = (g.at(ix, it + 1) - g.at(ix, it - 1)) / (Real(2) * ht);
      const CVector<Real> rxx = (g.at(ix + 1, it) - Real(2) * r + g.at(ix - 1, it)) / (hx * hx);
      const CVector<Real> res = i * rt + rxx + Real(2) * r.squaredNorm() * r;
      worst = std::max(worst, res.template lpNorm<Eigen::Infinity>());
    }
  return worst;
}

/// R_x(0, t) from the one-sided stencil (-3 R(0) + 4 R(h) - R(2h)) / (2h).
template <typename Real>
CVector<Real> boundary_derivative(const std::function<CVector<Real>(Real, Real)>& field, Real t, Real h) {
  return (Real(-3) * field(Real(0), t) + Real(4) * field(h, t) - field(Real(2) * h, t)) / (Real(2) * h);
}

/// Robin: max_t max|R_x - 2 alpha R| at x = 0. Mixed: in the basis U R, the
/// +1 components must vanish and the -1 components have zero x-derivative.
template <typename Real>
Real boundary_residual(const HalfLineData<Real>& hl, std::span<const Real> times, Real h) {
  const std::function<CVector<Real>(Real, Real)> field = [&hl](Real x, Real t) {
    return halfline_field<Real>(hl, x, t);
  };
  Real worst = 0;
  for (Real t : times) {
    const CVector<Real> r0 = field(Real(0), t);
    const CVector<Real> rx = boundary_derivative<Real>(field, t, h);
    if (hl.spec.is_robin()) {
      const Real alpha = std::get<RobinBoundary<Real>>(hl.spec.kind()).alpha;
      worst = std::max(worst, max_abs(CVector<Real>(rx - Real(2) * alpha * r0)));
      continue;
    }
    const CMatrix<Real> u = hl.spec.basis(hl.n());
    const CVector<Real> ur0 = u * r0;
    const CVector<Real> urx = u * rx;
    const auto& s = hl.spec.signs();
    for (Eigen::Index c = 0; c < hl.n(); ++c)
      worst = std::max(worst, std::abs(s[static_cast<std::size_t>(c)] > 0 ? ur0[c] : urx[c]));
  }
  return worst;
}

template <typename Real>
struct AsymptoticReading {
  Polarization<Real> polarization;
  Real position;  // envelope maximum
};

/// Locates the envelope of soliton j near x = w_j t and reads its
/// polarization at the refined peak. Requires min(v_j, v_l) |w_j - w_l| |t| >= 18
/// for every other soliton l, so that all tails are below e^-18 at the peak.
template <typename Real>
AsymptoticReading<Real> extract_asymptotic_polarization(const SolitonData<Real>& data, std::size_t j, Real t) {
  if (j >= data.size()) throw Error(Error::Kind::Validation, "soliton index out of range");
  const Real v = data.point(j).v();
  const Real w = data.point(j).velocity();
  Real gap = std::numeric_limits<Real>::infinity();
  Real separation = std::numeric_limits<Real>::infinity();
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (i == j) continue;
    const Real dw = std::abs(data.point(i).velocity() - w);
    gap = std::min(gap, dw);
    separation = std::min(separation, std::min(v, data.point(i).v()) * dw);
  }
  if (data.size() > 1 && !(separation * std::abs(t) >= Real(18)))
    throw Error(Error::Kind::Window, "time too small for asymptotic separation (need v * gap * |t| >= 18)");

  const Real half = data.size() > 1 ? gap * std::abs(t) / Real(2) : Real(40) / v;
  const Real lo = w * t - half;
  const Real hi = w * t + half;
  auto amp = [&](Real x) { return reconstruct_field<Real>(data, x, t).norm(); };

  const Real step = Real(1) / (Real(10) * v);
  const auto samples = static_cast<long>(std::ceil((hi - lo) / step));
  long best = 0;
  Real best_amp = -1;
  for (long s = 0; s <= samples; ++s) {
    const Real a = amp(lo + Real(s) * step);
    if (a > best_amp) {
      best_amp = a;
      best = s;
    }
  }
  if (best == 0 || best == samples)
    throw Error(Error::Kind::Window, "envelope maximum of soliton " + std::to_string(j) + " not inside window");

  // golden-section maximization on the bracketing cells
  Real a = lo + Real(best - 1) * step;
  Real b = lo + Real(best + 1) * step;
  const Real g = (std::sqrt(Real(5)) - Real(1)) / Real(2);
  Real c = b - g * (b - a);
  Real d = a + g * (b - a);
  Real fc = amp(c);
  Real fd = amp(d);
  while (b - a > Real(1e-10)) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = amp(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = amp(d);
    }
  }
  const Real peak = (a + b) / Real(2);
  return {Polarization<Real>(reconstruct_field<Real>(data, peak, t)), peak};
}

struct ConvergenceFit {
  double order = 0;
  bool monotone = true;  // false if the residuals do not decrease with h
};

/// Least-squares slope of log(residual) against log(h).
template <typename Real>
ConvergenceFit convergence_order(std::span<const Real> h, std::span<const Real> residuals) {
  if (h.size() != residuals.size() || h.size() < 3)
    throw Error(Error::Kind::Validation, "convergence fit needs at least three spacings");
  Real sx = 0, sy = 0, sxx = 0, sxy = 0;
  const auto m = static_cast<Real>(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (!(h[i] > 0) || !(residuals[i] > 0)) throw Error(Error::Kind::Validation, "convergence fit needs positive data");
    const Real lx = std::log(h[i]);
    const Real ly = std::log(residuals[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  ConvergenceFit fit;
  fit.order = static_cast<double>((m * sxy - sx * sy) / (m * sxx - sx * sx));
  for (std::size_t i = 1; i < h.size(); ++i)
    if ((h[i] < h[i - 1]) != (residuals[i] < residuals[i - 1])) fit.monotone = false;
  return fit;
}

template <typename Real>
ConvergenceFit convergence_order(const std::function<Real(Real)>& residual_fn, std::span<const Real> h) {
  std::vector<Real> r;
  for (Real hi : h) r.push_back(residual_fn(hi));
  return convergence_order<Real>(h, std::span<const Real>(r));
}

/// PDE residual of `field` on grids over a fixed window with spacing h in
/// both directions, one entry per h.
template <typename Real>
std::vector<Real> pde_residual_sequence(const std::function<CVector<Real>(Real, Real)>& field, Eigen::Index n,
                                        Real x0, Real x1, Real t0, Real t1, std::span<const Real> hs) {
  std::vector<Real> out;
  for (Real h : hs) {
    const auto nx = static_cast<Eigen::Index>(std::llround((x1 - x0) / h)) + 1;
    const auto nt = static_cast<Eigen::Index>(std::llround((t1 - t0) / h)) + 1;
    out.push_back(pde_residual(sample_grid<Real>(field, n, x0, x0 + h * Real(nx - 1), t0, t0 + h * Real(nt - 1), nx, nt)));
  }
  return out;
}

template <typename Real>
std::vector<Real> boundary_residual_sequence(const HalfLineData<Real>& hl, std::span<const Real> times,
                                             std::span<const Real> hs) {
  std::vector<Real> out;
  for (Real h : hs) out.push_back(boundary_residual<Real>(hl, times, h));
  return out;
}

using FieldGridd = FieldGrid<double>;

}  // namespace vsoliton
