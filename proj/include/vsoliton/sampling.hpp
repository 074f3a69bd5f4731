#pragma once

// Seeded random draws of spectral data, polarizations and unitaries for the
// property suites. Near-pole draws are rejected and counted.

#include <Eigen/QR>
#include <random>

#include "vsoliton/soliton_data.hpp"

namespace vsoliton {

struct SamplingRanges {
  double u_min = 0.1;  // |u| range
  double u_max = 2.0;
  double v_min = 0.2;
  double v_max = 2.0;
  bool positive_u = false;  // half-line draws
};

/// Generator wrapper that also counts rejected (resampled) draws.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed, SamplingRanges ranges = {}) : rng_(seed), ranges_(ranges) {}

  std::mt19937_64& engine() { return rng_; }
  const SamplingRanges& ranges() const { return ranges_; }
  std::size_t resamples() const { return resamples_; }
  void count_resample() { ++resamples_; }

  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }

  double draw_u() {
    const double mag = uniform(ranges_.u_min, ranges_.u_max);
    if (ranges_.positive_u) return mag;
    return uniform(0.0, 1.0) < 0.5 ? -mag : mag;
  }
  double draw_v() { return uniform(ranges_.v_min, ranges_.v_max); }

  SpectralPointd spectral_point() { return SpectralPointd(draw_u(), draw_v()); }
  Complexd k() { return spectral_point().k(); }

  CVectord gaussian_vector(Eigen::Index n) {
    CVectord b(n);
    for (Eigen::Index i = 0; i < n; ++i) b[i] = Complexd(normal(), normal());
    return b;
  }
  Polarizationd polarization(Eigen::Index n) { return Polarizationd(gaussian_vector(n)); }

  /// Haar-distributed unitary: QR of a complex Gaussian matrix with the
  /// phases of R's diagonal moved into Q.
  CMatrixd unitary(Eigen::Index n) {
    CMatrixd a(n, n);
    for (Eigen::Index j = 0; j < n; ++j) a.col(j) = gaussian_vector(n);
    Eigen::HouseholderQR<CMatrixd> qr(a);
    CMatrixd q = qr.householderQ();
    const CMatrixd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < n; ++j) {
      const Complexd d = r(j, j);
      if (std::abs(d) > 0) q.col(j) *= d / std::abs(d);
    }
    return q;
  }

  /// N spectral points with pairwise |k_i - k_j| and |k_i - conj(k_j)| at
  /// least `separation`; optionally sorted by u with velocity gaps of at
  /// least `min_gap` in u.
  std::vector<SpectralPointd> spectral_points(std::size_t count, double separation = 1e-8, bool sorted = false,
                                              double min_gap = 0.0) {
    while (true) {
      std::vector<SpectralPointd> pts;
      for (std::size_t i = 0; i < count; ++i) pts.push_back(spectral_point());
      if (sorted)
        std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.u() < b.u(); });
      bool ok = true;
      for (std::size_t i = 0; i < count && ok; ++i)
        for (std::size_t j = 0; j < i && ok; ++j) {
          if (std::abs(pts[i].k() - pts[j].k()) < separation) ok = false;
          if (std::abs(pts[i].k() - std::conj(pts[j].k())) < separation) ok = false;
          if (std::abs(pts[i].u() - pts[j].u()) < min_gap) ok = false;
          // mirror images must stay apart from every other point as well
          if (ranges_.positive_u && std::abs(pts[i].k() + std::conj(pts[j].k())) < separation) ok = false;
        }
      if (ok) return pts;
      count_resample();
    }
  }

  SolitonDatad soliton_data(Eigen::Index n, std::size_t count, bool sorted = false, double min_gap = 0.0) {
    std::vector<SolitonEntryd> entries;
    for (const auto& p : spectral_points(count, 1e-8, sorted, min_gap))
      entries.push_back({p, NormingVectord(gaussian_vector(n))});
    return SolitonDatad(n, std::move(entries));
  }

 private:
  std::mt19937_64 rng_;
  SamplingRanges ranges_;
  std::size_t resamples_ = 0;
};

}  // namespace vsoliton
