#include "vsoliton/io/suites.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <numeric>

#include <fmt/core.h>

#include "vsoliton/asymptotics.hpp"
#include "vsoliton/verification.hpp"

namespace vsoliton::io {

namespace {

struct Sample {
  std::string suite;
  long index;
  Eigen::Index n;
  std::size_t count;
  std::string boundary;
  const std::map<std::string, double>* tolerances;

  std::string label(const std::string& check) const { return fmt::format("{}[{}]", check, index); }
  double tol(const std::string& check, const std::string& cls) const { return tolerance(*tolerances, check, cls); }
  Check check(const std::string& name, double residual, const std::string& cls) const {
    return make_check(label(name), residual, tol(name, cls));
  }
};

using SampleFn = std::function<std::vector<Check>(Sampler&, const Sample&)>;

struct SuiteDef {
  SampleFn fn;
  std::vector<long> ns;
  std::vector<long> counts;
  std::vector<std::string> boundaries;  // empty: suite has no boundary
  SamplingRanges ranges{};
};

const std::vector<double> kSteps{0.04, 0.02, 0.01};

// Finite-difference suites keep v <= 1 so that h = 0.04 resolves the field
// (its length scale is about 1 / max|R|).
const SamplingRanges kResolvedLine{0.1, 2.0, 0.2, 1.0, false};
const SamplingRanges kResolvedHalf{0.1, 2.0, 0.2, 1.0, true};
const SamplingRanges kHalf{0.1, 2.0, 0.2, 2.0, true};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Random k in the box |Re k|, |Im k| <= 2, kept 0.05 away from every pole
// and zero of the data.
Complexd probe_k(Sampler& s, const SolitonDatad& data) {
  while (true) {
    const Complexd k(s.uniform(-2, 2), s.uniform(-2, 2));
    bool ok = true;
    for (std::size_t j = 0; j < data.size(); ++j)
      if (std::abs(k - data.k(j)) < 0.05 || std::abs(k - std::conj(data.k(j))) < 0.05) ok = false;
    if (ok) return k;
    s.count_resample();
  }
}

std::vector<std::size_t> iota(std::size_t count) {
  std::vector<std::size_t> v(count);
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

Check order_check(const Sample& c, const std::string& name, const std::vector<double>& residuals) {
  const auto fit = convergence_order<double>(std::span<const double>(kSteps), std::span<const double>(residuals));
  Check out = c.check(name, std::abs(fit.order - 2.0), "order");
  if (!fit.monotone) out.status = CheckStatus::Fail;
  return out;
}

// -- line dressing ------------------------------------------------------------

std::vector<Check> one_soliton(Sampler& s, const Sample& c) {
  const auto p = s.spectral_point();
  const NormingVectord beta(s.gaussian_vector(c.n));
  const SolitonDatad data(c.n, {{p, beta}});
  const double centre = beta.position_shift(p);
  double worst = 0;
  for (int q = 0; q < 50; ++q) {
    const double t = s.uniform(-3, 3);
    const double x = centre + p.velocity() * t + s.uniform(-6, 6) / p.v();
    const CVectord diff = reconstruct_field<double>(data, x, t) - one_soliton_field<double>(p, beta, x, t);
    worst = std::max(worst, max_abs(diff));
  }
  return {c.check("one-soliton", worst, "unitarity")};
}

std::vector<Check> permutation(Sampler& s, const Sample& c) {
  const auto data = s.soliton_data(c.n, c.count);
  std::vector<Complexd> ks;
  for (int q = 0; q < 20; ++q) ks.push_back(probe_k(s, data));
  std::vector<std::pair<double, double>> xt;
  for (int q = 0; q < 20; ++q) xt.emplace_back(s.uniform(-5, 5), s.uniform(-1, 1));

  // Evaluate every ordering once, then compare all pairs.
  struct Values {
    std::vector<CMatrixd> reduced, full;
    std::vector<CVectord> fields;
  };
  std::vector<Values> all;
  auto order = iota(c.count);
  do {
    Values v;
    const auto chain = build_reduced_chain<double>(data, order);
    for (const auto& k : ks) v.reduced.push_back(chain.evaluate(k));
    for (const auto& [x, t] : xt) {
      const auto full = build_full_chain<double>(data, order, x, t);
      v.fields.push_back(full.field());
      v.full.push_back(full.evaluate(ks[v.fields.size() - 1]));
    }
    all.push_back(std::move(v));
  } while (std::next_permutation(order.begin(), order.end()));

  double worst = 0;
  for (std::size_t a = 0; a < all.size(); ++a)
    for (std::size_t b = a + 1; b < all.size(); ++b) {
      for (std::size_t q = 0; q < ks.size(); ++q)
        worst = std::max(worst, max_abs(CMatrixd(all[a].reduced[q] - all[b].reduced[q])));
      for (std::size_t q = 0; q < xt.size(); ++q) {
        worst = std::max(worst, max_abs(CVectord(all[a].fields[q] - all[b].fields[q])));
        worst = std::max(worst, max_abs(CMatrixd(all[a].full[q] - all[b].full[q])));
      }
    }
  return {c.check("permutation", worst, "algebraic")};
}

std::vector<Check> determinant(Sampler& s, const Sample& c) {
  const auto data = s.soliton_data(c.n, c.count);
  const auto chain = build_reduced_chain<double>(data);
  double worst = 0;
  for (int q = 0; q < 20; ++q) {
    const Complexd k = probe_k(s, data);
    Complexd expected(1, 0);
    for (std::size_t j = 0; j < data.size(); ++j) expected *= blaschke_factor<double>(data.k(j), k);
    worst = std::max(worst, std::abs(chain.evaluate(k).determinant() - expected) / std::abs(expected));
  }
  return {c.check("determinant", worst, "unitarity")};
}

// d(k) d(conj k)^dagger = I off the real axis, d unitary on it.
std::vector<Check> unitarity(Sampler& s, const Sample& c) {
  const auto data = s.soliton_data(c.n, c.count);
  const auto chain = build_reduced_chain<double>(data);
  const CMatrixd id = identity<double>(c.n);
  double worst = 0;
  for (int q = 0; q < 20; ++q) {
    const Complexd k = probe_k(s, data);
    const CMatrixd a = chain.evaluate(k);
    const CMatrixd b = chain.evaluate(std::conj(k));
    worst = std::max(worst, max_abs(CMatrixd(a * b.adjoint() - id)) / (a.norm() * b.norm()));
    const CMatrixd r = chain.evaluate(Complexd(s.uniform(-3, 3), 0));
    worst = std::max(worst, max_abs(CMatrixd(r.adjoint() * r - id)));
  }
  return {c.check("unitarity", worst, "unitarity")};
}

// -- maps ---------------------------------------------------------------------

// Draws are sequenced explicitly: argument evaluation order is unspecified.
std::vector<Polarizationd> polarizations(Sampler& s, Eigen::Index n, std::size_t count) {
  std::vector<Polarizationd> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(s.polarization(n));
  return out;
}

std::vector<Check> ybe(Sampler& s, const Sample& c) {
  const auto pts = s.spectral_points(3);
  const auto p = polarizations(s, c.n, 3);
  return {c.check("ybe", ybe_residual<double>(pts[0].k(), pts[1].k(), pts[2].k(), p[0], p[1], p[2]), "algebraic")};
}

std::vector<Check> reversibility(Sampler& s, const Sample& c) {
  const auto pts = s.spectral_points(2);
  const auto p = polarizations(s, c.n, 2);
  return {c.check("reversibility", reversibility_residual<double>(pts[0].k(), pts[1].k(), p[0], p[1]), "involution")};
}

std::vector<Check> reflection_equation(Sampler& s, const Sample& c) {
  const auto spec = random_boundary(s, c.boundary, c.n);
  const auto pts = s.spectral_points(2);
  const auto p = polarizations(s, c.n, 2);
  return {c.check("reflection-equation", reflection_equation_residual<double>(pts[0].k(), pts[1].k(), p[0], p[1], spec),
                  "algebraic")};
}

std::vector<Check> involution(Sampler& s, const Sample& c) {
  const auto spec = random_boundary(s, c.boundary, c.n);
  const Complexd k = s.k();
  const auto p = s.polarization(c.n);
  return {c.check("involution", involution_residual<double>(k, p, spec), "involution")};
}

std::vector<Check> s_twist(Sampler& s, const Sample& c) {
  const auto pts = s.spectral_points(2);
  const auto p = polarizations(s, c.n, 2);
  return {c.check("s-twist", s_twist_residual<double>(pts[0].k(), pts[1].k(), p[0], p[1]), "algebraic")};
}

std::vector<Check> unitary_invariance(Sampler& s, const Sample& c) {
  const auto pts = s.spectral_points(2);
  const auto p1 = s.polarization(c.n);
  const auto p2 = s.polarization(c.n);
  return {c.check("unitary-invariance",
                  unitary_invariance_residual<double>(pts[0].k(), pts[1].k(), p1, p2, s.unitary(c.n)), "algebraic")};
}

std::vector<Check> transfer(Sampler& s, const Sample& c) {
  const auto pts = s.spectral_points(c.count);
  MapState<double> state;
  for (const auto& p : pts) state.emplace_back(s.polarization(c.n), p.k());
  const TransferMaps<double> plain;
  TransferMaps<double> reflecting;
  const auto spec = random_boundary(s, c.boundary, c.n);
  reflecting.b_plus = [spec](std::size_t j) { return reflection_site<double>(j, spec); };
  reflecting.b_minus = reflecting.b_plus;
  double worst = 0;
  double experiment = 0;
  for (std::size_t j = 0; j < c.count; ++j)
    for (std::size_t l = j + 1; l < c.count; ++l) {
      worst = std::max(worst, transfer_commutator_residual<double>(j, l, plain, state));
      experiment = std::max(experiment, transfer_commutator_residual<double>(j, l, reflecting, state));
    }
  return {c.check("transfer", worst, "unitarity"), recorded(c.label("transfer-vnls-reflection"), experiment)};
}

// -- asymptotics ---------------------------------------------------------------

std::vector<Check> collision(Sampler& s, const Sample& c) {
  const auto data = s.soliton_data(c.n, c.count, true, 1e-3);
  double worst = 0;
  for (std::size_t j = 0; j < c.count; ++j)
    for (std::size_t l = j + 1; l < c.count; ++l) {
      std::vector<std::size_t> spectators;
      for (std::size_t q = 0; q < c.count; ++q)
        if (q != j && q != l && s.uniform(0, 1) < 0.5) spectators.push_back(q);
      worst = std::max(worst, collision_consistency_residual<double>(j, l, spectators, data));
    }
  return {c.check("collision", worst, "algebraic")};
}

std::vector<Check> factorization(Sampler& s, const Sample& c) {
  const auto data = s.soliton_data(c.n, c.count, true, 0.3);
  double separation = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < c.count; ++j)
    for (std::size_t l = j + 1; l < c.count; ++l)
      separation = std::min(separation, std::min(data.point(j).v(), data.point(l).v()) *
                                            std::abs(data.point(j).velocity() - data.point(l).velocity()));
  const double t = 18.0 / separation + 1.0;
  double pol = 0;
  double pos = 0;
  for (std::size_t j = 0; j < c.count; ++j) {
    const auto bi = beta_in<double>(j, data);
    const auto bo = beta_out<double>(j, data);
    const auto in = extract_asymptotic_polarization<double>(data, j, -t);
    const auto out = extract_asymptotic_polarization<double>(data, j, t);
    pol = std::max({pol, projective_distance(in.polarization, polarization_of(bi)),
                    projective_distance(out.polarization, polarization_of(bo))});
    const double w = data.point(j).velocity();
    pos = std::max({pos, std::abs(in.position - (bi.position_shift(data.point(j)) - w * t)),
                    std::abs(out.position - (bo.position_shift(data.point(j)) + w * t))});
  }
  return {c.check("factorization-extraction", pol, "asymptotic"), c.check("factorization-position", pos, "position"),
          c.check("factorization-pipeline", factorization_residual(data), "algebraic")};
}

std::vector<Check> pde(Sampler& s, const Sample& c) {
  std::function<CVectord(double, double)> field;
  std::optional<HalfLineDatad> hl;
  double x0 = -2.0;
  if (c.boundary.empty()) {
    const auto data = s.soliton_data(c.n, c.count);
    field = [data](double x, double t) { return reconstruct_field<double>(data, x, t); };
  } else {
    Sampler half(s.engine()(), kResolvedHalf);
    const auto spec = random_boundary(s, c.boundary, c.n);
    hl = solve_mirror_norming(half.soliton_data(c.n, c.count, true, 1e-3), spec);
    for (std::size_t r = 0; r < half.resamples(); ++r) s.count_resample();
    field = [hl](double x, double t) { return halfline_field<double>(*hl, x, t); };
    x0 = 0.0;
  }
  const auto seq = pde_residual_sequence<double>(field, c.n, x0, x0 + 4.0, -0.3, 0.3, kSteps);
  return {order_check(c, hl ? "pde-halfline" : "pde-line", seq)};
}

std::vector<Check> boundary(Sampler& s, const Sample& c) {
  const auto spec = random_boundary(s, c.boundary, c.n);
  const auto hl = solve_mirror_norming(s.soliton_data(c.n, c.count, true, 1e-3), spec);
  const std::vector<double> times{-0.7, 0.0, 0.4};
  return {order_check(c, "boundary-" + c.boundary, boundary_residual_sequence<double>(hl, times, kSteps))};
}

// -- mirror ----------------------------------------------------------------------

HalfLineDatad draw_halfline(Sampler& s, const Sample& c) {
  const auto spec = random_boundary(s, c.boundary, c.n);
  return solve_mirror_norming(s.soliton_data(c.n, c.count, true, 1e-3), spec);
}

std::vector<Check> mirror_constraint(Sampler& s, const Sample& c) {
  return {c.check("mirror-constraint", mirror_constraint_residual(draw_halfline(s, c)), "mirror_constraint")};
}

std::vector<Check> mirror_polarization(Sampler& s, const Sample& c) {
  return {c.check("mirror-polarization", mirror_polarization_residual(draw_halfline(s, c)), "algebraic")};
}

std::vector<Check> reflection_consistency(Sampler& s, const Sample& c) {
  return {c.check("reflection-consistency", reflection_consistency_residual(draw_halfline(s, c)), "algebraic")};
}

const std::vector<std::string> kBoundaryKinds{"robin", "mixed", "rotated_mixed"};

const std::map<std::string, SuiteDef>& registry() {
  static const std::map<std::string, SuiteDef> suites{
      {"one-soliton", {one_soliton, {1, 2, 3}, {1}, {}}},
      {"permutation", {permutation, {2, 3}, {3}, {}}},
      {"determinant", {determinant, {1, 2, 3}, {1, 2, 3, 4}, {}}},
      {"unitarity", {unitarity, {1, 2, 3}, {1, 2, 3, 4}, {}}},
      {"ybe", {ybe, {2, 3}, {3}, {}}},
      {"reversibility", {reversibility, {2, 3}, {2}, {}}},
      {"reflection-equation", {reflection_equation, {2, 3}, {2}, kBoundaryKinds}},
      {"involution", {involution, {2, 3}, {1}, kBoundaryKinds}},
      {"s-twist", {s_twist, {2, 3}, {2}, {}}},
      {"unitary-invariance", {unitary_invariance, {2, 3}, {2}, {}}},
      {"transfer", {transfer, {1, 2, 3}, {2, 3}, kBoundaryKinds}},
      {"collision", {collision, {2, 3}, {2, 3, 4}, {}}},
      {"factorization", {factorization, {2, 3}, {2, 3}, {}}},
      {"pde", {pde, {2, 3}, {2}, {"", "robin", "", "mixed"}, kResolvedLine}},
      {"boundary", {boundary, {2, 3}, {2}, {"robin", "mixed"}, kResolvedHalf}},
      {"mirror-constraint", {mirror_constraint, {1, 2, 3}, {1, 2, 3}, kBoundaryKinds, kHalf}},
      {"mirror-polarization", {mirror_polarization, {1, 2, 3}, {1, 2, 3}, kBoundaryKinds, kHalf}},
      {"reflection-consistency", {reflection_consistency, {1, 2, 3}, {1, 2, 3}, kBoundaryKinds, kHalf}},
  };
  return suites;
}

bool retryable(Error::Kind kind) {
  return kind == Error::Kind::Pole || kind == Error::Kind::DegenerateChain || kind == Error::Kind::Singular ||
         kind == Error::Kind::Window;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, def] : registry()) out.push_back(name);
    return out;
  }();
  return names;
}

std::uint64_t sample_seed(std::uint64_t seed, const std::string& name, long index) {
  std::uint64_t h = 1469598103934665603ull;
  for (char ch : name) {
    h ^= static_cast<unsigned char>(ch);
    h *= 1099511628211ull;
  }
  return splitmix64(seed ^ splitmix64(h ^ splitmix64(static_cast<std::uint64_t>(index))));
}

BoundarySpecd random_boundary(Sampler& s, const std::string& kind, Eigen::Index n) {
  auto signs = [&] {
    std::vector<int> out;
    for (Eigen::Index i = 0; i < n; ++i) out.push_back(s.uniform(0, 1) < 0.5 ? 1 : -1);
    return out;
  };
  // |alpha| >= 0.2: the O(h^2) boundary stencil error is proportional to alpha
  if (kind == "robin") return BoundarySpecd::robin((s.uniform(0, 1) < 0.5 ? -1.0 : 1.0) * s.uniform(0.2, 1.0));
  if (kind == "mixed") return BoundarySpecd::mixed(signs());
  if (kind == "rotated_mixed") {
    const CMatrixd u = s.unitary(n);
    return BoundarySpecd::rotated_mixed(u, signs());
  }
  throw ConfigError("/suite/boundary", "unknown boundary kind '" + kind + "'");
}

ReportDocument run_property_suite(const std::string& name, const SuiteOptions& options) {
  const auto it = registry().find(name);
  if (it == registry().end()) {
    std::string known;
    for (const auto& n : suite_names()) known += (known.empty() ? "" : ", ") + n;
    throw ConfigError("/suite/name", "unknown suite '" + name + "' (known: " + known + ")");
  }
  const SuiteDef& def = it->second;
  if (options.samples < 0) throw ConfigError("/suite/samples", "must be non-negative");

  ReportDocument report;
  report.mode = "verify";
  double worst = 0;
  std::size_t failed = 0;
  for (long i = 0; i < options.samples; ++i) {
    // n varies fastest, then N, then the boundary kind
    const auto idx = static_cast<std::size_t>(i);
    const std::size_t nn = def.ns.size();
    const std::size_t nc = def.counts.size();
    Sample c{name,
             i,
             options.n ? *options.n : def.ns[idx % nn],
             static_cast<std::size_t>(options.count ? *options.count : def.counts[(idx / nn) % nc]),
             std::string(),
             &options.tolerances};
    if (!def.boundaries.empty())
      c.boundary = options.boundary ? *options.boundary : def.boundaries[(idx / (nn * nc)) % def.boundaries.size()];

    Sampler s(sample_seed(options.seed, name, i), def.ranges);
    std::vector<Check> checks;
    const auto start = std::chrono::steady_clock::now();
    for (int attempt = 0;; ++attempt) {
      try {
        checks = def.fn(s, c);
        break;
      } catch (const Error& e) {
        if (!retryable(e.kind()) || attempt >= 100) {
          checks = {make_check(c.label(name), std::numeric_limits<double>::infinity(), 0.0)};
          report.results[name]["errors"].push_back(c.label(name) + ": " + e.what());
          break;
        }
        s.count_resample();
      }
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() / double(checks.size());
    for (auto& ch : checks) {
      ch.seconds = seconds;
      if (ch.status != CheckStatus::Recorded) worst = std::max(worst, ch.residual);
      failed += ch.status == CheckStatus::Fail;
      report.add(std::move(ch));
    }
    report.resamples += s.resamples();
  }
  report.results[name]["samples"] = options.samples;
  report.results[name]["max_residual"] = worst;
  report.results[name]["failed"] = failed;
  return report;
}

}  // namespace vsoliton::io
