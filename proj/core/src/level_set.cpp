#include "orlicz/level_set.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "orlicz/errors.hpp"
#include "orlicz/geometry.hpp"
#include "orlicz/quadrature.hpp"
#include "orlicz/random.hpp"

namespace orlicz {
namespace {

constexpr std::uint64_t kChunkSize = 1 << 14;
constexpr std::uint64_t kMinStratumSamples = 256;

double annulus_volume(int n, Annulus a) {
  const double omega = unit_ball_volume(n);
  return omega * (std::pow(a.outer, n) - std::pow(a.inner, n));
}

QuadratureOptions quad_options(double tol) {
  QuadratureOptions opts;
  opts.rel_tol = tol;
  opts.abs_tol = 1e-300;
  return opts;
}

// Kinks of s -> |B(s e_1, r) ∩ B(0, b)|: containment and disjointness onsets.
void push_contact_points(std::vector<double>& out, double r, double b) {
  if (b <= 0.0 || !std::isfinite(r)) return;
  out.push_back(std::abs(r - b));
  out.push_back(r + b);
}

double sample_radius(RandomStream& rng, int n, Annulus a) {
  const double u = rng.uniform();
  if (n == 1) return a.inner + u * (a.outer - a.inner);
  const double lo = std::pow(a.inner, n);
  const double hi = std::pow(a.outer, n);
  return std::pow(lo + u * (hi - lo), 1.0 / n);
}

// Cosine of the angle between a fixed axis and a uniform random direction.
double sample_cosine(RandomStream& rng, int n) {
  switch (n) {
    case 1:
      return rng.uniform() < 0.5 ? -1.0 : 1.0;
    case 2:
      return std::cos(2.0 * std::numbers::pi * rng.uniform());
    case 3:
      return 2.0 * rng.uniform() - 1.0;
    default: {
      double first = rng.normal();
      double sq = first * first;
      for (int i = 1; i < n; ++i) {
        const double g = rng.normal();
        sq += g * g;
      }
      return sq > 0.0 ? first / std::sqrt(sq) : 1.0;
    }
  }
}

struct StratumSpec {
  Annulus x_range;
  Annulus y_range;
  std::uint64_t samples;
  std::uint64_t id;
  // Constant jump for piecewise strata; nullopt evaluates u per sample.
  std::optional<double> jump;
};

std::vector<StratumTally> run_strata(const TestFunction& u, const FiberRadius& rule,
                                     const std::vector<StratumSpec>& strata,
                                     std::uint64_t seed, unsigned threads) {
  const int n = u.dimension();
  struct WorkItem {
    std::size_t stratum;
    std::uint64_t chunk;
    std::uint64_t count;
  };
  std::vector<StratumTally> tallies(strata.size());
  std::vector<WorkItem> items;
  for (std::size_t s = 0; s < strata.size(); ++s) {
    const StratumSpec& spec = strata[s];
    tallies[s].volume = annulus_volume(n, spec.x_range) * annulus_volume(n, spec.y_range);
    if (spec.jump) {
      const double r = rule(*spec.jump);
      const double nearest =
          std::max({0.0, spec.y_range.inner - spec.x_range.outer,
                    spec.x_range.inner - spec.y_range.outer});
      const bool all = r >= spec.x_range.outer + spec.y_range.outer;
      if (all || r < nearest) {
        tallies[s].certain = true;
        tallies[s].samples = spec.samples;
        tallies[s].hits = all ? spec.samples : 0;
        continue;
      }
    }
    const std::uint64_t total = spec.samples;
    for (std::uint64_t c = 0; c * kChunkSize < total; ++c) {
      items.push_back({s, c, std::min(kChunkSize, total - c * kChunkSize)});
    }
  }

  std::vector<std::uint64_t> hits(items.size(), 0);
  parallel_for(items.size(), threads, [&](std::size_t k) {
    const WorkItem& item = items[k];
    const StratumSpec& spec = strata[item.stratum];
    RandomStream rng(derive_seed(seed, {spec.id, item.chunk}));
    const double fixed_radius = spec.jump ? rule(*spec.jump) : 0.0;
    std::uint64_t local = 0;
    for (std::uint64_t i = 0; i < item.count; ++i) {
      const double rx = sample_radius(rng, n, spec.x_range);
      const double ry = sample_radius(rng, n, spec.y_range);
      const double cosine = sample_cosine(rng, n);
      const double dist =
          std::sqrt(std::max(0.0, rx * rx + ry * ry - 2.0 * rx * ry * cosine));
      if (spec.jump) {
        if (dist > 0.0 && dist <= fixed_radius) ++local;
      } else {
        const double jump = std::abs(u.radial(rx) - u.radial(ry));
        if (in_level_set(jump, dist, rule)) ++local;
      }
    }
    hits[k] = local;
  });

  for (std::size_t k = 0; k < items.size(); ++k) {
    tallies[items[k].stratum].hits += hits[k];
    tallies[items[k].stratum].samples += items[k].count;
  }
  return tallies;
}

// Annuli of a piecewise u, optionally extended by a zero annulus up to S.
std::vector<std::pair<Annulus, double>> annuli_of(const PiecewiseRadial& p,
                                                  double extend_to) {
  std::vector<std::pair<Annulus, double>> out;
  for (std::size_t i = 0; i < p.pieces(); ++i) {
    out.push_back({{p.inner_radius(i), p.outer_radius(i)}, p.values[i]});
  }
  const double last = p.pieces() ? p.radii.back() : 0.0;
  if (extend_to > last) out.push_back({{last, extend_to}, 0.0});
  return out;
}

std::uint64_t stratum_id(std::size_t i, std::size_t j) {
  return (static_cast<std::uint64_t>(i) << 32) | static_cast<std::uint64_t>(j);
}

// Inner B_S x B_S contribution. Piecewise functions are stratified over
// annulus pairs i < j with distinct values (equal values never qualify);
// each such stratum counts twice by the (x, y) <-> (y, x) symmetry.
MeasureEstimate inner_monte_carlo(const TestFunction& u, const FiberRadius& rule,
                                  double support, std::uint64_t samples,
                                  std::uint64_t seed, unsigned threads, bool stratify) {
  MeasureEstimate est;
  if (support == 0.0) return est;

  std::vector<StratumSpec> strata;
  std::vector<double> multiplicity;
  if (stratify && u.is_piecewise()) {
    const auto annuli = annuli_of(u.pieces(), support);
    std::vector<double> weights;
    for (std::size_t i = 0; i < annuli.size(); ++i) {
      for (std::size_t j = i + 1; j < annuli.size(); ++j) {
        if (annuli[i].second == annuli[j].second) continue;
        strata.push_back({annuli[i].first, annuli[j].first, 0, stratum_id(i, j),
                          std::abs(annuli[i].second - annuli[j].second)});
        multiplicity.push_back(2.0);
        weights.push_back(annulus_volume(u.dimension(), annuli[i].first) *
                          annulus_volume(u.dimension(), annuli[j].first));
      }
    }
    if (strata.empty()) return est;
    // Proportional allocation, largest remainder, with a floor per stratum.
    const double total_weight = [&] {
      double w = 0.0;
      for (double x : weights) w += x;
      return w;
    }();
    std::vector<std::pair<double, std::size_t>> remainders;
    std::uint64_t assigned = 0;
    for (std::size_t k = 0; k < strata.size(); ++k) {
      const double share = static_cast<double>(samples) * weights[k] / total_weight;
      strata[k].samples = static_cast<std::uint64_t>(std::floor(share));
      assigned += strata[k].samples;
      remainders.push_back({share - std::floor(share), k});
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t k = 0; assigned < samples && k < remainders.size(); ++k, ++assigned) {
      ++strata[remainders[k].second].samples;
    }
    for (auto& s : strata) s.samples = std::max(s.samples, kMinStratumSamples);
  } else {
    strata.push_back({{0.0, support}, {0.0, support}, samples, stratum_id(0, 0), std::nullopt});
    multiplicity.push_back(1.0);
  }

  const auto tallies = run_strata(u, rule, strata, seed, threads);
  double variance = 0.0;
  for (std::size_t k = 0; k < tallies.size(); ++k) {
    est.value += multiplicity[k] * tallies[k].value();
    const double se = multiplicity[k] * tallies[k].std_error();
    variance += se * se;
    est.sample_count += tallies[k].samples;
  }
  est.std_error = std::sqrt(variance);
  return est;
}

void require_finite_support(const TestFunction& u) {
  if (!std::isfinite(u.support_radius())) {
    throw DomainError("estimator requires a compactly supported test function");
  }
}

}  // namespace

std::string_view method_tag(Method method) noexcept {
  switch (method) {
    case Method::ExactPiecewise:
      return "exact_piecewise";
    case Method::SemiAnalyticCompact:
      return "semi_analytic_compact";
    case Method::MonteCarloFull:
      return "monte_carlo_full";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view tag) noexcept {
  for (Method m : {Method::ExactPiecewise, Method::SemiAnalyticCompact,
                   Method::MonteCarloFull}) {
    if (method_tag(m) == tag) return m;
  }
  if (tag == "exact") return Method::ExactPiecewise;
  if (tag == "semi_analytic") return Method::SemiAnalyticCompact;
  if (tag == "monte_carlo") return Method::MonteCarloFull;
  return std::nullopt;
}

MeasureEstimate MeasureEstimate::scaled(double factor) const {
  MeasureEstimate out = *this;
  out.value *= factor;
  out.std_error *= factor;
  out.bias_bound *= factor;
  return out;
}

FiberRadius::FiberRadius(YoungFunction phi, double t, int dimension, bool direct,
                         double p)
    : phi_(std::move(phi)),
      t_(t),
      dimension_(dimension),
      direct_(direct),
      p_(p),
      omega_(unit_ball_volume(dimension)) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw DomainError("level t must be positive and finite");
  }
  log_weight_ = direct_ ? p_ * std::log(t) : phi_.log_eval(t);
  weight_ = direct_ ? std::pow(t, p_) : phi_(t);
  // weight_ may underflow to 0 at very deep levels; radii use the log form.
  if (!std::isfinite(log_weight_)) {
    throw DomainError("Phi(t) must be positive");
  }
}

FiberRadius FiberRadius::orlicz(const YoungFunction& phi, double t, int dimension) {
  return FiberRadius(phi, t, dimension, false, 1.0);
}

FiberRadius FiberRadius::direct_power(double p, double t, int dimension) {
  return FiberRadius(YoungFunction::power(p), t, dimension, true, p);
}

double FiberRadius::operator()(double jump) const {
  if (!(jump > 0.0)) return 0.0;
  if (direct_) return std::pow(jump / t_, p_ / dimension_);
  return std::exp((phi_.log_eval(jump) - log_weight_) / dimension_);
}

double FiberRadius::fiber_volume(double jump) const {
  if (!(jump > 0.0)) return 0.0;
  if (direct_) return omega_ * std::pow(jump / t_, p_);
  // Plain ratio when representable, log form when it would over/underflow.
  const double ratio = phi_(jump) / weight_;
  if (std::isfinite(ratio) && ratio > 1e-300) return omega_ * ratio;
  return omega_ * std::exp(phi_.log_eval(jump) - log_weight_);
}

double FiberRadius::weighted_fiber_volume(double jump) const {
  if (!(jump > 0.0)) return 0.0;
  return omega_ * (direct_ ? std::pow(jump, p_) : phi_(jump));
}

bool in_level_set(double jump, double distance, const FiberRadius& rule) {
  return distance > 0.0 && distance <= rule(jump);
}

double StratumTally::value() const {
  if (samples == 0) return 0.0;
  return volume * static_cast<double>(hits) / static_cast<double>(samples);
}

double StratumTally::std_error() const {
  if (samples == 0 || certain) return 0.0;
  // Plus-two proportion so that all-hit or all-miss samples of a stratum
  // that is not certain still report an error.
  const double n = static_cast<double>(samples);
  const double p = (static_cast<double>(hits) + 1.0) / (n + 2.0);
  return volume * std::sqrt(p * (1.0 - p) / n);
}

double pair_term(int dimension, Annulus from, Annulus to, double radius, double tol) {
  if (!(radius > 0.0) || from.outer <= from.inner || to.outer <= to.inner) return 0.0;
  // Every fibre ball swallows the target annulus, or misses it entirely.
  if (radius >= from.outer + to.outer) {
    return annulus_volume(dimension, from) * annulus_volume(dimension, to);
  }
  if (radius + from.outer <= to.inner || radius + to.outer <= from.inner) return 0.0;

  const double shell = dimension * unit_ball_volume(dimension);
  auto integrand = [&](double s) {
    return shell * std::pow(s, dimension - 1) *
           ball_annulus_intersection(s, radius, to.inner, to.outer, dimension);
  };
  std::vector<double> breaks;
  push_contact_points(breaks, radius, to.inner);
  push_contact_points(breaks, radius, to.outer);
  return integrate(integrand, from.inner, from.outer, breaks, quad_options(tol)).value;
}

namespace {

// 2 int_{B_S} f * |B(x, rho(x)) \ B_S| dx with f = Phi(t) when weighted,
// 1 otherwise. The weighted form uses f * omega rho^N = omega Phi(|u(x)|),
// which keeps small-t values free of the 1/Phi(t) round trip.
double outer_term_impl(const TestFunction& u, const FiberRadius& rule, double support,
                       double tol, bool weighted) {
  if (!(support > 0.0)) return 0.0;
  const int n = u.dimension();
  const double omega = unit_ball_volume(n);
  const double shell = n * omega;
  const double factor = weighted ? rule.weight() : 1.0;
  auto fibre = [&](double jump) {
    return weighted ? rule.weighted_fiber_volume(jump) : rule.fiber_volume(jump);
  };
  auto integrand = [&](double s) {
    const double jump = std::abs(u.radial(s));
    if (jump == 0.0) return 0.0;
    const double rho = rule(jump);
    const double outside = fibre(jump) - factor * ball_ball_intersection(s, rho, support, n);
    return shell * std::pow(s, n - 1) * std::max(0.0, outside);
  };

  // Near-zero outer terms cannot meet a purely relative tolerance through
  // the cancellation in `outside`; floor the error at a small fraction of
  // 2 |B_S| fibre(sup |u|), which bounds the term.
  QuadratureOptions opts = quad_options(tol);
  if (const double sup = u.sup_abs_beyond(0.0); std::isfinite(sup)) {
    opts.abs_tol = std::max(opts.abs_tol,
                            1e-3 * tol * 2.0 * omega * std::pow(support, n) * fibre(sup));
  }

  if (u.is_piecewise()) {
    const auto& p = u.pieces();
    double sum = 0.0;
    for (std::size_t i = 0; i < p.pieces(); ++i) {
      const double jump = std::abs(p.values[i]);
      if (jump == 0.0) continue;
      const Annulus piece{p.inner_radius(i), std::min(p.outer_radius(i), support)};
      if (piece.outer <= piece.inner) continue;
      const double rho = rule(jump);
      if (rho >= piece.outer + support) {
        sum += annulus_volume(n, piece) *
               (fibre(jump) - factor * omega * std::pow(support, n));
      } else if (rho + piece.outer > support) {
        std::vector<double> breaks;
        push_contact_points(breaks, rho, support);
        sum += integrate(integrand, piece.inner, piece.outer, breaks, opts).value;
      }
    }
    return 2.0 * sum;
  }

  std::vector<double> breaks = u.breakpoints();
  const double lo = std::min(u.inner_radius(), support);
  return 2.0 * integrate(integrand, lo, support, breaks, opts).value;
}

MeasureEstimate exact_impl(const TestFunction& u, const FiberRadius& rule, double tol,
                           bool weighted) {
  const auto& p = u.pieces();
  if (rule.dimension() != u.dimension()) throw DomainError("dimension mismatch");
  MeasureEstimate est;
  est.method = Method::ExactPiecewise;
  if (p.pieces() == 0) return est;

  const double factor = weighted ? rule.weight() : 1.0;
  double total = outer_term_impl(u, rule, p.radii.back(), tol, weighted);
  for (std::size_t i = 0; i < p.pieces(); ++i) {
    for (std::size_t j = i + 1; j < p.pieces(); ++j) {
      const double jump = std::abs(p.values[i] - p.values[j]);
      if (jump == 0.0) continue;
      total += 2.0 * factor *
               pair_term(u.dimension(), {p.inner_radius(i), p.outer_radius(i)},
                         {p.inner_radius(j), p.outer_radius(j)}, rule(jump), tol);
    }
  }
  est.value = total;
  return est;
}

MeasureEstimate semi_impl(const TestFunction& u, const FiberRadius& rule, double tol,
                          std::uint64_t samples, std::uint64_t seed, unsigned threads,
                          bool weighted) {
  require_finite_support(u);
  if (samples == 0) throw DomainError("semi-analytic estimator needs samples > 0");
  if (rule.dimension() != u.dimension()) throw DomainError("dimension mismatch");
  const double support = u.support_radius();
  MeasureEstimate est = inner_monte_carlo(u, rule, support, samples, seed, threads, false);
  if (weighted) est = est.scaled(rule.weight());
  est.value += outer_term_impl(u, rule, support, tol, weighted);
  est.method = Method::SemiAnalyticCompact;
  return est;
}

MeasureEstimate monte_carlo_impl(const TestFunction& u, const FiberRadius& rule,
                                 const MonteCarloOptions& options, bool weighted) {
  if (options.samples < 10'000) {
    throw DomainError("Monte Carlo estimator needs at least 1e4 samples");
  }
  if (rule.dimension() != u.dimension()) throw DomainError("dimension mismatch");
  const double support = u.support_radius();
  double radius = options.truncation_radius;
  if (std::isnan(radius)) {
    if (!std::isfinite(support)) {
      throw DomainError("truncation radius required for unbounded support");
    }
    radius = support;
  }
  if (!(radius >= 0.0) || !std::isfinite(radius)) {
    throw DomainError("truncation radius must be finite and >= 0");
  }
  if (std::isfinite(support) && radius < support) {
    throw DomainError("truncation radius must cover the support of u");
  }

  MeasureEstimate est;
  est.method = Method::MonteCarloFull;
  if (radius == 0.0 || support == 0.0) return est;

  const bool truncated = !std::isfinite(support) || support > radius;
  const Truncation parts = truncate(u, radius);
  const TestFunction& kept = truncated ? parts.inner : u;

  est = inner_monte_carlo(kept, rule, radius, options.samples, options.seed,
                          options.threads, true);
  if (weighted) est = est.scaled(rule.weight());
  est.method = Method::MonteCarloFull;
  est.value += outer_term_impl(kept, rule, radius, options.quadrature_tol, weighted);

  if (truncated) {
    // Tail bound applied to v_S: sup_t Phi(t)|E_t(v_S)| <= 2 omega_N modular(2 v_S).
    const double tail = modular(parts.outer.scaled(2.0), rule.young(), 1e-6);
    const double weighted_bias = 2.0 * unit_ball_volume(u.dimension()) * tail;
    est.bias_bound = weighted ? weighted_bias : weighted_bias / rule.weight();
    est.bias_flagged = est.bias_bound > options.bias_tolerance * est.value;
  }
  return est;
}

}  // namespace

double outer_term(const TestFunction& u, const FiberRadius& rule, double support,
                  double tol) {
  return outer_term_impl(u, rule, support, tol, false);
}

MeasureEstimate exact_piecewise(const TestFunction& u, const FiberRadius& rule,
                                double tol) {
  return exact_impl(u, rule, tol, false);
}

MeasureEstimate exact_piecewise(const TestFunction& u, const YoungFunction& phi,
                                double t, double tol) {
  return exact_piecewise(u, FiberRadius::orlicz(phi, t, u.dimension()), tol);
}

MeasureEstimate semi_analytic_compact(const TestFunction& u, const FiberRadius& rule,
                                      double tol, std::uint64_t samples,
                                      std::uint64_t seed, unsigned threads) {
  return semi_impl(u, rule, tol, samples, seed, threads, false);
}

MeasureEstimate semi_analytic_compact(const TestFunction& u, const YoungFunction& phi,
                                      double t, double tol, std::uint64_t samples,
                                      std::uint64_t seed, unsigned threads) {
  return semi_analytic_compact(u, FiberRadius::orlicz(phi, t, u.dimension()), tol,
                               samples, seed, threads);
}

MeasureEstimate monte_carlo_full(const TestFunction& u, const FiberRadius& rule,
                                 const MonteCarloOptions& options) {
  return monte_carlo_impl(u, rule, options, false);
}

MeasureEstimate monte_carlo_full(const TestFunction& u, const YoungFunction& phi,
                                 double t, const MonteCarloOptions& options) {
  return monte_carlo_full(u, FiberRadius::orlicz(phi, t, u.dimension()), options);
}

StratumTally sample_stratum(const TestFunction& u, const FiberRadius& rule,
                            Annulus x_range, Annulus y_range, std::uint64_t samples,
                            std::uint64_t seed, std::uint64_t stratum,
                            unsigned threads) {
  std::vector<StratumSpec> strata{{x_range, y_range, samples, stratum, std::nullopt}};
  return run_strata(u, rule, strata, seed, threads).front();
}

MeasureEstimate phi_weighted(const LevelSetQuery& query, const FiberRadius& rule) {
  switch (query.method) {
    case Method::ExactPiecewise:
      return exact_impl(query.u, rule, query.tol, true);
    case Method::SemiAnalyticCompact:
      return semi_impl(query.u, rule, query.tol, query.mc.samples, query.mc.seed,
                       query.mc.threads, true);
    case Method::MonteCarloFull:
      return monte_carlo_impl(query.u, rule, query.mc, true);
  }
  throw DomainError("unknown estimation method");
}

MeasureEstimate phi_weighted(const LevelSetQuery& query) {
  return phi_weighted(query, FiberRadius::orlicz(query.phi, query.t, query.u.dimension()));
}

bool certified_affine_regime(const TestFunction& u, const FiberRadius& rule) {
  if (!u.is_piecewise()) return false;
  const auto& p = u.pieces();
  if (p.pieces() == 0) return true;
  const double reach = 2.0 * p.radii.back();
  auto swallows = [&](double jump) { return jump == 0.0 || rule(jump) >= reach; };
  for (std::size_t i = 0; i < p.pieces(); ++i) {
    if (!swallows(std::abs(p.values[i]))) return false;
    for (std::size_t j = i + 1; j < p.pieces(); ++j) {
      if (!swallows(std::abs(p.values[i] - p.values[j]))) return false;
    }
  }
  return true;
}

}  // namespace orlicz
