#pragma once

// The law suite: every structural claim about the syntax category and its
// copresheaves, checked numerically on a concrete category. Exhaustive up to
// Sampling::exhaustive_limit objects, seeded sampling beyond.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "enriched/category.hpp"
#include "enriched/metric_semantics.hpp"
#include "enriched/quantale.hpp"
#include "enriched/report.hpp"
#include "enriched/rng.hpp"
#include "enriched/semantics.hpp"

namespace enriched {

// ---------------------------------------------------------------------------
// Numeric comparison helpers

/// 0 when equal (including both +inf), +inf when exactly one side is
/// infinite, |a - b| otherwise.
inline double abs_mismatch(double a, double b) {
  if (a == b) return 0.0;
  if (std::isinf(a) || std::isinf(b)) return kInfinity;
  return std::fabs(a - b);
}

/// Like abs_mismatch, scaled by max(|a|, |b|, 1).
inline double rel_mismatch(double a, double b) {
  double d = abs_mismatch(a, b);
  if (d == 0.0 || std::isinf(d)) return d;
  return d / std::max({std::fabs(a), std::fabs(b), 1.0});
}

/// Number of representable doubles strictly between a and b, plus one; 0 when
/// equal. Both must be finite and non-negative.
inline std::uint64_t ulp_distance(double a, double b) {
  if (a == b) return 0;
  auto ia = std::bit_cast<std::uint64_t>(a);
  auto ib = std::bit_cast<std::uint64_t>(b);
  return ia > ib ? ia - ib : ib - ia;
}

// ---------------------------------------------------------------------------
// Random categories

struct RandomCategorySpec {
  std::size_t n_objects = 6;
  std::uint64_t seed = 0;
  double chain_density = 0.4;
};

/// A random finite poset (edges i < j kept with probability chain_density,
/// then transitively closed) with an integer measure that is non-increasing
/// along the order; hom(x,y) = m(y)/m(x) when x <= y. Both enriched category
/// axioms hold by construction.
inline HomTable random_category(const RandomCategorySpec& spec) {
  if (spec.n_objects == 0) throw std::invalid_argument("n_objects must be >= 1");
  const std::size_t n = spec.n_objects;
  CounterRng rng(spec.seed, 0xca7);
  std::vector<char> order(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    order[i * n + i] = 1;
    for (std::size_t j = i + 1; j < n; ++j) order[i * n + j] = rng.bernoulli(spec.chain_density);
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (order[i * n + k])
        for (std::size_t j = 0; j < n; ++j)
          if (order[k * n + j]) order[i * n + j] = 1;

  std::vector<double> measures(n);
  std::vector<std::string> labels(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::uint64_t cap = 1000;
    for (std::size_t i = 0; i < j; ++i)
      if (order[i * n + j]) cap = std::min(cap, static_cast<std::uint64_t>(measures[i]));
    measures[j] = static_cast<double>(1 + rng.below(cap));
    labels[j] = "o" + std::to_string(j);
  }
  return HomTable(std::move(labels), std::move(measures), std::move(order));
}

// ---------------------------------------------------------------------------
// Category axioms

/// Identity (hom(x,x) = 1, the only value >= 1 in [0,1]), composition (hom(x,y) hom(y,z) <= hom(x,z)) and
/// equality of composition along chains x <= y <= z.
template <MeasuredCategory C>
VerificationReport verify_category_axioms(const C& cat, const Sampling& sampling, double tol) {
  VerificationReport r;
  r.tolerance = tol;
  r.seed = sampling.seed;
  LawEntry id{"category_identity"}, comp{"category_composition"}, chain{"category_chain_equality"};
  const std::size_t n = cat.size();

  for (ObjectId x = 0; x < n; ++x) {
    double h = cat.hom(x, x);
    id.record(std::fabs(1.0 - h), {cat.label(x)});
  }

  auto triple = [&](ObjectId x, ObjectId y, ObjectId z) {
    double lhs = cat.hom(x, y) * cat.hom(y, z);
    double rhs = cat.hom(x, z);
    std::vector<std::string> w{cat.label(x), cat.label(y), cat.label(z)};
    comp.record(std::max(lhs - rhs, 0.0), w);
    if (cat.leq(x, y) && cat.leq(y, z)) chain.record(std::fabs(lhs - rhs), w);
  };

  if (n <= sampling.exhaustive_limit) {
    for (ObjectId x = 0; x < n; ++x)
      for (ObjectId y = 0; y < n; ++y)
        for (ObjectId z = 0; z < n; ++z) triple(x, y, z);
  } else if (n > 0) {
    // Mostly composable triples, where violations can live; some uniform ones.
    CounterRng rng(sampling.seed, 0xa1);
    for (std::size_t s = 0; s < sampling.samples; ++s) {
      ObjectId x = rng.below(n);
      auto ux = cat.up_set(x);
      ObjectId y = (ux.empty() || rng.bernoulli(0.1)) ? rng.below(n) : ux[rng.below(ux.size())];
      auto uy = cat.up_set(y);
      ObjectId z = (uy.empty() || rng.bernoulli(0.1)) ? rng.below(n) : uy[rng.below(uy.size())];
      triple(x, y, z);
    }
  }
  r.entries = {id, comp, chain};
  return r;
}

// ---------------------------------------------------------------------------
// The full suite

struct SuiteConfig {
  double tol = 1e-9;
  std::uint64_t seed = 0;
  std::size_t exhaustive_limit = 64;
  std::size_t samples = 20000;
  std::size_t max_subjects = 64;
  std::size_t max_pairs = 256;
  std::size_t diagrams = 100;
  std::size_t diagram_max_objects = 6;
  double grid_step = 0.05;
  std::size_t tropical_instances = 1000;

  Sampling sampling() const { return Sampling{exhaustive_limit, samples, seed}; }
};

namespace detail {

template <MeasuredCategory C>
double measured_rep(const C& cat, ObjectId x, ObjectId c) {
  return cat.leq(x, c) ? cat.measure(c) / cat.measure(x) : 0.0;
}

inline std::vector<ObjectId> sample_ids(CounterRng& rng, std::size_t n, std::size_t k) {
  std::vector<ObjectId> ids(n);
  std::iota(ids.begin(), ids.end(), ObjectId{0});
  k = std::min(k, n);
  for (std::size_t i = 0; i < k; ++i) std::swap(ids[i], ids[i + rng.below(n - i)]);
  ids.resize(k);
  std::sort(ids.begin(), ids.end());
  return ids;
}

struct Plan {
  std::vector<ObjectId> subjects;                      // representables to examine
  std::vector<std::pair<ObjectId, ObjectId>> pairs;    // representable pairs
  std::vector<ObjectId> points;                        // evaluation objects for O(n) oracles
};

inline Plan make_plan(std::size_t n, const SuiteConfig& cfg) {
  Plan p;
  if (n <= cfg.exhaustive_limit) {
    p.subjects.resize(n);
    std::iota(p.subjects.begin(), p.subjects.end(), ObjectId{0});
    for (ObjectId x = 0; x < n; ++x)
      for (ObjectId y = 0; y < n; ++y) p.pairs.emplace_back(x, y);
    p.points = p.subjects;
    return p;
  }
  CounterRng rng(cfg.seed, 0x91a);
  p.subjects = sample_ids(rng, n, cfg.max_subjects);
  for (std::size_t i = 0; i < cfg.max_pairs; ++i)
    p.pairs.emplace_back(p.subjects[rng.below(p.subjects.size())],
                         p.subjects[rng.below(p.subjects.size())]);
  p.points = sample_ids(rng, n, cfg.max_subjects);
  return p;
}

}  // namespace detail

/// Products and coproducts of representables against the case tables
///   (h^x x h^y)(c) = min{pi(c|x), pi(c|y)} if x <= c and y <= c, else 0
///   (h^x + h^y)(c) = max / pi(c|x) / pi(c|y) / 0 by which of x, y lie below c,
/// with the expected side computed from the measure and the order alone.
template <MeasuredCategory C>
void check_case_tables(const C& cat, const detail::Plan& plan, std::size_t limit, LawEntry& prod,
                       LawEntry& coprod) {
  const std::size_t n = cat.size();
  for (auto [x, y] : plan.pairs) {
    Copresheaf hx = representable(cat, x), hy = representable(cat, y);
    Copresheaf p = product(hx, hy), q = coproduct(hx, hy);
    for (ObjectId c = 0; c < n; ++c) {
      bool xc = cat.leq(x, c), yc = cat.leq(y, c);
      double px = detail::measured_rep(cat, x, c), py = detail::measured_rep(cat, y, c);
      double want_p = (xc && yc) ? std::min(px, py) : 0.0;
      double want_q = (xc && yc) ? std::max(px, py) : xc ? px : yc ? py : 0.0;
      std::vector<std::string> w{cat.label(x), cat.label(y), cat.label(c)};
      prod.record(abs_mismatch(p[c], want_p), w);
      coprod.record(abs_mismatch(q[c], want_q), w);
    }
    prod.absorb(functoriality_entry(cat, p, limit));
    coprod.absorb(functoriality_entry(cat, q, limit));
  }
}

/// Weighted (co)limits of random small diagrams against the brute-force grid
/// oracles. The closed forms must dominate (resp. lie below) the oracle, meet
/// the (co)cone condition exactly and be functorial; trivial weights must
/// reduce exactly to product/coproduct. The largest closed-vs-oracle distance
/// is returned through `grid_gap` (the grid cannot represent small ratios, so
/// that distance is reported rather than asserted).
template <MeasuredCategory C>
void check_weighted(const C& cat, const detail::Plan& plan, const SuiteConfig& cfg,
                    LawEntry& lim, LawEntry& colim, double& grid_gap) {
  const std::size_t n = cat.size();
  if (n == 0) return;
  CounterRng rng(cfg.seed, 0xd1a);
  for (std::size_t k = 0; k < cfg.diagrams; ++k) {
    std::size_t m = std::min<std::size_t>(n, 2 + rng.below(cfg.diagram_max_objects - 1));
    std::vector<ObjectId> ids = detail::sample_ids(rng, n, m);
    HomTable sub = HomTable::restrict_to(cat, ids);
    std::vector<WeightedLeg> legs;
    std::size_t n_legs = 2 + rng.below(2);
    std::vector<std::string> witness;
    for (std::size_t i = 0; i < n_legs; ++i) {
      ObjectId x = rng.below(m);
      legs.push_back({rng.uniform(), representable(sub, x)});
      witness.push_back(sub.label(x));
    }
    WeightedDiagram d(std::move(legs));
    Copresheaf closed_l = weighted_limit(d), closed_c = weighted_colimit(d);
    // A broken table (identity above 1, say) admits no copresheaf at all; the
    // grid search then has nothing to compare and functoriality below reports.
    std::optional<Copresheaf> oracle_l, oracle_c;
    try {
      oracle_l = oracle_weighted_limit(sub, d, cfg.grid_step, cfg.diagram_max_objects);
      oracle_c = oracle_weighted_colimit(sub, d, cfg.grid_step, cfg.diagram_max_objects);
    } catch (const NoGridCandidate&) {
      oracle_l.reset();
    }
    for (ObjectId c = 0; oracle_l && c < m; ++c) {
      auto w = witness;
      w.push_back(sub.label(c));
      lim.record(std::max((*oracle_l)[c] - closed_l[c], 0.0), w);
      colim.record(std::max(closed_c[c] - (*oracle_c)[c], 0.0), w);
      grid_gap = std::max({grid_gap, std::fabs(closed_l[c] - (*oracle_l)[c]),
                           std::fabs(closed_c[c] - (*oracle_c)[c])});
    }
    double cone = 1.0, cocone = 1.0;
    for (const auto& [wt, f] : d.legs()) {
      cone = std::min(cone, truncated_div(wt, hom_copresheaves(closed_l, f)));
      cocone = std::min(cocone, truncated_div(wt, hom_copresheaves(f, closed_c)));
    }
    lim.record(1.0 - cone, witness);
    colim.record(1.0 - cocone, witness);
    lim.absorb(functoriality_entry(sub, closed_l));
    colim.absorb(functoriality_entry(sub, closed_c));
  }

  for (auto [x, y] : plan.pairs) {
    Copresheaf hx = representable(cat, x), hy = representable(cat, y);
    std::vector<std::string> w{cat.label(x), cat.label(y)};
    WeightedDiagram trivial({{1.0, hx}, {1.0, hy}});
    Copresheaf tl = weighted_limit(trivial), tc = weighted_colimit(trivial);
    Copresheaf p = product(hx, hy), q = coproduct(hx, hy);
    for (ObjectId c = 0; c < n; ++c) {
      lim.record(abs_mismatch(tl[c], p[c]), w);
      colim.record(abs_mismatch(tc[c], q[c]), w);
    }
    WeightedDiagram weighted({{rng.uniform(), hx}, {rng.uniform(), hy}});
    lim.absorb(functoriality_entry(cat, weighted_limit(weighted), cfg.exhaustive_limit));
    colim.absorb(functoriality_entry(cat, weighted_colimit(weighted), cfg.exhaustive_limit));
  }
}

/// Internal hom of representables: support against the Boolean implication
/// [h^x => h^y](c) nonempty iff every d above c that lies above x also lies
/// above y; values against the closed formula evaluated from the measure;
/// and functoriality of the result.
template <MeasuredCategory C>
void check_internal_hom(const C& cat, const detail::Plan& plan, std::size_t limit,
                        LawEntry& support, LawEntry& formula, LawEntry& functor) {
  const std::size_t n = cat.size();
  // The Boolean and closed-form oracles cost O(n) per point; cap the pair
  // count when the category is too large to enumerate.
  const std::size_t pair_count = n <= limit ? plan.pairs.size() : std::min<std::size_t>(plan.pairs.size(), 16);
  for (std::size_t i = 0; i < pair_count; ++i) {
    auto [x, y] = plan.pairs[i];
    Copresheaf imp = internal_hom(cat, representable(cat, x), representable(cat, y));
    for (ObjectId c : plan.points) {
      std::vector<std::string> w{cat.label(x), cat.label(y), cat.label(c)};
      bool boolean = true;
      double value = 1.0;
      for (ObjectId d = 0; d < n; ++d) {
        if (!cat.leq(c, d)) continue;
        if (cat.leq(x, d) && !cat.leq(y, d)) boolean = false;
        double denom = std::min(detail::measured_rep(cat, c, d), detail::measured_rep(cat, x, d));
        if (denom > 0.0) value = std::min(value, detail::measured_rep(cat, y, d) / denom);
      }
      support.record((imp[c] > 0.0) == boolean ? 0.0 : 1.0, w);
      formula.record(abs_mismatch(imp[c], value), w);
    }
    LawEntry f = functoriality_entry(cat, imp, limit);
    if (f.witness) f.witness->insert(f.witness->begin(), {cat.label(x), cat.label(y)});
    functor.absorb(f);
  }
}

template <MeasuredCategory C>
void check_metric(const C& cat, const detail::Plan& plan, const SuiteConfig& cfg,
                  LawEntry& transport, LawEntry& triangle) {
  const std::size_t n = cat.size();
  for (ObjectId x : plan.subjects) {
    Copresheaf hx = representable(cat, x);
    MetricCopresheaf mx = to_metric(hx);
    MetricCopresheaf dx = metric_representable(cat, x);
    Copresheaf back = to_unit(mx);
    for (ObjectId c = 0; c < n; ++c) {
      std::vector<std::string> w{cat.label(x), cat.label(c)};
      transport.record(rel_mismatch(back[c], hx[c]), w);
      transport.record(abs_mismatch(mx[c], dx[c]), w);
      // Metric distance recomputed from the measure.
      double want = cat.leq(x, c) ? neg_log(detail::measured_rep(cat, x, c)) : kInfinity;
      transport.record(rel_mismatch(dx[c], want), w);
    }
  }
  for (auto [x, y] : plan.pairs) {
    Copresheaf hx = representable(cat, x), hy = representable(cat, y);
    MetricCopresheaf mx = to_metric(hx), my = to_metric(hy);
    MetricCopresheaf mp = to_metric(product(hx, hy)), mq = to_metric(coproduct(hx, hy));
    MetricCopresheaf p = metric_product(mx, my), q = metric_coproduct(mx, my);
    std::vector<std::string> w{cat.label(x), cat.label(y)};
    for (ObjectId c = 0; c < n; ++c) {
      transport.record(abs_mismatch(mp[c], p[c]), w);
      transport.record(abs_mismatch(mq[c], q[c]), w);
    }
    transport.record(rel_mismatch(metric_hom_copresheaves(mx, my), neg_log(hom_copresheaves(hx, hy))),
                     w);
  }

  auto tri = [&](ObjectId x, ObjectId y, ObjectId z) {
    double lhs = tropical_mul(neg_log(cat.hom(x, y)), neg_log(cat.hom(y, z)));
    double rhs = neg_log(cat.hom(x, z));
    triangle.record(truncated_sub(lhs, rhs), {cat.label(x), cat.label(y), cat.label(z)});
  };
  if (n <= cfg.exhaustive_limit) {
    for (ObjectId x = 0; x < n; ++x)
      for (ObjectId y = 0; y < n; ++y)
        for (ObjectId z = 0; z < n; ++z) tri(x, y, z);
  } else if (n > 0) {
    CounterRng rng(cfg.seed, 0x7e1);
    for (std::size_t s = 0; s < cfg.samples; ++s) {
      ObjectId x = rng.below(n);
      auto ux = cat.up_set(x);
      ObjectId y = ux.empty() ? rng.below(n) : ux[rng.below(ux.size())];
      auto uy = cat.up_set(y);
      ObjectId z = uy.empty() ? rng.below(n) : uy[rng.below(uy.size())];
      tri(x, y, z);
    }
  }
}

namespace detail {

inline double random_extended(CounterRng& rng) {
  if (rng.bernoulli(0.15)) return kInfinity;
  if (rng.bernoulli(0.05)) return 0.0;
  return 10.0 * rng.uniform();
}

inline MetricCopresheaf random_metric(CounterRng& rng, std::size_t n) {
  MetricCopresheaf f(n);
  for (std::size_t i = 0; i < n; ++i) f[i] = random_extended(rng);
  return f;
}

}  // namespace detail

/// Semimodule laws of metric copresheaves over ([0,inf], min, +) on random
/// instances, and preservation of functoriality of d(x,-) under scaling.
/// Returns the largest ulp distance seen in the additive laws.
template <MeasuredCategory C>
std::uint64_t check_tropical(const C& cat, const detail::Plan& plan, const SuiteConfig& cfg,
                             LawEntry& laws) {
  CounterRng rng(cfg.seed, 0x7a0);
  const std::size_t width = std::clamp<std::size_t>(cat.size(), 1, 16);
  std::uint64_t max_ulps = 0;
  auto cmp = [&](const MetricCopresheaf& a, const MetricCopresheaf& b, const char* law) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      laws.record(rel_mismatch(a[i], b[i]), {law});
      if (!std::isinf(a[i]) && !std::isinf(b[i]))
        max_ulps = std::max(max_ulps, ulp_distance(a[i], b[i]));
      else if (a[i] != b[i])
        max_ulps = std::numeric_limits<std::uint64_t>::max();
    }
  };
  const MetricCopresheaf top(width, kInfinity);
  for (std::size_t k = 0; k < cfg.tropical_instances; ++k) {
    MetricCopresheaf f = detail::random_metric(rng, width), g = detail::random_metric(rng, width),
                     h = detail::random_metric(rng, width);
    TropicalScalar s(detail::random_extended(rng)), t(detail::random_extended(rng));
    cmp(tropical_add(tropical_add(f, g), h), tropical_add(f, tropical_add(g, h)), "add_associative");
    cmp(tropical_add(f, g), tropical_add(g, f), "add_commutative");
    cmp(tropical_add(f, f), f, "add_idempotent");
    cmp(tropical_add(f, top), f, "inf_is_additive_identity");
    cmp(tropical_scale(TropicalScalar(tropical_mul(s.value, t.value)), f),
        tropical_scale(s, tropical_scale(t, f)), "scale_compatible");
    cmp(tropical_scale(TropicalScalar(0.0), f), f, "zero_scale_identity");
    cmp(tropical_scale(s, tropical_add(f, g)), tropical_add(tropical_scale(s, f), tropical_scale(s, g)),
        "scale_distributes");
  }
  for (ObjectId x : plan.subjects) {
    TropicalScalar s(10.0 * rng.uniform());
    LawEntry e = metric_functoriality_entry(cat, tropical_scale(s, metric_representable(cat, x)),
                                            cfg.exhaustive_limit);
    if (e.witness) e.witness->insert(e.witness->begin(), "scaled d(" + cat.label(x) + ",-)");
    laws.absorb(e);
  }
  return max_ulps;
}

/// Runs every law in a fixed order and collects one report entry per law.
template <MeasuredCategory C>
VerificationReport run_suite(const C& cat, const SuiteConfig& cfg = {}) {
  VerificationReport r;
  r.seed = cfg.seed;
  r.tolerance = cfg.tol;
  const detail::Plan plan = detail::make_plan(cat.size(), cfg);

  r.append(verify_category_axioms(cat, cfg.sampling(), cfg.tol));

  LawEntry& rep = r.add("representable_functoriality");
  for (ObjectId x : plan.subjects) {
    LawEntry e = functoriality_entry(cat, representable(cat, x), cfg.exhaustive_limit);
    if (e.witness) e.witness->insert(e.witness->begin(), cat.label(x));
    rep.absorb(e);
  }

  r.append(yoneda_check(cat, cfg.tol, cfg.sampling()));

  {
    LawEntry prod{"product_case_table"}, coprod{"coproduct_case_table"};
    check_case_tables(cat, plan, cfg.exhaustive_limit, prod, coprod);
    r.entries.push_back(prod);
    r.entries.push_back(coprod);
  }
  {
    LawEntry lim{"weighted_limit"}, colim{"weighted_colimit"};
    double gap = 0.0;
    check_weighted(cat, plan, cfg, lim, colim, gap);
    r.entries.push_back(lim);
    r.entries.push_back(colim);
    r.diagnostics.emplace_back("weighted_grid_gap", gap);
  }
  {
    LawEntry support{"internal_hom_support"}, formula{"internal_hom_formula"},
        functor{"internal_hom_functoriality"};
    check_internal_hom(cat, plan, cfg.exhaustive_limit, support, formula, functor);
    r.entries.push_back(support);
    r.entries.push_back(formula);
    r.entries.push_back(functor);
  }
  {
    LawEntry transport{"metric_transport"}, triangle{"metric_triangle"};
    check_metric(cat, plan, cfg, transport, triangle);
    r.entries.push_back(transport);
    r.entries.push_back(triangle);
  }
  {
    LawEntry laws{"tropical_semimodule"};
    std::uint64_t ulps = check_tropical(cat, plan, cfg, laws);
    r.entries.push_back(laws);
    r.diagnostics.emplace_back("tropical_max_ulps", static_cast<double>(ulps));
  }

  // Currying gap hom(h^x x h^y, h^z) vs hom(h^x, [h^y, h^z]); reported only.
  double curry = 0.0;
  for (std::size_t i = 0; !plan.subjects.empty() && i < plan.pairs.size() && i < 64; ++i) {
    auto [x, y] = plan.pairs[i];
    ObjectId z = plan.subjects[i % plan.subjects.size()];
    Copresheaf hx = representable(cat, x), hy = representable(cat, y), hz = representable(cat, z);
    curry = std::max(curry, std::fabs(hom_copresheaves(product(hx, hy), hz) -
                                      hom_copresheaves(hx, internal_hom(cat, hy, hz))));
  }
  r.diagnostics.emplace_back("currying_gap", curry);
  return r;
}

}  // namespace enriched
