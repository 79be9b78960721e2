#pragma once

// The copresheaf category [0,1]^L: meanings as [0,1]-valued functors on a
// finite enriched category, and the constructions that combine them.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "enriched/category.hpp"
#include "enriched/quantale.hpp"
#include "enriched/report.hpp"
#include "enriched/rng.hpp"

namespace enriched {

/// A total map object id -> [0,1]. Functoriality is not enforced here;
/// is_copresheaf() checks it.
class Copresheaf {
 public:
  Copresheaf() = default;
  explicit Copresheaf(std::size_t n, double fill = 0.0) : values_(n, fill) {}
  explicit Copresheaf(std::vector<double> values) : values_(std::move(values)) {
    for (double v : values_)
      if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("copresheaf value outside [0,1]");
  }

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](ObjectId c) const { return values_[c]; }
  double& operator[](ObjectId c) { return values_[c]; }
  const std::vector<double>& values() const noexcept { return values_; }

  std::vector<ObjectId> support() const {
    std::vector<ObjectId> out;
    for (ObjectId c = 0; c < values_.size(); ++c)
      if (values_[c] > 0.0) out.push_back(c);
    return out;
  }

  friend bool operator==(const Copresheaf&, const Copresheaf&) = default;

 private:
  std::vector<double> values_;
};

/// Exhaustive below `exhaustive_limit` objects, otherwise `samples` draws
/// from a CounterRng seeded with `seed`.
struct Sampling {
  std::size_t exhaustive_limit = 64;
  std::size_t samples = 20000;
  std::uint64_t seed = 0;
};

namespace detail {

inline void require_same_size(const Copresheaf& f, const Copresheaf& g) {
  if (f.size() != g.size()) throw std::invalid_argument("copresheaves over different categories");
}

template <EnrichedCategory C>
void require_over(const C& cat, const Copresheaf& f) {
  if (f.size() != cat.size()) throw std::invalid_argument("copresheaf size does not match category");
}

}  // namespace detail

/// h^x = hom(x, -).
template <EnrichedCategory C>
Copresheaf representable(const C& cat, ObjectId x) {
  if (x >= cat.size()) throw std::out_of_range("object id out of range");
  Copresheaf h(cat.size());
  for (ObjectId c : cat.up_set(x)) h[c] = cat.hom(x, c);
  return h;
}

inline Copresheaf representable(const SyntaxCategory& cat, const Text& x) {
  return representable(cat, cat.id(x));
}

/// Checks hom(c,d) <= [F c, F d] over every pair when the category is small,
/// otherwise over every pair with nonzero hom (the remaining pairs hold
/// trivially).
template <EnrichedCategory C>
LawEntry functoriality_entry(const C& cat, const Copresheaf& f, std::size_t exhaustive_limit = 64,
                             std::string law = "copresheaf_functoriality") {
  detail::require_over(cat, f);
  LawEntry e{std::move(law)};
  const std::size_t n = cat.size();
  auto check = [&](ObjectId c, ObjectId d) {
    double v = cat.hom(c, d) - truncated_div(f[c], f[d]);
    e.record(v > 0.0 ? v : 0.0, {cat.label(c), cat.label(d)});
  };
  if (n <= exhaustive_limit) {
    for (ObjectId c = 0; c < n; ++c)
      for (ObjectId d = 0; d < n; ++d) check(c, d);
  } else {
    for (ObjectId c = 0; c < n; ++c)
      for (ObjectId d : cat.up_set(c)) check(c, d);
  }
  return e;
}

template <EnrichedCategory C>
VerificationReport is_copresheaf(const C& cat, const Copresheaf& f, double tol,
                                 std::size_t exhaustive_limit = 64) {
  VerificationReport r;
  r.tolerance = tol;
  r.entries.push_back(functoriality_entry(cat, f, exhaustive_limit));
  return r;
}

/// [0,1]^L(F, G) = min over objects of [F c, G c].
inline double hom_copresheaves(const Copresheaf& f, const Copresheaf& g) {
  detail::require_same_size(f, g);
  double m = 1.0;
  for (ObjectId c = 0; c < f.size() && m > 0.0; ++c) m = std::min(m, truncated_div(f[c], g[c]));
  return m;
}

/// hom(h^x, h^y) without materializing either side: only objects in the
/// up-set of x can fall below 1.
template <EnrichedCategory C>
double hom_representables(const C& cat, ObjectId x, ObjectId y) {
  double m = 1.0;
  for (ObjectId c : cat.up_set(x)) {
    m = std::min(m, truncated_div(cat.hom(x, c), cat.hom(y, c)));
    if (m <= 0.0) break;
  }
  return m;
}

/// Pointwise minimum: the (trivially weighted) product, enriched "and".
inline Copresheaf product(const Copresheaf& f, const Copresheaf& g) {
  detail::require_same_size(f, g);
  Copresheaf out(f.size());
  for (ObjectId c = 0; c < f.size(); ++c) out[c] = std::min(f[c], g[c]);
  return out;
}

/// Pointwise maximum: the (trivially weighted) coproduct, enriched "or".
inline Copresheaf coproduct(const Copresheaf& f, const Copresheaf& g) {
  detail::require_same_size(f, g);
  Copresheaf out(f.size());
  for (ObjectId c = 0; c < f.size(); ++c) out[c] = std::max(f[c], g[c]);
  return out;
}

struct WeightedLeg {
  double weight = 1.0;
  Copresheaf leg;
};

/// A diagram over a discrete indexing category with a [0,1]-valued weight on
/// each object.
class WeightedDiagram {
 public:
  explicit WeightedDiagram(std::vector<WeightedLeg> legs) : legs_(std::move(legs)) {
    if (legs_.empty()) throw std::invalid_argument("weighted diagram needs at least one leg");
    for (const auto& l : legs_) {
      if (!(l.weight >= 0.0 && l.weight <= 1.0))
        throw std::invalid_argument("weight outside [0,1]");
      detail::require_same_size(l.leg, legs_.front().leg);
    }
  }

  const std::vector<WeightedLeg>& legs() const noexcept { return legs_; }
  std::size_t objects() const noexcept { return legs_.front().leg.size(); }

 private:
  std::vector<WeightedLeg> legs_;
};

/// lim_W F (c) = min_i [w_i, F_i c].
inline Copresheaf weighted_limit(const WeightedDiagram& d) {
  Copresheaf out(d.objects(), 1.0);
  for (const auto& [w, f] : d.legs())
    for (ObjectId c = 0; c < out.size(); ++c) out[c] = std::min(out[c], truncated_div(w, f[c]));
  return out;
}

/// colim_W F (c) = max_i w_i * F_i c.
inline Copresheaf weighted_colimit(const WeightedDiagram& d) {
  Copresheaf out(d.objects(), 0.0);
  for (const auto& [w, f] : d.legs())
    for (ObjectId c = 0; c < out.size(); ++c) out[c] = std::max(out[c], w * f[c]);
  return out;
}

/// Thrown by the grid oracles when no grid-valued copresheaf satisfies the
/// constraints, which happens only on tables that break the category axioms.
struct NoGridCandidate : std::runtime_error {
  NoGridCandidate() : std::runtime_error("grid search found no candidate") {}
};

namespace detail {

// Depth-first search over grid-valued functions Z, visiting each object's
// levels in `descending` or ascending order. The first complete assignment
// reached is the lexicographically extreme feasible one; because feasible
// sets here are closed under pointwise max (resp. min), it is also the
// pointwise extreme.
template <EnrichedCategory C, class LocalOk, class WholeOk>
Copresheaf grid_search(const C& cat, double step, bool descending, double tol, LocalOk local_ok,
                       WholeOk whole_ok) {
  const double levels_f = 1.0 / step;
  const auto levels = static_cast<long>(std::lround(levels_f));
  if (levels < 1 || std::fabs(levels_f - static_cast<double>(levels)) > 1e-9)
    throw std::invalid_argument("grid_step must divide 1");
  const std::size_t n = cat.size();
  std::vector<double> z(n, 0.0);
  Copresheaf found;
  bool done = false;

  auto consistent = [&](ObjectId c) {
    for (ObjectId j = 0; j < c; ++j) {
      if (cat.hom(j, c) > truncated_div(z[j], z[c]) + tol) return false;
      if (cat.hom(c, j) > truncated_div(z[c], z[j]) + tol) return false;
    }
    return cat.hom(c, c) <= 1.0 + tol;
  };

  auto dfs = [&](auto&& self, ObjectId c) -> void {
    if (done) return;
    if (c == n) {
      Copresheaf cand(z);
      if (whole_ok(cand)) {
        found = std::move(cand);
        done = true;
      }
      return;
    }
    for (long k = 0; k <= levels && !done; ++k) {
      long level = descending ? levels - k : k;
      z[c] = static_cast<double>(level) / static_cast<double>(levels);
      if (local_ok(c, z[c]) && consistent(c)) self(self, c + 1);
    }
  };
  dfs(dfs, 0);
  if (!done) throw NoGridCandidate();
  return found;
}

}  // namespace detail

/// Brute-force weighted limit: the pointwise-largest grid-valued copresheaf
/// Z whose cone condition min_i [w_i, hom(Z, F_i)] >= 1 holds. Test oracle
/// for weighted_limit(); exponential in the object count.
template <EnrichedCategory C>
Copresheaf oracle_weighted_limit(const C& cat, const WeightedDiagram& d, double grid_step,
                                 std::size_t guard = 8, double tol = 1e-12) {
  if (cat.size() > guard)
    throw std::invalid_argument("oracle_weighted_limit: " + std::to_string(cat.size()) +
                                " objects exceeds guard of " + std::to_string(guard));
  if (d.objects() != cat.size()) throw std::invalid_argument("diagram size does not match category");
  auto local = [&](ObjectId c, double z) {
    for (const auto& [w, f] : d.legs())
      if (truncated_div(z, f[c]) < w - tol) return false;
    return true;
  };
  auto whole = [&](const Copresheaf& z) {
    for (const auto& [w, f] : d.legs())
      if (truncated_div(w, hom_copresheaves(z, f)) < 1.0 - tol) return false;
    return functoriality_entry(cat, z).max_violation <= tol;
  };
  return detail::grid_search(cat, grid_step, true, tol, local, whole);
}

/// Dual oracle: the pointwise-smallest grid-valued copresheaf Z with
/// min_i [w_i, hom(F_i, Z)] >= 1.
template <EnrichedCategory C>
Copresheaf oracle_weighted_colimit(const C& cat, const WeightedDiagram& d, double grid_step,
                                   std::size_t guard = 8, double tol = 1e-12) {
  if (cat.size() > guard)
    throw std::invalid_argument("oracle_weighted_colimit: " + std::to_string(cat.size()) +
                                " objects exceeds guard of " + std::to_string(guard));
  if (d.objects() != cat.size()) throw std::invalid_argument("diagram size does not match category");
  auto local = [&](ObjectId c, double z) {
    for (const auto& [w, f] : d.legs())
      if (truncated_div(f[c], z) < w - tol) return false;
    return true;
  };
  auto whole = [&](const Copresheaf& z) {
    for (const auto& [w, f] : d.legs())
      if (truncated_div(w, hom_copresheaves(f, z)) < 1.0 - tol) return false;
    return functoriality_entry(cat, z).max_violation <= tol;
  };
  return detail::grid_search(cat, grid_step, false, tol, local, whole);
}

/// Internal hom [G, H](c) = hom(h^c x G, H)
///                        = min over d of [min(hom(c,d), G d), H d].
/// Terms with hom(c,d) = 0 are [0, -] = 1, so only the up-set of c is scanned.
template <EnrichedCategory C>
Copresheaf internal_hom(const C& cat, const Copresheaf& g, const Copresheaf& h) {
  detail::require_over(cat, g);
  detail::require_over(cat, h);
  Copresheaf out(cat.size(), 1.0);
  for (ObjectId c = 0; c < cat.size(); ++c) {
    double m = 1.0;
    for (ObjectId d : cat.up_set(c)) {
      m = std::min(m, truncated_div(std::min(cat.hom(c, d), g[d]), h[d]));
      if (m <= 0.0) break;
    }
    out[c] = m;
  }
  return out;
}

/// Yoneda inequality hom(y, x) <= hom(h^x, h^y) over object pairs. Also
/// reports the largest gap hom(h^x, h^y) - hom(y, x) among pairs with
/// nonzero left side as a diagnostic.
template <EnrichedCategory C>
VerificationReport yoneda_check(const C& cat, double tol, const Sampling& sampling = {}) {
  VerificationReport r;
  r.tolerance = tol;
  r.seed = sampling.seed;
  LawEntry& e = r.add("yoneda_inequality");
  double gap = 0.0;
  auto check = [&](ObjectId x, ObjectId y) {
    double lhs = cat.hom(y, x);
    double rhs = hom_representables(cat, x, y);
    double v = lhs - rhs;
    e.record(v > 0.0 ? v : 0.0, {cat.label(x), cat.label(y)});
    if (lhs > 0.0) gap = std::max(gap, rhs - lhs);
  };
  const std::size_t n = cat.size();
  if (n <= sampling.exhaustive_limit) {
    for (ObjectId x = 0; x < n; ++x)
      for (ObjectId y = 0; y < n; ++y) check(x, y);
  } else if (n > 0) {
    CounterRng rng(sampling.seed, 0x59);
    for (std::size_t s = 0; s < sampling.samples; ++s) {
      ObjectId y = rng.below(n);
      auto ups = cat.up_set(y);
      ObjectId x = (ups.empty() || rng.bernoulli(0.2)) ? rng.below(n) : ups[rng.below(ups.size())];
      check(x, y);
    }
  }
  r.diagnostics.emplace_back("yoneda_equality_gap", gap);
  return r;
}

// ---------------------------------------------------------------------------
// Export

/// One line per object in object order: "token-sequence<TAB>value".
template <EnrichedCategory C>
void write_copresheaf_tsv(std::ostream& os, const C& cat, const Copresheaf& f) {
  detail::require_over(cat, f);
  for (ObjectId c = 0; c < cat.size(); ++c) os << cat.label(c) << '\t' << format_value(f[c]) << '\n';
}

/// Object ids ranked by value descending, ties by object order; at most `k`.
inline std::vector<ObjectId> rank_by_value(const Copresheaf& f, std::size_t k) {
  std::vector<ObjectId> ids(f.size());
  std::iota(ids.begin(), ids.end(), ObjectId{0});
  auto cmp = [&](ObjectId a, ObjectId b) { return f[a] != f[b] ? f[a] > f[b] : a < b; };
  k = std::min(k, ids.size());
  std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(k), ids.end(), cmp);
  ids.resize(k);
  return ids;
}

}  // namespace enriched
