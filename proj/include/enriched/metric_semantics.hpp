#pragma once

// The [0,inf] view: d(x,y) = -ln hom(x,y) makes the syntax category a
// generalized metric space, and [0,inf]-copresheaves form a module over the
// tropical semiring ([0,inf], min, +).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "enriched/category.hpp"
#include "enriched/quantale.hpp"
#include "enriched/report.hpp"
#include "enriched/semantics.hpp"

namespace enriched {

/// A total map object id -> [0,inf], with +inf stored as a real infinity.
class MetricCopresheaf {
 public:
  MetricCopresheaf() = default;
  explicit MetricCopresheaf(std::size_t n, double fill = kInfinity) : values_(n, fill) {}
  explicit MetricCopresheaf(std::vector<double> values) : values_(std::move(values)) {
    for (double v : values_)
      if (!(v >= 0.0)) throw std::invalid_argument("metric copresheaf value must be in [0,inf]");
  }

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](ObjectId c) const { return values_[c]; }
  double& operator[](ObjectId c) { return values_[c]; }
  const std::vector<double>& values() const noexcept { return values_; }

  friend bool operator==(const MetricCopresheaf&, const MetricCopresheaf&) = default;

 private:
  std::vector<double> values_;
};

/// Element of the tropical semiring acting on metric copresheaves.
struct TropicalScalar {
  double value = 0.0;

  explicit TropicalScalar(double v) : value(v) {
    if (!(v >= 0.0)) throw std::invalid_argument("tropical scalar must be in [0,inf]");
  }
};

inline MetricCopresheaf to_metric(const Copresheaf& f) {
  MetricCopresheaf out(f.size());
  for (ObjectId c = 0; c < f.size(); ++c) out[c] = neg_log(f[c]);
  return out;
}

inline Copresheaf to_unit(const MetricCopresheaf& f) {
  Copresheaf out(f.size());
  for (ObjectId c = 0; c < f.size(); ++c) out[c] = neg_exp(f[c]);
  return out;
}

/// d(x, -).
template <EnrichedCategory C>
MetricCopresheaf metric_representable(const C& cat, ObjectId x) {
  if (x >= cat.size()) throw std::out_of_range("object id out of range");
  MetricCopresheaf out(cat.size(), kInfinity);
  for (ObjectId c : cat.up_set(x)) out[c] = neg_log(cat.hom(x, c));
  return out;
}

namespace detail {
inline void require_same_size(const MetricCopresheaf& f, const MetricCopresheaf& g) {
  if (f.size() != g.size()) throw std::invalid_argument("copresheaves over different categories");
}
}  // namespace detail

/// sup over objects of max{g x - f x, 0}.
inline double metric_hom_copresheaves(const MetricCopresheaf& f, const MetricCopresheaf& g) {
  detail::require_same_size(f, g);
  double m = 0.0;
  for (ObjectId c = 0; c < f.size() && !std::isinf(m); ++c) m = std::max(m, truncated_sub(f[c], g[c]));
  return m;
}

/// Pointwise max: the product, image of the [0,1] product under -ln.
inline MetricCopresheaf metric_product(const MetricCopresheaf& f, const MetricCopresheaf& g) {
  detail::require_same_size(f, g);
  MetricCopresheaf out(f.size());
  for (ObjectId c = 0; c < f.size(); ++c) out[c] = std::max(f[c], g[c]);
  return out;
}

/// Pointwise min: the coproduct.
inline MetricCopresheaf metric_coproduct(const MetricCopresheaf& f, const MetricCopresheaf& g) {
  detail::require_same_size(f, g);
  MetricCopresheaf out(f.size());
  for (ObjectId c = 0; c < f.size(); ++c) out[c] = std::min(f[c], g[c]);
  return out;
}

/// f (+) g, tropical addition. Identical to metric_coproduct.
inline MetricCopresheaf tropical_add(const MetricCopresheaf& f, const MetricCopresheaf& g) {
  return metric_coproduct(f, g);
}

/// (s (.) f)(x) = f(x) + s.
inline MetricCopresheaf tropical_scale(TropicalScalar s, const MetricCopresheaf& f) {
  MetricCopresheaf out(f.size());
  for (ObjectId c = 0; c < f.size(); ++c) out[c] = tropical_mul(s.value, f[c]);
  return out;
}

/// d(x,y) >= max{f y - f x, 0} for all pairs, exhaustively when small and
/// over finite-distance pairs otherwise.
template <EnrichedCategory C>
LawEntry metric_functoriality_entry(const C& cat, const MetricCopresheaf& f,
                                    std::size_t exhaustive_limit = 64,
                                    std::string law = "metric_copresheaf_functoriality") {
  if (f.size() != cat.size()) throw std::invalid_argument("copresheaf size does not match category");
  LawEntry e{std::move(law)};
  auto check = [&](ObjectId x, ObjectId y) {
    double need = truncated_sub(f[x], f[y]);
    double v = truncated_sub(neg_log(cat.hom(x, y)), need);
    e.record(v, {cat.label(x), cat.label(y)});
  };
  const std::size_t n = cat.size();
  if (n <= exhaustive_limit) {
    for (ObjectId x = 0; x < n; ++x)
      for (ObjectId y = 0; y < n; ++y) check(x, y);
  } else {
    for (ObjectId x = 0; x < n; ++x)
      for (ObjectId y : cat.up_set(x)) check(x, y);
  }
  return e;
}

enum class NearMode { forward, backward, symmetric };

inline NearMode parse_near_mode(const std::string& s) {
  if (s == "forward") return NearMode::forward;
  if (s == "backward") return NearMode::backward;
  if (s == "symmetric") return NearMode::symmetric;
  throw std::invalid_argument("unknown mode \"" + s + "\" (forward|backward|symmetric)");
}

struct Neighbor {
  ObjectId id;
  double distance;
  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Ranks every object x by its copresheaf distance to F:
///   forward   hom(d(x,-), -ln F)
///   backward  hom(-ln F, d(x,-))
///   symmetric the max of the two.
/// Returns the k closest, ties broken by object order.
template <EnrichedCategory C>
std::vector<Neighbor> nearest_meanings(const C& cat, const Copresheaf& f, std::size_t k,
                                       NearMode mode) {
  if (k == 0) throw std::invalid_argument("k must be >= 1");
  if (f.size() != cat.size()) throw std::invalid_argument("copresheaf size does not match category");
  const std::size_t n = cat.size();
  const MetricCopresheaf g = to_metric(f);
  std::size_t support = 0;
  for (ObjectId c = 0; c < n; ++c)
    if (!std::isinf(g[c])) ++support;

  std::vector<Neighbor> all;
  all.reserve(n);
  for (ObjectId x = 0; x < n; ++x) {
    // Outside the up-set of x, d(x,c) = inf: those terms contribute 0 forward,
    // and inf backward whenever F(c) > 0.
    double fwd = 0.0, bwd = 0.0;
    std::size_t support_inside = 0;
    for (ObjectId c : cat.up_set(x)) {
      double dxc = neg_log(cat.hom(x, c));
      fwd = std::max(fwd, truncated_sub(dxc, g[c]));
      bwd = std::max(bwd, truncated_sub(g[c], dxc));
      if (!std::isinf(g[c])) ++support_inside;
    }
    if (support_inside < support) bwd = kInfinity;
    double dist = mode == NearMode::forward ? fwd : mode == NearMode::backward ? bwd : std::max(fwd, bwd);
    all.push_back({x, dist});
  }
  auto cmp = [](const Neighbor& a, const Neighbor& b) {
    return a.distance != b.distance ? a.distance < b.distance : a.id < b.id;
  };
  k = std::min(k, n);
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end(), cmp);
  all.resize(k);
  return all;
}

/// "rank<TAB>token-sequence<TAB>distance", ranks from 1.
template <EnrichedCategory C>
void write_ranking_tsv(std::ostream& os, const C& cat, const std::vector<Neighbor>& ranking) {
  for (std::size_t i = 0; i < ranking.size(); ++i)
    os << (i + 1) << '\t' << cat.label(ranking[i].id) << '\t' << format_value(ranking[i].distance)
       << '\n';
}

}  // namespace enriched
