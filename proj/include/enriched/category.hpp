#pragma once

// [0,1]-enriched categories over a finite object set.
//
// Two models of the same concept live here: SyntaxCategory computes homs on
// demand from span counts, HomTable stores a dense table (random categories,
// planted faults). Everything in semantics.hpp and verify.hpp is written
// against the concepts, not the classes.

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "enriched/corpus.hpp"
#include "enriched/quantale.hpp"
#include "enriched/text.hpp"

namespace enriched {

using ObjectId = std::size_t;

/// Objects 0..size()-1, hom values in [0,1], and for each object the ids with
/// a nonzero hom out of it (ascending, including the object itself when
/// hom(x,x) > 0). Operations use up_set() to skip pairs whose hom is 0.
template <class C>
concept EnrichedCategory = requires(const C& c, ObjectId i) {
  { c.size() } -> std::convertible_to<std::size_t>;
  { c.hom(i, i) } -> std::convertible_to<double>;
  { c.up_set(i) } -> std::convertible_to<std::span<const ObjectId>>;
  { c.label(i) } -> std::convertible_to<std::string>;
};

/// An enriched category that also carries the preorder and the measure the
/// homs were derived from, so checks can recompute expected values along an
/// independent route.
template <class C>
concept MeasuredCategory = EnrichedCategory<C> && requires(const C& c, ObjectId i) {
  { c.leq(i, i) } -> std::convertible_to<bool>;
  { c.measure(i) } -> std::convertible_to<double>;
};

class UnknownObjectError : public std::out_of_range {
 public:
  explicit UnknownObjectError(const Text& t)
      : std::out_of_range("unknown object \"" + t.str() + "\""), text_(t) {}
  const Text& text() const noexcept { return text_; }

 private:
  Text text_;
};

/// The category of texts: objects are the spans of a CorpusStats, and
/// hom(x, y) = count(y) / count(x) when x is a subtext of y, else 0.
class SyntaxCategory {
 public:
  explicit SyntaxCategory(CorpusStats stats) : stats_(std::move(stats)) {
    objects_.reserve(stats_.size());
    counts_.reserve(stats_.size());
    for (const auto& [t, c] : stats_.counts()) {
      index_.emplace(t, objects_.size());
      objects_.push_back(t);
      counts_.push_back(c);
    }
    // Every subtext of a span of length <= max_span is short enough to be a
    // key, so enumerating slices finds every object below y.
    up_sets_.assign(objects_.size(), {});
    for (ObjectId y = 0; y < objects_.size(); ++y) {
      const Text& t = objects_[y];
      for (std::size_t len = 1; len <= t.size(); ++len)
        for (std::size_t start = 0; start + len <= t.size(); ++start)
          if (auto it = index_.find(t.slice(start, len)); it != index_.end())
            up_sets_[it->second].push_back(y);
    }
    for (auto& ups : up_sets_) {
      std::sort(ups.begin(), ups.end());
      ups.erase(std::unique(ups.begin(), ups.end()), ups.end());
    }
  }

  const CorpusStats& stats() const noexcept { return stats_; }
  std::size_t size() const noexcept { return objects_.size(); }
  const std::vector<Text>& objects() const noexcept { return objects_; }
  const Text& object(ObjectId i) const { return objects_.at(i); }
  std::string label(ObjectId i) const { return objects_.at(i).str(); }

  bool contains(const Text& t) const { return index_.count(t) != 0; }
  ObjectId id(const Text& t) const {
    auto it = index_.find(t);
    if (it == index_.end()) throw UnknownObjectError(t);
    return it->second;
  }

  double measure(ObjectId i) const { return static_cast<double>(counts_[i]); }
  std::uint64_t count(ObjectId i) const { return counts_[i]; }
  bool leq(ObjectId x, ObjectId y) const { return is_subtext(objects_[x], objects_[y]); }
  std::span<const ObjectId> up_set(ObjectId x) const { return up_sets_[x]; }

  double hom(ObjectId x, ObjectId y) const {
    if (x == y) return 1.0;
    if (!leq(x, y)) return 0.0;
    return static_cast<double>(counts_[y]) / static_cast<double>(counts_[x]);
  }
  double hom(const Text& x, const Text& y) const { return hom(id(x), id(y)); }

  /// -ln hom(x, y): a generalized (asymmetric, possibly infinite) distance.
  double metric_hom(ObjectId x, ObjectId y) const { return neg_log(hom(x, y)); }
  double metric_hom(const Text& x, const Text& y) const { return metric_hom(id(x), id(y)); }

 private:
  CorpusStats stats_;
  std::vector<Text> objects_;
  std::vector<std::uint64_t> counts_;
  std::map<Text, ObjectId> index_;
  std::vector<std::vector<ObjectId>> up_sets_;
};

/// Dense hom table with the preorder and measure it came from. Entries can be
/// overwritten, which is how planted faults are introduced.
class HomTable {
 public:
  HomTable() = default;

  HomTable(std::vector<std::string> labels, std::vector<double> measures,
           std::vector<char> order)
      : n_(labels.size()),
        labels_(std::move(labels)),
        measures_(std::move(measures)),
        order_(std::move(order)),
        hom_(n_ * n_, 0.0),
        up_sets_(n_) {
    if (measures_.size() != n_ || order_.size() != n_ * n_)
      throw std::invalid_argument("HomTable: inconsistent sizes");
    for (ObjectId x = 0; x < n_; ++x)
      for (ObjectId y = 0; y < n_; ++y)
        if (x == y)
          hom_[x * n_ + y] = 1.0;
        else if (order_[x * n_ + y])
          hom_[x * n_ + y] = measures_[y] / measures_[x];
    for (ObjectId x = 0; x < n_; ++x) rebuild_row(x);
  }

  /// Full subcategory on `ids`, copying hom values as they are (including
  /// any planted faults).
  template <MeasuredCategory C>
  static HomTable restrict_to(const C& cat, std::span<const ObjectId> ids) {
    const std::size_t n = ids.size();
    std::vector<std::string> labels(n);
    std::vector<double> measures(n);
    std::vector<char> order(n * n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      labels[i] = cat.label(ids[i]);
      measures[i] = cat.measure(ids[i]);
      for (std::size_t j = 0; j < n; ++j) order[i * n + j] = cat.leq(ids[i], ids[j]) ? 1 : 0;
    }
    HomTable t(std::move(labels), std::move(measures), std::move(order));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) t.hom_[i * n + j] = cat.hom(ids[i], ids[j]);
    for (ObjectId x = 0; x < n; ++x) t.rebuild_row(x);
    return t;
  }

  template <MeasuredCategory C>
  static HomTable from(const C& cat) {
    const std::size_t n = cat.size();
    std::vector<std::string> labels(n);
    std::vector<double> measures(n);
    std::vector<char> order(n * n, 0);
    for (ObjectId x = 0; x < n; ++x) {
      labels[x] = cat.label(x);
      measures[x] = cat.measure(x);
      for (ObjectId y : cat.up_set(x)) order[x * n + y] = cat.leq(x, y) ? 1 : 0;
      order[x * n + x] = 1;
    }
    HomTable t(std::move(labels), std::move(measures), std::move(order));
    for (ObjectId x = 0; x < n; ++x)
      for (ObjectId y = 0; y < n; ++y) t.hom_[x * n + y] = cat.hom(x, y);
    for (ObjectId x = 0; x < n; ++x) t.rebuild_row(x);
    return t;
  }

  std::size_t size() const noexcept { return n_; }
  std::string label(ObjectId i) const { return labels_.at(i); }
  double measure(ObjectId i) const { return measures_[i]; }
  bool leq(ObjectId x, ObjectId y) const { return order_[x * n_ + y] != 0; }
  double hom(ObjectId x, ObjectId y) const { return hom_[x * n_ + y]; }
  std::span<const ObjectId> up_set(ObjectId x) const { return up_sets_[x]; }
  double metric_hom(ObjectId x, ObjectId y) const { return neg_log(hom(x, y)); }

  ObjectId id(const std::string& label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) throw UnknownObjectError(Text::from_words(label));
    return static_cast<ObjectId>(it - labels_.begin());
  }

  void set_hom(ObjectId x, ObjectId y, double value) {
    hom_.at(x * n_ + y) = value;
    rebuild_row(x);
  }

  friend bool operator==(const HomTable&, const HomTable&) = default;

 private:
  void rebuild_row(ObjectId x) {
    auto& row = up_sets_[x];
    row.clear();
    for (ObjectId y = 0; y < n_; ++y)
      if (hom_[x * n_ + y] > 0.0) row.push_back(y);
  }

  std::size_t n_ = 0;
  std::vector<std::string> labels_;
  std::vector<double> measures_;
  std::vector<char> order_;
  std::vector<double> hom_;
  std::vector<std::vector<ObjectId>> up_sets_;
};

static_assert(MeasuredCategory<SyntaxCategory>);
static_assert(MeasuredCategory<HomTable>);

}  // namespace enriched
