#pragma once

// Span-occurrence statistics over a tokenized corpus, and the JSON model file
// that stores them. Counts are raw integers; everything downstream uses
// ratios of counts, so no normalization happens here.

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "enriched/text.hpp"

namespace enriched {

inline constexpr int kModelVersion = 1;

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed model file. `line` is 1-based, 0 when unknown.
class ModelParseError : public ModelError {
 public:
  ModelParseError(std::size_t line, const std::string& what)
      : ModelError(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ModelVersionError : public ModelError {
 public:
  explicit ModelVersionError(long long found)
      : ModelError("unsupported model version " + std::to_string(found) + " (expected " +
                   std::to_string(kModelVersion) + ")"),
        found_(found) {}
  long long found() const noexcept { return found_; }

 private:
  long long found_;
};

/// A well-formed file whose counts break a CorpusStats invariant.
/// `witness` names the offending spans.
class ModelInvariantError : public ModelParseError {
 public:
  ModelInvariantError(std::size_t line, const std::string& what, std::vector<Text> witness)
      : ModelParseError(line, what), witness_(std::move(witness)) {}
  const std::vector<Text>& witness() const noexcept { return witness_; }

 private:
  std::vector<Text> witness_;
};

struct InvariantViolation {
  std::string message;
  std::vector<Text> witness;
};

class CorpusStats {
 public:
  using Counts = std::map<Text, std::uint64_t>;

  explicit CorpusStats(std::size_t max_span = 1, bool lowercase = true)
      : max_span_(max_span), lowercase_(lowercase) {
    if (max_span == 0) throw std::invalid_argument("max_span must be >= 1");
  }

  std::size_t max_span() const noexcept { return max_span_; }
  std::uint64_t total_tokens() const noexcept { return total_tokens_; }
  bool lowercase() const noexcept { return lowercase_; }
  const Counts& counts() const noexcept { return counts_; }
  std::size_t size() const noexcept { return counts_.size(); }
  bool empty() const noexcept { return counts_.empty(); }

  /// The empirical measure: occurrences of `x`, 0 when absent.
  std::uint64_t measure(const Text& x) const {
    auto it = counts_.find(x);
    return it == counts_.end() ? 0 : it->second;
  }

  std::set<std::string> vocab() const {
    std::set<std::string> out;
    for (const auto& [t, c] : counts_)
      if (t.size() == 1) out.insert(t[0]);
    return out;
  }

  /// Pointwise addition of counts and token totals. Associative and commutative.
  CorpusStats& merge(const CorpusStats& other) {
    if (other.max_span_ != max_span_)
      throw std::invalid_argument("cannot merge stats with different max_span");
    for (const auto& [t, c] : other.counts_) counts_[t] += c;
    total_tokens_ += other.total_tokens_;
    return *this;
  }

  /// Drops spans seen fewer than `min_count` times. Monotone counts mean every
  /// subtext of a kept span is kept too.
  CorpusStats pruned(std::uint64_t min_count) const {
    if (min_count == 0) throw std::invalid_argument("min_count must be >= 1");
    CorpusStats out(max_span_, lowercase_);
    out.total_tokens_ = total_tokens_;
    for (const auto& [t, c] : counts_)
      if (c >= min_count) out.counts_.emplace_hint(out.counts_.end(), t, c);
    return out;
  }

  /// Raw insertion; used by the loader and by tests that build stats by hand.
  void set_count(Text t, std::uint64_t c) { counts_[std::move(t)] = c; }
  void set_total_tokens(std::uint64_t n) { total_tokens_ = n; }

  /// First violated invariant in key order, if any.
  std::optional<InvariantViolation> find_violation() const {
    for (const auto& [y, cy] : counts_) {
      if (y.empty() || y.size() > max_span_)
        return InvariantViolation{"span length " + std::to_string(y.size()) +
                                      " outside [1, max_span=" + std::to_string(max_span_) + "]",
                                  {y}};
      if (cy == 0) return InvariantViolation{"span \"" + y.str() + "\" has count 0", {y}};
      for (std::size_t len = 1; len < y.size(); ++len) {
        for (std::size_t start = 0; start + len <= y.size(); ++start) {
          Text x = y.slice(start, len);
          auto it = counts_.find(x);
          if (it == counts_.end()) {
            if (len == 1)
              return InvariantViolation{
                  "token \"" + x.str() + "\" of span \"" + y.str() + "\" is not itself a span",
                  {y, x}};
            continue;
          }
          if (it->second < cy)
            return InvariantViolation{"monotonicity violated: \"" + y.str() + "\" has count " +
                                          std::to_string(cy) + " > count " +
                                          std::to_string(it->second) + " of its subtext \"" +
                                          x.str() + "\"",
                                      {y, x}};
        }
      }
    }
    return std::nullopt;
  }

  friend bool operator==(const CorpusStats&, const CorpusStats&) = default;

 private:
  std::size_t max_span_;
  std::uint64_t total_tokens_ = 0;
  bool lowercase_;
  Counts counts_;
};

/// Counts every contiguous window of length 1..max_span in `doc`.
inline CorpusStats count_spans(const Text& doc, std::size_t max_span, bool lowercase = true) {
  CorpusStats stats(max_span, lowercase);
  std::unordered_map<Text, std::uint64_t, TextHash> local;
  const std::size_t n = doc.size();
  for (std::size_t start = 0; start < n; ++start) {
    std::vector<std::string> window;
    for (std::size_t len = 1; len <= max_span && start + len <= n; ++len) {
      window.push_back(doc[start + len - 1]);
      ++local[Text(window)];
    }
  }
  for (auto& [t, c] : local) stats.set_count(t, c);
  stats.set_total_tokens(n);
  return stats;
}

// ---------------------------------------------------------------------------
// Model file

namespace detail {

inline std::string json_string(const std::string& s) {
  return nlohmann::json(s).dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

// 1-based line of each `"t":` key, in file order. Span entries are the only
// objects carrying that key, so the i-th hit locates the i-th span.
inline std::vector<std::size_t> span_lines(const std::string& text) {
  std::vector<std::size_t> lines;
  std::size_t line = 1;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      continue;
    }
    if (text.compare(i, 3, "\"t\"") == 0) {
      std::size_t j = i + 3;
      while (j < text.size() && (text[j] == ' ' || text[j] == '\t' || text[j] == '\r')) ++j;
      if (j < text.size() && text[j] == ':') lines.push_back(line);
    }
  }
  return lines;
}

inline std::size_t line_of_offset(const std::string& text, std::size_t offset) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

}  // namespace detail

inline void write_model(std::ostream& os, const CorpusStats& stats) {
  os << "{\n"
     << "  \"version\": " << kModelVersion << ",\n"
     << "  \"max_span\": " << stats.max_span() << ",\n"
     << "  \"total_tokens\": " << stats.total_tokens() << ",\n"
     << "  \"lowercase\": " << (stats.lowercase() ? "true" : "false") << ",\n"
     << "  \"spans\": [";
  bool first = true;
  for (const auto& [t, c] : stats.counts()) {
    os << (first ? "\n" : ",\n") << "    {\"t\": [";
    for (std::size_t i = 0; i < t.size(); ++i) os << (i ? ", " : "") << detail::json_string(t[i]);
    os << "], \"c\": " << c << "}";
    first = false;
  }
  os << (first ? "]\n" : "\n  ]\n") << "}\n";
}

inline std::string model_to_string(const CorpusStats& stats) {
  std::ostringstream os;
  write_model(os, stats);
  return os.str();
}

inline CorpusStats parse_model(const std::string& text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ModelParseError(detail::line_of_offset(text, e.byte ? e.byte - 1 : 0),
                          std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ModelParseError(1, "top level must be a JSON object");

  auto require_uint = [&](const char* key) -> std::uint64_t {
    auto it = doc.find(key);
    if (it == doc.end()) throw ModelParseError(0, std::string("missing field \"") + key + "\"");
    if (!it->is_number_unsigned())
      throw ModelParseError(0, std::string("field \"") + key + "\" must be a non-negative integer");
    return it->get<std::uint64_t>();
  };

  auto version = doc.find("version");
  if (version == doc.end()) throw ModelParseError(0, "missing field \"version\"");
  if (!version->is_number_integer()) throw ModelParseError(0, "field \"version\" must be an integer");
  if (version->get<long long>() != kModelVersion) throw ModelVersionError(version->get<long long>());

  std::uint64_t max_span = require_uint("max_span");
  if (max_span == 0) throw ModelParseError(0, "field \"max_span\" must be >= 1");
  std::uint64_t total = require_uint("total_tokens");
  bool lowercase = true;
  if (auto it = doc.find("lowercase"); it != doc.end()) {
    if (!it->is_boolean()) throw ModelParseError(0, "field \"lowercase\" must be a boolean");
    lowercase = it->get<bool>();
  }

  auto spans = doc.find("spans");
  if (spans == doc.end() || !spans->is_array())
    throw ModelParseError(0, "field \"spans\" must be an array");

  const auto lines = detail::span_lines(text);
  auto line_of = [&](std::size_t i) -> std::size_t { return i < lines.size() ? lines[i] : 0; };

  CorpusStats stats(static_cast<std::size_t>(max_span), lowercase);
  stats.set_total_tokens(total);
  std::map<Text, std::size_t> line_by_text;
  for (std::size_t i = 0; i < spans->size(); ++i) {
    const json& entry = (*spans)[i];
    auto bad = [&](const std::string& why) {
      return ModelParseError(line_of(i), "span #" + std::to_string(i) + ": " + why);
    };
    if (!entry.is_object()) throw bad("must be an object");
    auto t = entry.find("t");
    auto c = entry.find("c");
    if (t == entry.end() || !t->is_array() || t->empty()) throw bad("\"t\" must be a non-empty array");
    if (c == entry.end() || !c->is_number_unsigned()) throw bad("\"c\" must be a positive integer");
    std::vector<std::string> tokens;
    for (const auto& tok : *t) {
      if (!tok.is_string()) throw bad("tokens must be strings");
      auto s = tok.get<std::string>();
      if (s.empty() || tokenize(s, false).size() != 1 || tokenize(s, false)[0].size() != s.size())
        throw bad("token \"" + s + "\" is not a valid token");
      tokens.push_back(std::move(s));
    }
    Text text_key(std::move(tokens));
    if (line_by_text.count(text_key)) throw bad("duplicate span \"" + text_key.str() + "\"");
    line_by_text.emplace(text_key, line_of(i));
    stats.set_count(std::move(text_key), c->get<std::uint64_t>());
  }

  if (auto v = stats.find_violation()) {
    std::size_t line = v->witness.empty() ? 0 : line_by_text[v->witness.front()];
    throw ModelInvariantError(line, v->message, v->witness);
  }
  return stats;
}

inline void save_model(const std::string& path, const CorpusStats& stats) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_model(out, stats);
  if (!out) throw std::runtime_error("failed writing " + path);
}

inline CorpusStats load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelError("cannot open model file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

}  // namespace enriched
