#pragma once

// Shared test data and brute-force oracles. The oracles work on raw token
// vectors and strings, never through the library's own index structures.

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "enriched/enriched.hpp"

namespace fixtures {

using Tokens = std::vector<std::string>;

inline const Tokens& toy_doc() {
  static const Tokens doc{"a", "b", "a", "c"};
  return doc;
}

inline enriched::SyntaxCategory toy_category(std::size_t max_span = 4) {
  return enriched::SyntaxCategory(
      enriched::count_spans(enriched::Text(toy_doc()), max_span));
}

inline enriched::Text T(const char* words) { return enriched::Text::from_words(words); }

/// Occurrences of `needle` in `doc` by direct position scan.
inline std::uint64_t occurrences(const Tokens& doc, const Tokens& needle) {
  if (needle.empty() || needle.size() > doc.size()) return 0;
  std::uint64_t n = 0;
  for (std::size_t i = 0; i + needle.size() <= doc.size(); ++i) {
    bool match = true;
    for (std::size_t j = 0; j < needle.size() && match; ++j) match = doc[i + j] == needle[j];
    n += match;
  }
  return n;
}

/// Every window of length 1..max_span keyed by its space-joined string.
inline std::map<std::string, std::uint64_t> window_oracle(const Tokens& doc, std::size_t max_span) {
  std::map<std::string, std::uint64_t> out;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    std::string key;
    for (std::size_t len = 1; len <= max_span && i + len <= doc.size(); ++len) {
      if (len > 1) key += ' ';
      key += doc[i + len - 1];
      ++out[key];
    }
  }
  return out;
}

/// Substring containment on space-delimited strings, padded so that "a"
/// does not match inside "ab".
inline bool contains_words(const std::string& hay, const std::string& needle) {
  return (" " + hay + " ").find(" " + needle + " ") != std::string::npos;
}

/// hom(x, y) recomputed from the raw document.
inline double hom_oracle(const Tokens& doc, const std::string& x, const std::string& y) {
  if (x == y) return 1.0;
  if (!contains_words(y, x)) return 0.0;
  auto split = [](const std::string& s) { return enriched::Text::from_words(s).tokens(); };
  return static_cast<double>(occurrences(doc, split(y))) /
         static_cast<double>(occurrences(doc, split(x)));
}

inline Tokens random_doc(enriched::CounterRng& rng, std::size_t length, std::size_t vocab) {
  Tokens doc;
  for (std::size_t i = 0; i < length; ++i) doc.push_back("w" + std::to_string(rng.below(vocab)));
  return doc;
}

}  // namespace fixtures
