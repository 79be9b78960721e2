#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace enriched {

/// A finite sequence of tokens. Ordering is lexicographic over tokens, with
/// tokens compared bytewise.
class Text {
 public:
  Text() = default;
  explicit Text(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {}
  Text(std::initializer_list<std::string> tokens) : tokens_(tokens) {}

  /// Splits on single spaces without any normalization; for literals in
  /// code and tests. User input goes through tokenize().
  static Text from_words(std::string_view words) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < words.size()) {
      while (i < words.size() && words[i] == ' ') ++i;
      std::size_t j = i;
      while (j < words.size() && words[j] != ' ') ++j;
      if (j > i) out.emplace_back(words.substr(i, j - i));
      i = j;
    }
    return Text(std::move(out));
  }

  const std::vector<std::string>& tokens() const noexcept { return tokens_; }
  std::size_t size() const noexcept { return tokens_.size(); }
  bool empty() const noexcept { return tokens_.empty(); }
  const std::string& operator[](std::size_t i) const { return tokens_[i]; }

  /// Contiguous slice [start, start + length).
  Text slice(std::size_t start, std::size_t length) const {
    auto first = tokens_.begin() + static_cast<std::ptrdiff_t>(start);
    return Text(std::vector<std::string>(first, first + static_cast<std::ptrdiff_t>(length)));
  }

  std::string str() const {
    std::string out;
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
      if (i) out.push_back(' ');
      out += tokens_[i];
    }
    return out;
  }

  friend bool operator==(const Text&, const Text&) = default;
  friend std::strong_ordering operator<=>(const Text& a, const Text& b) {
    return a.tokens_ <=> b.tokens_;
  }

 private:
  std::vector<std::string> tokens_;
};

struct TextHash {
  std::size_t operator()(const Text& t) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (const auto& tok : t.tokens()) {
      for (unsigned char ch : tok) h = (h ^ ch) * 1099511628211ull;
      h = (h ^ 0x1f) * 1099511628211ull;  // token separator
    }
    return static_cast<std::size_t>(h);
  }
};

/// True iff `needle` occurs as a contiguous subsequence of `haystack`.
/// The empty text is contained in everything.
inline bool is_subtext(const Text& needle, const Text& haystack) {
  const auto& n = needle.tokens();
  const auto& h = haystack.tokens();
  if (n.size() > h.size()) return false;
  return std::search(h.begin(), h.end(), n.begin(), n.end()) != h.end();
}

namespace detail {

// Length in bytes of a Unicode whitespace code point starting at s[i], or 0.
inline std::size_t whitespace_length(std::string_view s, std::size_t i) {
  const auto byte = [&](std::size_t k) -> unsigned {
    return k < s.size() ? static_cast<unsigned char>(s[k]) : 0u;
  };
  unsigned c0 = byte(i);
  if (c0 == ' ' || (c0 >= 0x09 && c0 <= 0x0d) || c0 == 0x1c || c0 == 0x1d || c0 == 0x1e ||
      c0 == 0x1f)
    return 1;
  if (c0 == 0xc2) {
    unsigned c1 = byte(i + 1);
    if (c1 == 0x85 || c1 == 0xa0) return 2;  // NEL, NBSP
    return 0;
  }
  if (c0 == 0xe1 && byte(i + 1) == 0x9a && byte(i + 2) == 0x80) return 3;  // U+1680
  if (c0 == 0xe2) {
    unsigned c1 = byte(i + 1), c2 = byte(i + 2);
    if (c1 == 0x80 && ((c2 >= 0x80 && c2 <= 0x8a) || c2 == 0xa8 || c2 == 0xa9 || c2 == 0xaf))
      return 3;  // U+2000..U+200A, U+2028, U+2029, U+202F
    if (c1 == 0x81 && c2 == 0x9f) return 3;  // U+205F
    return 0;
  }
  if (c0 == 0xe3 && byte(i + 1) == 0x80 && byte(i + 2) == 0x80) return 3;  // U+3000
  return 0;
}

inline bool is_ascii_punct(char c) {
  unsigned u = static_cast<unsigned char>(c);
  return (u >= 0x21 && u <= 0x2f) || (u >= 0x3a && u <= 0x40) || (u >= 0x5b && u <= 0x60) ||
         (u >= 0x7b && u <= 0x7e);
}

}  // namespace detail

/// Whitespace split, ASCII punctuation trimmed from both ends of each token,
/// empty tokens dropped, ASCII letters lowercased when `lowercase` is set.
inline Text tokenize(std::string_view raw, bool lowercase = true) {
  std::vector<std::string> out;
  std::string current;
  auto flush = [&] {
    std::size_t b = 0, e = current.size();
    while (b < e && detail::is_ascii_punct(current[b])) ++b;
    while (e > b && detail::is_ascii_punct(current[e - 1])) --e;
    if (e > b) {
      std::string tok = current.substr(b, e - b);
      if (lowercase)
        for (char& ch : tok)
          if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
      out.push_back(std::move(tok));
    }
    current.clear();
  };
  for (std::size_t i = 0; i < raw.size();) {
    if (std::size_t ws = detail::whitespace_length(raw, i)) {
      flush();
      i += ws;
    } else {
      current.push_back(raw[i++]);
    }
  }
  flush();
  return Text(std::move(out));
}

}  // namespace enriched
