#pragma once

// Khmer character classes, normalization and grapheme-cluster segmentation.
//
// A Khmer grapheme cluster follows
//
//   (consonant | independent-vowel) (COENG (consonant | independent-vowel))*
//   register-shifter? dependent-vowel-sign? other-sign*
//
// and is the symbol unit for every grapheme edit distance in the library.
// Anything that does not fit the grammar falls back to single code point
// clusters of kind `other`.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "khspell/utf8.hpp"

namespace khspell {

enum class CharClass : std::uint8_t {
  consonant,
  independent_vowel,
  dependent_vowel_sign,
  coeng,
  register_shifter,
  other_sign,
  digit,
  symbol,
  non_khmer,
};

inline constexpr int kCharClassTableVersion = 1;
inline constexpr char32_t kCoeng = 0x17D2;

inline constexpr std::string_view to_string(CharClass c) {
  switch (c) {
    case CharClass::consonant: return "consonant";
    case CharClass::independent_vowel: return "independent-vowel";
    case CharClass::dependent_vowel_sign: return "dependent-vowel-sign";
    case CharClass::coeng: return "coeng";
    case CharClass::register_shifter: return "register-shifter";
    case CharClass::other_sign: return "other-sign";
    case CharClass::digit: return "digit";
    case CharClass::symbol: return "symbol";
    case CharClass::non_khmer: return "non-khmer";
  }
  return "non-khmer";
}

inline std::optional<CharClass> char_class_from_string(std::string_view s) {
  for (int i = 0; i <= static_cast<int>(CharClass::non_khmer); ++i) {
    const auto c = static_cast<CharClass>(i);
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

constexpr CharClass classify(char32_t cp) noexcept {
  if (cp < 0x1780 || cp > 0x17FF) return CharClass::non_khmer;
  if (cp <= 0x17A2) return CharClass::consonant;
  if (cp <= 0x17B3) return CharClass::independent_vowel;
  // U+17B4/U+17B5 are the invisible inherent vowels; they behave as vowel signs.
  if (cp <= 0x17C5) return CharClass::dependent_vowel_sign;
  if (cp == 0x17C9 || cp == 0x17CA) return CharClass::register_shifter;
  if (cp == kCoeng) return CharClass::coeng;
  if (cp <= 0x17D3) return CharClass::other_sign;
  if (cp == 0x17DD) return CharClass::other_sign;
  if (cp >= 0x17E0 && cp <= 0x17E9) return CharClass::digit;
  return CharClass::symbol;
}

/// Classification of U+1780..U+17FF in the resource-file layout
/// (`code point hex<TAB>tag`), preceded by a version comment.
inline std::string char_class_table_tsv() {
  std::string out = "# khspell char classes v" + std::to_string(kCharClassTableVersion) + "\n";
  static constexpr char kHex[] = "0123456789ABCDEF";
  for (char32_t cp = 0x1780; cp <= 0x17FF; ++cp) {
    out += "U+";
    for (int shift = 12; shift >= 0; shift -= 4) out.push_back(kHex[(cp >> shift) & 0xF]);
    out.push_back('\t');
    out += to_string(classify(cp));
    out.push_back('\n');
  }
  return out;
}

constexpr bool is_cluster_base(char32_t cp) noexcept {
  const auto c = classify(cp);
  return c == CharClass::consonant || c == CharClass::independent_vowel;
}

constexpr bool is_zero_width(char32_t cp) noexcept {
  return cp == 0x200B || cp == 0x200C || cp == 0x200D || cp == 0x2060 || cp == 0xFEFF;
}

constexpr bool is_whitespace(char32_t cp) noexcept {
  return cp == ' ' || (cp >= 0x09 && cp <= 0x0D) || cp == 0x00A0 || cp == 0x1680 ||
         (cp >= 0x2000 && cp <= 0x200A) || cp == 0x2028 || cp == 0x2029 || cp == 0x202F ||
         cp == 0x205F || cp == 0x3000;
}

constexpr bool is_digit(char32_t cp) noexcept {
  return (cp >= '0' && cp <= '9') || classify(cp) == CharClass::digit;
}

enum class ClusterKind : std::uint8_t { khmer, space, digit_run, other };

inline constexpr std::string_view to_string(ClusterKind k) {
  switch (k) {
    case ClusterKind::khmer: return "khmer-cluster";
    case ClusterKind::space: return "space";
    case ClusterKind::digit_run: return "digit-run";
    case ClusterKind::other: return "other";
  }
  return "other";
}

struct GraphemeCluster {
  std::string text;
  ClusterKind kind = ClusterKind::other;

  friend bool operator==(const GraphemeCluster&, const GraphemeCluster&) = default;
};

using Clusters = std::vector<GraphemeCluster>;

namespace detail {

// Length of the khmer cluster starting at s[i] (which must be a base).
inline std::size_t khmer_cluster_length(std::u32string_view s, std::size_t i) {
  std::size_t j = i + 1;
  while (j + 1 < s.size() && s[j] == kCoeng && is_cluster_base(s[j + 1])) j += 2;
  if (j < s.size() && classify(s[j]) == CharClass::register_shifter) ++j;
  if (j < s.size() && classify(s[j]) == CharClass::dependent_vowel_sign) ++j;
  while (j < s.size() && classify(s[j]) == CharClass::other_sign) ++j;
  return j - i;
}

}  // namespace detail

/// True when `cp` spells exactly one khmer cluster under the grammar above.
inline bool matches_cluster_grammar(std::u32string_view cps) {
  if (cps.empty() || !is_cluster_base(cps.front())) return false;
  return detail::khmer_cluster_length(cps, 0) == cps.size();
}

/// Strips zero-width characters and puts the marks following each base into
/// canonical order: coeng pairs, register shifters, vowel signs, other signs.
/// A coeng that is not followed by a base ends the mark run and stays put,
/// which keeps the function idempotent.
inline std::string normalize(std::string_view text) {
  std::u32string in = utf8::decode(text);
  std::erase_if(in, [](char32_t cp) { return is_zero_width(cp); });

  std::u32string out;
  out.reserve(in.size());
  std::u32string pairs, shifters, vowels, others;
  std::size_t i = 0;
  while (i < in.size()) {
    const char32_t cp = in[i++];
    out.push_back(cp);
    if (!is_cluster_base(cp)) continue;
    pairs.clear();
    shifters.clear();
    vowels.clear();
    others.clear();
    while (i < in.size()) {
      if (in[i] == kCoeng) {
        if (i + 1 < in.size() && is_cluster_base(in[i + 1])) {
          pairs.push_back(in[i]);
          pairs.push_back(in[i + 1]);
          i += 2;
          continue;
        }
        break;
      }
      const auto c = classify(in[i]);
      if (c == CharClass::register_shifter) {
        shifters.push_back(in[i]);
      } else if (c == CharClass::dependent_vowel_sign) {
        vowels.push_back(in[i]);
      } else if (c == CharClass::other_sign) {
        others.push_back(in[i]);
      } else {
        break;
      }
      ++i;
    }
    out += pairs;
    out += shifters;
    out += vowels;
    out += others;
  }
  return utf8::encode(out);
}

/// Splits normalized text into grapheme clusters. Whitespace and digit runs
/// form one cluster each; every other non-Khmer code point (and any orphan
/// mark) is its own `other` cluster. Concatenating the texts gives back the
/// input exactly.
inline Clusters cluster(std::string_view text) {
  const std::u32string cps = utf8::decode(text);
  Clusters out;
  std::size_t i = 0;
  while (i < cps.size()) {
    const char32_t cp = cps[i];
    std::size_t len = 1;
    ClusterKind kind = ClusterKind::other;
    if (is_cluster_base(cp)) {
      len = detail::khmer_cluster_length(cps, i);
      kind = ClusterKind::khmer;
    } else if (is_whitespace(cp)) {
      while (i + len < cps.size() && is_whitespace(cps[i + len])) ++len;
      kind = ClusterKind::space;
    } else if (is_digit(cp)) {
      while (i + len < cps.size() && is_digit(cps[i + len])) ++len;
      kind = ClusterKind::digit_run;
    }
    out.push_back({utf8::encode(std::u32string_view(cps).substr(i, len)), kind});
    i += len;
  }
  return out;
}

inline std::string join(std::span<const GraphemeCluster> clusters) {
  std::string out;
  for (const auto& c : clusters) out += c.text;
  return out;
}

inline bool has_khmer_cluster(std::span<const GraphemeCluster> clusters) {
  for (const auto& c : clusters) {
    if (c.kind == ClusterKind::khmer) return true;
  }
  return false;
}

/// Byte offset of every cluster boundary: offsets[i] is where cluster i
/// starts, offsets[size] == total length.
inline std::vector<std::size_t> cluster_offsets(std::span<const GraphemeCluster> clusters) {
  std::vector<std::size_t> offsets;
  offsets.reserve(clusters.size() + 1);
  std::size_t pos = 0;
  for (const auto& c : clusters) {
    offsets.push_back(pos);
    pos += c.text.size();
  }
  offsets.push_back(pos);
  return offsets;
}

}  // namespace khspell
