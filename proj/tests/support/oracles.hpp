#pragma once

// Slow, obviously-correct reference implementations the library is checked
// against. Nothing here calls the code under test except `cluster`, which
// has its own tests.

#include <algorithm>
#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

#include "khspell/lexicon.hpp"
#include "khspell/script.hpp"

namespace oracle {

// Full-matrix Levenshtein over any equality-comparable sequences.
template <class Seq>
std::size_t edit_distance(const Seq& a, const Seq& b) {
  const std::size_t n = a.size(), m = b.size();
  std::vector<std::vector<std::size_t>> d(n + 1, std::vector<std::size_t>(m + 1, 0));
  for (std::size_t i = 0; i <= n; ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= m; ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t sub = d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, sub});
    }
  }
  return d[n][m];
}

inline std::vector<std::string> cluster_texts(std::string_view s) {
  std::vector<std::string> out;
  for (const auto& c : khspell::cluster(s)) out.push_back(c.text);
  return out;
}

struct Hit {
  std::string surface;
  std::size_t distance;
  std::uint64_t frequency;
  friend bool operator==(const Hit&, const Hit&) = default;
  friend bool operator<(const Hit& a, const Hit& b) {
    return std::tuple(a.distance, b.frequency, a.surface) < std::tuple(b.distance, a.frequency, b.surface);
  }
};

// Linear scan over every entry, sorted by the neighbor order.
inline std::vector<Hit> grapheme_scan(const khspell::Lexicon& lex, std::string_view query, std::size_t eps) {
  const auto q = cluster_texts(query);
  std::vector<Hit> out;
  for (const auto& e : lex.entries()) {
    const std::size_t d = edit_distance(q, cluster_texts(e.surface));
    if (d <= eps) out.push_back({e.surface, d, e.frequency});
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<Hit> phoneme_scan(const khspell::Lexicon& lex, const std::vector<std::string>& query,
                                     std::size_t eps) {
  std::vector<Hit> out;
  if (query.empty()) return out;
  for (const auto& e : lex.entries()) {
    if (e.phonemes.empty()) continue;
    const std::size_t d = edit_distance(query, e.phonemes);
    if (d <= eps) out.push_back({e.surface, d, e.frequency});
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<Hit> to_hits(const std::vector<khspell::Neighbor>& ns) {
  std::vector<Hit> out;
  for (const auto& n : ns) out.push_back({n.entry->surface, n.distance, n.entry->frequency});
  return out;
}

// Every way to cut n items into at least two non-empty consecutive parts,
// as part lengths.
inline std::vector<std::vector<std::size_t>> compositions(std::size_t n) {
  std::vector<std::vector<std::size_t>> out;
  if (n < 2) return out;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << (n - 1)); ++mask) {
    std::vector<std::size_t> parts;
    std::size_t len = 1;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (mask & (std::uint64_t{1} << i)) {
        parts.push_back(len);
        len = 1;
      } else {
        ++len;
      }
    }
    parts.push_back(len);
    out.push_back(std::move(parts));
  }
  return out;
}

// Full cartesian product of index ranges.
inline std::vector<std::vector<std::size_t>> product(const std::vector<std::size_t>& sizes) {
  std::vector<std::vector<std::size_t>> out{{}};
  for (std::size_t s : sizes) {
    std::vector<std::vector<std::size_t>> next;
    for (const auto& prefix : out) {
      for (std::size_t i = 0; i < s; ++i) {
        auto v = prefix;
        v.push_back(i);
        next.push_back(std::move(v));
      }
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace oracle
