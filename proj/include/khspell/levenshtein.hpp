#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

namespace khspell {

/// Unit-cost Levenshtein distance over arbitrary symbol sequences.
template <class T, class Eq = std::equal_to<>>
std::size_t levenshtein(std::span<const T> a, std::span<const T> b, Eq eq = {}) {
  if (a.size() < b.size()) std::swap(a, b);
  if (b.empty()) return a.size();
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      const std::size_t sub = diag + (eq(a[i - 1], b[j - 1]) ? 0 : 1);
      row[j] = std::min({up + 1, row[j - 1] + 1, sub});
      diag = up;
    }
  }
  return row[b.size()];
}

}  // namespace khspell
