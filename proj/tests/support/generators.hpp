#pragma once

// Seeded random Khmer text for property tests.

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "khspell/g2p.hpp"
#include "khspell/lexicon.hpp"
#include "khspell/utf8.hpp"

namespace gen {

class Khmer {
 public:
  explicit Khmer(std::uint64_t seed) : rng_(seed) {}

  std::mt19937_64& rng() { return rng_; }

  std::size_t uniform(std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_); }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }

  char32_t consonant() { return static_cast<char32_t>(0x1780 + uniform(0, 0x22)); }
  char32_t vowel_sign() { return static_cast<char32_t>(0x17B6 + uniform(0, 0x17C5 - 0x17B6)); }
  char32_t shifter() { return chance(0.5) ? 0x17C9 : 0x17CA; }
  char32_t other_sign() {
    static constexpr char32_t kSigns[] = {0x17C6, 0x17C7, 0x17C8, 0x17CB, 0x17CC, 0x17CD,
                                          0x17CE, 0x17CF, 0x17D0, 0x17D1, 0x17D3, 0x17DD};
    return kSigns[uniform(0, std::size(kSigns) - 1)];
  }

  /// One well-formed cluster in canonical order.
  std::string cluster() {
    std::u32string cps{consonant()};
    for (std::size_t i = uniform(0, 2); i > 0 && chance(0.5); --i) {
      cps.push_back(0x17D2);
      cps.push_back(consonant());
    }
    if (chance(0.15)) cps.push_back(shifter());
    if (chance(0.7)) cps.push_back(vowel_sign());
    if (chance(0.15)) cps.push_back(other_sign());
    return khspell::utf8::encode(cps);
  }

  /// `n` distinct clusters to build words from; a small alphabet makes
  /// near neighbors common.
  std::vector<std::string> alphabet(std::size_t n) {
    std::set<std::string> seen;
    std::vector<std::string> out;
    while (out.size() < n) {
      auto c = cluster();
      if (seen.insert(c).second) out.push_back(std::move(c));
    }
    return out;
  }

  std::string word(const std::vector<std::string>& alpha, std::size_t min_len, std::size_t max_len) {
    std::string w;
    for (std::size_t i = uniform(min_len, max_len); i > 0; --i) w += alpha[uniform(0, alpha.size() - 1)];
    return w;
  }

  /// Arbitrary code points biased toward the Khmer block, with zero-width
  /// characters, spaces, digits and Latin mixed in. Not necessarily well
  /// formed.
  std::string raw(std::size_t max_len) {
    std::u32string cps;
    for (std::size_t i = uniform(0, max_len); i > 0; --i) {
      const std::size_t kind = uniform(0, 9);
      if (kind < 6) {
        cps.push_back(static_cast<char32_t>(0x1780 + uniform(0, 0x7F)));
      } else if (kind == 6) {
        static constexpr char32_t kZw[] = {0x200B, 0x200C, 0x200D, 0x2060, 0xFEFF};
        cps.push_back(kZw[uniform(0, 4)]);
      } else if (kind == 7) {
        cps.push_back(chance(0.5) ? U' ' : U'\t');
      } else if (kind == 8) {
        cps.push_back(static_cast<char32_t>(U'0' + uniform(0, 9)));
      } else {
        cps.push_back(static_cast<char32_t>(U'a' + uniform(0, 25)));
      }
    }
    return khspell::utf8::encode(cps);
  }

 private:
  std::mt19937_64 rng_;
};

inline const khspell::G2p& shipped_g2p() {
  static const khspell::G2p g2p(khspell::PronLexicon{},
                                khspell::RuleTable::load_file(std::string(KHSPELL_RESOURCE_DIR) + "/g2p/rules.tsv"));
  return g2p;
}

inline khspell::Lexicon lexicon(const std::vector<std::pair<std::string, std::uint64_t>>& words,
                                const khspell::G2p& g2p = shipped_g2p()) {
  std::vector<khspell::LexiconRecord> records;
  for (const auto& [w, f] : words) records.push_back({w, std::nullopt, f});
  return khspell::Lexicon::build(records, g2p);
}

inline khspell::Lexicon lexicon(const std::vector<std::string>& words, const khspell::G2p& g2p = shipped_g2p()) {
  std::vector<std::pair<std::string, std::uint64_t>> ws;
  for (const auto& w : words) ws.emplace_back(w, 1);
  return lexicon(ws, g2p);
}

}  // namespace gen
