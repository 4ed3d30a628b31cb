#pragma once

// Grapheme-to-phoneme conversion: pronunciation lexicon first, then a
// per-cluster rule table.
//
// Rule table rows are `kind:pattern<TAB>phoneme tokens`; the token column may
// be empty (a silent sign). Kinds:
//
//   onset1:C / onset2:C   onset of consonant C and its series (1 = a-series,
//                         2 = o-series)
//   sub:C                 onset of C when written as a subscript (defaults
//                         to its onset)
//   inherent1: / inherent2:
//                         inherent vowel of a series
//   vowel1:V / vowel2:V   dependent vowel sign V after a consonant of series
//   sign:S                other signs (nikahit, reahmuk, bantoc, ...)
//   coda:C                C as a word-final bare consonant (defaults to its
//                         onset)
//   indep:V               independent vowel
//   cluster:X             whole-cluster override, checked first
//
// A stacked cluster takes the series of its last subscript; the register
// shifters U+17C9 and U+17CA force series 1 and 2 respectively.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "khspell/error.hpp"
#include "khspell/levenshtein.hpp"
#include "khspell/script.hpp"
#include "khspell/tsv.hpp"
#include "khspell/utf8.hpp"

namespace khspell {

using Phonemes = std::vector<std::string>;

inline constexpr std::string_view kUnkPhoneme = "<unk>";

struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const noexcept { return std::hash<std::string_view>{}(s); }
};

template <class V>
using StringMap = std::unordered_map<std::string, V, StringHash, std::equal_to<>>;

class PronLexicon {
 public:
  PronLexicon() = default;

  /// Later duplicates of a surface are ignored; the first entry wins.
  static PronLexicon load(std::istream& in, std::string source = "<pron>") {
    PronLexicon pron;
    pron.source_ = source;
    tsv::for_each_record(in, [&](std::size_t line, std::string_view record) {
      const auto fields = tsv::split(record);
      if (fields.size() < 2) throw ParseError(source, line, "expected surface<TAB>phonemes");
      std::string surface = normalize(tsv::trim(fields[0]));
      Phonemes phonemes = tsv::split_words(fields[1]);
      if (surface.empty()) throw ParseError(source, line, "empty surface");
      if (phonemes.empty()) throw ParseError(source, line, "empty phoneme sequence");
      pron.add(std::move(surface), std::move(phonemes));
    });
    return pron;
  }

  static PronLexicon load_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open pronunciation lexicon: " + path.string());
    return load(in, path.string());
  }

  bool add(std::string surface, Phonemes phonemes) {
    for (const auto& p : phonemes) inventory_.insert(p);
    return entries_.try_emplace(std::move(surface), std::move(phonemes)).second;
  }

  const Phonemes* find(std::string_view surface) const {
    const auto it = entries_.find(surface);
    return it == entries_.end() ? nullptr : &it->second;
  }

  std::size_t size() const noexcept { return entries_.size(); }
  const std::string& source() const noexcept { return source_; }
  const std::set<std::string>& inventory() const noexcept { return inventory_; }

 private:
  StringMap<Phonemes> entries_;
  std::set<std::string> inventory_;
  std::string source_;
};

class RuleTable {
 public:
  RuleTable() = default;

  static RuleTable load(std::istream& in, std::string source = "<rules>") {
    RuleTable rules;
    std::string first;
    std::getline(in, first);
    constexpr std::string_view kHeader = "# khspell g2p rules v";
    if (first.starts_with(kHeader)) rules.version_ = std::atoi(first.c_str() + kHeader.size());
    std::istringstream rest(first + "\n" + std::string(std::istreambuf_iterator<char>(in), {}));
    tsv::for_each_record(rest, [&](std::size_t line, std::string_view record) {
      const auto fields = tsv::split(record);
      const auto colon = fields[0].find(':');
      if (colon == std::string_view::npos) throw ParseError(source, line, "rule pattern needs a kind: prefix");
      const std::string_view kind = fields[0].substr(0, colon);
      const std::string pattern = normalize(fields[0].substr(colon + 1));
      Phonemes tokens = fields.size() > 1 ? tsv::split_words(fields[1]) : Phonemes{};
      if (!rules.add(kind, pattern, std::move(tokens))) {
        throw ParseError(source, line, "bad rule '" + std::string(fields[0]) + "'");
      }
    });
    return rules;
  }

  static RuleTable load_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open rule table: " + path.string());
    return load(in, path.string());
  }

  /// Returns false when the kind is unknown or the pattern does not fit it.
  bool add(std::string_view kind, std::string_view pattern, Phonemes tokens) {
    for (const auto& t : tokens) inventory_.insert(t);
    if (kind == "cluster") {
      if (pattern.empty()) return false;
      clusters_[std::string(pattern)] = std::move(tokens);
      return true;
    }
    if (kind == "inherent1" || kind == "inherent2") {
      if (!pattern.empty()) return false;
      inherent_[kind.back() - '0'] = std::move(tokens);
      return true;
    }
    const std::u32string cps = utf8::decode(pattern);
    if (cps.size() != 1) return false;
    const char32_t cp = cps.front();
    const auto cls = classify(cp);
    if (kind == "onset1" || kind == "onset2") {
      if (cls != CharClass::consonant) return false;
      onsets_[cp] = {std::move(tokens), kind.back() - '0'};
    } else if (kind == "sub") {
      if (!is_cluster_base(cp)) return false;
      subs_[cp] = std::move(tokens);
    } else if (kind == "vowel1" || kind == "vowel2") {
      if (cls != CharClass::dependent_vowel_sign) return false;
      vowels_[{cp, kind.back() - '0'}] = std::move(tokens);
    } else if (kind == "sign") {
      if (cls != CharClass::other_sign) return false;
      signs_[cp] = std::move(tokens);
    } else if (kind == "coda") {
      if (cls != CharClass::consonant) return false;
      codas_[cp] = std::move(tokens);
    } else if (kind == "indep") {
      if (cls != CharClass::independent_vowel) return false;
      independents_[cp] = std::move(tokens);
    } else {
      return false;
    }
    return true;
  }

  /// Pronunciation of one khmer cluster. `word_final` marks the last khmer
  /// cluster of a multi-cluster word, where a bare consonant is read as a
  /// coda. Returns nullopt when some component has no rule.
  std::optional<Phonemes> cluster_phonemes(std::string_view text, bool word_final) const {
    if (const auto it = clusters_.find(std::string(text)); it != clusters_.end()) return it->second;

    const std::u32string cps = utf8::decode(text);
    if (cps.empty() || !is_cluster_base(cps.front())) return std::nullopt;

    Phonemes onset;
    int series = 1;
    bool nucleus = false;
    const char32_t base = cps.front();
    if (classify(base) == CharClass::consonant) {
      const auto it = onsets_.find(base);
      if (it == onsets_.end()) return std::nullopt;
      onset = it->second.tokens;
      series = it->second.series;
    } else {
      const auto it = independents_.find(base);
      if (it == independents_.end()) return std::nullopt;
      onset = it->second;
      nucleus = true;
    }

    std::size_t i = 1;
    bool stacked = false;
    while (i + 1 < cps.size() && cps[i] == kCoeng) {
      const char32_t sub = cps[i + 1];
      if (const auto it = subs_.find(sub); it != subs_.end()) {
        onset.insert(onset.end(), it->second.begin(), it->second.end());
      } else if (const auto ot = onsets_.find(sub); ot != onsets_.end()) {
        onset.insert(onset.end(), ot->second.tokens.begin(), ot->second.tokens.end());
      } else if (const auto vt = independents_.find(sub); vt != independents_.end()) {
        onset.insert(onset.end(), vt->second.begin(), vt->second.end());
      } else {
        return std::nullopt;
      }
      if (const auto ot = onsets_.find(sub); ot != onsets_.end()) series = ot->second.series;
      stacked = true;
      i += 2;
    }

    bool shifted = false;
    if (i < cps.size() && classify(cps[i]) == CharClass::register_shifter) {
      series = cps[i] == 0x17C9 ? 1 : 2;
      shifted = true;
      ++i;
    }

    Phonemes vowel;
    if (i < cps.size() && classify(cps[i]) == CharClass::dependent_vowel_sign) {
      const auto it = vowels_.find({cps[i], series});
      if (it == vowels_.end()) return std::nullopt;
      vowel = it->second;
      nucleus = true;
      ++i;
    }

    Phonemes signs;
    bool silent_signs = true;
    for (; i < cps.size(); ++i) {
      const auto it = signs_.find(cps[i]);
      if (it == signs_.end()) return std::nullopt;
      if (!it->second.empty()) silent_signs = false;
      signs.insert(signs.end(), it->second.begin(), it->second.end());
    }

    Phonemes out;
    if (word_final && !nucleus && !stacked && !shifted && silent_signs && classify(base) == CharClass::consonant) {
      const auto it = codas_.find(base);
      out = it != codas_.end() ? it->second : onset;
      return out;
    }
    out = std::move(onset);
    if (!nucleus) {
      const auto& inherent = inherent_[series];
      if (!inherent) return std::nullopt;
      vowel = *inherent;
    }
    out.insert(out.end(), vowel.begin(), vowel.end());
    out.insert(out.end(), signs.begin(), signs.end());
    return out;
  }

  int version() const noexcept { return version_; }
  const std::set<std::string>& inventory() const noexcept { return inventory_; }

 private:
  struct Onset {
    Phonemes tokens;
    int series = 1;
  };

  StringMap<Phonemes> clusters_;
  std::map<char32_t, Onset> onsets_;
  std::map<char32_t, Phonemes> subs_;
  std::map<std::pair<char32_t, int>, Phonemes> vowels_;
  std::map<char32_t, Phonemes> signs_;
  std::map<char32_t, Phonemes> codas_;
  std::map<char32_t, Phonemes> independents_;
  std::optional<Phonemes> inherent_[3];
  std::set<std::string> inventory_;
  int version_ = 0;
};

/// Rule-based pronunciation of a normalized word; non-Khmer clusters are
/// silent and a cluster without a rule yields one UNK token.
inline Phonemes rule_phonemes(std::string_view word, const RuleTable& rules) {
  const Clusters clusters = cluster(word);
  std::size_t last_khmer = clusters.size();
  std::size_t khmer_count = 0;
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    if (clusters[i].kind == ClusterKind::khmer) {
      last_khmer = i;
      ++khmer_count;
    }
  }
  Phonemes out;
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    if (clusters[i].kind != ClusterKind::khmer) continue;
    const bool word_final = khmer_count > 1 && i == last_khmer;
    if (auto tokens = rules.cluster_phonemes(clusters[i].text, word_final)) {
      out.insert(out.end(), tokens->begin(), tokens->end());
    } else {
      out.emplace_back(kUnkPhoneme);
    }
  }
  return out;
}

inline Phonemes to_phonemes(std::string_view word, const PronLexicon& pron, const RuleTable& rules) {
  if (const Phonemes* hit = pron.find(word)) return *hit;
  return rule_phonemes(word, rules);
}

class G2p {
 public:
  G2p() : G2p(PronLexicon{}, RuleTable{}) {}
  G2p(PronLexicon pron, RuleTable rules) : pron_(std::move(pron)), rules_(std::move(rules)) {
    inventory_ = pron_.inventory();
    inventory_.insert(rules_.inventory().begin(), rules_.inventory().end());
    inventory_.emplace(kUnkPhoneme);
  }

  Phonemes to_phonemes(std::string_view word) const { return khspell::to_phonemes(word, pron_, rules_); }

  /// Closed phoneme inventory: every token of the pronunciation lexicon and
  /// rule table, plus UNK.
  const std::set<std::string>& inventory() const noexcept { return inventory_; }
  const PronLexicon& pron() const noexcept { return pron_; }
  const RuleTable& rules() const noexcept { return rules_; }

 private:
  PronLexicon pron_;
  RuleTable rules_;
  std::set<std::string> inventory_;
};

inline std::size_t phoneme_edit_distance(std::span<const std::string> a, std::span<const std::string> b) {
  return levenshtein(a, b);
}

/// Token error rate of `hyp` against `ref`; may exceed 1 for long hypotheses.
inline double cer(std::span<const std::string> hyp, std::span<const std::string> ref) {
  if (ref.empty()) throw Error("cer: empty reference");
  return static_cast<double>(phoneme_edit_distance(hyp, ref)) / static_cast<double>(ref.size());
}

}  // namespace khspell
