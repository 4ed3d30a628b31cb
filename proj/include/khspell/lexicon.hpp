#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "khspell/bk_tree.hpp"
#include "khspell/error.hpp"
#include "khspell/g2p.hpp"
#include "khspell/levenshtein.hpp"
#include "khspell/script.hpp"
#include "khspell/tsv.hpp"

namespace khspell {

struct LexiconEntry {
  std::string surface;
  Clusters clusters;
  Phonemes phonemes;
  std::uint64_t frequency = 1;
};

/// One search hit: the entry and its distance to the query.
struct Neighbor {
  const LexiconEntry* entry = nullptr;
  std::size_t distance = 0;
};

inline std::size_t cluster_edit_distance(std::span<const GraphemeCluster> a, std::span<const GraphemeCluster> b) {
  return levenshtein(a, b, [](const GraphemeCluster& x, const GraphemeCluster& y) { return x.text == y.text; });
}

inline std::size_t cluster_edit_distance(std::string_view a, std::string_view b) {
  return cluster_edit_distance(cluster(a), cluster(b));
}

/// Distance ascending, then frequency descending, then surface ascending.
inline bool neighbor_less(const Neighbor& a, const Neighbor& b) {
  if (a.distance != b.distance) return a.distance < b.distance;
  if (a.entry->frequency != b.entry->frequency) return a.entry->frequency > b.entry->frequency;
  return a.entry->surface < b.entry->surface;
}

/// Raw TSV record before normalization and dedupe.
struct LexiconRecord {
  std::string surface;
  std::optional<Phonemes> phonemes;
  std::uint64_t frequency = 1;
};

class Lexicon {
 public:
  using SymbolSeq = std::vector<std::uint32_t>;

  Lexicon() = default;
  Lexicon(const Lexicon&) = delete;
  Lexicon& operator=(const Lexicon&) = delete;
  Lexicon(Lexicon&&) noexcept = default;
  Lexicon& operator=(Lexicon&&) noexcept = default;

  /// Builds from records; missing pronunciations come from `g2p`. Duplicate
  /// surfaces merge, keeping the first pronunciation and the max frequency.
  static Lexicon build(std::span<const LexiconRecord> records, const G2p& g2p) {
    Lexicon lex;
    for (const auto& rec : records) {
      std::string surface = normalize(rec.surface);
      if (surface.empty()) throw Error("lexicon: empty surface");
      if (const auto it = lex.by_surface_.find(surface); it != lex.by_surface_.end()) {
        auto& existing = lex.entries_[it->second];
        existing.frequency = std::max(existing.frequency, rec.frequency);
        continue;
      }
      LexiconEntry entry;
      entry.clusters = cluster(surface);
      entry.phonemes = rec.phonemes && !rec.phonemes->empty() ? *rec.phonemes : g2p.to_phonemes(surface);
      entry.frequency = rec.frequency;
      entry.surface = std::move(surface);
      lex.by_surface_.emplace(entry.surface, lex.entries_.size());
      lex.entries_.push_back(std::move(entry));
    }
    lex.index();
    return lex;
  }

  /// `surface<TAB>phonemes<TAB>frequency`, the last two columns optional.
  static Lexicon load(std::istream& in, const G2p& g2p, const std::string& source = "<lexicon>") {
    std::vector<LexiconRecord> records;
    tsv::for_each_record(in, [&](std::size_t line, std::string_view text) {
      const auto fields = tsv::split(text);
      if (fields.size() > 3) throw ParseError(source, line, "too many columns");
      LexiconRecord rec;
      rec.surface = std::string(tsv::trim(fields[0]));
      if (normalize(rec.surface).empty()) throw ParseError(source, line, "empty surface");
      if (fields.size() > 1) {
        auto phonemes = tsv::split_words(fields[1]);
        if (!phonemes.empty()) rec.phonemes = std::move(phonemes);
      }
      if (fields.size() > 2) {
        const auto f = tsv::trim(fields[2]);
        if (!f.empty()) {
          std::uint64_t value = 0;
          for (char c : f) {
            if (c < '0' || c > '9') throw ParseError(source, line, "frequency is not a non-negative integer");
            value = value * 10 + static_cast<std::uint64_t>(c - '0');
          }
          rec.frequency = value;
        }
      }
      records.push_back(std::move(rec));
    });
    if (records.empty()) throw ParseError(source, 0, "lexicon is empty");
    return build(records, g2p);
  }

  static Lexicon load_file(const std::filesystem::path& path, const G2p& g2p) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open lexicon: " + path.string());
    return load(in, g2p, path.string());
  }

  std::size_t size() const noexcept { return entries_.size(); }
  std::span<const LexiconEntry> entries() const noexcept { return entries_; }
  std::size_t max_clusters() const noexcept { return max_clusters_; }

  const LexiconEntry* find(std::string_view surface) const {
    const auto it = by_surface_.find(surface);
    return it == by_surface_.end() ? nullptr : &entries_[it->second];
  }
  bool contains(std::string_view surface) const { return find(surface) != nullptr; }

  /// Every entry within `eps` cluster edits of `query`, unordered.
  std::vector<Neighbor> grapheme_within(std::span<const GraphemeCluster> query, std::size_t eps) const {
    std::vector<Neighbor> out;
    graphemes_.within(intern_query(query), eps, [&](std::size_t id, std::size_t d) {
      out.push_back({&entries_[id], d});
    });
    return out;
  }

  std::vector<Neighbor> grapheme_neighbors(std::span<const GraphemeCluster> query, std::size_t eps,
                                           std::size_t k) const {
    return top_k(grapheme_within(query, eps), k);
  }

  /// Entries whose pronunciation lies within `eps` token edits of `query`.
  /// An empty query matches nothing.
  std::vector<Neighbor> phoneme_within(std::span<const std::string> query, std::size_t eps) const {
    std::vector<Neighbor> out;
    if (query.empty()) return out;
    SymbolSeq key;
    key.reserve(query.size());
    std::uint32_t fresh = std::numeric_limits<std::uint32_t>::max();
    StringMap<std::uint32_t> local;
    for (const auto& p : query) {
      if (const auto it = phoneme_ids_.find(p); it != phoneme_ids_.end()) {
        key.push_back(it->second);
      } else {
        auto [lt, inserted] = local.try_emplace(p, fresh);
        if (inserted) --fresh;
        key.push_back(lt->second);
      }
    }
    phonemes_.within(key, eps, [&](std::size_t id, std::size_t d) { out.push_back({&entries_[id], d}); });
    return out;
  }

  std::vector<Neighbor> phoneme_neighbors(std::span<const std::string> query, std::size_t eps, std::size_t k) const {
    return top_k(phoneme_within(query, eps), k);
  }

  static std::vector<Neighbor> top_k(std::vector<Neighbor> hits, std::size_t k) {
    std::sort(hits.begin(), hits.end(), neighbor_less);
    if (hits.size() > k) hits.resize(k);
    return hits;
  }

 private:
  struct SeqMetric {
    std::size_t operator()(const SymbolSeq& a, const SymbolSeq& b) const {
      return levenshtein(std::span<const std::uint32_t>(a), std::span<const std::uint32_t>(b));
    }
  };

  void index() {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      const auto& e = entries_[i];
      max_clusters_ = std::max(max_clusters_, e.clusters.size());
      SymbolSeq g;
      for (const auto& c : e.clusters) {
        g.push_back(cluster_ids_.try_emplace(c.text, static_cast<std::uint32_t>(cluster_ids_.size())).first->second);
      }
      graphemes_.insert(std::move(g), i);
      if (e.phonemes.empty()) continue;
      SymbolSeq p;
      for (const auto& ph : e.phonemes) {
        p.push_back(phoneme_ids_.try_emplace(ph, static_cast<std::uint32_t>(phoneme_ids_.size())).first->second);
      }
      phonemes_.insert(std::move(p), i);
    }
  }

  // Clusters absent from the lexicon get ids counting down from the top of
  // the range, distinct per query.
  SymbolSeq intern_query(std::span<const GraphemeCluster> query) const {
    SymbolSeq key;
    key.reserve(query.size());
    std::uint32_t fresh = std::numeric_limits<std::uint32_t>::max();
    StringMap<std::uint32_t> local;
    for (const auto& c : query) {
      if (const auto it = cluster_ids_.find(c.text); it != cluster_ids_.end()) {
        key.push_back(it->second);
      } else {
        auto [lt, inserted] = local.try_emplace(c.text, fresh);
        if (inserted) --fresh;
        key.push_back(lt->second);
      }
    }
    return key;
  }

  std::vector<LexiconEntry> entries_;
  StringMap<std::size_t> by_surface_;
  StringMap<std::uint32_t> cluster_ids_;
  StringMap<std::uint32_t> phoneme_ids_;
  BkTree<SymbolSeq, SeqMetric> graphemes_;
  BkTree<SymbolSeq, SeqMetric> phonemes_;
  std::size_t max_clusters_ = 0;
};

}  // namespace khspell
