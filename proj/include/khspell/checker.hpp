#pragma once

// The spellchecking pipeline:
//
//   1. segment the sentence and find named entities;
//   2. for every unknown, non-entity word, collect lexicon candidates by
//      grapheme distance and by phoneme distance, plus recombinations of
//      per-subword candidates when the word splits into parts;
//   3. expand the per-word choices into sentence hypotheses and rank them by
//      language-model log-likelihood (argmax first).

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "khspell/char_lm.hpp"
#include "khspell/error.hpp"
#include "khspell/g2p.hpp"
#include "khspell/lexicon.hpp"
#include "khspell/ner.hpp"
#include "khspell/script.hpp"
#include "khspell/segmenter.hpp"

namespace khspell {

struct CheckerConfig {
  std::size_t k = 3;
  std::size_t eps = 3;
  std::size_t eps_p = 1;
  std::size_t beam = 64;
  std::size_t top_n = 3;

  void validate() const {
    if (k == 0 || eps == 0 || eps_p == 0 || beam == 0 || top_n == 0) {
      throw Error("checker config: k, eps, eps_p, beam and top_n must be positive");
    }
    if (top_n > beam) throw Error("checker config: top_n must not exceed beam");
  }
};

enum class CandidateOrigin : std::uint8_t { grapheme_search, phoneme_search, subword_recombination };

inline constexpr std::string_view to_string(CandidateOrigin o) {
  switch (o) {
    case CandidateOrigin::grapheme_search: return "grapheme-search";
    case CandidateOrigin::phoneme_search: return "phoneme-search";
    case CandidateOrigin::subword_recombination: return "subword-recombination";
  }
  return "grapheme-search";
}

struct Candidate {
  std::string surface;
  std::size_t grapheme_dist = 0;
  std::size_t phoneme_dist = 0;
  std::uint64_t frequency = 0;
  CandidateOrigin origin = CandidateOrigin::grapheme_search;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

/// Phoneme distance, grapheme distance, frequency (desc), surface.
inline bool candidate_less(const Candidate& a, const Candidate& b) {
  if (a.phoneme_dist != b.phoneme_dist) return a.phoneme_dist < b.phoneme_dist;
  if (a.grapheme_dist != b.grapheme_dist) return a.grapheme_dist < b.grapheme_dist;
  if (a.frequency != b.frequency) return a.frequency > b.frequency;
  return a.surface < b.surface;
}

inline bool admitted(const Candidate& c, const CheckerConfig& cfg) {
  return c.grapheme_dist <= cfg.eps || c.phoneme_dist <= cfg.eps_p;
}

struct Replacement {
  std::size_t token = 0;
  Candidate candidate;

  friend bool operator==(const Replacement&, const Replacement&) = default;
};

struct Hypothesis {
  std::string sentence;
  std::vector<Replacement> replacements;
  double score = 0.0;

  std::size_t total_distance() const {
    std::size_t d = 0;
    for (const auto& r : replacements) d += r.candidate.grapheme_dist;
    return d;
  }

  friend bool operator==(const Hypothesis&, const Hypothesis&) = default;
};

enum class TokenOutcome : std::uint8_t { not_flagged, corrected, no_candidates };

inline constexpr std::string_view to_string(TokenOutcome o) {
  switch (o) {
    case TokenOutcome::not_flagged: return "not-flagged";
    case TokenOutcome::corrected: return "corrected";
    case TokenOutcome::no_candidates: return "no-candidates";
  }
  return "not-flagged";
}

/// Cluster range [begin, end) of the normalized sentence.
struct Focus {
  std::size_t begin = 0;
  std::size_t end = 0;
};

struct Detection {
  std::vector<Token> tokens;
  std::vector<EntitySpan> entities;
  std::vector<std::size_t> flagged;
};

struct FlaggedWord {
  std::size_t token = 0;
  std::vector<Candidate> candidates;
};

struct CheckReport {
  std::string sentence;
  std::vector<Token> tokens;
  std::vector<EntitySpan> entities;
  std::vector<std::size_t> flagged;
  std::vector<std::vector<Candidate>> suggestions;  // parallel to `flagged`
  std::vector<Hypothesis> hypotheses;               // ranked, at most top_n
  std::vector<TokenOutcome> outcomes;               // parallel to `tokens`

  const Hypothesis& best() const { return hypotheses.front(); }
};

/// Everything the checker reads. Immutable once built.
struct Engine {
  G2p g2p;
  Lexicon lexicon;
  Gazetteer gazetteer;
  AffixList affixes;
  CharLm lm;
};

/// Index vectors over a product of choice lists, best-first by rank sum and
/// then lexicographically, at most `cap` of them. The all-zero vector is
/// always first. A zero-sized dimension yields nothing.
inline std::vector<std::vector<std::size_t>> best_first_product(std::span<const std::size_t> sizes, std::size_t cap) {
  std::vector<std::vector<std::size_t>> out;
  if (cap == 0 || std::any_of(sizes.begin(), sizes.end(), [](std::size_t s) { return s == 0; })) return out;
  using Item = std::pair<std::size_t, std::vector<std::size_t>>;
  std::set<Item> frontier{{0, std::vector<std::size_t>(sizes.size(), 0)}};
  std::set<std::vector<std::size_t>> seen{frontier.begin()->second};
  while (!frontier.empty() && out.size() < cap) {
    Item item = *frontier.begin();
    frontier.erase(frontier.begin());
    for (std::size_t d = 0; d < sizes.size(); ++d) {
      if (item.second[d] + 1 >= sizes[d]) continue;
      auto next = item.second;
      ++next[d];
      if (seen.insert(next).second) frontier.emplace(item.first + 1, std::move(next));
    }
    out.push_back(std::move(item.second));
  }
  return out;
}

inline bool overlaps_entity(const Token& t, std::span<const EntitySpan> entities) {
  return std::any_of(entities.begin(), entities.end(),
                     [&](const EntitySpan& e) { return e.begin < t.end && t.begin < e.end; });
}

/// Segments, runs entity matching and flags unknown Khmer words that touch
/// no entity. With a focus, the focus range is one forced token and only it
/// may be flagged.
inline Detection detect(std::string_view sentence, const Lexicon& lexicon, const Gazetteer& gazetteer,
                        const AffixList& affixes, std::optional<Focus> focus = std::nullopt) {
  Detection d;
  const Segmenter segmenter(lexicon, affixes);
  d.tokens = focus ? segmenter.segment_with_focus(sentence, focus->begin, focus->end) : segmenter.segment(sentence);
  d.entities = find_entities(sentence, gazetteer, d.tokens);
  for (std::size_t i = 0; i < d.tokens.size(); ++i) {
    const Token& t = d.tokens[i];
    if (t.kind != TokenKind::word || t.known) continue;
    if (focus && !(t.begin < focus->end && focus->begin < t.end)) continue;
    if (!has_khmer_cluster(cluster(t.text))) continue;
    if (overlaps_entity(t, d.entities)) continue;
    d.flagged.push_back(i);
  }
  return d;
}

inline Detection detect(std::string_view sentence, const Lexicon& lexicon, const Gazetteer& gazetteer) {
  static const AffixList kNoAffixes;
  return detect(sentence, lexicon, gazetteer, kNoAffixes);
}

namespace detail {

// Grapheme and phoneme hits for one word, both distances exact, deduped.
inline std::vector<Candidate> lexicon_candidates(std::span<const GraphemeCluster> clusters, const Phonemes& phonemes,
                                                 const Lexicon& lexicon, const CheckerConfig& cfg) {
  std::vector<Candidate> out;
  std::set<const LexiconEntry*> taken;
  for (const auto& n : lexicon.grapheme_within(clusters, cfg.eps)) {
    taken.insert(n.entry);
    out.push_back({n.entry->surface, n.distance, phoneme_edit_distance(phonemes, n.entry->phonemes),
                   n.entry->frequency, CandidateOrigin::grapheme_search});
  }
  for (const auto& n : lexicon.phoneme_within(phonemes, cfg.eps_p)) {
    if (!taken.insert(n.entry).second) continue;
    out.push_back({n.entry->surface, cluster_edit_distance(clusters, n.entry->clusters), n.distance,
                   n.entry->frequency, CandidateOrigin::phoneme_search});
  }
  std::sort(out.begin(), out.end(), candidate_less);
  return out;
}

}  // namespace detail

/// Ranked correction candidates for one word, at most cfg.k.
inline std::vector<Candidate> candidates(std::string_view word, const Lexicon& lexicon, const G2p& g2p,
                                         const CheckerConfig& cfg, const AffixList& affixes) {
  const std::string normalized = normalize(word);
  const Clusters clusters = cluster(normalized);
  if (clusters.empty()) return {};
  std::vector<Candidate> out = detail::lexicon_candidates(clusters, g2p.to_phonemes(normalized), lexicon, cfg);

  const Segmenter segmenter(lexicon, affixes);
  if (const auto parts = segmenter.split_compound(clusters)) {
    std::vector<std::vector<Candidate>> per_part;
    for (const auto& part : *parts) {
      const auto span = std::span(clusters).subspan(part.begin, part.end - part.begin);
      auto cands = detail::lexicon_candidates(span, g2p.to_phonemes(part.text), lexicon, cfg);
      if (cands.size() > cfg.k) cands.resize(cfg.k);
      per_part.push_back(std::move(cands));
    }
    std::vector<std::size_t> sizes;
    for (const auto& p : per_part) sizes.push_back(p.size());
    for (const auto& combo : best_first_product(sizes, cfg.k * cfg.k)) {
      Candidate c{{}, 0, 0, UINT64_MAX, CandidateOrigin::subword_recombination};
      for (std::size_t i = 0; i < combo.size(); ++i) {
        const Candidate& pc = per_part[i][combo[i]];
        c.surface += pc.surface;
        c.grapheme_dist += pc.grapheme_dist;
        c.phoneme_dist += pc.phoneme_dist;
        c.frequency = std::min(c.frequency, pc.frequency);
      }
      if (!admitted(c, cfg)) continue;
      if (std::any_of(out.begin(), out.end(), [&](const Candidate& o) { return o.surface == c.surface; })) continue;
      out.push_back(std::move(c));
    }
    std::sort(out.begin(), out.end(), candidate_less);
  }
  if (out.size() > cfg.k) out.resize(cfg.k);
  return out;
}

inline std::vector<Candidate> candidates(std::string_view word, const Lexicon& lexicon, const G2p& g2p,
                                         const CheckerConfig& cfg) {
  static const AffixList kNoAffixes;
  return candidates(word, lexicon, g2p, cfg, kNoAffixes);
}

/// Cartesian product of per-word choices, best-first and capped at
/// cfg.beam. Words without candidates stay unchanged. Scores are left at 0.
inline std::vector<Hypothesis> enumerate_hypotheses(std::span<const Token> tokens, std::span<const FlaggedWord> flagged,
                                                    const CheckerConfig& cfg) {
  std::vector<std::size_t> sizes;
  for (const auto& f : flagged) sizes.push_back(std::max<std::size_t>(1, f.candidates.size()));
  std::vector<Hypothesis> out;
  for (const auto& combo : best_first_product(sizes, cfg.beam)) {
    std::vector<const Candidate*> chosen(tokens.size(), nullptr);
    Hypothesis h;
    for (std::size_t i = 0; i < flagged.size(); ++i) {
      if (flagged[i].candidates.empty()) continue;
      const Candidate& c = flagged[i].candidates[combo[i]];
      chosen.at(flagged[i].token) = &c;
      h.replacements.push_back({flagged[i].token, c});
    }
    for (std::size_t t = 0; t < tokens.size(); ++t) h.sentence += chosen[t] ? chosen[t]->surface : tokens[t].text;
    out.push_back(std::move(h));
  }
  return out;
}

/// Score descending; ties by total grapheme distance, then sentence text.
inline bool hypothesis_before(const Hypothesis& a, const Hypothesis& b) {
  if (a.score != b.score) return a.score > b.score;
  const auto da = a.total_distance();
  const auto db = b.total_distance();
  if (da != db) return da < db;
  return a.sentence < b.sentence;
}

/// Scores every hypothesis with `scorer` (sentence -> log-likelihood) and
/// sorts; the first element is the argmax.
template <class Scorer>
std::vector<Hypothesis> rank(std::vector<Hypothesis> hypotheses, Scorer&& scorer) {
  if (hypotheses.empty()) throw Error("rank: no hypotheses");
  for (auto& h : hypotheses) h.score = scorer(std::string_view(h.sentence));
  std::sort(hypotheses.begin(), hypotheses.end(), hypothesis_before);
  return hypotheses;
}

inline std::vector<Hypothesis> rank(std::vector<Hypothesis> hypotheses, const CharLm& lm) {
  return rank(std::move(hypotheses), [&](std::string_view s) { return lm.log_prob(s); });
}

struct CheckOptions {
  std::optional<Focus> focus;
};

inline CheckReport check(std::string_view sentence, const Engine& engine, const CheckerConfig& cfg,
                         const CheckOptions& options = {}) {
  cfg.validate();
  CheckReport report;
  report.sentence = normalize(sentence);
  Detection d = detect(report.sentence, engine.lexicon, engine.gazetteer, engine.affixes, options.focus);

  std::vector<FlaggedWord> flagged;
  for (std::size_t idx : d.flagged) {
    flagged.push_back({idx, candidates(d.tokens[idx].text, engine.lexicon, engine.g2p, cfg, engine.affixes)});
  }
  auto ranked = rank(enumerate_hypotheses(d.tokens, flagged, cfg), engine.lm);

  report.outcomes.assign(d.tokens.size(), TokenOutcome::not_flagged);
  for (const auto& f : flagged) {
    report.outcomes[f.token] = f.candidates.empty() ? TokenOutcome::no_candidates : TokenOutcome::corrected;
    std::vector<Candidate> ordered;
    for (const auto& h : ranked) {
      for (const auto& r : h.replacements) {
        if (r.token != f.token) continue;
        if (std::find(ordered.begin(), ordered.end(), r.candidate) == ordered.end()) ordered.push_back(r.candidate);
      }
    }
    for (const auto& c : f.candidates) {
      if (std::find(ordered.begin(), ordered.end(), c) == ordered.end()) ordered.push_back(c);
    }
    report.suggestions.push_back(std::move(ordered));
  }
  if (ranked.size() > cfg.top_n) ranked.resize(cfg.top_n);
  report.hypotheses = std::move(ranked);
  report.tokens = std::move(d.tokens);
  report.entities = std::move(d.entities);
  report.flagged = std::move(d.flagged);
  return report;
}

}  // namespace khspell
