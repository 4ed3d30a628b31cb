#pragma once

// Dictionary word segmentation with compound-aware boundary labels.
//
// Every cluster carries one label describing what follows it:
//
//   no_space   inside a word
//   space      word boundary          (rendered '|')
//   compound   compound-word joint    (rendered '_')
//   prefix     after a prefix         (rendered '~')
//   suffix     before a suffix        (rendered '^')
//
// The dictionary segmenter runs forward and backward maximal matching and
// keeps the pass with fewer tokens (forward on ties). Maximal runs that no
// lexicon entry can start (forward) or end (backward) become single unknown
// tokens, so a misspelling never shatters into pseudo-words.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <stdexcept>
#include <tuple>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "khspell/error.hpp"
#include "khspell/lexicon.hpp"
#include "khspell/script.hpp"
#include "khspell/tsv.hpp"
#include "khspell/utf8.hpp"

namespace khspell {

enum class BoundaryLabel : std::uint8_t { no_space, space, compound, prefix, suffix };

inline constexpr std::string_view notation(BoundaryLabel label) {
  switch (label) {
    case BoundaryLabel::no_space: return "";
    case BoundaryLabel::space: return "|";
    case BoundaryLabel::compound: return "_";
    case BoundaryLabel::prefix: return "~";
    case BoundaryLabel::suffix: return "^";
  }
  return "";
}

inline constexpr std::string_view to_string(BoundaryLabel label) {
  switch (label) {
    case BoundaryLabel::no_space: return "no_space";
    case BoundaryLabel::space: return "space";
    case BoundaryLabel::compound: return "compound";
    case BoundaryLabel::prefix: return "prefix";
    case BoundaryLabel::suffix: return "suffix";
  }
  return "no_space";
}

enum class AffixKind : std::uint8_t { prefix, suffix };

class AffixList {
 public:
  AffixList() = default;

  /// `affix<TAB>prefix|suffix`
  static AffixList load(std::istream& in, const std::string& source = "<affixes>") {
    AffixList list;
    tsv::for_each_record(in, [&](std::size_t line, std::string_view record) {
      const auto fields = tsv::split(record);
      if (fields.size() < 2) throw ParseError(source, line, "expected affix<TAB>prefix|suffix");
      const auto kind = tsv::trim(fields[1]);
      std::string affix = normalize(tsv::trim(fields[0]));
      if (affix.empty()) throw ParseError(source, line, "empty affix");
      if (kind == "prefix") {
        list.add(std::move(affix), AffixKind::prefix);
      } else if (kind == "suffix") {
        list.add(std::move(affix), AffixKind::suffix);
      } else {
        throw ParseError(source, line, "affix kind must be prefix or suffix");
      }
    });
    return list;
  }

  static AffixList load_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open affix list: " + path.string());
    return load(in, path.string());
  }

  void add(std::string affix, AffixKind kind) {
    (kind == AffixKind::prefix ? prefixes_ : suffixes_).emplace(std::move(affix), true);
  }
  bool is_prefix(std::string_view s) const { return prefixes_.find(s) != prefixes_.end(); }
  bool is_suffix(std::string_view s) const { return suffixes_.find(s) != suffixes_.end(); }
  std::size_t size() const noexcept { return prefixes_.size() + suffixes_.size(); }

 private:
  StringMap<bool> prefixes_;
  StringMap<bool> suffixes_;
};

enum class TokenKind : std::uint8_t { word, separator, number };

/// Part of a compound token. `joiner` is the label between this subword and
/// the next one; the last subword carries `space`.
struct Subword {
  std::string text;
  std::size_t begin = 0;
  std::size_t end = 0;
  BoundaryLabel joiner = BoundaryLabel::space;

  friend bool operator==(const Subword&, const Subword&) = default;
};

/// A segmented span. `begin`/`end` are cluster offsets into the sentence.
struct Token {
  std::string text;
  std::size_t begin = 0;
  std::size_t end = 0;
  TokenKind kind = TokenKind::word;
  bool known = false;
  std::vector<Subword> subwords;

  friend bool operator==(const Token&, const Token&) = default;
};

inline bool is_separator(const GraphemeCluster& c) {
  if (c.kind == ClusterKind::space) return true;
  if (c.kind != ClusterKind::other) return false;
  const std::u32string cps = utf8::decode(c.text);
  if (cps.size() != 1) return false;
  const char32_t cp = cps.front();
  if (cp < 0x80) return (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) || (cp >= 0x5B && cp <= 0x60) ||
                        (cp >= 0x7B && cp <= 0x7E);
  return classify(cp) == CharClass::symbol || (cp >= 0x00A1 && cp <= 0x00BF) || (cp >= 0x2010 && cp <= 0x205E) ||
         (cp >= 0x3000 && cp <= 0x303F);
}

/// Options for compound decomposition. A part counts as known when some
/// entry lies within min(max_part_distance, (clusters - 1) / 2) edits, so
/// one- and two-cluster parts must match exactly.
struct SplitOptions {
  std::size_t max_part_distance = 1;
};

/// One-cluster edit used by the noise augmenter.
enum class EditOp : std::uint8_t { remove, substitute, insert };

struct Edit {
  EditOp op = EditOp::remove;
  std::size_t position = 0;
  std::string replacement;
};

class Segmenter {
 public:
  Segmenter(const Lexicon& lexicon, const AffixList& affixes, SplitOptions split = {})
      : lexicon_(lexicon), affixes_(affixes), split_(split) {}

  std::vector<Token> segment(std::string_view sentence) const { return segment_clusters(cluster(sentence), 0); }

  /// Segments with clusters [focus_begin, focus_end) forced into one word
  /// token; the rest of the sentence is segmented normally.
  std::vector<Token> segment_with_focus(std::string_view sentence, std::size_t focus_begin,
                                        std::size_t focus_end) const {
    const Clusters clusters = cluster(sentence);
    if (focus_begin >= focus_end || focus_end > clusters.size()) throw Error("segment: focus span out of range");
    const std::span<const GraphemeCluster> all(clusters);
    auto tokens = segment_clusters(all.subspan(0, focus_begin), 0);
    tokens.push_back(make_word(all.subspan(focus_begin, focus_end - focus_begin), focus_begin));
    auto tail = segment_clusters(all.subspan(focus_end), focus_end);
    tokens.insert(tokens.end(), std::make_move_iterator(tail.begin()), std::make_move_iterator(tail.end()));
    return tokens;
  }

  /// Best decomposition of an unknown word into two or more parts: most
  /// known parts, then fewest parts, then longest leading parts. Nullopt
  /// when no decomposition has a known part.
  std::optional<std::vector<Subword>> split_compound(std::span<const GraphemeCluster> word,
                                                     std::size_t offset = 0) const {
    const std::size_t n = word.size();
    if (n < 2) return std::nullopt;

    std::vector<std::vector<int>> known(n, std::vector<int>(n + 1, -1));
    auto part_known = [&](std::size_t i, std::size_t j) {
      int& cached = known[i][j];
      if (cached < 0) cached = part_is_known(word.subspan(i, j - i)) ? 1 : 0;
      return cached == 1;
    };

    std::vector<Plan> best(n + 1);
    for (std::size_t i = n; i-- > 0;) {
      for (std::size_t len = 1; i + len <= n; ++len) {
        Plan cand = extend(len, part_known(i, i + len), best[i + len]);
        if (len == 1 || better(cand, best[i])) best[i] = std::move(cand);
      }
    }
    std::optional<Plan> top;
    for (std::size_t len = 1; len < n; ++len) {
      Plan cand = extend(len, part_known(0, len), best[len]);
      if (!top || better(cand, *top)) top = std::move(cand);
    }
    if (!top || top->known == 0) return std::nullopt;

    std::vector<Subword> parts;
    std::size_t at = 0;
    for (std::size_t len : top->lengths) {
      parts.push_back({join(word.subspan(at, len)), offset + at, offset + at + len, BoundaryLabel::space});
      at += len;
    }
    for (std::size_t t = 0; t + 1 < parts.size(); ++t) {
      if (affixes_.is_prefix(parts[t].text)) {
        parts[t].joiner = BoundaryLabel::prefix;
      } else if (affixes_.is_suffix(parts[t + 1].text)) {
        parts[t].joiner = BoundaryLabel::suffix;
      } else {
        parts[t].joiner = BoundaryLabel::compound;
      }
    }
    return parts;
  }

  /// Precondition: the token is unknown.
  std::optional<std::vector<Subword>> split_compound(const Token& token) const {
    if (token.known) throw std::invalid_argument("split_compound: token is a known word");
    const Clusters clusters = cluster(token.text);
    return split_compound(clusters, token.begin);
  }

  bool part_is_known(std::span<const GraphemeCluster> part) const {
    const std::size_t tol = std::min(split_.max_part_distance, (part.size() - 1) / 2);
    if (part.size() > lexicon_.max_clusters() + tol) return false;
    if (tol == 0) return lexicon_.contains(join(part));
    return !lexicon_.grapheme_within(part, tol).empty();
  }

  std::vector<Token> segment_clusters(std::span<const GraphemeCluster> clusters, std::size_t offset) const {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < clusters.size()) {
      const auto& c = clusters[i];
      if (is_separator(c) || c.kind == ClusterKind::digit_run) {
        tokens.push_back({c.text, offset + i, offset + i + 1,
                          c.kind == ClusterKind::digit_run ? TokenKind::number : TokenKind::separator, true, {}});
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < clusters.size() && !is_separator(clusters[j]) && clusters[j].kind != ClusterKind::digit_run) ++j;
      auto words = match_chunk(clusters.subspan(i, j - i), offset + i);
      tokens.insert(tokens.end(), std::make_move_iterator(words.begin()), std::make_move_iterator(words.end()));
      i = j;
    }
    return tokens;
  }

  const Lexicon& lexicon() const noexcept { return lexicon_; }
  const AffixList& affixes() const noexcept { return affixes_; }

 private:
  struct Plan {
    std::size_t known = 0;
    std::vector<std::size_t> lengths;
  };

  static Plan extend(std::size_t len, bool known, const Plan& rest) {
    Plan p;
    p.known = rest.known + (known ? 1 : 0);
    p.lengths.reserve(rest.lengths.size() + 1);
    p.lengths.push_back(len);
    p.lengths.insert(p.lengths.end(), rest.lengths.begin(), rest.lengths.end());
    return p;
  }

  static bool better(const Plan& a, const Plan& b) {
    if (a.known != b.known) return a.known > b.known;
    if (a.lengths.size() != b.lengths.size()) return a.lengths.size() < b.lengths.size();
    return std::lexicographical_compare(a.lengths.begin(), a.lengths.end(), b.lengths.begin(), b.lengths.end(),
                                        std::greater<>());
  }

  Token make_word(std::span<const GraphemeCluster> span, std::size_t begin) const {
    Token t{join(span), begin, begin + span.size(), TokenKind::word, false, {}};
    t.known = lexicon_.contains(t.text);
    if (!t.known) {
      if (auto parts = split_compound(span, begin)) {
        t.subwords = std::move(*parts);
        t.known = std::all_of(t.subwords.begin(), t.subwords.end(),
                              [&](const Subword& s) { return lexicon_.contains(s.text); });
      }
    }
    return t;
  }

  // match_len[i] lists lengths L with clusters[i, i+L) in the lexicon.
  std::vector<std::vector<std::size_t>> match_lengths(std::span<const GraphemeCluster> chunk) const {
    std::vector<std::vector<std::size_t>> out(chunk.size());
    const std::size_t max_len = lexicon_.max_clusters();
    for (std::size_t i = 0; i < chunk.size(); ++i) {
      std::string text;
      for (std::size_t len = 1; len <= max_len && i + len <= chunk.size(); ++len) {
        text += chunk[i + len - 1].text;
        if (lexicon_.contains(text)) out[i].push_back(len);
      }
    }
    return out;
  }

  std::vector<Token> match_chunk(std::span<const GraphemeCluster> chunk, std::size_t offset) const {
    const std::size_t n = chunk.size();
    const auto starts = match_lengths(chunk);
    std::vector<std::vector<std::size_t>> ends(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t len : starts[i]) ends[i + len].push_back(len);
    }

    // (begin, end, known) triples in chunk coordinates.
    using Span = std::tuple<std::size_t, std::size_t, bool>;
    std::vector<Span> forward;
    for (std::size_t i = 0; i < n;) {
      if (!starts[i].empty()) {
        forward.emplace_back(i, i + starts[i].back(), true);
        i += starts[i].back();
        continue;
      }
      std::size_t j = i + 1;
      while (j < n && starts[j].empty()) ++j;
      forward.emplace_back(i, j, false);
      i = j;
    }
    std::vector<Span> backward;
    for (std::size_t j = n; j > 0;) {
      if (!ends[j].empty()) {
        const std::size_t len = *std::max_element(ends[j].begin(), ends[j].end());
        backward.emplace_back(j - len, j, true);
        j -= len;
        continue;
      }
      std::size_t i = j - 1;
      while (i > 0 && ends[i].empty()) --i;
      backward.emplace_back(i, j, false);
      j = i;
    }
    std::reverse(backward.begin(), backward.end());

    const auto& chosen = backward.size() < forward.size() ? backward : forward;
    std::vector<Token> tokens;
    tokens.reserve(chosen.size());
    for (const auto& [b, e, known] : chosen) {
      if (known) {
        tokens.push_back({join(chunk.subspan(b, e - b)), offset + b, offset + e, TokenKind::word, true, {}});
      } else {
        tokens.push_back(make_word(chunk.subspan(b, e - b), offset + b));
      }
    }
    return tokens;
  }

  const Lexicon& lexicon_;
  const AffixList& affixes_;
  SplitOptions split_;
};

/// Per-cluster labels for a tiling token sequence.
inline std::vector<BoundaryLabel> labels_from_tokens(std::span<const Token> tokens) {
  std::vector<BoundaryLabel> labels;
  for (const auto& t : tokens) {
    const std::size_t first = labels.size();
    labels.resize(labels.size() + (t.end - t.begin), BoundaryLabel::no_space);
    for (const auto& s : t.subwords) {
      if (s.end > s.begin && s.end <= t.end) labels[first + (s.end - t.begin) - 1] = s.joiner;
    }
    if (t.end > t.begin) labels.back() = BoundaryLabel::space;
  }
  return labels;
}

/// Inverse of labels_from_tokens. A label other than no_space on the last
/// cluster is treated as space.
inline std::vector<Token> tokens_from_labels(std::span<const GraphemeCluster> clusters,
                                             std::span<const BoundaryLabel> labels, const Lexicon& lexicon) {
  if (clusters.size() != labels.size()) throw Error("tokens_from_labels: label count differs from cluster count");
  std::vector<Token> tokens;
  std::size_t begin = 0;
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    const bool last = i + 1 == clusters.size();
    if (labels[i] != BoundaryLabel::space && !last) continue;
    const auto span = clusters.subspan(begin, i + 1 - begin);
    Token t{join(span), begin, i + 1, TokenKind::word, false, {}};
    if (std::all_of(span.begin(), span.end(), [](const auto& c) { return is_separator(c); })) {
      t.kind = TokenKind::separator;
    } else if (std::all_of(span.begin(), span.end(), [](const auto& c) { return c.kind == ClusterKind::digit_run; })) {
      t.kind = TokenKind::number;
    }
    std::size_t sub_begin = begin;
    for (std::size_t j = begin; j < i; ++j) {
      if (labels[j] == BoundaryLabel::no_space || labels[j] == BoundaryLabel::space) continue;
      t.subwords.push_back({join(clusters.subspan(sub_begin, j + 1 - sub_begin)), sub_begin, j + 1, labels[j]});
      sub_begin = j + 1;
    }
    if (!t.subwords.empty()) {
      t.subwords.push_back({join(clusters.subspan(sub_begin, i + 1 - sub_begin)), sub_begin, i + 1,
                            BoundaryLabel::space});
    }
    if (t.kind != TokenKind::word) {
      t.known = true;
    } else {
      t.known = lexicon.contains(t.text) ||
                (!t.subwords.empty() && std::all_of(t.subwords.begin(), t.subwords.end(),
                                                    [&](const Subword& s) { return lexicon.contains(s.text); }));
    }
    tokens.push_back(std::move(t));
    begin = i + 1;
  }
  return tokens;
}

/// Pluggable boundary tagger: any model that labels clusters can drive the
/// checker through tokens_from_labels.
class BoundaryTagger {
 public:
  virtual ~BoundaryTagger() = default;
  virtual std::vector<BoundaryLabel> tag(std::span<const GraphemeCluster> clusters) const = 0;
};

class DictionaryTagger final : public BoundaryTagger {
 public:
  explicit DictionaryTagger(const Segmenter& segmenter) : segmenter_(segmenter) {}
  std::vector<BoundaryLabel> tag(std::span<const GraphemeCluster> clusters) const override {
    return labels_from_tokens(segmenter_.segment_clusters(clusters, 0));
  }

 private:
  const Segmenter& segmenter_;
};

/// Tokens joined by '|', subwords by their joiner notation.
inline std::string render(std::span<const Token> tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out += notation(BoundaryLabel::space);
    const auto& t = tokens[i];
    if (t.subwords.empty()) {
      out += t.text;
      continue;
    }
    for (std::size_t s = 0; s < t.subwords.size(); ++s) {
      out += t.subwords[s].text;
      if (s + 1 < t.subwords.size()) out += notation(t.subwords[s].joiner);
    }
  }
  return out;
}

/// Applies one cluster-level edit. Throws when the position is out of range,
/// the replacement is not a single cluster, or the result is not exactly one
/// cluster edit away from the input.
inline std::string augment(std::string_view word, const Edit& edit) {
  Clusters clusters = cluster(normalize(word));
  const std::size_t n = clusters.size();
  const std::size_t limit = edit.op == EditOp::insert ? n : (n == 0 ? 0 : n - 1);
  if (edit.position > limit || (edit.op != EditOp::insert && n == 0)) {
    throw Error("augment: position " + std::to_string(edit.position) + " out of range");
  }
  Clusters replacement;
  if (edit.op != EditOp::remove) {
    replacement = cluster(normalize(edit.replacement));
    if (replacement.size() != 1) throw Error("augment: replacement must be exactly one cluster");
  }
  const Clusters original = clusters;
  switch (edit.op) {
    case EditOp::remove:
      clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(edit.position));
      break;
    case EditOp::substitute:
      clusters[edit.position] = replacement.front();
      break;
    case EditOp::insert:
      clusters.insert(clusters.begin() + static_cast<std::ptrdiff_t>(edit.position), replacement.front());
      break;
  }
  std::string result = join(clusters);
  if (cluster_edit_distance(original, cluster(result)) != 1) {
    throw Error("augment: edit does not yield a single-cluster change");
  }
  return result;
}

inline std::string augment(std::string_view word, EditOp op, std::size_t position, std::string_view replacement = {}) {
  return augment(word, Edit{op, position, std::string(replacement)});
}

/// Draws a random valid edit (op, position and replacement from
/// `alphabet`); nullopt when none was found in a bounded number of tries.
template <class Rng>
std::optional<std::string> augment_random(std::string_view word, std::span<const std::string> alphabet, Rng& rng) {
  const std::size_t n = cluster(normalize(word)).size();
  std::uniform_int_distribution<int> op_dist(0, 2);
  for (int attempt = 0; attempt < 32; ++attempt) {
    Edit edit;
    edit.op = static_cast<EditOp>(op_dist(rng));
    if (edit.op != EditOp::insert && n == 0) continue;
    if (edit.op == EditOp::remove && n < 2) continue;
    const std::size_t limit = edit.op == EditOp::insert ? n : n - 1;
    edit.position = std::uniform_int_distribution<std::size_t>(0, limit)(rng);
    if (edit.op != EditOp::remove) {
      if (alphabet.empty()) continue;
      edit.replacement = alphabet[std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(rng)];
    }
    try {
      return augment(word, edit);
    } catch (const Error&) {
    }
  }
  return std::nullopt;
}

/// Seeded convenience form.
inline std::optional<std::string> augment_random(std::string_view word, std::span<const std::string> alphabet,
                                                 std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return augment_random(word, alphabet, rng);
}

}  // namespace khspell
