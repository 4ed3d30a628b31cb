#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "khspell/error.hpp"
#include "khspell/g2p.hpp"
#include "khspell/script.hpp"
#include "khspell/segmenter.hpp"
#include "khspell/tsv.hpp"

namespace khspell {

/// Named-entity span in cluster offsets of the normalized sentence.
struct EntitySpan {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::string surface;
  std::string source;

  friend bool operator==(const EntitySpan&, const EntitySpan&) = default;
};

inline constexpr std::string_view kHonorificSource = "honorific";

class Gazetteer {
 public:
  Gazetteer() = default;

  /// One name per line.
  static Gazetteer load(std::istream& names, const std::string& source = "<gazetteer>") {
    Gazetteer gaz;
    gaz.id_ = source;
    tsv::for_each_record(names, [&](std::size_t line, std::string_view record) {
      if (!gaz.add_name(tsv::trim(tsv::split(record)[0]))) throw ParseError(source, line, "empty name");
    });
    return gaz;
  }

  static Gazetteer load_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open gazetteer: " + path.string());
    return load(in, path.string());
  }

  /// `honorific<TAB>gloss`; only the first column is used.
  void load_honorifics(std::istream& in, const std::string& source = "<honorifics>") {
    tsv::for_each_record(in, [&](std::size_t line, std::string_view record) {
      if (!add_honorific(tsv::trim(tsv::split(record)[0]))) throw ParseError(source, line, "empty honorific");
    });
  }

  void load_honorifics_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open honorific list: " + path.string());
    load_honorifics(in, path.string());
  }

  bool add_name(std::string_view name) {
    std::string n = normalize(name);
    if (n.empty()) return false;
    max_name_clusters_ = std::max(max_name_clusters_, cluster(n).size());
    names_.emplace(std::move(n), true);
    return true;
  }

  bool add_honorific(std::string_view honorific) {
    std::string h = normalize(honorific);
    if (h.empty()) return false;
    max_honorific_clusters_ = std::max(max_honorific_clusters_, cluster(h).size());
    honorifics_.emplace(std::move(h), true);
    return true;
  }

  void clear_honorifics() {
    honorifics_.clear();
    max_honorific_clusters_ = 0;
  }

  bool contains(std::string_view name) const { return names_.find(name) != names_.end(); }
  bool is_honorific(std::string_view s) const { return honorifics_.find(s) != honorifics_.end(); }
  std::size_t size() const noexcept { return names_.size(); }
  std::size_t honorific_count() const noexcept { return honorifics_.size(); }
  std::size_t max_name_clusters() const noexcept { return max_name_clusters_; }
  std::size_t max_honorific_clusters() const noexcept { return max_honorific_clusters_; }
  const std::string& id() const noexcept { return id_; }

 private:
  StringMap<bool> names_;
  StringMap<bool> honorifics_;
  std::size_t max_name_clusters_ = 0;
  std::size_t max_honorific_clusters_ = 0;
  std::string id_ = "gazetteer";
};

namespace detail {

// Leftmost-longest scan; calls hit(begin, end) for each match.
template <class Contains, class Hit>
void scan_longest(std::span<const GraphemeCluster> clusters, std::size_t max_len, Contains&& contains, Hit&& hit) {
  std::size_t i = 0;
  while (i < clusters.size()) {
    std::size_t best = 0;
    std::string text;
    for (std::size_t len = 1; len <= max_len && i + len <= clusters.size(); ++len) {
      text += clusters[i + len - 1].text;
      if (contains(text)) best = len;
    }
    if (best > 0) {
      hit(i, i + best);
      i += best;
    } else {
      ++i;
    }
  }
}

}  // namespace detail

/// Gazetteer names, leftmost-longest and non-overlapping. When `tokens`
/// (the sentence's segmentation) is given, an unknown word token right after
/// an honorific, skipping whitespace, is also an entity.
inline std::vector<EntitySpan> find_entities(std::string_view sentence, const Gazetteer& gaz,
                                             std::span<const Token> tokens = {}) {
  const Clusters clusters = cluster(sentence);
  std::vector<EntitySpan> spans;
  detail::scan_longest(
      clusters, gaz.max_name_clusters(), [&](std::string_view s) { return gaz.contains(s); },
      [&](std::size_t b, std::size_t e) {
        spans.push_back({b, e, join(std::span(clusters).subspan(b, e - b)), gaz.id()});
      });

  if (!tokens.empty() && gaz.honorific_count() > 0) {
    auto overlaps = [&](std::size_t b, std::size_t e) {
      return std::any_of(spans.begin(), spans.end(), [&](const EntitySpan& s) { return s.begin < e && b < s.end; });
    };
    std::vector<EntitySpan> extra;
    detail::scan_longest(
        clusters, gaz.max_honorific_clusters(), [&](std::string_view s) { return gaz.is_honorific(s); },
        [&](std::size_t, std::size_t e) {
          auto it = std::find_if(tokens.begin(), tokens.end(), [&](const Token& t) { return t.begin >= e; });
          while (it != tokens.end() && it->kind == TokenKind::separator &&
                 cluster(it->text).front().kind == ClusterKind::space) {
            ++it;
          }
          if (it == tokens.end() || it->kind != TokenKind::word || it->known) return;
          if (overlaps(it->begin, it->end)) return;
          extra.push_back({it->begin, it->end, it->text, std::string(kHonorificSource)});
        });
    for (auto& s : extra) {
      if (!overlaps(s.begin, s.end)) spans.push_back(std::move(s));
    }
    std::sort(spans.begin(), spans.end(), [](const EntitySpan& a, const EntitySpan& b) { return a.begin < b.begin; });
  }
  return spans;
}

/// 1 on every cluster inside a span, else 0.
inline std::vector<std::uint8_t> char_labels(std::string_view sentence, std::span<const EntitySpan> spans) {
  const std::size_t n = cluster(sentence).size();
  std::vector<std::uint8_t> labels(n, 0);
  for (const auto& s : spans) {
    if (s.begin >= s.end || s.end > n) {
      throw Error("char_labels: span [" + std::to_string(s.begin) + ", " + std::to_string(s.end) +
                  ") out of range for " + std::to_string(n) + " clusters");
    }
    std::fill(labels.begin() + static_cast<std::ptrdiff_t>(s.begin), labels.begin() + static_cast<std::ptrdiff_t>(s.end),
              std::uint8_t{1});
  }
  return labels;
}

}  // namespace khspell
