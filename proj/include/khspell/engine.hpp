#pragma once

// Resource paths and loaders shared by the command line and the benchmarks.

#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>

#include "khspell/char_lm.hpp"
#include "khspell/checker.hpp"
#include "khspell/error.hpp"
#include "khspell/g2p.hpp"
#include "khspell/lexicon.hpp"
#include "khspell/ner.hpp"
#include "khspell/segmenter.hpp"

#ifndef KHSPELL_RESOURCE_DIR
#define KHSPELL_RESOURCE_DIR "resources"
#endif

namespace khspell {

inline std::filesystem::path resource_dir() {
  if (const char* env = std::getenv("KHSPELL_RESOURCES"); env && *env) return env;
  return KHSPELL_RESOURCE_DIR;
}

struct EngineConfig {
  std::filesystem::path lexicon;
  std::filesystem::path pron;  // optional
  std::filesystem::path rules = resource_dir() / "g2p" / "rules.tsv";
  std::filesystem::path gazetteer;  // optional
  std::filesystem::path honorifics = resource_dir() / "ner" / "honorifics.tsv";
  std::filesystem::path affixes = resource_dir() / "segmenter" / "affixes.tsv";
  std::filesystem::path lm;
  CheckerConfig checker;
};

namespace detail {

inline void require_file(const std::filesystem::path& path, const char* what) {
  if (path.empty()) throw Error(std::string("no ") + what + " given");
  if (!std::filesystem::is_regular_file(path)) throw Error(std::string(what) + " not found: " + path.string());
}

}  // namespace detail

inline G2p load_g2p(const EngineConfig& cfg) {
  detail::require_file(cfg.rules, "rule table");
  PronLexicon pron;
  if (!cfg.pron.empty()) {
    detail::require_file(cfg.pron, "pronunciation lexicon");
    pron = PronLexicon::load_file(cfg.pron);
  }
  return G2p(std::move(pron), RuleTable::load_file(cfg.rules));
}

inline Lexicon load_lexicon(const EngineConfig& cfg, const G2p& g2p) {
  detail::require_file(cfg.lexicon, "lexicon");
  return Lexicon::load_file(cfg.lexicon, g2p);
}

inline AffixList load_affixes(const EngineConfig& cfg) {
  if (cfg.affixes.empty()) return {};
  detail::require_file(cfg.affixes, "affix list");
  return AffixList::load_file(cfg.affixes);
}

inline Gazetteer load_gazetteer(const EngineConfig& cfg) {
  Gazetteer gaz;
  if (!cfg.gazetteer.empty()) {
    detail::require_file(cfg.gazetteer, "gazetteer");
    gaz = Gazetteer::load_file(cfg.gazetteer);
  }
  if (!cfg.honorifics.empty()) {
    detail::require_file(cfg.honorifics, "honorific list");
    gaz.load_honorifics_file(cfg.honorifics);
  }
  return gaz;
}

inline CharLm load_lm(const EngineConfig& cfg) {
  detail::require_file(cfg.lm, "language model");
  return CharLm::load_file(cfg.lm);
}

/// Loads every resource the checker needs; any missing or malformed file
/// throws with its path in the message.
inline Engine load_engine(const EngineConfig& cfg) {
  cfg.checker.validate();
  G2p g2p = load_g2p(cfg);
  Lexicon lexicon = load_lexicon(cfg, g2p);
  Gazetteer gaz = load_gazetteer(cfg);
  AffixList affixes = load_affixes(cfg);
  CharLm lm = load_lm(cfg);
  return Engine{std::move(g2p), std::move(lexicon), std::move(gaz), std::move(affixes), std::move(lm)};
}

}  // namespace khspell
