#pragma once

// The `khspell` command line. `run` takes its streams as arguments so tests
// can drive it in-process.
//
// Engine options live on the top-level command and may appear after the
// subcommand; a `--config FILE` of `key = value` lines (INI/TOML style,
// keys named after the long options) sets the same values, and flags given
// on the command line win.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "khspell/char_lm.hpp"
#include "khspell/checker.hpp"
#include "khspell/engine.hpp"
#include "khspell/error.hpp"
#include "khspell/evalbench.hpp"
#include "khspell/g2p.hpp"
#include "khspell/ner.hpp"
#include "khspell/script.hpp"
#include "khspell/segmenter.hpp"
#include "khspell/tsv.hpp"
#include "khspell/version.hpp"

namespace khspell::cli {

using json = nlohmann::ordered_json;

namespace detail {

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

inline std::string dump(const json& j) { return j.dump(-1, ' ', false, json::error_handler_t::replace); }

// Sentences from positionals, else from --input, else from `in`. Blank
// lines are skipped.
inline std::vector<std::string> read_inputs(const std::vector<std::string>& positional,
                                            const std::string& input_file, std::istream& in) {
  std::vector<std::string> lines;
  auto take = [&](std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!tsv::trim(line).empty()) lines.push_back(std::move(line));
  };
  if (!positional.empty()) {
    for (const auto& p : positional) take(p);
    return lines;
  }
  std::ifstream file;
  std::istream* src = &in;
  if (!input_file.empty()) {
    file.open(input_file);
    if (!file) throw Error("cannot open input: " + input_file);
    src = &file;
  }
  std::string line;
  while (std::getline(*src, line)) take(line);
  return lines;
}

inline std::string_view kind_name(TokenKind k) {
  switch (k) {
    case TokenKind::word: return "word";
    case TokenKind::separator: return "separator";
    case TokenKind::number: return "number";
  }
  return "word";
}

inline json token_json(const Token& t) {
  json j{{"text", t.text}, {"begin", t.begin}, {"end", t.end}, {"kind", kind_name(t.kind)}, {"known", t.known}};
  if (!t.subwords.empty()) {
    json subs = json::array();
    for (const auto& s : t.subwords) {
      subs.push_back({{"text", s.text}, {"begin", s.begin}, {"end", s.end}, {"joiner", to_string(s.joiner)}});
    }
    j["subwords"] = std::move(subs);
  }
  return j;
}

inline json candidate_json(const Candidate& c) {
  return {{"surface", c.surface},
          {"grapheme_dist", c.grapheme_dist},
          {"phoneme_dist", c.phoneme_dist},
          {"frequency", c.frequency},
          {"origin", to_string(c.origin)}};
}

inline json entity_json(const EntitySpan& e) {
  return {{"surface", e.surface}, {"begin", e.begin}, {"end", e.end}, {"source", e.source}};
}

inline json report_json(const CheckReport& r) {
  json j{{"sentence", r.sentence}};
  j["tokens"] = json::array();
  for (const auto& t : r.tokens) j["tokens"].push_back(token_json(t));
  j["entities"] = json::array();
  for (const auto& e : r.entities) j["entities"].push_back(entity_json(e));
  j["flags"] = r.flagged;
  j["suggestions"] = json::array();
  for (std::size_t f = 0; f < r.flagged.size(); ++f) {
    json cands = json::array();
    for (const auto& c : r.suggestions[f]) cands.push_back(candidate_json(c));
    j["suggestions"].push_back({{"token", r.flagged[f]}, {"word", r.tokens[r.flagged[f]].text}, {"candidates", cands}});
  }
  j["hypotheses"] = json::array();
  for (const auto& h : r.hypotheses) j["hypotheses"].push_back({{"sentence", h.sentence}, {"log_prob", h.score}});
  j["outcomes"] = json::array();
  for (auto o : r.outcomes) j["outcomes"].push_back(to_string(o));
  return j;
}

inline json accuracy_json(const AccuracyReport& r) {
  auto stratum = [&](const StratumCounts& s) {
    json acc = json::array();
    for (std::size_t n = 1; n <= r.top_n; ++n) acc.push_back(r.accuracy(n, s));
    return json{{"total", s.total}, {"correct", s.correct}, {"accuracy", acc}};
  };
  json j{{"top_n", r.top_n}};
  j["strata"] = json::array();
  for (const auto& [d, s] : r.strata) {
    json row = stratum(s);
    row["edit_dist"] = d;
    j["strata"].push_back(std::move(row));
  }
  j["overall"] = stratum(r.overall);
  j["categories"] = json::object();
  for (auto o : kOutcomes) {
    j["categories"][std::string(to_string(o))] = {{"count", r.categories.at(o)},
                                                  {"percent", percent1(r.categories.at(o), r.overall.total)}};
  }
  j["histogram"] = json::array();
  for (const auto& [d, c] : r.histogram) j["histogram"].push_back({{"edit_dist", d}, {"count", c}});
  return j;
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write: " + path);
  f << text;
  if (!f) throw Error("write failed: " + path);
}

}  // namespace detail

/// Runs the command line; returns the process exit status.
inline int run(std::vector<std::string> args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Khmer spellchecker", "khspell"};
  app.set_config("--config", "", "Read option values from a key = value file");
  app.require_subcommand(0, 1);

  EngineConfig cfg;
  std::string lexicon, pron, rules = cfg.rules.string(), gazetteer, honorifics = cfg.honorifics.string(),
                       affixes = cfg.affixes.string(), lm;
  bool as_json = false;
  bool show_version = false;
  std::size_t threads = 1;
  app.add_option("--lexicon", lexicon, "Lexicon TSV (surface, optional phonemes, optional frequency)");
  app.add_option("--pron", pron, "Pronunciation lexicon TSV");
  app.add_option("--rules", rules, "G2P rule table")->capture_default_str();
  app.add_option("--gazetteer", gazetteer, "Person names, one per line");
  app.add_option("--honorifics", honorifics, "Honorific list; empty to disable")->capture_default_str();
  app.add_option("--affixes", affixes, "Prefix/suffix list; empty to disable")->capture_default_str();
  app.add_option("--lm", lm, "Character language model");
  app.add_option("--k", cfg.checker.k, "Candidates kept per word")->capture_default_str();
  app.add_option("--eps", cfg.checker.eps, "Grapheme distance radius")->capture_default_str();
  app.add_option("--eps-p", cfg.checker.eps_p, "Phoneme distance radius")->capture_default_str();
  app.add_option("--beam", cfg.checker.beam, "Hypotheses scored per sentence")->capture_default_str();
  app.add_option("--top-n", cfg.checker.top_n, "Hypotheses reported")->capture_default_str();
  app.add_option("--threads", threads, "Worker threads for bench")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_flag("--json", as_json, "Machine-readable output");
  app.add_flag("--version", show_version, "Print engine and resource versions");

  std::vector<std::string> positional;
  std::string input_file;
  auto add_input = [&](CLI::App* sub, const char* what) {
    sub->add_option("inputs", positional, what);
    sub->add_option("--input", input_file, "Read lines from FILE instead of stdin");
    sub->fallthrough();
  };

  auto* check_cmd = app.add_subcommand("check", "Spellcheck sentences");
  add_input(check_cmd, "Sentences");
  auto* segment_cmd = app.add_subcommand("segment", "Segment sentences into words");
  add_input(segment_cmd, "Sentences");
  auto* g2p_cmd = app.add_subcommand("g2p", "Convert words to phonemes");
  add_input(g2p_cmd, "Words");
  std::string g2p_eval;
  g2p_cmd->add_option("--eval", g2p_eval, "Score against a surface<TAB>phonemes reference file (CER)");
  auto* ner_cmd = app.add_subcommand("ner", "Find named entities");
  add_input(ner_cmd, "Sentences");

  auto* train_cmd = app.add_subcommand("lm-train", "Train a character language model");
  int order = CharLm::kDefaultOrder;
  std::string corpus, model_out;
  train_cmd->add_option("--order", order, "n-gram order")->capture_default_str()->check(CLI::Range(2, 16));
  train_cmd->add_option("corpus", corpus, "Training text, one sentence per line")->required();
  train_cmd->add_option("-o,--output", model_out, "Model output path")->required();
  train_cmd->fallthrough();

  auto* score_cmd = app.add_subcommand("lm-score", "Log-likelihood of sentences");
  std::string model_in;
  score_cmd->add_option("model", model_in, "Model path")->required();
  add_input(score_cmd, "Sentences");

  auto* bench_cmd = app.add_subcommand("bench", "Run a benchmark dataset");
  std::string which, dataset, report_path;
  bench_cmd->add_option("which", which, "a (correction accuracy) or b (named-entity flags)")
      ->required()
      ->check(CLI::IsMember({"a", "b"}));
  bench_cmd->add_option("--dataset", dataset, "Dataset TSV")->required();
  bench_cmd->add_option("--report", report_path, "Write the TSV report here instead of stdout");
  bench_cmd->fallthrough();

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    cfg.lexicon = lexicon;
    cfg.pron = pron;
    cfg.rules = rules;
    cfg.gazetteer = gazetteer;
    cfg.honorifics = honorifics;
    cfg.affixes = affixes;
    cfg.lm = lm;

    if (show_version) {
      out << "khspell " << kVersion << '\n';
      out << "char-classes v" << kCharClassTableVersion << '\n';
      if (std::filesystem::is_regular_file(cfg.rules)) {
        out << "g2p-rules v" << RuleTable::load_file(cfg.rules).version() << '\n';
      } else {
        out << "g2p-rules unavailable\n";
      }
      out << "lm-format v" << CharLm::kFormatVersion << '\n';
      return 0;
    }

    if (app.got_subcommand(check_cmd)) {
      const Engine engine = load_engine(cfg);
      for (const auto& s : detail::read_inputs(positional, input_file, in)) {
        const CheckReport r = check(s, engine, cfg.checker);
        if (as_json) {
          out << detail::dump(detail::report_json(r)) << '\n';
          continue;
        }
        out << r.best().sentence << '\n';
        for (std::size_t f = 0; f < r.flagged.size(); ++f) {
          out << "  " << r.tokens[r.flagged[f]].text << " ->";
          if (r.suggestions[f].empty()) out << " (none)";
          for (const auto& c : r.suggestions[f]) out << ' ' << c.surface;
          out << '\n';
        }
      }
    } else if (app.got_subcommand(segment_cmd)) {
      const G2p g2p = load_g2p(cfg);
      const Lexicon lex = load_lexicon(cfg, g2p);
      const AffixList aff = load_affixes(cfg);
      const Segmenter seg(lex, aff);
      for (const auto& s : detail::read_inputs(positional, input_file, in)) {
        const std::string n = normalize(s);
        const auto tokens = seg.segment(n);
        if (as_json) {
          json j{{"sentence", n}, {"tokens", json::array()}, {"labels", json::array()}};
          for (const auto& t : tokens) j["tokens"].push_back(detail::token_json(t));
          for (auto l : labels_from_tokens(tokens)) j["labels"].push_back(to_string(l));
          out << detail::dump(j) << '\n';
        } else {
          out << render(tokens) << '\n';
        }
      }
    } else if (app.got_subcommand(g2p_cmd)) {
      const G2p g2p = load_g2p(cfg);
      if (!g2p_eval.empty()) {
        std::ifstream f(g2p_eval);
        if (!f) throw Error("cannot open reference: " + g2p_eval);
        std::size_t errors = 0, ref_len = 0, words = 0;
        tsv::for_each_record(f, [&](std::size_t line, std::string_view rec) {
          const auto fields = tsv::split(rec);
          if (fields.size() < 2) throw ParseError(g2p_eval, line, "expected surface<TAB>phonemes");
          const Phonemes ref = tsv::split_words(fields[1]);
          if (ref.empty()) throw ParseError(g2p_eval, line, "empty reference");
          errors += phoneme_edit_distance(g2p.to_phonemes(normalize(fields[0])), ref);
          ref_len += ref.size();
          ++words;
        });
        if (words == 0) throw Error("empty reference: " + g2p_eval);
        const double rate = static_cast<double>(errors) / static_cast<double>(ref_len);
        if (as_json) {
          out << detail::dump(json{{"words", words}, {"errors", errors}, {"reference_tokens", ref_len}, {"cer", rate}})
              << '\n';
        } else {
          out << "words\t" << words << "\nerrors\t" << errors << "\nreference_tokens\t" << ref_len << "\ncer\t"
              << detail::format_double(rate) << '\n';
        }
        return 0;
      }
      for (const auto& w : detail::read_inputs(positional, input_file, in)) {
        const std::string n = normalize(tsv::trim(w));
        const Phonemes ph = g2p.to_phonemes(n);
        if (as_json) {
          out << detail::dump(json{{"word", n}, {"phonemes", ph}}) << '\n';
        } else {
          out << n << '\t';
          for (std::size_t i = 0; i < ph.size(); ++i) out << (i ? " " : "") << ph[i];
          out << '\n';
        }
      }
    } else if (app.got_subcommand(ner_cmd)) {
      const Gazetteer gaz = load_gazetteer(cfg);
      std::optional<G2p> g2p;
      std::optional<Lexicon> lex;
      AffixList aff;
      if (!cfg.lexicon.empty()) {
        g2p.emplace(load_g2p(cfg));
        lex.emplace(load_lexicon(cfg, *g2p));
        aff = load_affixes(cfg);
      }
      for (const auto& s : detail::read_inputs(positional, input_file, in)) {
        const std::string n = normalize(s);
        std::vector<Token> tokens;
        if (lex) tokens = Segmenter(*lex, aff).segment(n);
        const auto spans = find_entities(n, gaz, tokens);
        if (as_json) {
          json j{{"sentence", n}, {"entities", json::array()}, {"labels", char_labels(n, spans)}};
          for (const auto& e : spans) j["entities"].push_back(detail::entity_json(e));
          out << detail::dump(j) << '\n';
          continue;
        }
        const Clusters cl = cluster(n);
        std::size_t at = 0;
        for (const auto& e : spans) {
          for (; at < e.begin; ++at) out << cl[at].text;
          out << '[' << e.surface << ']';
          at = e.end;
        }
        for (; at < cl.size(); ++at) out << cl[at].text;
        out << '\n';
      }
    } else if (app.got_subcommand(train_cmd)) {
      std::ifstream f(corpus);
      if (!f) throw Error("cannot open corpus: " + corpus);
      CharLm::Trainer trainer(order);
      std::string line;
      while (std::getline(f, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!tsv::trim(line).empty()) trainer.add_line(normalize(line));
      }
      const CharLm model = std::move(trainer).finish();
      std::ostringstream buf;
      model.save(buf);
      detail::write_text(model_out, buf.str());
      if (as_json) {
        out << detail::dump(json{{"model", model_out}, {"order", model.order()}, {"vocab", model.vocab_size()}}) << '\n';
      } else {
        out << "order\t" << model.order() << "\nvocab\t" << model.vocab_size() << '\n';
      }
    } else if (app.got_subcommand(score_cmd)) {
      const CharLm model = CharLm::load_file(model_in);
      for (const auto& s : detail::read_inputs(positional, input_file, in)) {
        const std::string n = normalize(s);
        const double lp = model.log_prob(n);
        if (as_json) {
          out << detail::dump(json{{"sentence", n}, {"log_prob", lp}}) << '\n';
        } else {
          out << detail::format_double(lp) << '\t' << n << '\n';
        }
      }
    } else if (app.got_subcommand(bench_cmd)) {
      std::string report;
      json j;
      if (which == "a") {
        const Engine engine = load_engine(cfg);
        const auto records = load_dataset_a_file(dataset);
        const AccuracyReport r = evaluate_a(records, engine, cfg.checker, threads);
        report = accuracy_table_tsv(r) + "\n" + category_table_tsv(r) + "\n" + histogram_tsv(r);
        j = detail::accuracy_json(r);
      } else {
        const G2p g2p = load_g2p(cfg);
        const Lexicon lex = load_lexicon(cfg, g2p);
        const Gazetteer gaz = load_gazetteer(cfg);
        const AffixList aff = load_affixes(cfg);
        const auto records = load_dataset_b_file(dataset);
        const FlagReport r = evaluate_b(records, lex, gaz, aff, threads);
        report = flag_table_tsv(r) + "\n" + flag_rate_tsv(r);
        j = json{{"total", r.total}, {"flagged", r.flagged}, {"not_flagged", r.not_flagged()}, {"accuracy", r.accuracy()}};
      }
      if (!report_path.empty()) detail::write_text(report_path, report);
      if (as_json) {
        out << detail::dump(j) << '\n';
      } else if (report_path.empty()) {
        out << report;
      }
    } else {
      err << app.help();
      return 1;
    }
  } catch (const std::exception& e) {
    err << "khspell: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace khspell::cli
