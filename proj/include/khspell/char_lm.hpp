#pragma once

// Character n-gram language model with interpolated Witten-Bell smoothing.
//
//   P(w | h) = (c(h, w) + T(h) * P(w | h')) / (c(h) + T(h))
//
// where h' drops the oldest symbol of h, c(h) is the number of observations
// of context h, and T(h) the number of distinct symbols seen after it. An
// unseen context backs off to h' unchanged. The recursion bottoms out in the
// uniform distribution over the vocabulary (training code points plus UNK).
// Each line is padded on the left with order-1 START symbols; START is
// context only and never predicted.
//
// Serialized form (UTF-8 text, one record per line, sorted, byte-stable):
//
//   khspell-charlm<TAB>1
//   order<TAB>N
//   vocab<TAB>HEX HEX ...
//   ngram<TAB>CONTEXT<TAB>SYMBOL<TAB>COUNT
//
// Symbols are upper-case hex code points; START is written as `S` and an
// empty context as `-`.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "khspell/error.hpp"
#include "khspell/tsv.hpp"
#include "khspell/utf8.hpp"

namespace khspell {

class CharLm {
 public:
  static constexpr char32_t kUnk = 0x110000;
  static constexpr char32_t kStart = 0x110001;
  static constexpr int kFormatVersion = 1;
  static constexpr int kDefaultOrder = 5;

  class Trainer {
   public:
    explicit Trainer(int order) : order_(order) {
      if (order < 2) throw Error("lm: order must be at least 2");
    }

    /// Counts one line `weight` times.
    void add_line(std::string_view line, std::uint64_t weight = 1) {
      const std::u32string cps = utf8::decode(line);
      ++lines_;
      if (weight == 0) return;
      std::u32string padded(static_cast<std::size_t>(order_ - 1), kStart);
      padded += cps;
      for (std::size_t i = static_cast<std::size_t>(order_ - 1); i < padded.size(); ++i) {
        const char32_t w = padded[i];
        vocab_.insert(w);
        for (int len = 0; len < order_; ++len) {
          counts_[padded.substr(i - static_cast<std::size_t>(len), static_cast<std::size_t>(len))][w] += weight;
        }
      }
    }

    CharLm finish() && {
      if (lines_ == 0) throw Error("lm: empty training corpus");
      return CharLm(order_, std::move(vocab_), std::move(counts_));
    }

   private:
    int order_;
    std::size_t lines_ = 0;
    std::set<char32_t> vocab_;
    std::map<std::u32string, std::map<char32_t, std::uint64_t>> counts_;
  };

  template <class Lines>
  static CharLm train(const Lines& lines, int order = kDefaultOrder) {
    Trainer trainer(order);
    for (const auto& line : lines) trainer.add_line(line);
    return std::move(trainer).finish();
  }

  int order() const noexcept { return order_; }
  /// Predictable symbols: training code points plus UNK.
  std::size_t vocab_size() const noexcept { return vocab_.size(); }
  const std::vector<char32_t>& vocabulary() const noexcept { return vocab_; }
  bool in_vocab(char32_t cp) const { return std::binary_search(vocab_.begin(), vocab_.end(), cp); }

  /// P(symbol | context), where context holds the preceding symbols (START
  /// padded, at least order-1 long) and unseen code points are UNK.
  double prob(std::u32string_view context, char32_t symbol) const {
    double p = 1.0 / static_cast<double>(vocab_.size());
    const std::size_t max_len = std::min(context.size(), static_cast<std::size_t>(order_ - 1));
    for (std::size_t len = 0; len <= max_len; ++len) {
      const auto it = stats_.find(std::u32string(context.substr(context.size() - len)));
      if (it == stats_.end()) break;
      const Stats& s = it->second;
      std::uint64_t c = 0;
      if (const auto nt = s.next.find(symbol); nt != s.next.end()) c = nt->second;
      const double types = static_cast<double>(s.next.size());
      p = (static_cast<double>(c) + types * p) / (static_cast<double>(s.total) + types);
    }
    return p;
  }

  /// Natural-log likelihood of a line; 0 for the empty string.
  double log_prob(std::string_view sentence) const {
    const std::u32string symbols = map_symbols(utf8::decode(sentence));
    std::u32string padded(static_cast<std::size_t>(order_ - 1), kStart);
    padded += symbols;
    double total = 0.0;
    for (std::size_t i = static_cast<std::size_t>(order_ - 1); i < padded.size(); ++i) {
      total += std::log(prob(std::u32string_view(padded).substr(0, i), padded[i]));
    }
    return total;
  }

  /// Distribution of the next symbol after `context` (a sentence prefix),
  /// in vocabulary order. UNK appears as kUnk.
  std::vector<std::pair<char32_t, double>> next_char_dist(std::string_view context) const {
    std::u32string padded(static_cast<std::size_t>(order_ - 1), kStart);
    padded += map_symbols(utf8::decode(context));
    std::vector<std::pair<char32_t, double>> dist;
    dist.reserve(vocab_.size());
    for (char32_t w : vocab_) dist.emplace_back(w, prob(padded, w));
    return dist;
  }

  void save(std::ostream& out) const {
    out << "khspell-charlm\t" << kFormatVersion << '\n';
    out << "order\t" << order_ << '\n';
    out << "vocab\t";
    bool first = true;
    for (char32_t w : vocab_) {
      if (w == kUnk) continue;
      if (!first) out << ' ';
      out << hex(w);
      first = false;
    }
    out << '\n';
    for (const auto& [ctx, s] : stats_) {
      std::string ctx_text;
      for (char32_t c : ctx) {
        if (!ctx_text.empty()) ctx_text += ' ';
        ctx_text += hex(c);
      }
      if (ctx_text.empty()) ctx_text = "-";
      for (const auto& [w, c] : s.next) out << "ngram\t" << ctx_text << '\t' << hex(w) << '\t' << c << '\n';
    }
  }

  static CharLm load(std::istream& in, const std::string& source = "<lm>") {
    std::string line;
    std::size_t number = 0;
    int order = 0;
    std::set<char32_t> vocab;
    std::map<std::u32string, std::map<char32_t, std::uint64_t>> counts;
    bool header = false;
    while (std::getline(in, line)) {
      ++number;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      const auto f = tsv::split(line);
      if (!header) {
        if (f.size() != 2 || f[0] != "khspell-charlm") throw ParseError(source, number, "not a khspell char LM");
        if (std::atoi(std::string(f[1]).c_str()) != kFormatVersion) {
          throw ParseError(source, number, "unsupported LM format version " + std::string(f[1]));
        }
        header = true;
      } else if (f[0] == "order" && f.size() == 2) {
        order = std::atoi(std::string(f[1]).c_str());
        if (order < 2) throw ParseError(source, number, "order must be at least 2");
      } else if (f[0] == "vocab" && f.size() == 2) {
        for (const auto& tok : tsv::split_words(f[1])) vocab.insert(parse_symbol(tok, source, number));
      } else if (f[0] == "ngram" && f.size() == 4) {
        std::u32string ctx;
        if (f[1] != "-") {
          for (const auto& tok : tsv::split_words(f[1])) ctx.push_back(parse_symbol(tok, source, number));
        }
        const char32_t w = parse_symbol(f[2], source, number);
        std::uint64_t c = 0;
        try {
          c = std::stoull(std::string(f[3]));
        } catch (const std::exception&) {
          throw ParseError(source, number, "bad count");
        }
        counts[ctx][w] = c;
      } else {
        throw ParseError(source, number, "unrecognized record");
      }
    }
    if (!header || order == 0) throw ParseError(source, 0, "truncated LM file");
    return CharLm(order, std::move(vocab), std::move(counts));
  }

  static CharLm load_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open language model: " + path.string());
    return load(in, path.string());
  }

  friend bool operator==(const CharLm& a, const CharLm& b) {
    return a.order_ == b.order_ && a.vocab_ == b.vocab_ && a.stats_ == b.stats_;
  }

 private:
  struct Stats {
    std::uint64_t total = 0;
    std::map<char32_t, std::uint64_t> next;
    friend bool operator==(const Stats&, const Stats&) = default;
  };

  CharLm(int order, std::set<char32_t> vocab, std::map<std::u32string, std::map<char32_t, std::uint64_t>> counts)
      : order_(order) {
    vocab.erase(kStart);
    vocab.insert(kUnk);
    vocab_.assign(vocab.begin(), vocab.end());
    for (auto& [ctx, next] : counts) {
      Stats s;
      for (const auto& [w, c] : next) s.total += c;
      s.next = std::move(next);
      stats_.emplace(ctx, std::move(s));
    }
  }

  std::u32string map_symbols(std::u32string cps) const {
    for (auto& c : cps) {
      if (!in_vocab(c)) c = kUnk;
    }
    return cps;
  }

  static std::string hex(char32_t c) {
    if (c == kStart) return "S";
    static constexpr char kDigits[] = "0123456789ABCDEF";
    std::string out;
    for (int shift = 20; shift >= 0; shift -= 4) {
      const int d = (c >> shift) & 0xF;
      if (d != 0 || !out.empty() || shift < 16) out.push_back(kDigits[d]);
    }
    return out;
  }

  static char32_t parse_symbol(std::string_view tok, const std::string& source, std::size_t line) {
    if (tok == "S") return kStart;
    char32_t v = 0;
    if (tok.empty() || tok.size() > 6) throw ParseError(source, line, "bad symbol");
    for (char ch : tok) {
      v <<= 4;
      if (ch >= '0' && ch <= '9') {
        v |= static_cast<char32_t>(ch - '0');
      } else if (ch >= 'A' && ch <= 'F') {
        v |= static_cast<char32_t>(ch - 'A' + 10);
      } else {
        throw ParseError(source, line, "bad symbol '" + std::string(tok) + "'");
      }
    }
    if (v > 0x10FFFF) throw ParseError(source, line, "symbol out of range");
    return v;
  }

  int order_ = kDefaultOrder;
  std::vector<char32_t> vocab_;
  std::map<std::u32string, Stats> stats_;
};

}  // namespace khspell
