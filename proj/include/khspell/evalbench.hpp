#pragma once

// Benchmark harness: dataset loaders, accuracy@Top-n by edit distance,
// outcome categories, named-entity flag rates and the edit-distance
// histogram, each with a TSV report layout.

#include <algorithm>
#include <array>
#include <atomic>
#include <exception>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "khspell/checker.hpp"
#include "khspell/error.hpp"
#include "khspell/lexicon.hpp"
#include "khspell/script.hpp"
#include "khspell/tsv.hpp"

namespace khspell {

struct DatasetARecord {
  std::string sentence;
  std::string misspelled;
  std::string correct;
  std::vector<std::string> alternates;  // other accepted corrections
  std::size_t edit_dist = 0;
};

struct DatasetBRecord {
  std::string name;
  std::string sentence;
};

enum class Outcome : std::uint8_t { ND, NC, WC, RC };

inline constexpr std::array<Outcome, 4> kOutcomes = {Outcome::ND, Outcome::NC, Outcome::WC, Outcome::RC};

inline constexpr std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::ND: return "ND";
    case Outcome::NC: return "NC";
    case Outcome::WC: return "WC";
    case Outcome::RC: return "RC";
  }
  return "ND";
}

/// Cluster range of the first occurrence of `needle` in `sentence` that
/// starts and ends on cluster boundaries.
inline std::optional<Focus> locate(std::string_view sentence, std::string_view needle) {
  if (needle.empty()) return std::nullopt;
  const auto offsets = cluster_offsets(cluster(sentence));
  for (auto pos = sentence.find(needle); pos != std::string_view::npos; pos = sentence.find(needle, pos + 1)) {
    const auto b = std::lower_bound(offsets.begin(), offsets.end(), pos);
    const auto e = std::lower_bound(b, offsets.end(), pos + needle.size());
    if (b == offsets.end() || *b != pos) continue;
    if (e == offsets.end() || *e != pos + needle.size()) continue;
    return Focus{static_cast<std::size_t>(b - offsets.begin()), static_cast<std::size_t>(e - offsets.begin())};
  }
  return std::nullopt;
}

/// `sentence<TAB>misspelled<TAB>correct[<TAB>alternate|alternate...]`
inline std::vector<DatasetARecord> load_dataset_a(std::istream& in, const std::string& source = "<dataset-a>") {
  std::vector<DatasetARecord> out;
  tsv::for_each_record(in, [&](std::size_t line, std::string_view text) {
    const auto f = tsv::split(text);
    if (f.size() < 3 || f.size() > 4) throw ParseError(source, line, "expected sentence<TAB>misspelled<TAB>correct");
    DatasetARecord r{normalize(f[0]), normalize(tsv::trim(f[1])), normalize(tsv::trim(f[2])), {}, 0};
    if (f.size() == 4) {
      for (auto alt : tsv::split(f[3], '|')) {
        if (!tsv::trim(alt).empty()) r.alternates.push_back(normalize(tsv::trim(alt)));
      }
    }
    if (r.misspelled.empty() || r.correct.empty()) throw ParseError(source, line, "empty word");
    if (!locate(r.sentence, r.misspelled)) {
      throw ParseError(source, line, "misspelled word does not occur in the sentence as whole clusters");
    }
    r.edit_dist = cluster_edit_distance(r.misspelled, r.correct);
    if (r.edit_dist == 0) throw ParseError(source, line, "misspelled and correct words are identical");
    out.push_back(std::move(r));
  });
  return out;
}

/// `name<TAB>sentence`
inline std::vector<DatasetBRecord> load_dataset_b(std::istream& in, const std::string& source = "<dataset-b>") {
  std::vector<DatasetBRecord> out;
  tsv::for_each_record(in, [&](std::size_t line, std::string_view text) {
    const auto f = tsv::split(text);
    if (f.size() != 2) throw ParseError(source, line, "expected name<TAB>sentence");
    DatasetBRecord r{normalize(tsv::trim(f[0])), normalize(f[1])};
    if (r.name.empty()) throw ParseError(source, line, "empty name");
    if (!locate(r.sentence, r.name)) throw ParseError(source, line, "name does not occur in the sentence as whole clusters");
    out.push_back(std::move(r));
  });
  return out;
}

inline std::vector<DatasetARecord> load_dataset_a_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open dataset: " + path.string());
  return load_dataset_a(in, path.string());
}

inline std::vector<DatasetBRecord> load_dataset_b_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open dataset: " + path.string());
  return load_dataset_b(in, path.string());
}

/// Percentage with one decimal, rounded half up in integer arithmetic.
inline std::string percent1(std::size_t num, std::size_t den) {
  if (den == 0) return "-";
  const std::uint64_t tenths = (2000ULL * num + den) / (2ULL * den);
  return std::to_string(tenths / 10) + "." + std::to_string(tenths % 10);
}

/// Per-record result of a Dataset-A run.
struct RecordResult {
  std::size_t edit_dist = 0;
  std::optional<std::size_t> correct_rank;  // 1-based rank of the first matching hypothesis
  Outcome outcome = Outcome::ND;
};

struct StratumCounts {
  std::size_t total = 0;
  std::vector<std::size_t> correct;  // correct[n-1] = correct within top n
};

struct AccuracyReport {
  std::size_t top_n = 3;
  std::map<std::size_t, StratumCounts> strata;
  StratumCounts overall;
  std::map<std::size_t, std::size_t> histogram;
  std::map<Outcome, std::size_t> categories;

  explicit AccuracyReport(std::size_t n = 3) : top_n(n) {
    overall.correct.assign(n, 0);
    for (auto o : kOutcomes) categories[o] = 0;
  }

  void add(const RecordResult& r) {
    auto [it, inserted] = strata.try_emplace(r.edit_dist);
    if (inserted) it->second.correct.assign(top_n, 0);
    for (StratumCounts* s : {&it->second, &overall}) {
      ++s->total;
      if (r.correct_rank && *r.correct_rank >= 1) {
        for (std::size_t n = *r.correct_rank; n <= top_n; ++n) ++s->correct[n - 1];
      }
    }
    ++histogram[r.edit_dist];
    ++categories[r.outcome];
  }

  std::string accuracy(std::size_t n, const StratumCounts& s) const { return percent1(s.correct[n - 1], s.total); }
};

/// Case<TAB>1<TAB>2...<TAB>Total, then rows Total, Corr.@Tn, Acc.@Tn. Edit
/// distance columns run from 1 to the largest distance seen.
inline std::string accuracy_table_tsv(const AccuracyReport& r) {
  const std::size_t max_d = r.strata.empty() ? 0 : r.strata.rbegin()->first;
  static const StratumCounts kEmpty;
  auto stratum = [&](std::size_t d) -> StratumCounts {
    const auto it = r.strata.find(d);
    if (it != r.strata.end()) return it->second;
    StratumCounts s = kEmpty;
    s.correct.assign(r.top_n, 0);
    return s;
  };
  std::ostringstream out;
  out << "Case";
  for (std::size_t d = 1; d <= max_d; ++d) out << '\t' << d;
  out << "\tTotal\n";
  out << "Total";
  for (std::size_t d = 1; d <= max_d; ++d) out << '\t' << stratum(d).total;
  out << '\t' << r.overall.total << '\n';
  for (std::size_t n = 1; n <= r.top_n; ++n) {
    out << "Corr.@T" << n;
    for (std::size_t d = 1; d <= max_d; ++d) out << '\t' << stratum(d).correct[n - 1];
    out << '\t' << r.overall.correct[n - 1] << '\n';
    out << "Acc.@T" << n;
    for (std::size_t d = 1; d <= max_d; ++d) out << '\t' << r.accuracy(n, stratum(d));
    out << '\t' << r.accuracy(n, r.overall) << '\n';
  }
  return out.str();
}

inline std::string category_table_tsv(const AccuracyReport& r) {
  std::ostringstream out;
  out << "Case\t%\tCount\n";
  for (auto o : kOutcomes) {
    out << to_string(o) << '\t' << percent1(r.categories.at(o), r.overall.total) << '\t' << r.categories.at(o) << '\n';
  }
  return out.str();
}

inline std::string histogram_tsv(const AccuracyReport& r) {
  std::ostringstream out;
  out << "Edit distance\tCount\n";
  for (const auto& [d, c] : r.histogram) out << d << '\t' << c << '\n';
  return out.str();
}

struct FlagReport {
  std::size_t total = 0;
  std::size_t flagged = 0;
  std::size_t not_flagged() const { return total - flagged; }
  std::string accuracy() const { return percent1(not_flagged(), total); }
};

/// Case<TAB>Total rows: Correct, Total, Accuracy.
inline std::string flag_table_tsv(const FlagReport& r) {
  std::ostringstream out;
  out << "Case\tTotal\n";
  out << "Correct\t" << r.not_flagged() << '\n';
  out << "Total\t" << r.total << '\n';
  out << "Accuracy\t" << r.accuracy() << '\n';
  return out.str();
}

/// Method<TAB>Misspelled<TAB>Not Misspelled, in percent.
inline std::string flag_rate_tsv(const FlagReport& r, std::string_view method = "khspell") {
  std::ostringstream out;
  out << "Method\tMisspelled\tNot Misspelled\n";
  out << method << '\t' << percent1(r.flagged, r.total) << '\t' << r.accuracy() << '\n';
  return out.str();
}

namespace detail {

template <class Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn&& fn) {
  threads = std::max<std::size_t>(1, std::min(threads, n));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace detail

/// Category of one record given the report of a focused check.
inline Outcome categorize(const DatasetARecord& record, const CheckReport& report) {
  const auto focus = locate(report.sentence, record.misspelled);
  if (!focus) return Outcome::ND;
  for (std::size_t f = 0; f < report.flagged.size(); ++f) {
    const Token& t = report.tokens[report.flagged[f]];
    if (!(t.begin < focus->end && focus->begin < t.end)) continue;
    if (report.suggestions[f].empty()) return Outcome::NC;
    for (const auto& r : report.best().replacements) {
      if (r.token != report.flagged[f]) continue;
      const auto& s = r.candidate.surface;
      const bool right = s == record.correct ||
                         std::find(record.alternates.begin(), record.alternates.end(), s) != record.alternates.end();
      return right ? Outcome::RC : Outcome::WC;
    }
    return Outcome::WC;
  }
  return Outcome::ND;
}

/// Checks one record with scoring restricted to the seeded word.
inline RecordResult evaluate_record(const DatasetARecord& record, const Engine& engine, const CheckerConfig& cfg) {
  RecordResult res;
  res.edit_dist = record.edit_dist;
  const auto focus = locate(record.sentence, record.misspelled);
  if (!focus) throw Error("evaluate: misspelled word not found in sentence");
  const CheckReport report = check(record.sentence, engine, cfg, CheckOptions{focus});
  const auto offsets = cluster_offsets(cluster(record.sentence));
  const std::string prefix = record.sentence.substr(0, offsets[focus->begin]);
  const std::string suffix = record.sentence.substr(prefix.size() + record.misspelled.size());
  std::vector<std::string> expected{prefix + record.correct + suffix};
  for (const auto& alt : record.alternates) expected.push_back(prefix + alt + suffix);
  for (std::size_t i = 0; i < report.hypotheses.size() && i < cfg.top_n; ++i) {
    if (std::find(expected.begin(), expected.end(), report.hypotheses[i].sentence) != expected.end()) {
      res.correct_rank = i + 1;
      break;
    }
  }
  res.outcome = categorize(record, report);
  return res;
}

inline AccuracyReport evaluate_a(std::span<const DatasetARecord> records, const Engine& engine,
                                 const CheckerConfig& cfg, std::size_t threads = 1) {
  if (records.empty()) throw Error("evaluate: empty dataset");
  cfg.validate();
  std::vector<RecordResult> results(records.size());
  detail::parallel_for(records.size(), threads,
                       [&](std::size_t i) { results[i] = evaluate_record(records[i], engine, cfg); });
  AccuracyReport report(cfg.top_n);
  for (const auto& r : results) report.add(r);
  return report;
}

/// True when the checker flags any token overlapping the seeded name.
inline bool name_flagged(const DatasetBRecord& record, const Lexicon& lexicon, const Gazetteer& gazetteer,
                         const AffixList& affixes) {
  const auto focus = locate(record.sentence, record.name);
  if (!focus) throw Error("evaluate: name not found in sentence");
  const Detection d = detect(record.sentence, lexicon, gazetteer, affixes);
  return std::any_of(d.flagged.begin(), d.flagged.end(), [&](std::size_t i) {
    return d.tokens[i].begin < focus->end && focus->begin < d.tokens[i].end;
  });
}

/// Flag rates need detection only, so no language model is involved.
inline FlagReport evaluate_b(std::span<const DatasetBRecord> records, const Lexicon& lexicon,
                             const Gazetteer& gazetteer, const AffixList& affixes, std::size_t threads = 1) {
  if (records.empty()) throw Error("evaluate: empty dataset");
  std::vector<std::uint8_t> flagged(records.size(), 0);
  detail::parallel_for(records.size(), threads, [&](std::size_t i) {
    flagged[i] = name_flagged(records[i], lexicon, gazetteer, affixes) ? 1 : 0;
  });
  FlagReport r;
  r.total = records.size();
  r.flagged = static_cast<std::size_t>(std::count(flagged.begin(), flagged.end(), std::uint8_t{1}));
  return r;
}

inline FlagReport evaluate_b(std::span<const DatasetBRecord> records, const Engine& engine, std::size_t threads = 1) {
  return evaluate_b(records, engine.lexicon, engine.gazetteer, engine.affixes, threads);
}

}  // namespace khspell
