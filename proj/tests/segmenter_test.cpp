#include <gtest/gtest.h>

#include <sstream>

#include "khspell/segmenter.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace khspell;

namespace {

std::vector<std::string> texts(const std::vector<Token>& ts) {
  std::vector<std::string> out;
  for (const auto& t : ts) out.push_back(t.text);
  return out;
}

std::string joined(const std::vector<Token>& ts) {
  std::string s;
  for (const auto& t : ts) s += t.text;
  return s;
}

void expect_tiles(const std::vector<Token>& ts, std::string_view sentence) {
  EXPECT_EQ(joined(ts), sentence);
  std::size_t at = 0;
  for (const auto& t : ts) {
    EXPECT_EQ(t.begin, at);
    EXPECT_LT(t.begin, t.end);
    at = t.end;
    if (!t.subwords.empty()) {
      std::string s;
      for (const auto& sw : t.subwords) s += sw.text;
      EXPECT_EQ(s, t.text);
    }
  }
  EXPECT_EQ(at, cluster(sentence).size());
}

const AffixList& no_affixes() {
  static const AffixList a;
  return a;
}

AffixList shipped_affixes() { return AffixList::load_file(std::string(KHSPELL_RESOURCE_DIR) + "/segmenter/affixes.tsv"); }

// Objective of a split, mirroring the contract: more known parts, then
// fewer parts, then longer leading parts.
struct Score {
  std::size_t known;
  std::vector<std::size_t> lengths;
  bool better_than(const Score& o) const {
    if (known != o.known) return known > o.known;
    if (lengths.size() != o.lengths.size()) return lengths.size() < o.lengths.size();
    return std::lexicographical_compare(lengths.begin(), lengths.end(), o.lengths.begin(), o.lengths.end(),
                                        std::greater<>());
  }
};

bool oracle_part_known(const Lexicon& lex, const std::vector<std::string>& part) {
  const std::size_t tol = std::min<std::size_t>(1, (part.size() - 1) / 2);
  for (const auto& e : lex.entries()) {
    if (oracle::edit_distance(part, oracle::cluster_texts(e.surface)) <= tol) return true;
  }
  return false;
}

std::optional<std::vector<std::size_t>> oracle_split(const Lexicon& lex, const std::vector<std::string>& word) {
  std::optional<Score> best;
  for (const auto& lengths : oracle::compositions(word.size())) {
    Score s{0, lengths};
    std::size_t at = 0;
    for (std::size_t len : lengths) {
      std::vector<std::string> part(word.begin() + at, word.begin() + at + len);
      if (oracle_part_known(lex, part)) ++s.known;
      at += len;
    }
    if (!best || s.better_than(*best)) best = s;
  }
  if (!best || best->known == 0) return std::nullopt;
  return best->lengths;
}

}  // namespace

TEST(Labels, NotationAndNames) {
  EXPECT_EQ(notation(BoundaryLabel::space), "|");
  EXPECT_EQ(notation(BoundaryLabel::compound), "_");
  EXPECT_EQ(notation(BoundaryLabel::prefix), "~");
  EXPECT_EQ(notation(BoundaryLabel::suffix), "^");
  EXPECT_EQ(notation(BoundaryLabel::no_space), "");
  EXPECT_EQ(to_string(BoundaryLabel::no_space), "no_space");
}

TEST(Segment, EmptySentence) {
  const auto lex = gen::lexicon(std::vector<std::string>{"ab"});
  EXPECT_TRUE(Segmenter(lex, no_affixes()).segment("").empty());
}

TEST(Segment, ToyLexiconKnownWords) {
  const auto lex = gen::lexicon(std::vector<std::string>{"ab", "c"});
  const auto ts = Segmenter(lex, no_affixes()).segment("abc");
  EXPECT_EQ(texts(ts), (std::vector<std::string>{"ab", "c"}));
  EXPECT_TRUE(ts[0].known && ts[1].known);
}

TEST(Segment, ToyLexiconUnknownTail) {
  const auto lex = gen::lexicon(std::vector<std::string>{"ab", "c"});
  const auto ts = Segmenter(lex, no_affixes()).segment("abx");
  ASSERT_EQ(texts(ts), (std::vector<std::string>{"ab", "x"}));
  EXPECT_TRUE(ts[0].known);
  EXPECT_FALSE(ts[1].known);
}

TEST(Segment, BackwardPassWinsWithFewerTokens) {
  // Forward longest match takes "ab" and strands "c","d"; backward finds a|bcd.
  const auto lex = gen::lexicon(std::vector<std::string>{"ab", "a", "bcd", "c", "d"});
  EXPECT_EQ(texts(Segmenter(lex, no_affixes()).segment("abcd")), (std::vector<std::string>{"a", "bcd"}));
}

TEST(Segment, SeparatorsAndNumbers) {
  const auto lex = gen::lexicon(std::vector<std::string>{"ខ្ញុំ", "ទៅ", "ផ្សារ"});
  const std::string s = "ខ្ញុំទៅ ផ្សារ ១២។";
  const auto ts = Segmenter(lex, no_affixes()).segment(s);
  expect_tiles(ts, s);
  EXPECT_EQ(texts(ts), (std::vector<std::string>{"ខ្ញុំ", "ទៅ", " ", "ផ្សារ", " ", "១២", "។"}));
  EXPECT_EQ(ts[2].kind, TokenKind::separator);
  EXPECT_EQ(ts[5].kind, TokenKind::number);
  EXPECT_EQ(ts[6].kind, TokenKind::separator);
}

TEST(Segment, TilesRandomInput) {
  gen::Khmer g(8);
  const auto alpha = g.alphabet(12);
  std::vector<std::string> words;
  for (int i = 0; i < 60; ++i) words.push_back(g.word(alpha, 1, 3));
  const auto lex = gen::lexicon(words);
  const Segmenter seg(lex, no_affixes());
  for (int i = 0; i < 300; ++i) {
    std::string s;
    for (auto n = g.uniform(0, 6); n > 0; --n) s += g.chance(0.2) ? " " : g.word(alpha, 1, 4);
    expect_tiles(seg.segment(s), s);
    std::string raw = normalize(g.raw(20));
    expect_tiles(seg.segment(raw), raw);
  }
}

TEST(Segment, CorruptedWordBecomesOneUnknownToken) {
  gen::Khmer g(77);
  const auto alpha = g.alphabet(30);
  std::vector<std::string> words;
  for (int i = 0; i < 50; ++i) words.push_back(g.word(alpha, 2, 4));
  const auto lex = gen::lexicon(words);
  const Segmenter seg(lex, no_affixes());
  int checked = 0;
  for (int trial = 0; trial < 3000 && checked < 200; ++trial) {
    const auto& left = lex.entries()[g.uniform(0, lex.size() - 1)].surface;
    const auto& mid = lex.entries()[g.uniform(0, lex.size() - 1)].surface;
    const auto& right = lex.entries()[g.uniform(0, lex.size() - 1)].surface;
    const auto bad = augment_random(mid, alpha, g.rng());
    if (!bad || lex.contains(*bad)) continue;
    const std::string s = left + *bad + right;
    const auto cl = oracle::cluster_texts(s);
    const std::size_t nl = cluster(left).size(), nb = cluster(*bad).size();
    // Precondition: the only lexicon occurrences are the two context words.
    bool clean = true;
    for (std::size_t i = 0; i < cl.size() && clean; ++i) {
      std::string sub;
      for (std::size_t j = i; j < cl.size(); ++j) {
        sub += cl[j];
        if (!lex.contains(sub)) continue;
        const bool is_left = i == 0 && j + 1 == nl;
        const bool is_right = i == nl + nb && j + 1 == cl.size();
        if (!is_left && !is_right) clean = false;
      }
    }
    if (!clean) continue;
    ++checked;
    const auto ts = seg.segment(s);
    ASSERT_EQ(texts(ts), (std::vector<std::string>{left, *bad, right})) << s;
    EXPECT_FALSE(ts[1].known);
    EXPECT_EQ(ts[1].begin, nl);
    EXPECT_EQ(ts[1].end, nl + nb);
  }
  EXPECT_GE(checked, 100);
}

TEST(Segment, FocusForcesOneToken) {
  const auto lex = gen::lexicon(std::vector<std::string>{"ab", "c"});
  const auto ts = Segmenter(lex, no_affixes()).segment_with_focus("abc", 1, 3);
  EXPECT_EQ(texts(ts), (std::vector<std::string>{"a", "bc"}));
  EXPECT_THROW(Segmenter(lex, no_affixes()).segment_with_focus("abc", 2, 5), Error);
}

TEST(SplitCompound, SchoolCompoundSplitsInTwo) {
  const auto lex = gen::lexicon(std::vector<std::string>{"សាលា", "រៀន", "ផ្ទះ"});
  const Segmenter seg(lex, no_affixes());
  const Clusters word = cluster("សាលារៀន");
  const auto parts = seg.split_compound(word);
  ASSERT_TRUE(parts);
  ASSERT_EQ(parts->size(), 2u);
  EXPECT_EQ((*parts)[0].text, "សាលា");
  EXPECT_EQ((*parts)[1].text, "រៀន");
  EXPECT_EQ((*parts)[0].joiner, BoundaryLabel::compound);
  EXPECT_EQ(oracle_split(lex, oracle::cluster_texts("សាលារៀន")), (std::vector<std::size_t>{2, 2}));
}

TEST(SplitCompound, CorruptedSubwordsStillSplit) {
  const auto lex = gen::lexicon(std::vector<std::string>{"មន្ទីរពេទ្យ", "សាកលវិទ្យាល័យ"});
  const Segmenter seg(lex, no_affixes());
  const std::string word = "មន្ទីរពេទសាកលវិទ្យាល័";
  const auto parts = seg.split_compound(cluster(word));
  ASSERT_TRUE(parts);
  ASSERT_EQ(parts->size(), 2u);
  EXPECT_EQ((*parts)[0].text, "មន្ទីរពេទ");
  EXPECT_EQ((*parts)[1].text, "សាកលវិទ្យាល័");
}

TEST(SplitCompound, NoKnownPartGivesNothing) {
  const auto lex = gen::lexicon(std::vector<std::string>{"ab", "c"});
  EXPECT_FALSE(Segmenter(lex, no_affixes()).split_compound(cluster("qq")));
}

TEST(SplitCompound, KnownTokenIsAPreconditionViolation) {
  const auto lex = gen::lexicon(std::vector<std::string>{"ab"});
  const Token t{"ab", 0, 2, TokenKind::word, true, {}};
  EXPECT_THROW(Segmenter(lex, no_affixes()).split_compound(t), std::invalid_argument);
}

TEST(SplitCompound, AffixJoiners) {
  const auto lex = gen::lexicon(std::vector<std::string>{"អ្នក", "លក់", "ឧស្សាហ", "កម្ម"});
  const auto affixes = shipped_affixes();
  const Segmenter seg(lex, affixes);
  const auto a = seg.split_compound(cluster("អ្នកលក់"));
  ASSERT_TRUE(a);
  EXPECT_EQ((*a)[0].joiner, BoundaryLabel::prefix);
  const auto b = seg.split_compound(cluster("ឧស្សាហកម្ម"));
  ASSERT_TRUE(b);
  EXPECT_EQ((*b)[0].joiner, BoundaryLabel::suffix);
  const auto ts = seg.segment("អ្នកលក់");
  EXPECT_EQ(render(ts), "អ្នក|លក់");
}

TEST(SplitCompound, MatchesExhaustiveOracle) {
  gen::Khmer g(31);
  for (int round = 0; round < 6; ++round) {
    const auto alpha = g.alphabet(10);
    std::vector<std::string> words;
    for (int i = 0; i < 40; ++i) words.push_back(g.word(alpha, 1, 4));
    const auto lex = gen::lexicon(words);
    const Segmenter seg(lex, no_affixes());
    for (int q = 0; q < 40; ++q) {
      const std::string w = g.word(alpha, 2, 9);
      const auto got = seg.split_compound(cluster(w));
      const auto want = oracle_split(lex, oracle::cluster_texts(w));
      ASSERT_EQ(got.has_value(), want.has_value()) << w;
      if (!got) continue;
      std::vector<std::size_t> lengths;
      for (const auto& p : *got) lengths.push_back(p.end - p.begin);
      ASSERT_EQ(lengths, *want) << w;
    }
  }
}

TEST(Augment, ExamplesOnKandal) {
  EXPECT_EQ(augment("កណ្តាល", EditOp::remove, 2), "កណ្តា");
  EXPECT_EQ(augment("កណ្តាល", EditOp::substitute, 2, "ស"), "កណ្តាស");
  const std::string inserted = augment("កណ្តាល", EditOp::insert, 1, "ក");
  EXPECT_EQ(augment(inserted, EditOp::remove, 1), "កណ្តាល");
}

TEST(Augment, OutOfRangeAndBadReplacement) {
  EXPECT_THROW(augment("កណ្តាល", EditOp::remove, 3), Error);
  EXPECT_THROW(augment("កណ្តាល", EditOp::insert, 4, "ក"), Error);
  EXPECT_THROW(augment("កណ្តាល", EditOp::substitute, 0, "កក"), Error);
  EXPECT_THROW(augment("កណ្តាល", EditOp::substitute, 0, "ក"), Error);  // no change
}

TEST(Augment, RandomEditsAreDistanceOne) {
  gen::Khmer g(4);
  const auto alpha = g.alphabet(20);
  int made = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto w = g.word(alpha, 1, 6);
    const auto out = augment_random(w, alpha, g.rng());
    if (!out) continue;
    ++made;
    ASSERT_EQ(cluster_edit_distance(w, *out), 1u) << w << " -> " << *out;
  }
  EXPECT_GT(made, 900);
  EXPECT_EQ(augment_random("កណ្តាល", alpha, 5), augment_random("កណ្តាល", alpha, 5));
}

TEST(Labels, RoundTripThroughTokens) {
  const auto lex = gen::lexicon(std::vector<std::string>{"អ្នក", "លក់", "ផ្ទះ", "ធំ"});
  const auto affixes = shipped_affixes();
  const Segmenter seg(lex, affixes);
  const std::string s = "អ្នកលក់ផ្ទះធំ ១២";
  const auto ts = seg.segment(s);
  const auto cl = cluster(s);
  const auto labels = labels_from_tokens(ts);
  ASSERT_EQ(labels.size(), cl.size());
  const auto back = tokens_from_labels(cl, labels, lex);
  EXPECT_EQ(texts(back), texts(ts));
  EXPECT_EQ(DictionaryTagger(seg).tag(cl), labels);
  EXPECT_THROW(tokens_from_labels(cl, std::vector<BoundaryLabel>(1), lex), Error);
}

TEST(Labels, CompoundNotation) {
  const auto lex = gen::lexicon(std::vector<std::string>{"សាលា", "រៀន"});
  const Segmenter seg(lex, no_affixes());
  // A corrupted compound forced into one token keeps its split.
  const auto ts = seg.segment_with_focus("សាលារៀ", 0, 3);
  ASSERT_EQ(ts.size(), 1u);
  EXPECT_FALSE(ts[0].known);
  EXPECT_EQ(render(ts), "សាលា_រៀ");
  const auto labels = labels_from_tokens(ts);
  EXPECT_EQ(labels, (std::vector<BoundaryLabel>{BoundaryLabel::no_space, BoundaryLabel::compound,
                                                BoundaryLabel::space}));
}

TEST(Affixes, LoaderValidates) {
  std::istringstream ok("អ្នក\tprefix\nកម្ម\tsuffix\n");
  const auto a = AffixList::load(ok);
  EXPECT_TRUE(a.is_prefix("អ្នក"));
  EXPECT_TRUE(a.is_suffix("កម្ម"));
  EXPECT_EQ(a.size(), 2u);
  std::istringstream bad("អ្នក\tinfix\n");
  EXPECT_THROW(AffixList::load(bad), ParseError);
  EXPECT_GT(shipped_affixes().size(), 5u);
}
