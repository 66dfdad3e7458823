#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "corpusdiff/error.hpp"
#include "corpusdiff/rng.hpp"
#include "corpusdiff/sentiment.hpp"

using namespace corpusdiff;

namespace {

PreparedCorpus corpus_from_texts(const std::vector<std::pair<std::string, Group>>& texts) {
  Corpus corpus;
  int i = 0;
  for (const auto& [text, group] : texts)
    corpus.docs.push_back({"d" + std::to_string(i++), text, group, "", 0});
  return prepare_corpus(corpus, ReplacementTable{});
}

}  // namespace

TEST_CASE("sentence_score: basics") {
  const SentimentLexicon lex({{"happy", 0.5}, {"good", 0.7}, {"bad", -0.6},
                              {"master", 0.625}},
                             {"master"});
  SUBCASE("no lexicon tokens") {
    CHECK(sentence_score({"we", "went", "home"}, lex) == 0.0);
  }
  SUBCASE("no negation handling by design") {
    CHECK(sentence_score({"not", "happy"}, lex) == doctest::Approx(0.5));
  }
  SUBCASE("sum with an excluded token") {
    CHECK(sentence_score({"the", "good", "master", "was", "bad"}, lex) ==
          doctest::Approx(0.1));
  }
}

TEST_CASE("sentence_score: additive over concatenation") {
  const SentimentLexicon lex({{"good", 0.7}, {"bad", -0.6}, {"kind", 0.3}});
  Rng rng(13);
  const std::vector<std::string> pool = {"good", "bad", "kind", "corn", "mill"};
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<std::string> left, right, both;
    for (int i = 0; i < 10; ++i) left.push_back(pool[rng.below(pool.size())]);
    for (int i = 0; i < 10; ++i) right.push_back(pool[rng.below(pool.size())]);
    both = left;
    both.insert(both.end(), right.begin(), right.end());
    CHECK(sentence_score(both, lex) ==
          doctest::Approx(sentence_score(left, lex) + sentence_score(right, lex)));
  }
}

TEST_CASE("adding an exclusion only removes that token's contribution") {
  SentimentLexicon lex({{"good", 0.7}, {"bad", -0.6}, {"free", -0.2}});
  const std::vector<std::string> sentence = {"good", "free", "bad", "free"};
  const double before = sentence_score(sentence, lex);
  lex.exclude("free");
  const double after = sentence_score(sentence, lex);
  CHECK(before - after == doctest::Approx(2 * -0.2));
}

TEST_CASE("lexicon validation and loading") {
  CHECK_THROWS_AS(SentimentLexicon({{"broken", 1.5}}), Error);

  const auto dir = std::filesystem::temp_directory_path() / "corpusdiff_lex_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "lex.tsv");
    out << "# comment line\n";
    out << "good\t0.7\n";
    out << "bad\t-0.6\n";
  }
  {
    std::ofstream out(dir / "excl.txt");
    out << "master # lexicon score useless here\n";
  }
  const auto lex = SentimentLexicon::from_files(dir / "lex.tsv", dir / "excl.txt");
  CHECK(lex.score_of("good") == doctest::Approx(0.7));
  CHECK(lex.score_of("master") == 0.0);
  CHECK(lex.exclusions().count("master") == 1);
}

TEST_CASE("compare_target_sentiment: constructed corpus") {
  const SentimentLexicon lex({{"good", 0.7}, {"bad", -0.6}});
  const auto prep = corpus_from_texts({
      {"master bad. master bad.", Group::A},
      {"master bad.", Group::A},
      {"master good. master good.", Group::B},
      {"master good.", Group::B},
  });
  const auto c = compare_target_sentiment(prep, "master", lex);
  CHECK(c.mean_a == doctest::Approx(-0.6));
  CHECK(c.mean_b == doctest::Approx(0.7));
  CHECK(c.n_sentences_a == 3);
  CHECK(c.n_sentences_b == 3);
}

TEST_CASE("compare_target_sentiment: repeated target counts once per sentence") {
  const SentimentLexicon lex({{"good", 0.7}});
  const auto prep = corpus_from_texts({
      {"master master good. master bad.", Group::A},
      {"master good.", Group::A},
      {"master good.", Group::B},
      {"master plain.", Group::B},
  });
  const auto c = compare_target_sentiment(prep, "master", lex);
  CHECK(c.n_sentences_a == 3);  // not 4: double "master" is one sentence
}

TEST_CASE("compare_target_sentiment: undersized groups error with counts") {
  const SentimentLexicon lex({{"good", 0.7}});
  const auto prep = corpus_from_texts({
      {"master good.", Group::A},
      {"nothing here.", Group::A},
      {"master good. master good.", Group::B},
      {"master good.", Group::B},
  });
  try {
    compare_target_sentiment(prep, "master", lex);
    FAIL("expected an error");
  } catch (const Error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("A=1") != std::string::npos);
    CHECK(msg.find("B=3") != std::string::npos);
  }
}

TEST_CASE("doubling lexicon scores doubles sentence scores, keeps t") {
  std::map<std::string, double> half = {{"good", 0.35}, {"bad", -0.3}, {"kind", 0.15}};
  std::map<std::string, double> full = {{"good", 0.7}, {"bad", -0.6}, {"kind", 0.3}};
  const SentimentLexicon lex_half(half), lex_full(full);
  const auto prep = corpus_from_texts({
      {"master good kind. master bad.", Group::A},
      {"master kind.", Group::A},
      {"master bad. master bad bad.", Group::B},
      {"master good.", Group::B},
  });
  for (const auto& sentence : prep.tokenized[0].sentences)
    CHECK(sentence_score(sentence, lex_full) ==
          doctest::Approx(2.0 * sentence_score(sentence, lex_half)));
  const auto c_half = compare_target_sentiment(prep, "master", lex_half);
  const auto c_full = compare_target_sentiment(prep, "master", lex_full);
  CHECK(std::fabs(c_half.test.t - c_full.test.t) < 1e-12);
  CHECK(std::fabs(c_half.test.p_two_sided - c_full.test.p_two_sided) < 1e-12);
  CHECK(c_full.mean_a == doctest::Approx(2.0 * c_half.mean_a));
}

TEST_CASE("word_contributions: direct products, ordering, zero exclusion") {
  const SentimentLexicon lex({{"good", 0.7}, {"bad", -0.6}, {"flat", 0.0}});
  const auto prep = corpus_from_texts({
      {"master good good bad flat.", Group::A},
      {"master good.", Group::A},
      {"nothing.", Group::B},
      {"nothing more.", Group::B},
  });
  const auto rows = word_contributions(prep, Group::A, "master", lex, 10);
  REQUIRE(rows.size() == 2);  // "flat" contributes 0 and is dropped
  CHECK(rows[0].token == "good");
  CHECK(rows[0].frequency == 3);
  CHECK(rows[0].contribution == doctest::Approx(2.1));
  CHECK(rows[1].token == "bad");
  CHECK(rows[1].contribution == doctest::Approx(-0.6));

  const auto top1 = word_contributions(prep, Group::A, "master", lex, 1);
  REQUIRE(top1.size() == 1);
  CHECK(top1[0].token == "good");
}

TEST_CASE("word_contributions: ties break lexicographically") {
  const SentimentLexicon lex({{"pear", 0.5}, {"apple", 0.5}, {"mango", -0.5}});
  const auto prep = corpus_from_texts({
      {"master pear apple mango.", Group::A},
      {"master pear apple mango.", Group::A},
      {"x.", Group::B},
      {"y.", Group::B},
  });
  const auto rows = word_contributions(prep, Group::A, "master", lex, 10);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].token == "apple");
  CHECK(rows[1].token == "mango");
  CHECK(rows[2].token == "pear");
}

TEST_CASE("word_contributions: empty result allowed") {
  const SentimentLexicon lex({{"good", 0.7}});
  const auto prep = corpus_from_texts({
      {"nothing here.", Group::A},
      {"or here.", Group::A},
      {"b doc.", Group::B},
      {"b doc two.", Group::B},
  });
  CHECK(word_contributions(prep, Group::A, "master", lex, 5).empty());
}
