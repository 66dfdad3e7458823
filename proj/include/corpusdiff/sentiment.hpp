#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "corpusdiff/corpus.hpp"
#include "corpusdiff/stats.hpp"

namespace corpusdiff {

// Token -> score in [-1, 1], plus an exclusion set whose tokens never
// contribute regardless of their lexicon score.
class SentimentLexicon {
 public:
  SentimentLexicon() = default;
  explicit SentimentLexicon(std::map<std::string, double> scores,
                            std::set<std::string> exclusions = {});

  // Lexicon: TSV `token<TAB>score`, '#' comments.
  // Exclusions: one token per line, '#' comments.
  static SentimentLexicon from_files(
      const std::filesystem::path& lexicon_path,
      const std::optional<std::filesystem::path>& exclusions_path);

  // 0 for tokens that are absent or excluded.
  double score_of(const std::string& token) const;
  bool contributes(const std::string& token) const;
  void exclude(const std::string& token);

  const std::map<std::string, double>& scores() const { return scores_; }
  const std::set<std::string>& exclusions() const { return exclusions_; }

 private:
  std::map<std::string, double> scores_;
  std::set<std::string> exclusions_;
};

// Sum of lexicon scores over the sentence's tokens. No negation handling:
// each token contributes its score independently of context.
double sentence_score(const std::vector<std::string>& sentence,
                      const SentimentLexicon& lexicon);

struct SentimentComparison {
  std::string target;
  double mean_a = 0.0;
  double mean_b = 0.0;
  std::size_t n_sentences_a = 0;
  std::size_t n_sentences_b = 0;
  TTestResult test;
};

// Scores every sentence containing the target token (a sentence with the
// target k >= 2 times is still one observation) and compares group means.
// Each group needs >= 2 target sentences.
SentimentComparison compare_target_sentiment(const PreparedCorpus& corpus,
                                             const std::string& target,
                                             const SentimentLexicon& lexicon);

struct WordContribution {
  std::string token;
  std::size_t frequency = 0;
  double score = 0.0;
  double contribution = 0.0;  // frequency * score
};

// Per-token contribution over all target-containing sentences of the given
// group, sorted by |contribution| descending (ties lexicographic); zero
// contributions are dropped.
std::vector<WordContribution> word_contributions(const PreparedCorpus& corpus,
                                                 Group subset_group,
                                                 const std::string& target,
                                                 const SentimentLexicon& lexicon,
                                                 std::size_t top_n);

}  // namespace corpusdiff
