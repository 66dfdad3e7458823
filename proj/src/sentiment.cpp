#include "corpusdiff/sentiment.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "corpusdiff/csv.hpp"
#include "corpusdiff/error.hpp"

namespace corpusdiff {

SentimentLexicon::SentimentLexicon(std::map<std::string, double> scores,
                                   std::set<std::string> exclusions)
    : scores_(std::move(scores)), exclusions_(std::move(exclusions)) {
  for (const auto& [token, score] : scores_) {
    if (token.empty()) throw Error("sentiment lexicon: empty token");
    if (!(score >= -1.0 && score <= 1.0))
      throw Error("sentiment lexicon: score for `" + token + "` outside [-1, 1]");
  }
}

SentimentLexicon SentimentLexicon::from_files(
    const std::filesystem::path& lexicon_path,
    const std::optional<std::filesystem::path>& exclusions_path) {
  std::map<std::string, double> scores;
  std::istringstream in(read_text_file(lexicon_path));
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    if (trim(line).empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw Error("sentiment lexicon line " + std::to_string(lineno) +
                  ": expected `token<TAB>score`");
    const std::string token = lowercase(trim(line.substr(0, tab)));
    const std::string score_str = trim(line.substr(tab + 1));
    double score = 0.0;
    try {
      score = std::stod(score_str);
    } catch (const std::exception&) {
      throw Error("sentiment lexicon line " + std::to_string(lineno) +
                  ": bad score `" + score_str + "`");
    }
    scores[token] = score;
  }
  std::set<std::string> exclusions;
  if (exclusions_path) {
    std::istringstream ein(read_text_file(*exclusions_path));
    while (std::getline(ein, line)) {
      const auto hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      line = lowercase(trim(line));
      if (!line.empty()) exclusions.insert(line);
    }
  }
  return SentimentLexicon(std::move(scores), std::move(exclusions));
}

double SentimentLexicon::score_of(const std::string& token) const {
  if (exclusions_.count(token)) return 0.0;
  const auto it = scores_.find(token);
  return it == scores_.end() ? 0.0 : it->second;
}

bool SentimentLexicon::contributes(const std::string& token) const {
  return !exclusions_.count(token) && scores_.count(token) > 0;
}

void SentimentLexicon::exclude(const std::string& token) {
  exclusions_.insert(lowercase(trim(token)));
}

double sentence_score(const std::vector<std::string>& sentence,
                      const SentimentLexicon& lexicon) {
  double s = 0.0;
  for (const auto& tok : sentence) s += lexicon.score_of(tok);
  return s;
}

namespace {

bool contains_target(const std::vector<std::string>& sentence, const std::string& target) {
  return std::find(sentence.begin(), sentence.end(), target) != sentence.end();
}

}  // namespace

SentimentComparison compare_target_sentiment(const PreparedCorpus& corpus,
                                             const std::string& target,
                                             const SentimentLexicon& lexicon) {
  if (target.empty()) throw Error("compare_target_sentiment: empty target");
  std::vector<double> scores_a, scores_b;
  for (std::size_t i = 0; i < corpus.docs.size(); ++i) {
    const Group g = corpus.docs[i].group;
    if (g == Group::Unknown) continue;
    for (const auto& sentence : corpus.tokenized[i].sentences) {
      if (!contains_target(sentence, target)) continue;
      const double s = sentence_score(sentence, lexicon);
      (g == Group::A ? scores_a : scores_b).push_back(s);
    }
  }
  if (scores_a.size() < 2 || scores_b.size() < 2)
    throw Error("compare_target_sentiment(" + target +
                "): need at least 2 target sentences per group (A=" +
                std::to_string(scores_a.size()) + ", B=" +
                std::to_string(scores_b.size()) + ")");

  SentimentComparison out;
  out.target = target;
  out.n_sentences_a = scores_a.size();
  out.n_sentences_b = scores_b.size();
  out.test = welch_t_test(scores_a, scores_b);
  out.mean_a = out.test.mean_a;
  out.mean_b = out.test.mean_b;
  return out;
}

std::vector<WordContribution> word_contributions(const PreparedCorpus& corpus,
                                                 Group subset_group,
                                                 const std::string& target,
                                                 const SentimentLexicon& lexicon,
                                                 std::size_t top_n) {
  if (top_n < 1) throw Error("word_contributions: top_n must be >= 1");
  std::map<std::string, std::size_t> freq;
  for (std::size_t i = 0; i < corpus.docs.size(); ++i) {
    if (corpus.docs[i].group != subset_group) continue;
    for (const auto& sentence : corpus.tokenized[i].sentences) {
      if (!contains_target(sentence, target)) continue;
      for (const auto& tok : sentence) ++freq[tok];
    }
  }
  std::vector<WordContribution> rows;
  for (const auto& [token, count] : freq) {
    if (!lexicon.contributes(token)) continue;
    WordContribution wc;
    wc.token = token;
    wc.frequency = count;
    wc.score = lexicon.score_of(token);
    wc.contribution = static_cast<double>(count) * wc.score;
    if (wc.contribution != 0.0) rows.push_back(std::move(wc));
  }
  std::sort(rows.begin(), rows.end(), [](const WordContribution& x, const WordContribution& y) {
    const double ax = std::fabs(x.contribution), ay = std::fabs(y.contribution);
    if (ax != ay) return ax > ay;
    return x.token < y.token;
  });
  if (rows.size() > top_n) rows.resize(top_n);
  return rows;
}

}  // namespace corpusdiff
