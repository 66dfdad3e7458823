#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "corpusdiff/dtm.hpp"

namespace corpusdiff {

struct LdaConfig {
  int topics = 10;              // K
  double alpha = 0.0;           // <= 0 selects the 50/K default at fit time
  double beta = 0.01;
  int iterations = 1000;
  int burn_in = 200;
  std::uint64_t seed = 0;
  // Poisson document-length rate of the generative story; recorded for
  // fidelity, never used by inference (which conditions on observed lengths).
  std::optional<double> doc_length_rate;

  double effective_alpha() const {
    return alpha > 0.0 ? alpha : 50.0 / static_cast<double>(topics);
  }
  void validate() const;
};

struct TopicModel {
  LdaConfig config;
  Vocabulary vocab;
  std::vector<std::vector<double>> phi;    // K x V, rows sum to 1, entries > 0
  std::vector<std::vector<double>> theta;  // D x K, rows sum to 1
  std::vector<double> word_marginals;      // p_w: corpus term frequency / total tokens
  std::vector<std::string> doc_ids;
  std::vector<Group> doc_groups;
  std::vector<std::size_t> empty_docs;     // theta rows forced uniform

  int k() const { return config.topics; }
  std::size_t vocab_size() const { return vocab.size(); }
  std::size_t n_docs() const { return theta.size(); }
};

// Collapsed Gibbs sampling over per-token topic assignments; single-threaded
// by contract so one seed pins the whole trajectory. Point estimates come
// from the final state:
//   phi_kw   = (n_kw + beta)  / (n_k + V*beta)
//   theta_dk = (n_dk + alpha) / (n_d + K*alpha)
// Documents with zero retained tokens get a uniform theta row and are
// flagged in empty_docs.
TopicModel fit_lda(const Vocabulary& vocab, const DocTermMatrix& dtm,
                   const LdaConfig& config);

// Fold-in Gibbs for an unseen (preprocessed) token list: phi stays fixed,
// only the document's topic counts resample. Out-of-vocabulary tokens are
// skipped; a document with no in-vocabulary tokens yields the uniform vector
// and sets *all_oov.
std::vector<double> infer_theta(const TopicModel& model,
                                const std::vector<std::string>& tokens,
                                int iterations, std::uint64_t seed,
                                bool* all_oov = nullptr);

struct RelevanceRanking {
  int topic = 0;
  double lambda = 1.0;
  // (term, relevance), sorted by relevance descending, ties lexicographic
  std::vector<std::pair<std::string, double>> terms;
};

// r(w, k | lambda) = lambda * ln(phi_kw) + (1 - lambda) * ln(phi_kw / p_w)
// over the full vocabulary; callers truncate.
RelevanceRanking relevance(const TopicModel& model, int topic, double lambda);

struct TopicSummaryEntry {
  int topic = 0;
  double lambda = 1.0;
  int rank = 0;  // 1-based
  std::string term;
  double relevance = 0.0;
};

std::vector<TopicSummaryEntry> topic_summary(const TopicModel& model,
                                             const std::vector<double>& lambdas,
                                             std::size_t top_n);

// Versioned JSON; round-trips exactly.
void save_model(const std::filesystem::path& path, const TopicModel& model,
                const std::string& config_hash, std::uint64_t master_seed);
TopicModel load_model(const std::filesystem::path& path);

}  // namespace corpusdiff
