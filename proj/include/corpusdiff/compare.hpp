#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "corpusdiff/lda.hpp"
#include "corpusdiff/stats.hpp"

namespace corpusdiff {

enum class SplitDirection { SplitATestB, SplitBTestA };

std::string direction_name(SplitDirection d);

struct SplitPlan {
  SplitDirection direction = SplitDirection::SplitATestB;
  std::uint64_t seed = 0;
  std::vector<std::string> train_ids;
  std::vector<std::string> valid_ids;
  std::vector<std::string> test_ids;
};

// Splits one group into train (floor half) and valid (ceil half) by a seeded
// uniform shuffle; test is the entire other group. The split group needs at
// least 4 documents. Unknown-group documents take no part.
SplitPlan make_split(const std::vector<std::string>& doc_ids,
                     const std::vector<Group>& groups, SplitDirection direction,
                     std::uint64_t seed);

struct DistanceSweepRow {
  int topics = 0;          // K
  double baseline = 0.0;   // || mean theta(train) - mean theta(valid) ||
  double dist = 0.0;       // || mean theta(train) - mean theta(test) ||
};

// For each K in [k_min, k_max]: fit LDA on the full corpus, draw a fresh
// split, and compare average topic distributions. Per-K fit and split seeds
// derive from `seed`, so the whole sweep is reproducible.
std::vector<DistanceSweepRow> distance_sweep(const Vocabulary& vocab,
                                             const DocTermMatrix& dtm,
                                             SplitDirection direction, int k_min,
                                             int k_max, const LdaConfig& defaults,
                                             std::uint64_t seed);

// Same sweep with the group labels overridden (label-shuffle studies).
std::vector<DistanceSweepRow> distance_sweep(const Vocabulary& vocab,
                                             const DocTermMatrix& dtm,
                                             const std::vector<Group>& groups,
                                             SplitDirection direction, int k_min,
                                             int k_max, const LdaConfig& defaults,
                                             std::uint64_t seed);

struct TopicScoreRow {
  int topic = 0;
  double mean_theta_a = 0.0;
  double mean_theta_b = 0.0;
  double score = 0.0;  // mean_theta_b / mean_theta_a
  TTestResult test;    // Welch on per-document theta_k between groups
};

std::vector<TopicScoreRow> topic_score_table(const TopicModel& model);
std::vector<TopicScoreRow> topic_score_table(const TopicModel& model,
                                             const std::vector<Group>& groups);

}  // namespace corpusdiff
