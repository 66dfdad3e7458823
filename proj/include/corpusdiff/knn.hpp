#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "corpusdiff/corpus.hpp"

namespace corpusdiff {

struct KnnResult {
  int k = 0;
  double accuracy = 0.0;                   // pooled over folds
  std::vector<double> fold_accuracies;
  // confusion[actual][predicted], 0 = A, 1 = B
  std::array<std::array<int, 2>, 2> confusion = {{{0, 0}, {0, 0}}};
};

// Stratified cross-validation over Euclidean-nearest-neighbour majority
// vote. Vote ties fall to the nearest single neighbour; exact distance ties
// order by doc id. k values that reach the training size of some fold are
// skipped (collected in skipped_k when provided).
std::vector<KnnResult> knn_cross_validate(const std::vector<std::vector<double>>& points,
                                          const std::vector<Group>& labels,
                                          const std::vector<std::string>& ids,
                                          const std::vector<int>& k_values,
                                          int folds, std::uint64_t seed,
                                          std::vector<int>* skipped_k = nullptr);

struct KnnPrediction {
  std::string doc_id;
  Group predicted = Group::Unknown;
  double margin = 0.0;  // |votes_A - votes_B| / k
};

std::vector<KnnPrediction> knn_predict(const std::vector<std::vector<double>>& train_points,
                                       const std::vector<Group>& train_labels,
                                       const std::vector<std::string>& train_ids,
                                       const std::vector<std::vector<double>>& query_points,
                                       const std::vector<std::string>& query_ids,
                                       int k);

}  // namespace corpusdiff
