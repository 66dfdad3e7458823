#include "corpusdiff/knn.hpp"

#include <algorithm>
#include <cmath>

#include "corpusdiff/error.hpp"
#include "corpusdiff/rng.hpp"
#include "corpusdiff/stats.hpp"

namespace corpusdiff {

namespace {

struct Neighbour {
  double dist;
  const std::string* id;
  Group label;
};

// Majority vote over the k nearest; ties to the nearest neighbour (exact
// distance ties resolved by doc-id order through the sort key).
Group vote(std::vector<Neighbour>& neighbours, int k, double* margin) {
  std::sort(neighbours.begin(), neighbours.end(), [](const Neighbour& x, const Neighbour& y) {
    if (x.dist != y.dist) return x.dist < y.dist;
    return *x.id < *y.id;
  });
  int votes_a = 0, votes_b = 0;
  for (int i = 0; i < k; ++i)
    (neighbours[static_cast<std::size_t>(i)].label == Group::A ? votes_a : votes_b)++;
  if (margin) *margin = std::fabs(votes_a - votes_b) / static_cast<double>(k);
  if (votes_a > votes_b) return Group::A;
  if (votes_b > votes_a) return Group::B;
  return neighbours[0].label;
}

std::vector<Neighbour> neighbours_of(const std::vector<double>& query,
                                     const std::vector<std::vector<double>>& points,
                                     const std::vector<Group>& labels,
                                     const std::vector<std::string>& ids,
                                     const std::vector<std::size_t>& candidates) {
  std::vector<Neighbour> out;
  out.reserve(candidates.size());
  for (const std::size_t j : candidates)
    out.push_back({euclidean_distance(query, points[j]), &ids[j], labels[j]});
  return out;
}

}  // namespace

std::vector<KnnResult> knn_cross_validate(const std::vector<std::vector<double>>& points,
                                          const std::vector<Group>& labels,
                                          const std::vector<std::string>& ids,
                                          const std::vector<int>& k_values,
                                          int folds, std::uint64_t seed,
                                          std::vector<int>* skipped_k) {
  const std::size_t n = points.size();
  if (labels.size() != n || ids.size() != n)
    throw Error("knn_cross_validate: labels and ids must be parallel to points");
  if (folds < 2) throw Error("knn_cross_validate: folds must be >= 2");
  if (static_cast<std::size_t>(folds) > n)
    throw Error("knn_cross_validate: more folds than points");

  std::size_t count_a = 0, count_b = 0;
  for (const Group g : labels) {
    if (g == Group::A) ++count_a;
    else if (g == Group::B) ++count_b;
    else throw Error("knn_cross_validate: unknown-group point");
  }
  if (count_a + count_b == 0) throw Error("knn_cross_validate: no labeled points");
  if ((count_a > 0 && count_a < 2) || (count_b > 0 && count_b < 2))
    throw Error("knn_cross_validate: each present class needs >= 2 points");

  // Stratified folds: shuffle within each class, deal round-robin.
  std::vector<std::vector<std::size_t>> fold_members(static_cast<std::size_t>(folds));
  Rng rng(seed);
  for (const Group cls : {Group::A, Group::B}) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < n; ++i)
      if (labels[i] == cls) members.push_back(i);
    rng.shuffle(members);
    for (std::size_t i = 0; i < members.size(); ++i)
      fold_members[i % static_cast<std::size_t>(folds)].push_back(members[i]);
  }

  std::size_t min_train = n;
  for (const auto& fold : fold_members) min_train = std::min(min_train, n - fold.size());

  std::vector<KnnResult> results;
  for (const int k : k_values) {
    if (k < 1 || static_cast<std::size_t>(k) >= min_train) {
      if (skipped_k) skipped_k->push_back(k);
      continue;
    }
    KnnResult res;
    res.k = k;
    std::size_t correct = 0, total = 0;
    for (const auto& fold : fold_members) {
      if (fold.empty()) {
        continue;
      }
      std::vector<bool> in_fold(n, false);
      for (const std::size_t i : fold) in_fold[i] = true;
      std::vector<std::size_t> train;
      train.reserve(n - fold.size());
      for (std::size_t i = 0; i < n; ++i)
        if (!in_fold[i]) train.push_back(i);

      std::size_t fold_correct = 0;
      for (const std::size_t i : fold) {
        auto nb = neighbours_of(points[i], points, labels, ids, train);
        const Group pred = vote(nb, k, nullptr);
        const int actual = labels[i] == Group::A ? 0 : 1;
        const int predicted = pred == Group::A ? 0 : 1;
        ++res.confusion[static_cast<std::size_t>(actual)][static_cast<std::size_t>(predicted)];
        if (pred == labels[i]) ++fold_correct;
      }
      res.fold_accuracies.push_back(static_cast<double>(fold_correct) /
                                    static_cast<double>(fold.size()));
      correct += fold_correct;
      total += fold.size();
    }
    res.accuracy = static_cast<double>(correct) / static_cast<double>(total);
    results.push_back(std::move(res));
  }
  return results;
}

std::vector<KnnPrediction> knn_predict(const std::vector<std::vector<double>>& train_points,
                                       const std::vector<Group>& train_labels,
                                       const std::vector<std::string>& train_ids,
                                       const std::vector<std::vector<double>>& query_points,
                                       const std::vector<std::string>& query_ids,
                                       int k) {
  const std::size_t n = train_points.size();
  if (train_labels.size() != n || train_ids.size() != n)
    throw Error("knn_predict: training labels and ids must be parallel");
  if (k < 1 || static_cast<std::size_t>(k) > n)
    throw Error("knn_predict: k must be in [1, number of labeled points]");
  if (query_points.size() != query_ids.size())
    throw Error("knn_predict: query ids must be parallel");
  for (const Group g : train_labels)
    if (g == Group::Unknown) throw Error("knn_predict: unknown-group training point");

  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;

  std::vector<KnnPrediction> out;
  out.reserve(query_points.size());
  for (std::size_t q = 0; q < query_points.size(); ++q) {
    auto nb = neighbours_of(query_points[q], train_points, train_labels, train_ids, all);
    KnnPrediction pred;
    pred.doc_id = query_ids[q];
    pred.predicted = vote(nb, k, &pred.margin);
    out.push_back(std::move(pred));
  }
  return out;
}

}  // namespace corpusdiff
