#include "corpusdiff/compare.hpp"

#include <algorithm>
#include <map>

#include "corpusdiff/error.hpp"
#include "corpusdiff/rng.hpp"

namespace corpusdiff {

std::string direction_name(SplitDirection d) {
  return d == SplitDirection::SplitATestB ? "split_A_test_B" : "split_B_test_A";
}

SplitPlan make_split(const std::vector<std::string>& doc_ids,
                     const std::vector<Group>& groups, SplitDirection direction,
                     std::uint64_t seed) {
  if (doc_ids.size() != groups.size())
    throw Error("make_split: ids and groups must be parallel");
  const Group split_group =
      direction == SplitDirection::SplitATestB ? Group::A : Group::B;
  const Group test_group =
      direction == SplitDirection::SplitATestB ? Group::B : Group::A;

  std::vector<std::string> split_ids, test_ids;
  for (std::size_t i = 0; i < doc_ids.size(); ++i) {
    if (groups[i] == split_group) split_ids.push_back(doc_ids[i]);
    else if (groups[i] == test_group) test_ids.push_back(doc_ids[i]);
  }
  if (split_ids.size() < 4)
    throw Error("make_split: group " + group_name(split_group) + " has " +
                std::to_string(split_ids.size()) + " documents, need >= 4");

  // Sort before shuffling so the plan depends only on the id set and seed,
  // not on manifest order.
  std::sort(split_ids.begin(), split_ids.end());
  std::sort(test_ids.begin(), test_ids.end());
  Rng rng(seed);
  rng.shuffle(split_ids);

  SplitPlan plan;
  plan.direction = direction;
  plan.seed = seed;
  const std::size_t train_n = split_ids.size() / 2;  // floor; valid takes the rest
  plan.train_ids.assign(split_ids.begin(), split_ids.begin() + static_cast<std::ptrdiff_t>(train_n));
  plan.valid_ids.assign(split_ids.begin() + static_cast<std::ptrdiff_t>(train_n), split_ids.end());
  plan.test_ids = std::move(test_ids);
  return plan;
}

namespace {

std::vector<double> mean_theta_over(const TopicModel& model,
                                    const std::vector<std::string>& ids,
                                    const std::map<std::string, std::size_t>& row_of) {
  std::vector<std::vector<double>> rows;
  rows.reserve(ids.size());
  for (const auto& id : ids) {
    const auto it = row_of.find(id);
    if (it == row_of.end()) throw Error("distance_sweep: unknown document id " + id);
    rows.push_back(model.theta[it->second]);
  }
  return mean_vector(rows);
}

}  // namespace

std::vector<DistanceSweepRow> distance_sweep(const Vocabulary& vocab,
                                             const DocTermMatrix& dtm,
                                             const std::vector<Group>& groups,
                                             SplitDirection direction, int k_min,
                                             int k_max, const LdaConfig& defaults,
                                             std::uint64_t seed) {
  if (k_min < 2 || k_min > k_max)
    throw Error("distance_sweep: need 2 <= k_min <= k_max");
  if (groups.size() != dtm.n_docs())
    throw Error("distance_sweep: groups must be parallel to the matrix");

  std::map<std::string, std::size_t> row_of;
  for (std::size_t d = 0; d < dtm.n_docs(); ++d) row_of[dtm.doc_ids[d]] = d;

  std::vector<DistanceSweepRow> rows;
  for (int k = k_min; k <= k_max; ++k) {
    try {
      LdaConfig cfg = defaults;
      cfg.topics = k;
      cfg.seed = derive_seed(seed, "sweep-fit", static_cast<std::uint64_t>(k));
      const TopicModel model = fit_lda(vocab, dtm, cfg);

      const SplitPlan plan =
          make_split(dtm.doc_ids, groups, direction,
                     derive_seed(seed, "sweep-split", static_cast<std::uint64_t>(k)));
      const auto mean_train = mean_theta_over(model, plan.train_ids, row_of);
      const auto mean_valid = mean_theta_over(model, plan.valid_ids, row_of);
      const auto mean_test = mean_theta_over(model, plan.test_ids, row_of);

      DistanceSweepRow row;
      row.topics = k;
      row.baseline = euclidean_distance(mean_train, mean_valid);
      row.dist = euclidean_distance(mean_train, mean_test);
      rows.push_back(row);
    } catch (const Error& e) {
      throw Error("distance_sweep at K=" + std::to_string(k) + ": " + e.what());
    }
  }
  return rows;
}

std::vector<DistanceSweepRow> distance_sweep(const Vocabulary& vocab,
                                             const DocTermMatrix& dtm,
                                             SplitDirection direction, int k_min,
                                             int k_max, const LdaConfig& defaults,
                                             std::uint64_t seed) {
  return distance_sweep(vocab, dtm, dtm.doc_groups, direction, k_min, k_max,
                        defaults, seed);
}

std::vector<TopicScoreRow> topic_score_table(const TopicModel& model,
                                             const std::vector<Group>& groups) {
  if (groups.size() != model.n_docs())
    throw Error("topic_score_table: groups must be parallel to theta");
  const int K = model.k();

  std::vector<TopicScoreRow> rows;
  rows.reserve(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) {
    std::vector<double> a, b;
    for (std::size_t d = 0; d < model.n_docs(); ++d) {
      if (groups[d] == Group::A) a.push_back(model.theta[d][static_cast<std::size_t>(k)]);
      else if (groups[d] == Group::B) b.push_back(model.theta[d][static_cast<std::size_t>(k)]);
    }
    if (a.size() < 2 || b.size() < 2)
      throw Error("topic_score_table: need at least 2 documents per group");
    TopicScoreRow row;
    row.topic = k;
    row.test = welch_t_test(a, b);
    row.mean_theta_a = row.test.mean_a;
    row.mean_theta_b = row.test.mean_b;
    row.score = row.mean_theta_b / row.mean_theta_a;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<TopicScoreRow> topic_score_table(const TopicModel& model) {
  return topic_score_table(model, model.doc_groups);
}

}  // namespace corpusdiff
