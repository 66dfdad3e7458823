#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "corpusdiff/corpus.hpp"

namespace corpusdiff {

struct TsneConfig {
  double perplexity = 30.0;
  int iterations = 1000;
  double learning_rate = 200.0;
  double exaggeration_factor = 12.0;
  int exaggeration_iters = 250;
  std::uint64_t seed = 0;

  void validate(std::size_t n_points) const;
};

struct EmbeddingPoint {
  std::string doc_id;
  double x = 0.0;
  double y = 0.0;
  Group group = Group::Unknown;
};

struct TsneDiagnostics {
  // max_i |H(P_i) - ln(perplexity)| after sigma calibration
  double max_entropy_error = 0.0;
  double kl_at_exaggeration_end = 0.0;
  double kl_final = 0.0;
  std::vector<double> kl_tail;  // KL per iteration, final 100 iterations
};

// Exact (quadratic) t-SNE: per-point sigma by binary search on the
// conditional entropy, symmetrized affinities, gradient descent with
// momentum, adaptive gains, and early exaggeration. Deterministic given the
// seed. Requires N >= 4 and perplexity < (N - 1) / 3.
std::vector<EmbeddingPoint> tsne_embed(const std::vector<std::vector<double>>& points,
                                       const std::vector<std::string>& ids,
                                       const std::vector<Group>& groups,
                                       const TsneConfig& config,
                                       TsneDiagnostics* diag = nullptr);

}  // namespace corpusdiff
