#include "corpusdiff/tsne.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "corpusdiff/error.hpp"
#include "corpusdiff/rng.hpp"
#include "corpusdiff/stats.hpp"

namespace corpusdiff {

void TsneConfig::validate(std::size_t n_points) const {
  if (n_points < 4) throw Error("tsne: need at least 4 points");
  if (!(perplexity > 1.0)) throw Error("tsne: perplexity must exceed 1");
  if (perplexity >= static_cast<double>(n_points - 1) / 3.0)
    throw Error("tsne: perplexity " + std::to_string(perplexity) +
                " infeasible for " + std::to_string(n_points) +
                " points (needs perplexity < (N-1)/3)");
  if (exaggeration_iters < 0 || iterations <= exaggeration_iters)
    throw Error("tsne: iterations must exceed exaggeration_iters");
  if (!(learning_rate > 0.0) || !(exaggeration_factor >= 1.0))
    throw Error("tsne: bad learning_rate or exaggeration_factor");
}

namespace {

constexpr double kPFloor = 1e-12;

// Conditional affinities for row i at precision beta, returning the entropy
// H = ln(sumP) + beta * <d>.
double row_affinities(const std::vector<double>& d2_row, std::size_t i,
                      double beta, std::vector<double>& p_row) {
  const std::size_t n = d2_row.size();
  double sum_p = 0.0;
  double sum_dp = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (j == i) {
      p_row[j] = 0.0;
      continue;
    }
    const double p = std::exp(-beta * d2_row[j]);
    p_row[j] = p;
    sum_p += p;
    sum_dp += d2_row[j] * p;
  }
  if (sum_p <= 0.0) return -std::numeric_limits<double>::infinity();
  const double h = std::log(sum_p) + beta * sum_dp / sum_p;
  for (std::size_t j = 0; j < n; ++j) p_row[j] /= sum_p;
  return h;
}

}  // namespace

std::vector<EmbeddingPoint> tsne_embed(const std::vector<std::vector<double>>& points,
                                       const std::vector<std::string>& ids,
                                       const std::vector<Group>& groups,
                                       const TsneConfig& config,
                                       TsneDiagnostics* diag) {
  const std::size_t n = points.size();
  config.validate(n);
  if (ids.size() != n || groups.size() != n)
    throw Error("tsne: ids and groups must be parallel to points");
  const std::size_t dim = points[0].size();
  for (const auto& p : points)
    if (p.size() != dim) throw Error("tsne: ragged input points");

  // pairwise squared distances
  std::vector<std::vector<double>> d2(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double ss = 0.0;
      for (std::size_t a = 0; a < dim; ++a) {
        const double d = points[i][a] - points[j][a];
        ss += d * d;
      }
      d2[i][j] = ss;
      d2[j][i] = ss;
    }
  }

  // per-point precision by binary search on the conditional entropy
  const double target_entropy = std::log(config.perplexity);
  std::vector<std::vector<double>> p_cond(n, std::vector<double>(n, 0.0));
  double max_entropy_error = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double beta = 1.0;
    double beta_min = 0.0;
    double beta_max = std::numeric_limits<double>::infinity();
    double h = row_affinities(d2[i], i, beta, p_cond[i]);
    for (int it = 0; it < 200 && std::fabs(h - target_entropy) > 1e-7; ++it) {
      if (h > target_entropy) {
        beta_min = beta;
        beta = std::isinf(beta_max) ? beta * 2.0 : (beta + beta_max) / 2.0;
      } else {
        beta_max = beta;
        beta = (beta + beta_min) / 2.0;
      }
      h = row_affinities(d2[i], i, beta, p_cond[i]);
    }
    max_entropy_error = std::max(max_entropy_error, std::fabs(h - target_entropy));
  }
  if (diag) diag->max_entropy_error = max_entropy_error;

  // symmetrize
  std::vector<std::vector<double>> p(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      p[i][j] = std::max((p_cond[i][j] + p_cond[j][i]) / (2.0 * static_cast<double>(n)),
                         i == j ? 0.0 : kPFloor);

  std::vector<std::vector<double>> y(n, std::vector<double>(2, 0.0));
  Rng rng(config.seed);
  for (auto& row : y)
    for (double& v : row) v = rng.normal() * 1e-4;

  std::vector<std::vector<double>> inc(n, std::vector<double>(2, 0.0));
  std::vector<std::vector<double>> gains(n, std::vector<double>(2, 1.0));
  std::vector<std::vector<double>> num(n, std::vector<double>(n, 0.0));
  std::vector<std::vector<double>> grad(n, std::vector<double>(2, 0.0));

  const double exaggeration = config.exaggeration_factor;
  const int tail_start = config.iterations - 100;

  auto kl_divergence = [&](double p_scale) {
    // KL against the true (unexaggerated) P
    double z = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) z += num[i][j];
    double kl = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        const double pij = p[i][j] / p_scale;
        const double qij = std::max(num[i][j] / z, kPFloor);
        kl += pij * std::log(pij / qij);
      }
    }
    return kl;
  };

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) p[i][j] *= exaggeration;

  if (diag) diag->kl_tail.clear();

  for (int iter = 0; iter < config.iterations; ++iter) {
    if (iter == config.exaggeration_iters) {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (i != j) p[i][j] /= exaggeration;
    }
    const bool exaggerating = iter < config.exaggeration_iters;
    const double momentum = exaggerating ? 0.5 : 0.8;

    double z = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double dx = y[i][0] - y[j][0];
        const double dy = y[i][1] - y[j][1];
        const double val = 1.0 / (1.0 + dx * dx + dy * dy);
        num[i][j] = val;
        num[j][i] = val;
        z += 2.0 * val;
      }
      num[i][i] = 0.0;
    }

    for (std::size_t i = 0; i < n; ++i) {
      double gx = 0.0, gy = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        const double qij = std::max(num[i][j] / z, kPFloor);
        const double mult = (p[i][j] - qij) * num[i][j];
        gx += mult * (y[i][0] - y[j][0]);
        gy += mult * (y[i][1] - y[j][1]);
      }
      grad[i][0] = 4.0 * gx;
      grad[i][1] = 4.0 * gy;
    }

    for (std::size_t i = 0; i < n; ++i) {
      for (int a = 0; a < 2; ++a) {
        const bool same_sign = (grad[i][a] > 0.0) == (inc[i][a] > 0.0);
        gains[i][a] = same_sign ? gains[i][a] * 0.8 : gains[i][a] + 0.2;
        gains[i][a] = std::max(gains[i][a], 0.01);
        inc[i][a] = momentum * inc[i][a] - config.learning_rate * gains[i][a] * grad[i][a];
        y[i][a] += inc[i][a];
      }
    }
    // re-center
    double mx = 0.0, my = 0.0;
    for (const auto& row : y) {
      mx += row[0];
      my += row[1];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    for (auto& row : y) {
      row[0] -= mx;
      row[1] -= my;
    }

    if (diag) {
      const double p_scale = exaggerating ? exaggeration : 1.0;
      if (iter == config.exaggeration_iters - 1 || (config.exaggeration_iters == 0 && iter == 0))
        diag->kl_at_exaggeration_end = kl_divergence(p_scale);
      if (iter >= tail_start) diag->kl_tail.push_back(kl_divergence(p_scale));
      if (iter == config.iterations - 1) diag->kl_final = kl_divergence(p_scale);
    }
  }

  std::vector<EmbeddingPoint> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    out.push_back({ids[i], y[i][0], y[i][1], groups[i]});
  return out;
}

}  // namespace corpusdiff
