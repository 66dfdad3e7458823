#pragma once

// Test-only utilities: independent numeric oracles and synthetic data
// builders. Nothing here may call back into the implementation paths it is
// used to check.

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "corpusdiff/corpus.hpp"
#include "corpusdiff/rng.hpp"

namespace testutil {

// ---- independent Student-t CDF oracle (adaptive Simpson quadrature) ----

inline double t_density(double x, double nu) {
  const double c = std::exp(std::lgamma((nu + 1.0) / 2.0) - std::lgamma(nu / 2.0)) /
                   std::sqrt(nu * 3.14159265358979323846);
  return c * std::pow(1.0 + x * x / nu, -(nu + 1.0) / 2.0);
}

inline double simpson(const std::function<double(double)>& f, double a, double b,
                      double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a,
                               double b, double fa, double fm, double fb,
                               double whole, double tol, int depth) {
  const double m = (a + b) / 2.0;
  const double lm = (a + m) / 2.0, rm = (m + b) / 2.0;
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(f, a, m, fa, flm, fm);
  const double right = simpson(f, m, b, fm, frm, fb);
  if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol) {
  const double m = (a + b) / 2.0;
  const double fa = f(a), fm = f(m), fb = f(b);
  return adaptive_simpson(f, a, b, fa, fm, fb, simpson(f, a, b, fa, fm, fb), tol, 60);
}

// CDF by direct numerical integration of the density; wholly independent of
// the incomplete-beta route used by the implementation.
inline double t_cdf_oracle(double x, double nu) {
  if (x == 0.0) return 0.5;
  const auto f = [nu](double t) { return t_density(t, nu); };
  const double tail = integrate(f, 0.0, std::fabs(x), 1e-14);
  return x > 0.0 ? 0.5 + tail : 0.5 - tail;
}

struct WelchOracle {
  double t, df, p;
};

inline WelchOracle welch_oracle(const std::vector<double>& a,
                                const std::vector<double>& b) {
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  double ma = 0.0, mb = 0.0;
  for (double x : a) ma += x;
  for (double x : b) mb += x;
  ma /= na;
  mb /= nb;
  double va = 0.0, vb = 0.0;
  for (double x : a) va += (x - ma) * (x - ma);
  for (double x : b) vb += (x - mb) * (x - mb);
  va /= na - 1.0;
  vb /= nb - 1.0;
  const double sa = va / na, sb = vb / nb;
  WelchOracle o;
  o.t = (ma - mb) / std::sqrt(sa + sb);
  o.df = (sa + sb) * (sa + sb) / (sa * sa / (na - 1.0) + sb * sb / (nb - 1.0));
  o.p = 2.0 * (1.0 - t_cdf_oracle(std::fabs(o.t), o.df));
  return o;
}

// ---- synthetic corpora ----

struct SyntheticCorpus {
  std::vector<std::vector<std::string>> docs_tokens;
  std::vector<std::string> ids;
  std::vector<corpusdiff::Group> groups;  // A = family 0, B = family 1
  std::vector<int> family;                // generating vocabulary family per doc
};

// Two disjoint vocabulary families; documents draw uniformly from their
// family's terms.
inline SyntheticCorpus make_disjoint_corpus(
    std::size_t docs_per_family, std::size_t tokens_per_doc, std::uint64_t seed,
    const std::vector<std::string>& family0 = {"a", "b", "c"},
    const std::vector<std::string>& family1 = {"x", "y", "z"}) {
  SyntheticCorpus c;
  corpusdiff::Rng rng(seed);
  for (int fam = 0; fam < 2; ++fam) {
    const auto& vocab = fam == 0 ? family0 : family1;
    for (std::size_t d = 0; d < docs_per_family; ++d) {
      std::vector<std::string> tokens;
      tokens.reserve(tokens_per_doc);
      for (std::size_t t = 0; t < tokens_per_doc; ++t)
        tokens.push_back(vocab[rng.below(vocab.size())]);
      char buf[32];
      std::snprintf(buf, sizeof(buf), "doc_%d_%03zu", fam, d);
      c.docs_tokens.push_back(std::move(tokens));
      c.ids.push_back(buf);
      c.groups.push_back(fam == 0 ? corpusdiff::Group::A : corpusdiff::Group::B);
      c.family.push_back(fam);
    }
  }
  return c;
}

// ---- point clusters for kNN / t-SNE ----

struct Clusters {
  std::vector<std::vector<double>> points;
  std::vector<corpusdiff::Group> labels;
  std::vector<std::string> ids;
};

inline Clusters make_clusters(std::size_t per_cluster, std::size_t dim,
                              double separation, double spread,
                              std::uint64_t seed) {
  Clusters c;
  corpusdiff::Rng rng(seed);
  for (int cls = 0; cls < 2; ++cls) {
    for (std::size_t i = 0; i < per_cluster; ++i) {
      std::vector<double> p(dim, 0.0);
      for (std::size_t a = 0; a < dim; ++a)
        p[a] = (cls == 0 ? 0.0 : separation) + spread * rng.normal();
      char buf[32];
      std::snprintf(buf, sizeof(buf), "pt_%d_%03zu", cls, i);
      c.points.push_back(std::move(p));
      c.labels.push_back(cls == 0 ? corpusdiff::Group::A : corpusdiff::Group::B);
      c.ids.push_back(buf);
    }
  }
  return c;
}

// Perceptron: converges on separable data, so a bounded run serves as a
// separability oracle in 2D.
inline bool linearly_separable(const std::vector<std::pair<double, double>>& pts,
                               const std::vector<int>& labels, int max_epochs = 20000) {
  double w0 = 0.0, w1 = 0.0, bias = 0.0;
  for (int epoch = 0; epoch < max_epochs; ++epoch) {
    bool mistake = false;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double y = labels[i] > 0 ? 1.0 : -1.0;
      const double score = w0 * pts[i].first + w1 * pts[i].second + bias;
      if (y * score <= 0.0) {
        w0 += y * pts[i].first;
        w1 += y * pts[i].second;
        bias += y;
        mistake = true;
      }
    }
    if (!mistake) return true;
  }
  return false;
}

}  // namespace testutil
