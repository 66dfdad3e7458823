#include "corpusdiff/stats.hpp"

#include <cmath>
#include <limits>

#include "corpusdiff/error.hpp"

namespace corpusdiff {

double sample_mean(std::span<const double> xs) {
  if (xs.empty()) throw Error("sample_mean: empty sample");
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs) {
  if (xs.size() < 2) throw Error("sample_variance: need at least 2 values");
  const double m = sample_mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return ss / static_cast<double>(xs.size() - 1);
}

namespace {

// Continued fraction for I_x(a, b), modified Lentz method.
double ibeta_cf(double a, double b, double x) {
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-14;
  constexpr int kMaxIter = 10000;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  throw Error("regularized_incomplete_beta: continued fraction did not converge");
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0))
    throw Error("regularized_incomplete_beta: a and b must be positive");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  // x^a (1-x)^b / B(a,b); symmetric under (a,b,x) -> (b,a,1-x)
  const double front = std::exp(std::lgamma(a + b) - std::lgamma(a) -
                                std::lgamma(b) + a * std::log(x) +
                                b * std::log1p(-x));
  if (x < (a + 1.0) / (a + b + 2.0)) return front * ibeta_cf(a, b, x) / a;
  return 1.0 - front * ibeta_cf(b, a, 1.0 - x) / b;
}

double t_cdf(double x, double df) {
  if (!(df > 0.0)) throw Error("t_cdf: df must be positive");
  if (std::isnan(x)) throw Error("t_cdf: x is NaN");
  if (std::isinf(x)) return x > 0.0 ? 1.0 : 0.0;
  if (x == 0.0) return 0.5;
  const double ib =
      regularized_incomplete_beta(df / 2.0, 0.5, df / (df + x * x));
  return x > 0.0 ? 1.0 - 0.5 * ib : 0.5 * ib;
}

TTestResult welch_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2)
    throw Error("welch_t_test: each sample needs at least 2 values");
  TTestResult r;
  r.mean_a = sample_mean(a);
  r.mean_b = sample_mean(b);
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double va = sample_variance(a);
  const double vb = sample_variance(b);
  const double sa = va / na;
  const double sb = vb / nb;
  const double se2 = sa + sb;
  if (se2 == 0.0) {
    r.df = na + nb - 2.0;
    if (r.mean_a == r.mean_b) {
      r.t = 0.0;
      r.p_two_sided = 1.0;
    } else {
      r.t = r.mean_a > r.mean_b ? std::numeric_limits<double>::infinity()
                                : -std::numeric_limits<double>::infinity();
      r.p_two_sided = 0.0;
    }
    return r;
  }
  r.t = (r.mean_a - r.mean_b) / std::sqrt(se2);
  r.df = se2 * se2 / (sa * sa / (na - 1.0) + sb * sb / (nb - 1.0));
  // Two-sided p straight from the incomplete beta: more accurate than
  // 2 * (1 - cdf) in the far tail.
  r.p_two_sided =
      regularized_incomplete_beta(r.df / 2.0, 0.5, r.df / (r.df + r.t * r.t));
  return r;
}

double euclidean_distance(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size())
    throw Error("euclidean_distance: length mismatch");
  double ss = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double d = u[i] - v[i];
    ss += d * d;
  }
  return std::sqrt(ss);
}

std::vector<double> mean_vector(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw Error("mean_vector: empty input");
  const std::size_t n = rows[0].size();
  std::vector<double> out(n, 0.0);
  for (const auto& row : rows) {
    if (row.size() != n) throw Error("mean_vector: ragged rows");
    for (std::size_t i = 0; i < n; ++i) out[i] += row[i];
  }
  for (double& x : out) x /= static_cast<double>(rows.size());
  return out;
}

}  // namespace corpusdiff
