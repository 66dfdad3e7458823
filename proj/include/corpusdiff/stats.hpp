#pragma once

#include <span>
#include <vector>

namespace corpusdiff {

struct TTestResult {
  double t = 0.0;
  double df = 0.0;           // Welch-Satterthwaite, non-integer allowed
  double p_two_sided = 1.0;
  double mean_a = 0.0;
  double mean_b = 0.0;
};

double sample_mean(std::span<const double> xs);

// Unbiased (n-1 denominator) sample variance.
double sample_variance(std::span<const double> xs);

// Regularized incomplete beta I_x(a, b), continued fraction evaluated with
// the modified Lentz method to 1e-14.
double regularized_incomplete_beta(double a, double b, double x);

// Student-t CDF for real df > 0; monotone in x. Non-finite x clamps to 0/1.
double t_cdf(double x, double df);

// Welch two-sample t-test with a two-sided p-value. Each sample needs at
// least two values. When both variances are zero: equal means give t = 0,
// p = 1; unequal means give t = +/-inf, p = 0 (df falls back to
// n_a + n_b - 2 in both cases).
TTestResult welch_t_test(std::span<const double> a, std::span<const double> b);

double euclidean_distance(std::span<const double> u, std::span<const double> v);

// Element-wise arithmetic mean of equal-length rows.
std::vector<double> mean_vector(const std::vector<std::vector<double>>& rows);

}  // namespace corpusdiff
