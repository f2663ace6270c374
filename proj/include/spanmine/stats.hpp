#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace spanmine {

struct CorrelationReport {
  double pearson = 0.0;
  double spearman = 0.0;
  std::size_t n = 0;
};

/// Sample Pearson correlation at 64-bit. Requires equal lengths, n >= 3, and nonzero variance
/// in both inputs (DegenerateInput otherwise).
double pearson(std::span<const double> x, std::span<const double> y);

/// 1-based ranks; tied values share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> x);

/// Pearson correlation of average ranks.
double spearman(std::span<const double> x, std::span<const double> y);

CorrelationReport correlate(std::span<const double> x, std::span<const double> y);

/// Regularized incomplete beta I_x(a, b), continued-fraction evaluation (relative accuracy
/// around 1e-14 in double precision).
double regularized_incomplete_beta(double a, double b, double x);

/// Two-tailed p-value of a Student t statistic with `df` degrees of freedom:
/// I_{df / (df + t^2)}(df / 2, 1 / 2).
double student_t_two_tailed_p(double t, double df);

struct WilliamsResult {
  double t = 0.0;
  double p = 1.0;
  std::size_t df = 0;  // n - 3
};

/// Williams' test (Steiger's formulation) for two dependent correlations r12 and r13 that share
/// variable 1, given r23 between the other two variables:
///   K  = 1 - r12^2 - r13^2 - r23^2 + 2 r12 r13 r23
///   rb = (r12 + r13) / 2
///   t  = (r12 - r13) sqrt((n - 1)(1 + r23) / (2K (n - 1)/(n - 3) + rb^2 (1 - r23)^3))
/// with a two-tailed p from Student t with n - 3 degrees of freedom.
/// Equal r12 and r13 give t = 0, p = 1 (r23 may then be 1, as for identical predictors).
/// Throws for |r| >= 1 otherwise, or n < 4.
WilliamsResult williams_test(double r12, double r13, double r23, std::size_t n);

}  // namespace spanmine
