#pragma once

#include <span>
#include <vector>

namespace ctm {

// Ranks 1..n; tied values share the mean of their ranks.
std::vector<double> average_ranks(std::span<const double> xs);

// Throw RejectedInput on unequal lengths or fewer than 3 points. A constant
// input has no defined correlation and yields NaN.
double pearson(std::span<const double> xs, std::span<const double> ys);
double spearman(std::span<const double> xs, std::span<const double> ys);
// Correlation of x and y with z held fixed.
double partial_corr(std::span<const double> xs, std::span<const double> ys, std::span<const double> zs);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
};

// Ordinary least squares of y on x.
LinearFit ols(std::span<const double> xs, std::span<const double> ys);

struct Correlations {
  double pearson = 0.0;
  double spearman = 0.0;
};

Correlations correlation_study(std::span<const double> a, std::span<const double> b);

}  // namespace ctm
