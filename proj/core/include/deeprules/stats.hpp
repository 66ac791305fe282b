#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace deeprules {

/// Ranks of one row of scores, 1 = highest; ties share their average rank.
std::vector<double> rank_row(std::span<const double> scores);

/// Average rank of every column over the rows of `table` (datasets x models).
std::vector<double> average_ranks(const std::vector<std::vector<double>>& table);

struct FriedmanResult {
  double statistic = 0.0;       // chi-square form
  double critical_value = 0.0;  // chi-square quantile at 1 - alpha, k - 1 degrees of freedom
  std::size_t degrees_of_freedom = 0;
  bool significant = false;
  std::vector<double> average_ranks;
};

/// Friedman test on accuracies (higher is better).
/// Throws std::invalid_argument unless k >= 3, N >= 2, the rows are
/// rectangular and alpha lies in (0, 1).
FriedmanResult friedman_test(const std::vector<std::vector<double>>& table, double alpha = 0.05);

/// Friedman test from already averaged ranks over `n_datasets` rows.
FriedmanResult friedman_from_ranks(std::span<const double> average_ranks, std::size_t n_datasets,
                                   double alpha = 0.05);

/// Nemenyi critical distance q_alpha * sqrt(k (k + 1) / (6 N)).
/// Tabulated for k in 2..10 and alpha in {0.05, 0.10}; anything else throws
/// std::invalid_argument.
double nemenyi_cd(std::size_t k, std::size_t n_datasets, double alpha = 0.05);

}  // namespace deeprules
