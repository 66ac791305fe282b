#include "deeprules/stats.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include <boost/math/distributions/chi_squared.hpp>

namespace deeprules {
namespace {

// Studentized range statistic divided by sqrt(2), infinite degrees of freedom.
constexpr std::array<double, 9> kQ05 = {1.960, 2.343, 2.569, 2.728, 2.850, 2.949, 3.031, 3.102, 3.164};
constexpr std::array<double, 9> kQ10 = {1.645, 2.052, 2.291, 2.459, 2.589, 2.693, 2.780, 2.855, 2.920};

}  // namespace

std::vector<double> rank_row(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  std::vector<double> ranks(scores.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = rank;
    i = j + 1;
  }
  return ranks;
}

std::vector<double> average_ranks(const std::vector<std::vector<double>>& table) {
  if (table.empty()) return {};
  const std::size_t k = table.front().size();
  std::vector<double> sum(k, 0.0);
  for (const auto& row : table) {
    if (row.size() != k) throw std::invalid_argument("average_ranks: rows have different lengths");
    const auto r = rank_row(row);
    for (std::size_t m = 0; m < k; ++m) sum[m] += r[m];
  }
  for (double& s : sum) s /= static_cast<double>(table.size());
  return sum;
}

FriedmanResult friedman_from_ranks(std::span<const double> ranks, std::size_t n_datasets, double alpha) {
  const std::size_t k = ranks.size();
  if (k < 3) throw std::invalid_argument("friedman_test: needs at least 3 models");
  if (n_datasets < 2) throw std::invalid_argument("friedman_test: needs at least 2 datasets");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("friedman_test: alpha must lie in (0, 1)");

  const double kd = static_cast<double>(k);
  const double nd = static_cast<double>(n_datasets);
  double sum_sq = 0.0;
  for (double r : ranks) sum_sq += r * r;

  FriedmanResult result;
  result.statistic = 12.0 * nd / (kd * (kd + 1.0)) * (sum_sq - kd * (kd + 1.0) * (kd + 1.0) / 4.0);
  // Rounding can leave a tiny negative value for identical ranks.
  if (std::abs(result.statistic) < 1e-12) result.statistic = 0.0;
  result.degrees_of_freedom = k - 1;
  const boost::math::chi_squared dist(static_cast<double>(k - 1));
  result.critical_value = boost::math::quantile(boost::math::complement(dist, alpha));
  result.significant = result.statistic > result.critical_value;
  result.average_ranks.assign(ranks.begin(), ranks.end());
  return result;
}

FriedmanResult friedman_test(const std::vector<std::vector<double>>& table, double alpha) {
  if (table.size() < 2) throw std::invalid_argument("friedman_test: needs at least 2 datasets");
  const auto ranks = average_ranks(table);
  return friedman_from_ranks(ranks, table.size(), alpha);
}

double nemenyi_cd(std::size_t k, std::size_t n_datasets, double alpha) {
  if (k < 2 || k > 10) throw std::invalid_argument("nemenyi_cd: k must be in 2..10, got " + std::to_string(k));
  if (n_datasets == 0) throw std::invalid_argument("nemenyi_cd: needs at least one dataset");
  double q = 0.0;
  if (std::abs(alpha - 0.05) < 1e-9) q = kQ05[k - 2];
  else if (std::abs(alpha - 0.10) < 1e-9) q = kQ10[k - 2];
  else throw std::invalid_argument("nemenyi_cd: alpha must be 0.05 or 0.10");
  const double kd = static_cast<double>(k);
  return q * std::sqrt(kd * (kd + 1.0) / (6.0 * static_cast<double>(n_datasets)));
}

}  // namespace deeprules
