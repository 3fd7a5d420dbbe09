#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "aidroute/field.hpp"
#include "aidroute/route.hpp"
#include "aidroute/walker.hpp"

namespace aidroute {

// Mean and variance of the lognormal variates themselves (not of their logs).
struct ParamDist {
  double mean_alpha = 0.5;
  double var_alpha = 0.7;
  double mean_beta = 0.5;
  double var_beta = 0.05;
  void validate() const;
};

struct LogNormalParams {
  double mu = 0.0;
  double sigma = 0.0;
  double mean() const;
  double variance() const;
};

// sigma^2 = ln(1 + v / m^2), mu = ln m - sigma^2 / 2.
LogNormalParams moment_match(double mean, double variance);

struct ParamSample {
  double alpha = 0.0;
  double beta = 0.0;
};

std::vector<ParamSample> sample_params(const ParamDist& dist, std::size_t n, std::uint64_t seed);

// Home routes whose coverage is strictly above threshold, in input order.
std::vector<RouteResult> filter_by_coverage(std::span<const RouteResult> results, double threshold);

// Median coverage of the home routes (0 if there are none).
double median_home_coverage(std::span<const RouteResult> results);

struct FitResult {
  double mu = 0.0;
  double sigma = 0.0;
  double r_squared = 0.0;  // Q-Q agreement of log samples with the fitted normal
  std::size_t sample_n = 0;
  LogNormalParams params() const { return {mu, sigma}; }
};

// Log-space MLE. Throws InputError for fewer than 10 samples or any
// non-positive sample, DegenerateFitError when all samples are equal.
FitResult fit_lognormal(std::span<const double> samples);

struct Regression {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;  // 0 when y has no variance
  std::size_t n = 0;
};

// OLS of y on x. Throws InputError on length mismatch, n < 3, or constant x.
Regression regress(std::span<const double> x, std::span<const double> y);

struct Histogram {
  double lo = 0.0;
  double hi = 1.0;
  std::vector<std::size_t> counts;  // values outside [lo, hi] are dropped
};
Histogram histogram(std::span<const double> values, double lo, double hi, std::size_t bins);

struct RuleSummary {
  KnnRule rule = KnnRule::eight;
  std::size_t walks = 0;
  double mean_distance_m = 0.0;
  double mean_coverage = 0.0;
  double home_rate = 0.0;
};

// n walks per rule (4, 8, 12), walk i sharing its seed across rules.
std::vector<RuleSummary> knn_rule_comparison(const Field& field, Cell origin,
                                             const WalkParams& base, std::size_t n_per_rule,
                                             std::uint64_t seed, std::size_t jobs = 1);

}  // namespace aidroute
