#include "aidroute/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/normal.hpp>

#include "aidroute/batch.hpp"
#include "aidroute/errors.hpp"
#include "aidroute/rng.hpp"

namespace aidroute {

void ParamDist::validate() const {
  if (!(mean_alpha > 0 && mean_beta > 0)) throw ConfigError("lognormal means must be positive");
  if (!(var_alpha > 0 && var_beta > 0)) throw ConfigError("lognormal variances must be positive");
}

double LogNormalParams::mean() const { return std::exp(mu + 0.5 * sigma * sigma); }

double LogNormalParams::variance() const {
  const double s2 = sigma * sigma;
  return std::expm1(s2) * std::exp(2.0 * mu + s2);
}

LogNormalParams moment_match(double mean, double variance) {
  const double s2 = std::log1p(variance / (mean * mean));
  return {std::log(mean) - 0.5 * s2, std::sqrt(s2)};
}

std::vector<ParamSample> sample_params(const ParamDist& dist, std::size_t n, std::uint64_t seed) {
  dist.validate();
  if (n == 0) throw InputError("sample count must be >= 1");
  const auto a = moment_match(dist.mean_alpha, dist.var_alpha);
  const auto b = moment_match(dist.mean_beta, dist.var_beta);
  Rng rng(seed);
  std::vector<ParamSample> out(n);
  for (auto& s : out) {
    s.alpha = std::exp(a.mu + a.sigma * rng.normal());
    s.beta = std::exp(b.mu + b.sigma * rng.normal());
  }
  return out;
}

std::vector<RouteResult> filter_by_coverage(std::span<const RouteResult> results,
                                            double threshold) {
  std::vector<RouteResult> out;
  for (const auto& r : results)
    if (r.is_home() && r.coverage > threshold) out.push_back(r);
  return out;
}

double median_home_coverage(std::span<const RouteResult> results) {
  std::vector<double> cov;
  for (const auto& r : results)
    if (r.is_home()) cov.push_back(r.coverage);
  if (cov.empty()) return 0.0;
  std::sort(cov.begin(), cov.end());
  const std::size_t m = cov.size() / 2;
  return cov.size() % 2 ? cov[m] : 0.5 * (cov[m - 1] + cov[m]);
}

FitResult fit_lognormal(std::span<const double> samples) {
  if (samples.size() < 10)
    throw InputError("lognormal fit needs at least 10 samples, got " +
                     std::to_string(samples.size()));
  std::vector<double> logs;
  logs.reserve(samples.size());
  for (double s : samples) {
    if (!(s > 0.0)) throw InputError("lognormal fit needs positive samples");
    logs.push_back(std::log(s));
  }
  const double n = static_cast<double>(logs.size());
  const double mu = std::accumulate(logs.begin(), logs.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : logs) ss += (v - mu) * (v - mu);
  const double sigma = std::sqrt(ss / n);
  if (!(sigma > 0.0)) throw DegenerateFitError("all samples are equal; sigma is zero");

  std::sort(logs.begin(), logs.end());
  const boost::math::normal_distribution<double> unit;
  double res = 0.0;
  for (std::size_t i = 0; i < logs.size(); ++i) {
    const double p = (static_cast<double>(i) + 0.5) / n;
    const double q = mu + sigma * boost::math::quantile(unit, p);
    res += (logs[i] - q) * (logs[i] - q);
  }
  return {mu, sigma, 1.0 - res / ss, logs.size()};
}

Regression regress(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InputError("regression inputs differ in length");
  if (x.size() < 3) throw InputError("regression needs at least 3 points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw InputError("x has zero variance; slope is undefined");
  Regression r;
  r.n = x.size();
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  if (syy > 0.0) {
    double res = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double e = y[i] - (r.intercept + r.slope * x[i]);
      res += e * e;
    }
    r.r_squared = 1.0 - res / syy;
  }
  return r;
}

Histogram histogram(std::span<const double> values, double lo, double hi, std::size_t bins) {
  if (bins == 0 || !(hi > lo)) throw InputError("histogram needs bins > 0 and hi > lo");
  Histogram h{lo, hi, std::vector<std::size_t>(bins, 0)};
  const double width = (hi - lo) / static_cast<double>(bins);
  for (double v : values) {
    if (!(v >= lo && v <= hi)) continue;
    auto b = static_cast<std::size_t>((v - lo) / width);
    ++h.counts[std::min(b, bins - 1)];
  }
  return h;
}

std::vector<RuleSummary> knn_rule_comparison(const Field& field, Cell origin,
                                             const WalkParams& base, std::size_t n_per_rule,
                                             std::uint64_t seed, std::size_t jobs) {
  if (n_per_rule == 0) throw InputError("knn rule comparison needs at least one walk per rule");
  std::vector<RuleSummary> out;
  for (KnnRule rule : {KnnRule::four, KnnRule::eight, KnnRule::twelve}) {
    WalkParams p = base;
    p.knn_rule = rule;
    const auto routes = run_walks(field, origin, p, n_per_rule, seed, jobs);
    RuleSummary s;
    s.rule = rule;
    s.walks = routes.size();
    std::size_t home = 0;
    for (const auto& r : routes) {
      s.mean_distance_m += r.distance_m;
      s.mean_coverage += r.coverage;
      home += r.is_home() ? 1 : 0;
    }
    const double n = static_cast<double>(routes.size());
    s.mean_distance_m /= n;
    s.mean_coverage /= n;
    s.home_rate = static_cast<double>(home) / n;
    out.push_back(s);
  }
  return out;
}

}  // namespace aidroute
