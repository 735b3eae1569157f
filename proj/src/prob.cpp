#include "lrr/prob.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "lrr/parallel.hpp"

namespace lrr {
namespace {

void validate_point_set(const PointSet& set) {
  if (set.dim <= 0) throw std::invalid_argument("PointSet: dim must be positive");
  for (const Vector& p : set.points) {
    if (p.size() != set.dim) {
      throw std::invalid_argument("PointSet: point dimension mismatch");
    }
    if (!p.allFinite()) {
      throw std::invalid_argument("PointSet: point contains NaN or Inf");
    }
  }
  if (set.weights) {
    const Vector& w = *set.weights;
    if (w.size() != static_cast<Index>(set.points.size())) {
      throw std::invalid_argument("PointSet: one weight per point required");
    }
    if ((w.array() < 0.0).any()) {
      throw std::invalid_argument("PointSet: weights must be non-negative");
    }
    if (std::abs(w.sum() - 1.0) > 1e-12) {
      throw std::invalid_argument("PointSet: weights must sum to 1");
    }
  }
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

} // namespace

PointSet make_point_set(std::vector<Vector> points, std::optional<Vector> weights) {
  if (points.empty()) throw std::invalid_argument("PointSet: no points");
  PointSet set;
  set.dim = static_cast<int>(points.front().size());
  set.points = std::move(points);
  set.weights = std::move(weights);
  validate_point_set(set);
  return set;
}

double tail_slack(double bound, long trials) {
  if (trials <= 0) throw std::invalid_argument("tail_slack: trials must be positive");
  return 3.0 * std::sqrt(bound / static_cast<double>(trials)) +
         10.0 / static_cast<double>(trials);
}

Vector gaussian_vector(RngStream& rng, int dim) {
  if (dim <= 0) throw std::invalid_argument("gaussian_vector: dim must be positive");
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = rng.next_gaussian();
  return v;
}

double chi2_mgf(double lambda) {
  if (!(lambda < 0.5)) {
    throw std::invalid_argument("chi2_mgf: finite only for lambda < 1/2");
  }
  return 1.0 / std::sqrt(1.0 - 2.0 * lambda);
}

double two_stability_report(const Vector& lambda, long trials, RngStream& rng,
                            int threads) {
  if (lambda.size() == 0 || lambda.norm() == 0.0) {
    throw std::invalid_argument("two_stability_report: lambda must be non-zero");
  }
  if (trials < 10000) {
    throw std::invalid_argument("two_stability_report: needs at least 1e4 trials");
  }
  const double scale = lambda.norm();
  std::vector<double> samples(static_cast<std::size_t>(trials));
  parallel_trials(trials, threads, [&](long t) {
    RngStream s = rng.fork(static_cast<std::uint64_t>(t));
    double acc = 0.0;
    for (Index i = 0; i < lambda.size(); ++i) acc += lambda(i) * s.next_gaussian();
    samples[static_cast<std::size_t>(t)] = acc;
  });
  std::sort(samples.begin(), samples.end());
  double ks = 0.0;
  const double n = static_cast<double>(trials);
  for (long i = 0; i < trials; ++i) {
    const double f = normal_cdf(samples[static_cast<std::size_t>(i)] / scale);
    ks = std::max(ks, std::abs(f - static_cast<double>(i) / n));
    ks = std::max(ks, std::abs(static_cast<double>(i + 1) / n - f));
  }
  return ks;
}

double chi2_tail_bound(int m, double eps) {
  if (m <= 0) throw std::invalid_argument("chi2_tail_bound: m must be positive");
  if (!(eps > 0.0 && eps < 1.0)) {
    throw std::invalid_argument("chi2_tail_bound: eps must lie in (0, 1)");
  }
  return std::exp(-0.5 * m * (eps * eps / 2.0 - eps * eps * eps / 3.0));
}

TailReport chi2_tail_experiment(int m, double eps, long trials, RngStream& rng,
                                int threads) {
  const double bound = chi2_tail_bound(m, eps); // validates m, eps
  if (trials <= 0) {
    throw std::invalid_argument("chi2_tail_experiment: trials must be positive");
  }
  std::vector<unsigned char> upper(static_cast<std::size_t>(trials));
  std::vector<unsigned char> lower(static_cast<std::size_t>(trials));
  const double up = (1.0 + eps) * m;
  const double lo = (1.0 - eps) * m;
  parallel_trials(trials, threads, [&](long t) {
    RngStream s = rng.fork(static_cast<std::uint64_t>(t));
    double acc = 0.0;
    for (int i = 0; i < m; ++i) {
      const double g = s.next_gaussian();
      acc += g * g;
    }
    upper[static_cast<std::size_t>(t)] = acc >= up ? 1 : 0;
    lower[static_cast<std::size_t>(t)] = acc <= lo ? 1 : 0;
  });
  const double n = static_cast<double>(trials);
  TailReport report;
  report.thresholds = {up, lo};
  report.empirical = {
      std::accumulate(upper.begin(), upper.end(), 0.0) / n,
      std::accumulate(lower.begin(), lower.end(), 0.0) / n};
  report.bound = {bound, bound};
  report.trials = trials;
  return report;
}

CaratheodoryResult approx_caratheodory(const PointSet& set, const Vector& weights,
                                       long n_points, RngStream& rng) {
  validate_point_set(set);
  if (weights.size() != static_cast<Index>(set.points.size())) {
    throw std::invalid_argument("approx_caratheodory: one weight per point");
  }
  if ((weights.array() < 0.0).any() || std::abs(weights.sum() - 1.0) > 1e-12) {
    throw std::invalid_argument(
        "approx_caratheodory: weights must be a probability vector");
  }
  if (n_points <= 0) {
    throw std::invalid_argument("approx_caratheodory: n_points must be positive");
  }

  Vector target = Vector::Zero(set.dim);
  for (std::size_t j = 0; j < set.points.size(); ++j) {
    target += weights(static_cast<Index>(j)) * set.points[j];
  }

  std::vector<double> cumulative(set.points.size());
  double acc = 0.0;
  for (std::size_t j = 0; j < set.points.size(); ++j) {
    acc += weights(static_cast<Index>(j));
    cumulative[j] = acc;
  }
  cumulative.back() = 1.0; // guard the last bucket against rounding

  Vector mean = Vector::Zero(set.dim);
  for (long k = 0; k < n_points; ++k) {
    const double u = rng.next_unit();
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    const std::size_t idx = static_cast<std::size_t>(
        std::min(cumulative.size() - 1,
                 static_cast<std::size_t>(it - cumulative.begin())));
    mean += set.points[idx];
  }
  mean /= static_cast<double>(n_points);

  CaratheodoryResult result;
  result.approx = mean;
  result.err = (mean - target).norm();
  return result;
}

double radius(const PointSet& set) {
  validate_point_set(set);
  double r = 0.0;
  for (const Vector& p : set.points) r = std::max(r, p.norm());
  return r;
}

MonteCarloResult monte_carlo_integrate(
    const std::function<double(RngStream&)>& sampler, long n, RngStream& rng,
    std::optional<double> f_l2) {
  if (!sampler) throw std::invalid_argument("monte_carlo_integrate: null sampler");
  if (n <= 0) throw std::invalid_argument("monte_carlo_integrate: n must be positive");
  double acc = 0.0;
  for (long k = 0; k < n; ++k) acc += sampler(rng);
  MonteCarloResult result;
  result.estimate = acc / static_cast<double>(n);
  if (f_l2) {
    if (*f_l2 < 0.0) {
      throw std::invalid_argument("monte_carlo_integrate: ||f||_2 must be >= 0");
    }
    result.rms_bound = *f_l2 / std::sqrt(static_cast<double>(n));
  }
  return result;
}

long jl_min_dim(long n_points, double eps) {
  if (n_points < 2) throw std::invalid_argument("jl_min_dim: need >= 2 points");
  if (!(eps > 0.0 && eps < 1.0)) {
    throw std::invalid_argument("jl_min_dim: eps must lie in (0, 1)");
  }
  const double rate = eps * eps / 2.0 - eps * eps * eps / 3.0;
  return static_cast<long>(
      std::ceil(4.0 / rate * std::log(static_cast<double>(n_points))));
}

JlResult jl_embed(const PointSet& set, double eps, int m, RngStream& rng) {
  validate_point_set(set);
  if (!(eps > 0.0 && eps < 1.0)) {
    throw std::invalid_argument("jl_embed: eps must lie in (0, 1)");
  }
  if (m <= 0) throw std::invalid_argument("jl_embed: m must be positive");

  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  Matrix a(m, set.dim);
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) a(i, j) = scale * rng.next_gaussian();

  JlResult result;
  result.embedded.dim = m;
  result.embedded.points.reserve(set.points.size());
  for (const Vector& p : set.points) result.embedded.points.push_back(a * p);
  result.embedded.weights = set.weights;

  double worst = 0.0;
  for (std::size_t i = 0; i < set.points.size(); ++i) {
    for (std::size_t j = i + 1; j < set.points.size(); ++j) {
      const double orig = (set.points[i] - set.points[j]).squaredNorm();
      if (orig == 0.0) continue;
      const double img =
          (result.embedded.points[i] - result.embedded.points[j]).squaredNorm();
      worst = std::max(worst, std::abs(img - orig) / orig);
    }
  }
  result.max_distortion = worst;
  result.success = worst <= eps;
  return result;
}

} // namespace lrr
