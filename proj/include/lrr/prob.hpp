#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "lrr/rng.hpp"
#include "lrr/types.hpp"

namespace lrr {

/// Finite point collection in a common dimension, optionally weighted.
/// Weights must be non-negative and sum to 1 within 1e-12.
struct PointSet {
  int dim = 0;
  std::vector<Vector> points;
  std::optional<Vector> weights;
};

PointSet make_point_set(std::vector<Vector> points,
                        std::optional<Vector> weights = std::nullopt);

/// Tail experiment summary: one empirical frequency and one theoretical
/// bound per threshold, over a common trial count.
struct TailReport {
  std::vector<double> thresholds;
  std::vector<double> empirical;
  std::vector<double> bound;
  long trials = 0;
};

/// Slack added to a bound before comparing an empirical frequency against
/// it: a three-sigma binomial half-width plus a small-count floor.
double tail_slack(double bound, long trials);

Vector gaussian_vector(RngStream& rng, int dim);

/// E exp(lambda * g^2) for standard normal g; finite only for lambda < 1/2.
double chi2_mgf(double lambda);

/// Kolmogorov-Smirnov distance between the empirical law of
/// sum_i lambda_i g_i over `trials` draws and its exact law N(0, ||lambda||^2).
double two_stability_report(const Vector& lambda, long trials, RngStream& rng,
                            int threads = 1);

/// Frequencies of { sum_{i<m} g_i^2 >= (1+eps) m } and { <= (1-eps) m }
/// against the shared sub-Gaussian/Poissonian tail bound
/// exp(-(m/2)(eps^2/2 - eps^3/3)). Thresholds are the two absolute cutoffs.
TailReport chi2_tail_experiment(int m, double eps, long trials, RngStream& rng,
                                int threads = 1);

double chi2_tail_bound(int m, double eps);

/// Sparsifies the convex combination sum_j weights_j points_j by sampling
/// n_points indices from `weights` and averaging. Returns the empirical mean
/// and its distance to the true combination.
struct CaratheodoryResult {
  Vector approx;
  double err = 0.0;
};
CaratheodoryResult approx_caratheodory(const PointSet& set, const Vector& weights,
                                       long n_points, RngStream& rng);

/// max_j ||points_j||_2.
double radius(const PointSet& set);

struct MonteCarloResult {
  double estimate = 0.0;
  std::optional<double> rms_bound;
};

/// Averages `n` sampler draws. When the caller supplies ||f||_{L2} (with
/// respect to the sampler's probability measure; rescale first if the
/// underlying measure is not normalized), the classical RMS error bound
/// ||f||_2 / sqrt(n) is reported alongside.
MonteCarloResult monte_carlo_integrate(
    const std::function<double(RngStream&)>& sampler, long n, RngStream& rng,
    std::optional<double> f_l2 = std::nullopt);

/// Smallest embedding dimension the JL argument certifies for n_points
/// points at distortion eps: ceil(4 (eps^2/2 - eps^3/3)^{-1} ln n_points).
long jl_min_dim(long n_points, double eps);

struct JlResult {
  PointSet embedded;
  double max_distortion = 0.0;
  bool success = false; // max_distortion <= eps
};

/// Linear embedding x -> Ax with A an m x dim Gaussian matrix scaled by
/// 1/sqrt(m). max_distortion is over distinct point pairs, measured on
/// squared distances; coincident pairs are skipped.
JlResult jl_embed(const PointSet& set, double eps, int m, RngStream& rng);

} // namespace lrr
