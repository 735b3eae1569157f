#pragma once

#include <vector>

#include "lrr/prob.hpp"
#include "lrr/rng.hpp"
#include "lrr/types.hpp"

namespace lrr {

/// Zero-mean ensembles of random symmetric matrices:
///  - rademacher_weighted: X = sign * B for a fixed symmetric B,
///  - gaussian_weighted:   X = g * B with g standard normal,
///  - random_dyad:         X = sign * v v^T with v uniform on the sphere.
enum class EnsembleKind { kRademacherWeighted, kGaussianWeighted, kRandomDyad };

struct MatrixEnsemble {
  EnsembleKind kind = EnsembleKind::kRandomDyad;
  int n = 0;
  Matrix b; // weight matrix; empty for random_dyad
};

MatrixEnsemble rademacher_ensemble(const Matrix& b);
MatrixEnsemble gaussian_ensemble(const Matrix& b);
MatrixEnsemble dyad_ensemble(int n);

/// One draw. At n = 1 the Rademacher and dyad kinds consume exactly one
/// sign from the stream, so they reproduce a scalar Rademacher sequence
/// bit-for-bit.
Matrix ensemble_sample(const MatrixEnsemble& e, RngStream& rng);

/// Bernstein hypothesis constants: v0_sq bounds ||E X^2||, c bounds ||X||
/// almost surely; sigma_sq and k_bound are the variance-route constants
/// (sigma_sq = ||sum_j E X_j^2||, here per-sample until scaled by m).
struct BernsteinParams {
  double v0_sq = 0.0;
  double c = 0.0;
  double sigma_sq = 0.0;
  double k_bound = 0.0;
  long empirical_samples = 0; // 0 when the constants are analytic
};

/// Analytic constants when the kind permits (Rademacher: E X^2 = B^2 and
/// c = ||B|| exactly; dyad: E X^2 = I/n, c = 1); otherwise sample-mean
/// estimates from `empirical_samples` draws.
BernsteinParams ensemble_params(const MatrixEnsemble& e, long empirical_samples,
                                RngStream& rng);

/// i.i.d. sum scaling: sigma_sq -> m * v0_sq, the rest unchanged.
BernsteinParams scale_params(const BernsteinParams& p, long m);

/// Operator-norm errors ||e^{A+B} - (e^{A/N} e^{B/N})^N|| for each N.
std::vector<double> lie_product_errors(const Matrix& a, const Matrix& b,
                                       const std::vector<long>& ns);

/// (tr e^{A+B}, tr(e^A e^B)) for symmetric inputs. The first never exceeds
/// the second; a violation beyond 1e-9 relative noise is a numerical error.
std::pair<double, double> golden_thompson_gap(const Matrix& a, const Matrix& b);

/// Midpoint concavity gap of A -> tr exp(H + log A) at (a, b):
/// tr exp(H + log((A+B)/2)) - (tr exp(H + log A) + tr exp(H + log B)) / 2.
/// Non-negative for symmetric H and positive definite A, B.
double lieb_concavity_probe(const Matrix& h, const Matrix& a, const Matrix& b);

/// Two-regime tail bound 2n exp(-t^2 / (4 m v0_sq)) for t <= 2 m v0_sq / c,
/// and 2n exp(-t / (2c)) beyond.
double bernstein_bound_theo(int n, long m, double v0_sq, double c, double t);

/// Variance-route bound 2n exp(-(t^2/2) / (m v0_sq + c t / 3)).
double bernstein_bound_lieb(int n, long m, double v0_sq, double c, double t);

struct BernsteinTailReport {
  std::vector<double> thresholds;
  std::vector<double> empirical;
  std::vector<double> bound_theo;
  std::vector<double> bound_lieb;
  long trials = 0;
  int n = 0;
  long m = 0;
  BernsteinParams params;
};

/// Empirical P(||X_1 + ... + X_m|| > t) against both bound curves. Constants
/// come from ensemble_params (2000 draws when empirical ones are needed).
BernsteinTailReport bernstein_tail_experiment(const MatrixEnsemble& e, long m,
                                              const std::vector<double>& ts,
                                              long trials, RngStream& rng,
                                              int threads = 1);

} // namespace lrr
