#include "lrr/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "lrr/linalg.hpp"
#include "lrr/parallel.hpp"

namespace lrr {

namespace {

Matrix checked_weight(const Matrix& b, const char* what) {
  const Matrix sym = require_symmetric(b, what);
  if (sym.rows() == 0) {
    throw std::invalid_argument(std::string(what) + ": empty weight matrix");
  }
  return sym;
}

Matrix matrix_power(Matrix base, long n) {
  Matrix acc = Matrix::Identity(base.rows(), base.cols());
  while (n > 0) {
    if (n & 1) acc = acc * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return acc;
}

} // namespace

MatrixEnsemble rademacher_ensemble(const Matrix& b) {
  MatrixEnsemble e;
  e.kind = EnsembleKind::kRademacherWeighted;
  e.b = checked_weight(b, "rademacher_ensemble");
  e.n = static_cast<int>(e.b.rows());
  return e;
}

MatrixEnsemble gaussian_ensemble(const Matrix& b) {
  MatrixEnsemble e;
  e.kind = EnsembleKind::kGaussianWeighted;
  e.b = checked_weight(b, "gaussian_ensemble");
  e.n = static_cast<int>(e.b.rows());
  return e;
}

MatrixEnsemble dyad_ensemble(int n) {
  if (n < 1) {
    throw std::invalid_argument("dyad_ensemble: dimension must be positive");
  }
  MatrixEnsemble e;
  e.kind = EnsembleKind::kRandomDyad;
  e.n = n;
  return e;
}

Matrix ensemble_sample(const MatrixEnsemble& e, RngStream& rng) {
  switch (e.kind) {
    case EnsembleKind::kRademacherWeighted:
      return static_cast<double>(rng.next_sign()) * e.b;
    case EnsembleKind::kGaussianWeighted:
      return rng.next_gaussian() * e.b;
    case EnsembleKind::kRandomDyad: {
      const double sign = static_cast<double>(rng.next_sign());
      if (e.n == 1) return Matrix::Constant(1, 1, sign);
      Vector v = gaussian_vector(rng, e.n);
      double norm = v.norm();
      while (norm == 0.0) {
        v = gaussian_vector(rng, e.n);
        norm = v.norm();
      }
      v /= norm;
      return sign * (v * v.transpose());
    }
  }
  throw std::invalid_argument("ensemble_sample: unknown ensemble kind");
}

BernsteinParams ensemble_params(const MatrixEnsemble& e, long empirical_samples,
                                RngStream& rng) {
  BernsteinParams p;
  switch (e.kind) {
    case EnsembleKind::kRademacherWeighted:
      p.v0_sq = operator_norm(e.b * e.b);
      p.c = operator_norm(e.b);
      break;
    case EnsembleKind::kRandomDyad:
      p.v0_sq = 1.0 / static_cast<double>(e.n);
      p.c = 1.0;
      break;
    case EnsembleKind::kGaussianWeighted: {
      if (empirical_samples < 1) {
        throw std::invalid_argument(
            "ensemble_params: gaussian weights need empirical samples");
      }
      Matrix second = Matrix::Zero(e.n, e.n);
      double max_norm = 0.0;
      for (long s = 0; s < empirical_samples; ++s) {
        const Matrix x = ensemble_sample(e, rng);
        second += x * x;
        max_norm = std::max(max_norm, operator_norm(x));
      }
      second /= static_cast<double>(empirical_samples);
      p.v0_sq = operator_norm(second);
      p.c = max_norm;
      p.empirical_samples = empirical_samples;
      break;
    }
  }
  p.sigma_sq = p.v0_sq;
  p.k_bound = p.c;
  return p;
}

BernsteinParams scale_params(const BernsteinParams& p, long m) {
  if (m < 1) {
    throw std::invalid_argument("scale_params: m must be positive");
  }
  BernsteinParams out = p;
  out.sigma_sq = static_cast<double>(m) * p.v0_sq;
  return out;
}

std::vector<double> lie_product_errors(const Matrix& a, const Matrix& b,
                                       const std::vector<long>& ns) {
  require_finite(a, "lie_product_errors");
  require_finite(b, "lie_product_errors");
  require_same_shape(a, b, "lie_product_errors");
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("lie_product_errors: matrices must be square");
  }
  const Matrix target = expm(a + b);
  std::vector<double> errors;
  errors.reserve(ns.size());
  for (const long n : ns) {
    if (n < 1) {
      throw std::invalid_argument("lie_product_errors: N must be positive");
    }
    const double inv = 1.0 / static_cast<double>(n);
    const Matrix step = expm(inv * a) * expm(inv * b);
    errors.push_back(operator_norm(target - matrix_power(step, n)));
  }
  return errors;
}

std::pair<double, double> golden_thompson_gap(const Matrix& a, const Matrix& b) {
  const Matrix as = require_symmetric(a, "golden_thompson_gap");
  const Matrix bs = require_symmetric(b, "golden_thompson_gap");
  require_same_shape(as, bs, "golden_thompson_gap");
  const double lhs = sym_expm(as + bs).trace();
  const double rhs = (sym_expm(as) * sym_expm(bs)).trace();
  if (lhs > rhs + 1e-9 * std::abs(rhs)) {
    throw NumericalError("golden_thompson_gap: trace inequality violated "
                         "beyond numerical tolerance");
  }
  return {lhs, rhs};
}

double lieb_concavity_probe(const Matrix& h, const Matrix& a, const Matrix& b) {
  const Matrix hs = require_symmetric(h, "lieb_concavity_probe");
  const Matrix as = require_symmetric(a, "lieb_concavity_probe");
  const Matrix bs = require_symmetric(b, "lieb_concavity_probe");
  require_same_shape(hs, as, "lieb_concavity_probe");
  require_same_shape(hs, bs, "lieb_concavity_probe");
  const double mid = sym_expm(hs + sym_logm(0.5 * (as + bs))).trace();
  const double left = sym_expm(hs + sym_logm(as)).trace();
  const double right = sym_expm(hs + sym_logm(bs)).trace();
  const double gap = mid - 0.5 * (left + right);
  const double scale =
      std::max({1.0, std::abs(mid), std::abs(left), std::abs(right)});
  if (gap < -1e-9 * scale) {
    throw NumericalError("lieb_concavity_probe: midpoint concavity violated "
                         "beyond numerical tolerance");
  }
  return gap;
}

double bernstein_bound_theo(int n, long m, double v0_sq, double c, double t) {
  if (n < 1 || m < 1 || !(v0_sq > 0.0) || !(c > 0.0) || !(t > 0.0)) {
    throw std::invalid_argument("bernstein_bound_theo: invalid arguments");
  }
  const double md = static_cast<double>(m);
  if (t <= 2.0 * md * v0_sq / c) {
    return 2.0 * n * std::exp(-t * t / (4.0 * md * v0_sq));
  }
  return 2.0 * n * std::exp(-t / (2.0 * c));
}

double bernstein_bound_lieb(int n, long m, double v0_sq, double c, double t) {
  if (n < 1 || m < 1 || !(v0_sq > 0.0) || !(c > 0.0) || !(t > 0.0)) {
    throw std::invalid_argument("bernstein_bound_lieb: invalid arguments");
  }
  const double sigma_sq = static_cast<double>(m) * v0_sq;
  return 2.0 * n * std::exp(-(t * t / 2.0) / (sigma_sq + c * t / 3.0));
}

BernsteinTailReport bernstein_tail_experiment(const MatrixEnsemble& e, long m,
                                              const std::vector<double>& ts,
                                              long trials, RngStream& rng,
                                              int threads) {
  if (m < 1 || trials < 1) {
    throw std::invalid_argument("bernstein_tail_experiment: need m, trials >= 1");
  }
  if (ts.empty()) {
    throw std::invalid_argument("bernstein_tail_experiment: no thresholds");
  }
  for (const double t : ts) {
    if (!(t > 0.0)) {
      throw std::invalid_argument(
          "bernstein_tail_experiment: thresholds must be positive");
    }
  }
  // Key `trials` sits one past the per-trial fork keys, so the parameter
  // stream never collides with a trial stream.
  RngStream params_rng = rng.fork(static_cast<std::uint64_t>(trials));
  const BernsteinParams params =
      scale_params(ensemble_params(e, 2000, params_rng), m);
  std::vector<double> norms(static_cast<std::size_t>(trials));
  parallel_trials(trials, threads, [&](long t_idx) {
    RngStream s = rng.fork(static_cast<std::uint64_t>(t_idx));
    Matrix sum = Matrix::Zero(e.n, e.n);
    for (long i = 0; i < m; ++i) {
      sum += ensemble_sample(e, s);
    }
    norms[static_cast<std::size_t>(t_idx)] = operator_norm(sum);
  });
  BernsteinTailReport rep;
  rep.trials = trials;
  rep.n = e.n;
  rep.m = m;
  rep.params = params;
  rep.thresholds = ts;
  for (const double t : ts) {
    long hits = 0;
    for (const double nm : norms) {
      if (nm > t) ++hits;
    }
    rep.empirical.push_back(static_cast<double>(hits) / static_cast<double>(trials));
    rep.bound_theo.push_back(bernstein_bound_theo(e.n, m, params.v0_sq, params.c, t));
    rep.bound_lieb.push_back(bernstein_bound_lieb(e.n, m, params.v0_sq, params.c, t));
  }
  return rep;
}

} // namespace lrr
