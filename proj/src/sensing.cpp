#include "lrr/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "lrr/linalg.hpp"
#include "lrr/nets.hpp"
#include "lrr/parallel.hpp"

namespace lrr {

GaussianMap gaussian_map_from_layout(std::uint64_t seed, std::uint64_t stream_id,
                                     int m, int rows, int cols) {
  if (m <= 0 || rows <= 0 || cols <= 0) {
    throw std::invalid_argument("gaussian_map_new: dimensions must be positive");
  }
  GaussianMap map;
  map.m = m;
  map.rows = rows;
  map.cols = cols;
  map.seed = seed;
  map.stream_id = stream_id;
  map.from_seed = true;
  RngStream rng(seed, stream_id);
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  map.mats.reserve(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    Matrix x(rows, cols);
    for (Index i = 0; i < x.rows(); ++i)
      for (Index l = 0; l < x.cols(); ++l) x(i, l) = scale * rng.next_gaussian();
    map.mats.push_back(std::move(x));
  }
  return map;
}

GaussianMap gaussian_map_new(RngStream& rng, int m, int rows, int cols) {
  // A fresh child stream keyed off the caller makes the map re-derivable
  // from (seed, stream_id) alone while distinct calls stay independent.
  const RngStream child = rng.fork(rng.next_u64());
  return gaussian_map_from_layout(child.seed(), child.stream_id(), m, rows, cols);
}

GaussianMap map_from_mats(std::vector<Matrix> mats) {
  if (mats.empty()) throw std::invalid_argument("map_from_mats: no matrices");
  GaussianMap map;
  map.m = static_cast<int>(mats.size());
  map.rows = static_cast<int>(mats.front().rows());
  map.cols = static_cast<int>(mats.front().cols());
  for (const Matrix& x : mats) {
    require_finite(x, "map_from_mats");
    if (x.rows() != map.rows || x.cols() != map.cols) {
      throw std::invalid_argument("map_from_mats: inconsistent shapes");
    }
  }
  map.mats = std::move(mats);
  return map;
}

Vector apply_map(const GaussianMap& map, const Matrix& a) {
  require_finite(a, "apply_map");
  if (a.rows() != map.rows || a.cols() != map.cols) {
    throw std::invalid_argument("apply_map: matrix shape does not match the map");
  }
  Vector y(map.m);
  for (int j = 0; j < map.m; ++j) y(j) = map.mats[static_cast<std::size_t>(j)]
                                              .cwiseProduct(a)
                                              .sum();
  return y;
}

double fixed_vector_isometry_bound(int m, double t) {
  if (m <= 0) throw std::invalid_argument("fixed_vector_isometry_bound: m > 0");
  if (!(t > 0.0 && t < 1.0)) {
    throw std::invalid_argument("fixed_vector_isometry_bound: t must lie in (0, 1)");
  }
  return 2.0 * std::exp(-0.5 * m * (t * t / 2.0 - t * t * t / 3.0));
}

TailReport fixed_vector_isometry_experiment(int m, long trials,
                                            const std::vector<double>& ts,
                                            RngStream& rng, int threads) {
  if (trials <= 0) {
    throw std::invalid_argument("fixed_vector_isometry_experiment: trials > 0");
  }
  std::vector<double> bounds;
  bounds.reserve(ts.size());
  for (double t : ts) bounds.push_back(fixed_vector_isometry_bound(m, t));

  // ||A e_1||^2 only involves the first column, so each trial draws just the
  // m entries that act.
  std::vector<double> deviation(static_cast<std::size_t>(trials));
  parallel_trials(trials, threads, [&](long t) {
    RngStream s = rng.fork(static_cast<std::uint64_t>(t));
    double acc = 0.0;
    for (int i = 0; i < m; ++i) {
      const double g = s.next_gaussian();
      acc += g * g;
    }
    deviation[static_cast<std::size_t>(t)] =
        std::abs(acc / static_cast<double>(m) - 1.0);
  });

  TailReport report;
  report.thresholds = ts;
  report.bound = std::move(bounds);
  report.trials = trials;
  report.empirical.reserve(ts.size());
  for (double t : ts) {
    long hits = 0;
    for (double d : deviation) {
      if (d >= t) ++hits;
    }
    report.empirical.push_back(static_cast<double>(hits) /
                               static_cast<double>(trials));
  }
  return report;
}

Matrix entry_basis_element(int n, int k, int l) {
  if (n <= 0 || k < 1 || k > n || l < 1 || l > n) {
    throw std::invalid_argument("entry_basis_element: index out of range");
  }
  Matrix e = Matrix::Zero(n, n);
  e(k - 1, l - 1) = 1.0;
  return e;
}

OperatorBasis OperatorBasis::entry(int n) {
  if (n <= 0) throw std::invalid_argument("OperatorBasis::entry: n must be positive");
  OperatorBasis basis;
  basis.n_ = n;
  return basis;
}

OperatorBasis OperatorBasis::explicit_basis(std::vector<Matrix> mats) {
  if (mats.empty()) {
    throw std::invalid_argument("OperatorBasis: empty matrix list");
  }
  const Index n = mats.front().rows();
  if (static_cast<Index>(mats.size()) != n * n) {
    throw std::invalid_argument("OperatorBasis: need exactly n^2 matrices");
  }
  for (const Matrix& x : mats) {
    require_finite(x, "OperatorBasis");
    if (x.rows() != n || x.cols() != n) {
      throw std::invalid_argument("OperatorBasis: matrices must be square n x n");
    }
  }
  for (std::size_t a = 0; a < mats.size(); ++a) {
    for (std::size_t b = a; b < mats.size(); ++b) {
      const double want = a == b ? 1.0 : 0.0;
      const double got = mats[a].cwiseProduct(mats[b]).sum();
      if (std::abs(got - want) > 1e-10) {
        std::ostringstream msg;
        msg << "OperatorBasis: matrices are not orthonormal (<X_" << a + 1
            << ", X_" << b + 1 << "> = " << got << ")";
        throw std::invalid_argument(msg.str());
      }
    }
  }
  OperatorBasis basis;
  basis.n_ = static_cast<int>(n);
  basis.mats_ = std::move(mats);
  return basis;
}

Matrix OperatorBasis::element(int a) const {
  if (a < 1 || a > size()) {
    throw std::invalid_argument("OperatorBasis::element: index out of range");
  }
  if (is_entry()) {
    const int k = (a - 1) / n_ + 1;
    const int l = (a - 1) % n_ + 1;
    return entry_basis_element(n_, k, l);
  }
  return mats_[static_cast<std::size_t>(a - 1)];
}

double OperatorBasis::inner(int a, const Matrix& z) const {
  if (a < 1 || a > size()) {
    throw std::invalid_argument("OperatorBasis::inner: index out of range");
  }
  if (is_entry()) {
    return z((a - 1) / n_, (a - 1) % n_);
  }
  return mats_[static_cast<std::size_t>(a - 1)].cwiseProduct(z).sum();
}

void OperatorBasis::accumulate(int a, double coef, Matrix& acc) const {
  if (a < 1 || a > size()) {
    throw std::invalid_argument("OperatorBasis::accumulate: index out of range");
  }
  if (is_entry()) {
    acc((a - 1) / n_, (a - 1) % n_) += coef;
    return;
  }
  acc += coef * mats_[static_cast<std::size_t>(a - 1)];
}

std::vector<int> sample_indices(RngStream& rng, long n_sq, long m,
                                bool replacement) {
  if (n_sq <= 0 || m <= 0) {
    throw std::invalid_argument("sample_indices: sizes must be positive");
  }
  std::vector<int> omegas;
  omegas.reserve(static_cast<std::size_t>(m));
  if (replacement) {
    for (long j = 0; j < m; ++j) {
      omegas.push_back(
          static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n_sq))) + 1);
    }
    return omegas;
  }
  if (m > n_sq) {
    throw std::invalid_argument(
        "sample_indices: cannot draw more distinct indices than exist");
  }
  std::vector<int> pool(static_cast<std::size_t>(n_sq));
  std::iota(pool.begin(), pool.end(), 1);
  for (long j = 0; j < m; ++j) {
    const long pick =
        j + static_cast<long>(rng.next_below(static_cast<std::uint64_t>(n_sq - j)));
    std::swap(pool[static_cast<std::size_t>(j)], pool[static_cast<std::size_t>(pick)]);
    omegas.push_back(pool[static_cast<std::size_t>(j)]);
  }
  return omegas;
}

SamplingOperator make_sampling_operator(OperatorBasis basis,
                                        std::vector<int> omegas,
                                        bool replacement) {
  if (omegas.empty()) {
    throw std::invalid_argument("make_sampling_operator: no sampled indices");
  }
  const int n_sq = basis.size();
  for (int a : omegas) {
    if (a < 1 || a > n_sq) {
      throw std::invalid_argument("make_sampling_operator: index out of range");
    }
  }
  const int n = basis.n();
  return SamplingOperator{std::move(basis), std::move(omegas), n, replacement};
}

SamplingOperator sample_operator(OperatorBasis basis, long m, bool replacement,
                                 RngStream& rng) {
  auto omegas = sample_indices(rng, basis.size(), m, replacement);
  return make_sampling_operator(std::move(basis), std::move(omegas), replacement);
}

Matrix sampling_apply(const SamplingOperator& op, const Matrix& z) {
  require_finite(z, "sampling_apply");
  if (z.rows() != op.n || z.cols() != op.n) {
    throw std::invalid_argument("sampling_apply: matrix shape does not match");
  }
  const double scale = static_cast<double>(op.n) * static_cast<double>(op.n) /
                       static_cast<double>(op.omegas.size());
  Matrix out = Matrix::Zero(op.n, op.n);
  for (int a : op.omegas) {
    op.basis.accumulate(a, scale * op.basis.inner(a, z), out);
  }
  return out;
}

Vector sampling_measure(const SamplingOperator& op, const Matrix& z) {
  require_finite(z, "sampling_measure");
  if (z.rows() != op.n || z.cols() != op.n) {
    throw std::invalid_argument("sampling_measure: matrix shape does not match");
  }
  Vector y(static_cast<Index>(op.omegas.size()));
  for (std::size_t j = 0; j < op.omegas.size(); ++j) {
    y(static_cast<Index>(j)) = op.basis.inner(op.omegas[j], z);
  }
  return y;
}

TangentProjector tangent_projector(const Matrix& u_basis) {
  require_finite(u_basis, "tangent_projector");
  if (u_basis.rows() == 0 || u_basis.cols() == 0 ||
      u_basis.cols() > u_basis.rows()) {
    throw std::invalid_argument("tangent_projector: need n x r with r <= n");
  }
  const Matrix gram =
      u_basis.transpose() * u_basis - Matrix::Identity(u_basis.cols(), u_basis.cols());
  if (gram.cwiseAbs().maxCoeff() > 1e-10) {
    throw std::invalid_argument("tangent_projector: columns are not orthonormal");
  }
  return TangentProjector{u_basis};
}

TangentProjector tangent_projector_at(const Matrix& a, double rank_tol) {
  const SvdFactors f = svd(a, rank_tol);
  if (f.numerical_rank == 0) {
    throw std::invalid_argument("tangent_projector_at: matrix has rank 0");
  }
  return TangentProjector{f.u.leftCols(f.numerical_rank)};
}

Matrix tangent_project(const TangentProjector& p, const Matrix& z) {
  require_finite(z, "tangent_project");
  if (z.rows() != p.u_basis.rows() || z.cols() != p.u_basis.rows()) {
    throw std::invalid_argument("tangent_project: matrix shape does not match");
  }
  // P_U z + z P_U - P_U z P_U without forming P_U explicitly.
  const Matrix utz = p.u_basis.transpose() * z;          // r x n
  const Matrix zu = z * p.u_basis;                       // n x r
  const Matrix utzu = utz * p.u_basis;                   // r x r
  return p.u_basis * utz + zu * p.u_basis.transpose() -
         p.u_basis * utzu * p.u_basis.transpose();
}

Matrix tangent_complement(const TangentProjector& p, const Matrix& z) {
  return z - tangent_project(p, z);
}

CoherenceReport coherence(const OperatorBasis& basis, const Matrix& a,
                          const TangentProjector& p) {
  const Matrix sym = require_symmetric(a, "coherence");
  const int n = basis.n();
  if (sym.rows() != n) {
    throw std::invalid_argument("coherence: matrix does not match basis dimension");
  }
  if (p.u_basis.rows() != n) {
    throw std::invalid_argument("coherence: projector does not match basis dimension");
  }
  const int r = static_cast<int>(p.u_basis.cols());
  const Matrix sign_a = sgn(sym);

  CoherenceReport report;
  report.n = n;
  report.r = r;
  report.entry_basis = basis.is_entry();

  double max_opnorm_sq = 0.0;
  double max_tangent_sq = 0.0;
  double max_sign_inner_sq = 0.0;
  if (basis.is_entry()) {
    // ||P_T e_i e_j^T||_F^2 = h_i + h_j - h_i h_j with h_i = ||P_U e_i||^2,
    // and ||e_i e_j^T|| = 1.
    max_opnorm_sq = 1.0;
    Vector h(n);
    for (int i = 0; i < n; ++i) h(i) = p.u_basis.row(i).squaredNorm();
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        max_tangent_sq = std::max(max_tangent_sq, h(i) + h(j) - h(i) * h(j));
        const double inner = sign_a(i, j);
        max_sign_inner_sq = std::max(max_sign_inner_sq, inner * inner);
      }
    }
    report.mu1 = static_cast<double>(n) / r * h.maxCoeff();
    report.mu2 = static_cast<double>(n) / std::sqrt(static_cast<double>(r)) *
                 sign_a.cwiseAbs().maxCoeff();
  } else {
    for (int idx = 1; idx <= basis.size(); ++idx) {
      const Matrix x = basis.element(idx);
      const double opn = operator_norm(x);
      max_opnorm_sq = std::max(max_opnorm_sq, opn * opn);
      max_tangent_sq = std::max(max_tangent_sq, tangent_project(p, x).squaredNorm());
      const double inner = frobenius_inner(x, sign_a);
      max_sign_inner_sq = std::max(max_sign_inner_sq, inner * inner);
    }
  }

  report.nu_basis = static_cast<double>(n) * max_opnorm_sq;
  report.nu_pair_tangent =
      max_tangent_sq * static_cast<double>(n) / (2.0 * static_cast<double>(r));
  report.nu_pair_sgn = max_sign_inner_sq * static_cast<double>(n) *
                       static_cast<double>(n) / static_cast<double>(r);
  return report;
}

double sparse_rip_constant(const Matrix& a, int k) {
  require_finite(a, "sparse_rip_constant");
  const int cols = static_cast<int>(a.cols());
  if (k < 1 || k > cols) {
    throw std::invalid_argument("sparse_rip_constant: need 1 <= k <= cols");
  }
  double supports = 1.0;
  for (int i = 0; i < k; ++i) {
    supports *= static_cast<double>(cols - i) / static_cast<double>(i + 1);
  }
  if (supports > 1e6) {
    std::ostringstream msg;
    msg << "sparse_rip_constant: C(" << cols << ", " << k << ") = " << supports
        << " supports exceed the 1e6 enumeration guard";
    throw std::invalid_argument(msg.str());
  }

  std::vector<int> support(static_cast<std::size_t>(k));
  std::iota(support.begin(), support.end(), 0);
  Matrix sub(a.rows(), k);
  double delta = 0.0;
  for (;;) {
    for (int j = 0; j < k; ++j) sub.col(j) = a.col(support[static_cast<std::size_t>(j)]);
    const Matrix gram = sub.transpose() * sub;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
    delta = std::max(delta, std::max(eig.eigenvalues().maxCoeff() - 1.0,
                                     1.0 - eig.eigenvalues().minCoeff()));

    // next k-combination of {0, ..., cols-1}
    int pos = k - 1;
    while (pos >= 0 && support[static_cast<std::size_t>(pos)] == cols - k + pos) {
      --pos;
    }
    if (pos < 0) break;
    ++support[static_cast<std::size_t>(pos)];
    for (int j = pos + 1; j < k; ++j) {
      support[static_cast<std::size_t>(j)] = support[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return delta;
}

double matrix_rip_estimate(const GaussianMap& map, int r, long probes,
                           RngStream& rng) {
  if (r < 1 || r > std::min(map.rows, map.cols)) {
    throw std::invalid_argument("matrix_rip_estimate: bad rank");
  }
  if (probes <= 0) {
    throw std::invalid_argument("matrix_rip_estimate: probes must be positive");
  }
  double worst = 0.0;
  for (long t = 0; t < probes; ++t) {
    RngStream s = rng.fork(static_cast<std::uint64_t>(t));
    Matrix left(map.rows, r), right(map.cols, r);
    for (Index i = 0; i < left.rows(); ++i)
      for (Index j = 0; j < left.cols(); ++j) left(i, j) = s.next_gaussian();
    for (Index i = 0; i < right.rows(); ++i)
      for (Index j = 0; j < right.cols(); ++j) right(i, j) = s.next_gaussian();
    Matrix probe = left * right.transpose();
    const double norm = probe.norm();
    if (norm <= 1e-12) continue;
    probe /= norm;
    worst = std::max(worst, std::abs(apply_map(map, probe).squaredNorm() - 1.0));
  }

  // Deterministic sweep over a coarse net of the rank-r unit-ball boundary
  // when the dimensions are small enough for its cardinality bound.
  const double exponent = static_cast<double>(r) * (map.rows + map.cols + 1);
  if (exponent * std::log1p(20.0) <= std::log(1e6)) {
    RngStream net_rng = rng.fork(0x6e65747375ull);
    const Net net = lowrank_net(map.rows, map.cols, r, 0.5, net_rng);
    for (const Matrix& e : net.elements) {
      const double norm = e.norm();
      if (norm <= 1e-8) continue;
      worst = std::max(
          worst,
          std::abs(apply_map(map, e).squaredNorm() / (norm * norm) - 1.0));
    }
  }
  return worst;
}

long matrix_rip_suggested_m(int n, int N, int r, double delta, double eps) {
  if (n <= 0 || N <= 0 || r < 1 || r > std::min(n, N)) {
    throw std::invalid_argument("matrix_rip_suggested_m: bad dimensions");
  }
  if (!(delta > 0.0 && delta < 1.0) || !(eps > 0.0 && eps < 1.0)) {
    throw std::invalid_argument("matrix_rip_suggested_m: delta, eps in (0, 1)");
  }
  const double base =
      10.0 * (static_cast<double>(r) * (n + N) + std::log(2.0 / eps));
  return static_cast<long>(std::ceil(base / (delta * delta)));
}

} // namespace lrr
