#pragma once

#include <memory>
#include <vector>

#include "lrr/prob.hpp"
#include "lrr/rng.hpp"
#include "lrr/types.hpp"

namespace lrr {

/// Information map A -> (<X_j, A>_F)_{j<m}. The random constructor fills the
/// X_j with independent N(0, 1/m) entries, the normalization that makes the
/// map an isometry in expectation; (seed, stream_id) of the constructing
/// stream are recorded so a map can be persisted as integers and re-derived.
struct GaussianMap {
  int m = 0;
  int rows = 0;
  int cols = 0;
  std::vector<Matrix> mats;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
  bool from_seed = false;
};

GaussianMap gaussian_map_new(RngStream& rng, int m, int rows, int cols);

/// Deterministic reconstruction from a recorded stream layout; what the
/// serialized form stores instead of the matrices.
GaussianMap gaussian_map_from_layout(std::uint64_t seed, std::uint64_t stream_id,
                                     int m, int rows, int cols);

/// Wraps explicitly given measurement matrices (e.g. an orthonormal basis)
/// in the same map interface.
GaussianMap map_from_mats(std::vector<Matrix> mats);

Vector apply_map(const GaussianMap& map, const Matrix& a);

/// Tail frequencies of | ||A e_1||^2 - 1 | >= t for the Gaussian map acting
/// on a fixed unit vector, against the two-sided concentration bound
/// 2 exp(-(m/2)(t^2/2 - t^3/3)). Only the acting column is sampled.
TailReport fixed_vector_isometry_experiment(int m, long trials,
                                            const std::vector<double>& ts,
                                            RngStream& rng, int threads = 1);

double fixed_vector_isometry_bound(int m, double t);

/// e_k e_l^T in R^{n x n}; indices are 1-based.
Matrix entry_basis_element(int n, int k, int l);

/// Orthonormal operator basis of R^{n x n}: either the implicit entry basis
/// (element a = (k-1)n + l maps to e_k e_l^T) or an explicit list of n^2
/// matrices, checked for orthonormality at construction.
class OperatorBasis {
public:
  static OperatorBasis entry(int n);
  static OperatorBasis explicit_basis(std::vector<Matrix> mats);

  int n() const { return n_; }
  int size() const { return n_ * n_; }
  bool is_entry() const { return mats_.empty(); }

  /// a is 1-based in [1, n^2].
  Matrix element(int a) const;
  /// <X_a, z>_F without materializing X_a for the entry basis.
  double inner(int a, const Matrix& z) const;
  /// acc += coef * X_a.
  void accumulate(int a, double coef, Matrix& acc) const;

private:
  OperatorBasis() = default;
  int n_ = 0;
  std::vector<Matrix> mats_; // empty for the entry basis
};

/// m indices in [1, n_sq], i.i.d. uniform with replacement or a uniform
/// sample without replacement (partial Fisher-Yates).
std::vector<int> sample_indices(RngStream& rng, long n_sq, long m,
                                bool replacement);

/// Sampling operator R(z) = (n^2/m) sum_j <X_{omega_j}, z> X_{omega_j}.
/// Unbiased for the identity under uniform index draws; never expands norms
/// by more than n^2.
struct SamplingOperator {
  OperatorBasis basis;
  std::vector<int> omegas; // 1-based
  int n = 0;
  bool replacement = true;
};

SamplingOperator make_sampling_operator(OperatorBasis basis,
                                        std::vector<int> omegas,
                                        bool replacement);
SamplingOperator sample_operator(OperatorBasis basis, long m, bool replacement,
                                 RngStream& rng);

Matrix sampling_apply(const SamplingOperator& op, const Matrix& z);

/// Per-sample measurements (<X_{omega_j}, z>)_j, duplicates repeated.
Vector sampling_measure(const SamplingOperator& op, const Matrix& z);

/// Orthogonal projector onto the tangent space
/// T = { z : P_U z + z P_U - P_U z P_U = z } of the rank-r variety at a
/// matrix with column space spanned by the orthonormal columns of u_basis.
struct TangentProjector {
  Matrix u_basis; // n x r, orthonormal columns
};

TangentProjector tangent_projector(const Matrix& u_basis);
/// Projector at `a`: u_basis spans the range of `a` (numerical rank).
TangentProjector tangent_projector_at(const Matrix& a, double rank_tol = -1.0);

Matrix tangent_project(const TangentProjector& p, const Matrix& z);
Matrix tangent_complement(const TangentProjector& p, const Matrix& z);

/// Coherence diagnostics of a symmetric matrix `a` against an operator
/// basis. nu_basis certifies n * max_a ||X_a||^2; the pair route certifies
/// max_a ||P_T X_a||_F^2 * n/(2r) and max_a <X_a, sgn a>^2 * n^2/r. For the
/// entry basis the classical parameters mu1 = (n/r) max_i ||P_U e_i||^2 and
/// mu2 = (n/sqrt r) max_ij |sgn(a)_ij| are also filled in.
struct CoherenceReport {
  double nu_basis = 0.0;
  double nu_pair_tangent = 0.0;
  double nu_pair_sgn = 0.0;
  double mu1 = 0.0;
  double mu2 = 0.0;
  bool entry_basis = false;
  int n = 0;
  int r = 0;
};

CoherenceReport coherence(const OperatorBasis& basis, const Matrix& a,
                          const TangentProjector& p);

/// Exact restricted isometry constant of order k for the columns of `a`
/// (unit-norm expected in spirit, not enforced): max over all supports of
/// size k of the extreme eigenvalue gap of the support Gram matrix.
/// Enumerates all C(cols, k) supports; refuses beyond 1e6 of them.
double sparse_rip_constant(const Matrix& a, int k);

/// Empirical rank-r isometry defect of an information map: the largest
/// | ||X(A)||^2 - 1 | over `probes` random unit-Frobenius rank-r matrices,
/// plus every element of a rho = 1/2 low-rank net when its cardinality
/// bound fits under the default cap (tiny dimensions only).
double matrix_rip_estimate(const GaussianMap& map, int r, long probes,
                           RngStream& rng);

/// Measurement count suggested by the rank-r RIP theorem at distortion
/// delta and failure budget eps, with an explicit desk constant:
/// ceil(10 * (r(n + N) + ln(2/eps)) / delta^2).
long matrix_rip_suggested_m(int n, int N, int r, double delta, double eps);

} // namespace lrr
