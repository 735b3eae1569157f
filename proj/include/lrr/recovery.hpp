#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "lrr/sensing.hpp"

namespace lrr {

/// Either a dense information map or a basis sampling operator, presented as
/// one measurement interface for the decoder and the falsifiers.
class Measurement {
public:
  explicit Measurement(GaussianMap map);
  explicit Measurement(SamplingOperator op);

  bool is_sampling() const;
  const GaussianMap& gaussian() const;
  const SamplingOperator& sampling() const;

  Index rows() const;
  Index cols() const;
  /// Number of scalar measurements.
  Index count() const;
  Vector measure(const Matrix& z) const;
  /// count x (rows*cols) matrix whose j-th row is vec(X_j); kernel of the
  /// measurement map = null space of this matrix.
  Matrix stacked() const;

private:
  std::variant<GaussianMap, SamplingOperator> v_;
};

/// Singular value soft-thresholding, the proximal map of tau * ||.||_S1.
Matrix svt(const Matrix& a, double tau);

/// Euclidean projection onto { w : measurements(w) = y }. Entry sampling
/// overwrites the pinned entries (duplicated constraints collapse to one);
/// general orthonormal bases subtract the measured defect; dense maps solve
/// the m x m Gram normal equations, switching to a ridge-regularized solve
/// when the Gram matrix is numerically rank deficient.
class AffineProjector {
public:
  AffineProjector(const Measurement& meas, Vector y);
  Matrix project(const Matrix& z) const;
  bool regularized() const { return regularized_; }
  /// The constraint set is a single point: every basis coordinate is pinned,
  /// or the dense system is square and invertible.
  bool fully_determining() const { return fully_determining_; }

private:
  const Measurement* meas_;
  Vector y_;
  std::vector<std::pair<int, double>> pinned_; // distinct index -> value
  Eigen::LDLT<Matrix> gram_ldlt_;
  bool regularized_ = false;
  bool fully_determining_ = false;
};

Matrix affine_project(const Measurement& meas, const Vector& y, const Matrix& z);

struct SolverConfig {
  double step = 1.0;           // proximal scale of the splitting
  double tol_residual = 1e-9;  // relative to ||y||_2
  double tol_change = 1e-10;   // relative iterate change
  long max_iter = 5000;
};

struct RecoveryReport {
  Matrix solution;
  long iterations = 0;
  double constraint_residual = 0.0;
  double objective = 0.0;
  bool converged = false;
};

/// Nuclear norm minimization subject to measurements(z) = y via
/// Douglas-Rachford splitting on (nuclear norm, affine indicator); the two
/// proximal maps are svt and AffineProjector. The reported solution is the
/// affine-feasible iterate; converged means its constraint residual meets
/// tol_residual and the fixed-point step meets tol_change (immediately, for
/// fully determining constraint sets, whose projection is constant).
RecoveryReport complete(const Measurement& meas, const Vector& y,
                        const SolverConfig& cfg = SolverConfig{});

/// Falsifier verdict. `violated` means a strict null space inequality
/// failed on `witness` (margins within 1e-12 of zero count as failures of
/// strictness; the witness margin is re-checked on construction).
/// NO-VIOLATION-FOUND is one-sided: it is evidence, not a proof.
struct NspReport {
  bool violated = false;
  std::optional<Matrix> witness;
  double margin = 0.0; // best observed; -inf when the kernel is trivial
  long budget_used = 0;
};

/// Searches ker(a) for a unit vector v with ||v_T||_1 >= ||v_{T^c}||_1,
/// |T| = k (T = largest magnitudes). Random kernel directions plus
/// coordinate-wise local ascent; `budget` caps objective evaluations.
NspReport nsp_falsify(const Matrix& a, int k, long budget, RngStream& rng);

/// Rank analogue: searches the measurement kernel for unit-Frobenius M with
/// sum of top r singular values >= sum of the rest.
NspReport rank_nsp_falsify(const Measurement& meas, int r, long budget,
                           RngStream& rng);

/// Iterated sampling ("golfing") construction of an approximate dual
/// certificate for a symmetric matrix with tangent projector p: starting
/// from Z_0 = sgn(a), each round adds R_i Z_{i-1} to Y and replaces Z_i =
/// sgn(a) - P_T Y_i, so E Z_i = (Id - P_T) ... telescopes and the tangent
/// residual is expected to halve per round. All sampled indices are kept for
/// the range check.
struct DualCertificate {
  Matrix y;
  std::vector<long> batch_sizes;
  std::vector<double> residual_norms; // ||Z_i||_F, one per round
  double cond_tangent = 0.0;          // ||P_T y - sgn a||_F
  double cond_complement = 0.0;       // ||P_{T^perp} y||
  std::vector<int> omegas;            // all sampled indices, in order
};

DualCertificate golfing_certificate(const OperatorBasis& basis, const Matrix& a,
                                    const TangentProjector& p,
                                    const std::vector<long>& batch_sizes,
                                    RngStream& rng);

/// Same construction with caller-provided index batches (used to exercise
/// degenerate cases such as one full sweep of every basis element).
DualCertificate golfing_certificate_batches(
    const OperatorBasis& basis, const Matrix& a, const TangentProjector& p,
    const std::vector<std::vector<int>>& batches);

/// Round count l = ceil(log2(2 n^2 sqrt(r))).
long golfing_rounds(int n, int r);

/// Per-round batch size ceil(64 nu r n (ln(6 n r) + ln(2 l) + beta ln n)).
long golfing_batch_size(double nu, int r, int n, long l, double beta);

struct CertificateCheck {
  bool in_range = false;
  bool cond_ii = false;  // tangent_gap <= 1/(2 n^2)
  bool cond_iii = false; // complement_norm <= 1/2
  double range_gap = 0.0;
  double tangent_gap = 0.0;
  double complement_norm = 0.0;
};

/// Recomputes all certificate conditions from cert.y. The range check
/// re-projects y onto the span of the sampled basis elements.
CertificateCheck verify_certificate(const DualCertificate& cert,
                                    const OperatorBasis& basis, const Matrix& a,
                                    const TangentProjector& p);

/// Operator norm of P_T - P_T R P_T restricted to T for the sampling
/// operator with the given index multiset, computed by power iteration on
/// the (2rn - r^2)-dimensional matrix of the restricted operator.
double tangent_restricted_operator_norm(const OperatorBasis& basis,
                                        const TangentProjector& p,
                                        const std::vector<int>& omegas);

/// Tail bound 4 n r exp(-t^2 m / (4 (2 nu r n + 1))), valid for 0 < t < 2,
/// with nu the tangent coherence max_a ||P_T X_a||_F^2 * n / (2r).
double tangent_operator_bound(double nu, int r, int n, long m, double t);

/// Frequencies of ||P_T - P_T R P_T|| >= t over fresh index draws of size m,
/// against tangent_operator_bound at the coherence of (basis, p).
TailReport tangent_operator_concentration(const OperatorBasis& basis,
                                          const TangentProjector& p, long m,
                                          long trials,
                                          const std::vector<double>& ts,
                                          RngStream& rng, int threads = 1);

} // namespace lrr
