#pragma once

#include <utility>

#include "lrr/rng.hpp"
#include "lrr/types.hpp"

namespace lrr {

/// Compact SVD a = u * sigmas.asDiagonal() * v^T with k = min(rows, cols)
/// columns, singular values sorted non-increasingly. Columns are sign
/// canonicalized: the largest-magnitude entry of each left singular vector is
/// positive (ties broken by lowest row index), which pins the factors of a
/// run-to-run reproducible decomposition.
struct SvdFactors {
  Matrix u;
  Vector sigmas;
  Matrix v;
  Index numerical_rank = 0;
  double rank_tol = 0.0;
};

/// Eigendecomposition s = q * lambdas.asDiagonal() * q^T of a symmetric
/// matrix, eigenvalues sorted non-increasingly.
struct SymEig {
  Matrix q;
  Vector lambdas;
};

/// Relative rank threshold used when none is supplied: singular values at or
/// below rank_tol * sigma_1 count as zero.
double default_rank_tol(const Matrix& a);

/// rank_tol < 0 requests default_rank_tol(a); otherwise it must lie in [0, 1).
SvdFactors svd(const Matrix& a, double rank_tol = -1.0);

SymEig sym_eig(const Matrix& s);

double frobenius_inner(const Matrix& a, const Matrix& b);

/// Schatten p-norm, p in (0, inf]. p >= 1 is a norm; smaller p is computed
/// as written. p = inf gives the operator norm, p = 1 the nuclear norm.
double schatten_norm(const Matrix& a, double p);

double nuclear_norm(const Matrix& a);
double operator_norm(const Matrix& a);

/// Sign factor sgn(a) = sum of u_j v_j^T over singular triplets with
/// sigma_j > rank_tol * sigma_1: the Frobenius-unit-scale dual witness of the
/// nuclear norm restricted to the row/column space of `a`.
Matrix sgn(const Matrix& a, double rank_tol = -1.0);

/// exp of a symmetric matrix through its eigendecomposition.
Matrix sym_expm(const Matrix& s);

/// log of a symmetric positive definite matrix; rejects non-PD input and
/// reports the offending minimum eigenvalue.
Matrix sym_logm(const Matrix& s);

/// General (non-symmetric) matrix exponential, scaling-and-squaring on the
/// Taylor series with the squaring depth chosen so the scaled norm is <= 0.5.
Matrix expm(const Matrix& a);

/// (sum_j |sigma_j(a) - sigma_j(b)|, ||a - b||_S1): the singular-value
/// analogue of the eigenvalue Lidskii gap. First component never exceeds the
/// second.
std::pair<double, double> singular_triangle_gap(const Matrix& a, const Matrix& b);

/// (best probe value, exact dual value) for the variational form of the
/// nuclear norm: sup over ||B|| <= 1 of <a, B>_F. Probes are random operator
/// norm one matrices; the exact value <a, u v^T>_F comes from the SVD
/// maximizer and equals ||a||_S1.
std::pair<double, double> nuclear_duality_gap(const Matrix& a, long probes,
                                              RngStream& rng);

} // namespace lrr
