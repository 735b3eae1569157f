#include "lrr/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace lrr {

void require_finite(const Matrix& a, const char* what) {
  if (!a.allFinite()) {
    std::ostringstream msg;
    msg << what << ": matrix contains NaN or Inf entries";
    throw std::invalid_argument(msg.str());
  }
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    std::ostringstream msg;
    msg << what << ": shape mismatch (" << a.rows() << "x" << a.cols()
        << " vs " << b.rows() << "x" << b.cols() << ")";
    throw std::invalid_argument(msg.str());
  }
}

std::pair<Matrix, double> symmetrize(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("symmetrize: matrix must be square");
  }
  Matrix sym = 0.5 * (a + a.transpose());
  const double asym = (a - a.transpose()).norm();
  return {std::move(sym), asym};
}

Matrix require_symmetric(const Matrix& a, const char* what) {
  require_finite(a, what);
  auto [sym, asym] = symmetrize(a);
  if (asym > 1e-9 * std::max(1.0, a.norm())) {
    std::ostringstream msg;
    msg << what << ": matrix is not symmetric (||a - a^T||_F = " << asym << ")";
    throw std::invalid_argument(msg.str());
  }
  return sym;
}

double default_rank_tol(const Matrix& a) {
  return 1e-10 * static_cast<double>(std::max(a.rows(), a.cols()));
}

SvdFactors svd(const Matrix& a, double rank_tol) {
  require_finite(a, "svd");
  if (a.rows() == 0 || a.cols() == 0) {
    throw std::invalid_argument("svd: matrix must be non-empty");
  }
  if (rank_tol < 0.0) rank_tol = default_rank_tol(a);
  if (!(rank_tol >= 0.0 && rank_tol < 1.0)) {
    throw std::invalid_argument("svd: rank_tol must lie in [0, 1)");
  }

  Eigen::JacobiSVD<Matrix> dec(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (dec.info() != Eigen::Success) {
    throw NumericalError("svd: Jacobi iteration did not converge");
  }

  SvdFactors f;
  f.u = dec.matrixU();
  f.sigmas = dec.singularValues();
  f.v = dec.matrixV();
  f.rank_tol = rank_tol;

  // Sign canonicalization: flip each (u_j, v_j) pair so the entry of u_j
  // with the largest magnitude is positive; first such row on ties.
  for (Index j = 0; j < f.u.cols(); ++j) {
    Index arg = 0;
    double best = -1.0;
    for (Index i = 0; i < f.u.rows(); ++i) {
      const double mag = std::abs(f.u(i, j));
      if (mag > best) {
        best = mag;
        arg = i;
      }
    }
    if (f.u(arg, j) < 0.0) {
      f.u.col(j) = -f.u.col(j);
      f.v.col(j) = -f.v.col(j);
    }
  }

  const double cut = rank_tol * (f.sigmas.size() > 0 ? f.sigmas(0) : 0.0);
  f.numerical_rank = 0;
  for (Index j = 0; j < f.sigmas.size(); ++j) {
    if (f.sigmas(j) > cut) ++f.numerical_rank;
  }
  return f;
}

SymEig sym_eig(const Matrix& s) {
  const Matrix sym = require_symmetric(s, "sym_eig");
  Eigen::SelfAdjointEigenSolver<Matrix> dec(sym);
  if (dec.info() != Eigen::Success) {
    throw NumericalError("sym_eig: eigensolver did not converge");
  }
  // Eigen sorts ascending; flip to non-increasing.
  const Index n = sym.rows();
  SymEig e;
  e.q.resize(n, n);
  e.lambdas.resize(n);
  for (Index j = 0; j < n; ++j) {
    e.lambdas(j) = dec.eigenvalues()(n - 1 - j);
    e.q.col(j) = dec.eigenvectors().col(n - 1 - j);
  }
  return e;
}

double frobenius_inner(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "frobenius_inner");
  return a.cwiseProduct(b).sum();
}

double schatten_norm(const Matrix& a, double p) {
  require_finite(a, "schatten_norm");
  if (std::isnan(p) || p <= 0.0) {
    throw std::invalid_argument("schatten_norm: p must lie in (0, inf]");
  }
  if (p == 2.0) return a.norm();
  const Vector s = svd(a).sigmas;
  if (std::isinf(p)) return s.size() > 0 ? s(0) : 0.0;
  double acc = 0.0;
  for (Index j = 0; j < s.size(); ++j) acc += std::pow(s(j), p);
  return std::pow(acc, 1.0 / p);
}

double nuclear_norm(const Matrix& a) { return schatten_norm(a, 1.0); }

double operator_norm(const Matrix& a) {
  return schatten_norm(a, std::numeric_limits<double>::infinity());
}

Matrix sgn(const Matrix& a, double rank_tol) {
  const SvdFactors f = svd(a, rank_tol);
  const Index r = f.numerical_rank;
  if (r == 0) return Matrix::Zero(a.rows(), a.cols());
  return f.u.leftCols(r) * f.v.leftCols(r).transpose();
}

Matrix sym_expm(const Matrix& s) {
  const SymEig e = sym_eig(s);
  return e.q * e.lambdas.array().exp().matrix().asDiagonal() * e.q.transpose();
}

Matrix sym_logm(const Matrix& s) {
  const SymEig e = sym_eig(s);
  const double min_eig = e.lambdas(e.lambdas.size() - 1);
  if (!(min_eig > 0.0)) {
    std::ostringstream msg;
    msg << "sym_logm: matrix is not positive definite (min eigenvalue = "
        << min_eig << ")";
    throw std::invalid_argument(msg.str());
  }
  return e.q * e.lambdas.array().log().matrix().asDiagonal() * e.q.transpose();
}

Matrix expm(const Matrix& a) {
  require_finite(a, "expm");
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("expm: matrix must be square");
  }
  const Index n = a.rows();
  // Scale down until ||a|| / 2^s <= 0.5, run the Taylor series to machine
  // precision, then square back up.
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff(); // inf-norm
  int squarings = 0;
  double scaled = norm;
  while (scaled > 0.5) {
    scaled *= 0.5;
    ++squarings;
    if (squarings > 60) throw NumericalError("expm: norm too large to scale");
  }
  const Matrix b = a / std::pow(2.0, squarings);
  Matrix term = Matrix::Identity(n, n);
  Matrix result = term;
  for (int k = 1; k <= 40; ++k) {
    term = (term * b) / static_cast<double>(k);
    result += term;
    if (term.norm() <= 1e-17 * result.norm()) break;
  }
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

std::pair<double, double> singular_triangle_gap(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "singular_triangle_gap");
  const Vector sa = svd(a).sigmas;
  const Vector sb = svd(b).sigmas;
  double lhs = 0.0;
  for (Index j = 0; j < sa.size(); ++j) lhs += std::abs(sa(j) - sb(j));
  const double rhs = nuclear_norm(a - b);
  return {lhs, rhs};
}

std::pair<double, double> nuclear_duality_gap(const Matrix& a, long probes,
                                              RngStream& rng) {
  require_finite(a, "nuclear_duality_gap");
  if (probes < 0) {
    throw std::invalid_argument("nuclear_duality_gap: probes must be >= 0");
  }
  const SvdFactors f = svd(a);
  const double exact = frobenius_inner(a, f.u * f.v.transpose());

  double best = 0.0; // B = 0 is feasible, so the sup is at least 0
  Matrix probe(a.rows(), a.cols());
  for (long t = 0; t < probes; ++t) {
    for (Index i = 0; i < probe.rows(); ++i)
      for (Index j = 0; j < probe.cols(); ++j) probe(i, j) = rng.next_gaussian();
    const double top = svd(probe).sigmas(0);
    if (top <= 0.0) continue;
    best = std::max(best, frobenius_inner(a, probe) / top);
  }
  return {best, exact};
}

} // namespace lrr
