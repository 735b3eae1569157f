#include "lrr/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include <Eigen/Dense>

#include "lrr/linalg.hpp"
#include "lrr/parallel.hpp"

namespace lrr {

namespace {

constexpr double kTieTol = 1e-12;

Vector vec(const Matrix& a) {
  return Eigen::Map<const Vector>(a.data(), a.size());
}

Matrix unvec(const Vector& v, Index rows, Index cols) {
  return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

} // namespace

Measurement::Measurement(GaussianMap map) : v_(std::move(map)) {
  const auto& g = std::get<GaussianMap>(v_);
  if (g.m <= 0 || static_cast<int>(g.mats.size()) != g.m) {
    throw std::invalid_argument("Measurement: map has no measurement matrices");
  }
}

Measurement::Measurement(SamplingOperator op) : v_(std::move(op)) {
  const auto& s = std::get<SamplingOperator>(v_);
  if (s.omegas.empty()) {
    throw std::invalid_argument("Measurement: sampling operator has no indices");
  }
}

bool Measurement::is_sampling() const {
  return std::holds_alternative<SamplingOperator>(v_);
}

const GaussianMap& Measurement::gaussian() const {
  if (is_sampling()) {
    throw std::invalid_argument("Measurement: not a dense map");
  }
  return std::get<GaussianMap>(v_);
}

const SamplingOperator& Measurement::sampling() const {
  if (!is_sampling()) {
    throw std::invalid_argument("Measurement: not a sampling operator");
  }
  return std::get<SamplingOperator>(v_);
}

Index Measurement::rows() const {
  return is_sampling() ? sampling().n : gaussian().rows;
}

Index Measurement::cols() const {
  return is_sampling() ? sampling().n : gaussian().cols;
}

Index Measurement::count() const {
  return is_sampling() ? static_cast<Index>(sampling().omegas.size())
                       : gaussian().m;
}

Vector Measurement::measure(const Matrix& z) const {
  return is_sampling() ? sampling_measure(sampling(), z) : apply_map(gaussian(), z);
}

Matrix Measurement::stacked() const {
  Matrix s(count(), rows() * cols());
  if (is_sampling()) {
    const auto& op = sampling();
    for (Index j = 0; j < count(); ++j) {
      const Matrix x = op.basis.element(op.omegas[static_cast<std::size_t>(j)]);
      s.row(j) = vec(x).transpose();
    }
  } else {
    const auto& g = gaussian();
    for (Index j = 0; j < count(); ++j) {
      s.row(j) = vec(g.mats[static_cast<std::size_t>(j)]).transpose();
    }
  }
  return s;
}

Matrix svt(const Matrix& a, double tau) {
  require_finite(a, "svt");
  if (!(tau >= 0.0)) {
    throw std::invalid_argument("svt: tau must be non-negative");
  }
  if (tau == 0.0) return a;
  const SvdFactors f = svd(a);
  Index keep = 0;
  while (keep < f.sigmas.size() && f.sigmas[keep] > tau) ++keep;
  if (keep == 0) return Matrix::Zero(a.rows(), a.cols());
  const Vector s = f.sigmas.head(keep).array() - tau;
  return f.u.leftCols(keep) * s.asDiagonal() * f.v.leftCols(keep).transpose();
}

AffineProjector::AffineProjector(const Measurement& meas, Vector y)
    : meas_(&meas), y_(std::move(y)) {
  if (y_.size() != meas.count()) {
    throw std::invalid_argument("AffineProjector: measurement count mismatch");
  }
  if (!y_.allFinite()) {
    throw std::invalid_argument("AffineProjector: y has non-finite entries");
  }
  if (meas.is_sampling()) {
    const auto& op = meas.sampling();
    std::map<int, double> first;
    for (std::size_t j = 0; j < op.omegas.size(); ++j) {
      const int a = op.omegas[j];
      const double val = y_[static_cast<Index>(j)];
      const auto it = first.find(a);
      if (it == first.end()) {
        first.emplace(a, val);
        pinned_.emplace_back(a, val);
      } else if (std::abs(it->second - val) >
                 1e-9 * std::max(1.0, std::abs(it->second))) {
        throw std::invalid_argument(
            "AffineProjector: duplicated index measured with inconsistent "
            "values, the constraint set is empty");
      }
    }
    fully_determining_ =
        pinned_.size() == static_cast<std::size_t>(op.basis.size());
    return;
  }
  const auto& g = meas.gaussian();
  Matrix gram(g.m, g.m);
  for (int i = 0; i < g.m; ++i) {
    for (int j = i; j < g.m; ++j) {
      const double v = frobenius_inner(g.mats[static_cast<std::size_t>(i)],
                                       g.mats[static_cast<std::size_t>(j)]);
      gram(i, j) = v;
      gram(j, i) = v;
    }
  }
  gram_ldlt_.compute(gram);
  const Vector d = gram_ldlt_.vectorD();
  const double dmax = d.size() > 0 ? d.maxCoeff() : 0.0;
  if (gram_ldlt_.info() != Eigen::Success || d.size() == 0 ||
      !(d.minCoeff() > 1e-12 * dmax)) {
    regularized_ = true;
    const double ridge = 1e-10 * std::max(1.0, dmax);
    gram_ldlt_.compute(gram + ridge * Matrix::Identity(g.m, g.m));
  }
  fully_determining_ = !regularized_ && g.m == g.rows * g.cols;
}

Matrix AffineProjector::project(const Matrix& z) const {
  if (z.rows() != meas_->rows() || z.cols() != meas_->cols()) {
    throw std::invalid_argument("AffineProjector: shape mismatch");
  }
  require_finite(z, "AffineProjector::project");
  if (meas_->is_sampling()) {
    const auto& op = meas_->sampling();
    Matrix w = z;
    if (op.basis.is_entry()) {
      for (const auto& [a, val] : pinned_) {
        w((a - 1) / op.n, (a - 1) % op.n) = val;
      }
    } else {
      for (const auto& [a, val] : pinned_) {
        op.basis.accumulate(a, val - op.basis.inner(a, z), w);
      }
    }
    return w;
  }
  const auto& g = meas_->gaussian();
  const Vector alpha = gram_ldlt_.solve(apply_map(g, z) - y_);
  Matrix w = z;
  for (int j = 0; j < g.m; ++j) {
    w -= alpha[j] * g.mats[static_cast<std::size_t>(j)];
  }
  return w;
}

Matrix affine_project(const Measurement& meas, const Vector& y, const Matrix& z) {
  return AffineProjector(meas, y).project(z);
}

RecoveryReport complete(const Measurement& meas, const Vector& y,
                        const SolverConfig& cfg) {
  if (!(cfg.step > 0.0) || !(cfg.tol_residual >= 0.0) ||
      !(cfg.tol_change >= 0.0) || cfg.max_iter < 1) {
    throw std::invalid_argument("complete: invalid solver configuration");
  }
  const AffineProjector proj(meas, y);
  const double y_norm = y.norm();
  const double tol_res = cfg.tol_residual * (y_norm > 0.0 ? y_norm : 1.0);
  Matrix z = Matrix::Zero(meas.rows(), meas.cols());
  RecoveryReport rep;
  Matrix w;
  double resid = std::numeric_limits<double>::infinity();
  long used = 0;
  for (long it = 1; it <= cfg.max_iter; ++it) {
    used = it;
    const Matrix x = svt(z, cfg.step);
    w = proj.project(2.0 * x - z);
    const Matrix delta = w - x;
    z += delta;
    resid = (meas.measure(w) - y).norm();
    const double change = delta.norm() / std::max(1.0, w.norm());
    // A fully determining constraint set is a single point, so the first
    // feasible iterate is already the minimizer; waiting for the splitting
    // state to settle would only spin.
    if (resid <= tol_res &&
        (change <= cfg.tol_change || proj.fully_determining())) {
      rep.converged = true;
      break;
    }
  }
  rep.solution = w;
  rep.iterations = used;
  rep.constraint_residual = resid;
  rep.objective = nuclear_norm(w);
  return rep;
}

namespace {

struct SphereSearch {
  double best = -std::numeric_limits<double>::infinity();
  Vector best_c;
  long evals = 0;
};

/// Random restarts plus coordinate-wise ascent on the unit sphere. Stops
/// early once the best value clears -kTieTol (a violation for both NSP
/// objectives) or the evaluation budget runs out.
template <typename F>
SphereSearch maximize_on_sphere(int dim, long budget, RngStream& rng,
                                F&& objective) {
  SphereSearch out;
  const auto eval = [&](const Vector& c) {
    const double val = objective(c);
    ++out.evals;
    if (val > out.best) {
      out.best = val;
      out.best_c = c;
    }
    return val;
  };
  while (out.evals < budget) {
    Vector c = gaussian_vector(rng, dim);
    const double cn = c.norm();
    c = cn > 0.0 ? Vector(c / cn) : Vector(Vector::Unit(dim, 0));
    double cur = eval(c);
    double step = 0.5;
    while (step > 1e-3 && out.evals < budget) {
      bool improved = false;
      for (int d = 0; d < dim && out.evals < budget; ++d) {
        for (const int sign : {1, -1}) {
          if (out.evals >= budget) break;
          Vector cand = c;
          cand[d] += sign * step;
          const double norm = cand.norm();
          if (norm == 0.0) continue;
          cand /= norm;
          const double val = eval(cand);
          if (val > cur) {
            cur = val;
            c = cand;
            improved = true;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
    if (out.best >= -kTieTol) break;
  }
  return out;
}

double sparse_margin(const Vector& v, int k) {
  std::vector<double> mags(static_cast<std::size_t>(v.size()));
  for (Index i = 0; i < v.size(); ++i) mags[static_cast<std::size_t>(i)] = std::abs(v[i]);
  std::sort(mags.begin(), mags.end(), std::greater<double>());
  const double total = std::accumulate(mags.begin(), mags.end(), 0.0);
  const double top = std::accumulate(mags.begin(), mags.begin() + k, 0.0);
  return 2.0 * top - total;
}

double rank_margin(const Matrix& m, int r) {
  const Vector sv = Eigen::JacobiSVD<Matrix>(m).singularValues();
  const double total = sv.sum();
  const double top = sv.head(r).sum();
  return 2.0 * top - total;
}

/// Kernel basis (orthonormal columns) of `a` at the library's numerical
/// rank cut; empty matrix when the kernel is trivial.
Matrix kernel_basis(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> dec(a, Eigen::ComputeFullV);
  const auto& sv = dec.singularValues();
  const double cut = default_rank_tol(a) * (sv.size() > 0 ? sv[0] : 0.0);
  Index rank = 0;
  for (Index j = 0; j < sv.size(); ++j) {
    if (sv[j] > cut) ++rank;
  }
  const Index null_dim = a.cols() - rank;
  if (null_dim <= 0) return Matrix(a.cols(), 0);
  return dec.matrixV().rightCols(null_dim);
}

} // namespace

NspReport nsp_falsify(const Matrix& a, int k, long budget, RngStream& rng) {
  require_finite(a, "nsp_falsify");
  if (a.size() == 0) {
    throw std::invalid_argument("nsp_falsify: empty matrix");
  }
  const int n_cols = static_cast<int>(a.cols());
  if (k < 1 || k >= n_cols) {
    throw std::invalid_argument("nsp_falsify: need 1 <= k < cols");
  }
  if (budget < 1) {
    throw std::invalid_argument("nsp_falsify: budget must be positive");
  }
  NspReport rep;
  const Matrix kern = kernel_basis(a);
  if (kern.cols() == 0) {
    rep.margin = -std::numeric_limits<double>::infinity();
    return rep;
  }
  const auto objective = [&](const Vector& c) {
    return sparse_margin(kern * c, k);
  };
  const SphereSearch s =
      maximize_on_sphere(static_cast<int>(kern.cols()), budget, rng, objective);
  rep.budget_used = s.evals;
  rep.margin = s.best;
  if (s.best >= -kTieTol) {
    Vector v = kern * s.best_c;
    v /= v.norm();
    const double check = sparse_margin(v, k);
    if (check < -kTieTol) {
      throw NumericalError("nsp_falsify: witness failed its re-check");
    }
    rep.violated = true;
    rep.witness = Matrix(v);
    rep.margin = check;
  }
  return rep;
}

NspReport rank_nsp_falsify(const Measurement& meas, int r, long budget,
                           RngStream& rng) {
  const Index rows = meas.rows();
  const Index cols = meas.cols();
  if (r < 1 || r >= std::min(rows, cols)) {
    throw std::invalid_argument("rank_nsp_falsify: need 1 <= r < min(rows, cols)");
  }
  if (budget < 1) {
    throw std::invalid_argument("rank_nsp_falsify: budget must be positive");
  }
  NspReport rep;
  const Matrix kern = kernel_basis(meas.stacked());
  if (kern.cols() == 0) {
    rep.margin = -std::numeric_limits<double>::infinity();
    return rep;
  }
  const auto objective = [&](const Vector& c) {
    return rank_margin(unvec(kern * c, rows, cols), r);
  };
  const SphereSearch s =
      maximize_on_sphere(static_cast<int>(kern.cols()), budget, rng, objective);
  rep.budget_used = s.evals;
  rep.margin = s.best;
  if (s.best >= -kTieTol) {
    Matrix w = unvec(kern * s.best_c, rows, cols);
    w /= w.norm();
    const double check = rank_margin(w, r);
    if (check < -kTieTol) {
      throw NumericalError("rank_nsp_falsify: witness failed its re-check");
    }
    rep.violated = true;
    rep.witness = w;
    rep.margin = check;
  }
  return rep;
}

DualCertificate golfing_certificate_batches(
    const OperatorBasis& basis, const Matrix& a, const TangentProjector& p,
    const std::vector<std::vector<int>>& batches) {
  const Matrix sym = require_symmetric(a, "golfing_certificate");
  const int n = basis.n();
  if (sym.rows() != n) {
    throw std::invalid_argument("golfing_certificate: matrix does not match basis dimension");
  }
  if (p.u_basis.rows() != n) {
    throw std::invalid_argument("golfing_certificate: tangent projector does not match basis dimension");
  }
  if (batches.empty()) {
    throw std::invalid_argument("golfing_certificate: need at least one batch");
  }
  const Matrix sign_a = sgn(sym);
  if ((tangent_project(p, sign_a) - sign_a).norm() >
      1e-8 * std::max(1.0, sign_a.norm())) {
    throw std::invalid_argument(
        "golfing_certificate: sgn(a) is not in the tangent space of p");
  }
  DualCertificate cert;
  Matrix y = Matrix::Zero(n, n);
  Matrix z = sign_a;
  for (const auto& batch : batches) {
    if (batch.empty()) {
      throw std::invalid_argument("golfing_certificate: empty batch");
    }
    const double scale =
        static_cast<double>(n) * static_cast<double>(n) / static_cast<double>(batch.size());
    Matrix rz = Matrix::Zero(n, n);
    for (const int idx : batch) {
      if (idx < 1 || idx > basis.size()) {
        throw std::invalid_argument("golfing_certificate: index out of range");
      }
      basis.accumulate(idx, scale * basis.inner(idx, z), rz);
    }
    y += rz;
    z = sign_a - tangent_project(p, y);
    cert.batch_sizes.push_back(static_cast<long>(batch.size()));
    cert.residual_norms.push_back(z.norm());
    cert.omegas.insert(cert.omegas.end(), batch.begin(), batch.end());
  }
  cert.y = y;
  cert.cond_tangent = cert.residual_norms.back();
  cert.cond_complement = operator_norm(tangent_complement(p, y));
  return cert;
}

DualCertificate golfing_certificate(const OperatorBasis& basis, const Matrix& a,
                                    const TangentProjector& p,
                                    const std::vector<long>& batch_sizes,
                                    RngStream& rng) {
  std::vector<std::vector<int>> batches;
  batches.reserve(batch_sizes.size());
  for (const long m_i : batch_sizes) {
    if (m_i < 1) {
      throw std::invalid_argument("golfing_certificate: batch sizes must be positive");
    }
    batches.push_back(sample_indices(rng, basis.size(), m_i, true));
  }
  return golfing_certificate_batches(basis, a, p, batches);
}

long golfing_rounds(int n, int r) {
  if (n < 1 || r < 1 || r > n) {
    throw std::invalid_argument("golfing_rounds: need 1 <= r <= n");
  }
  const double v = std::log2(2.0 * static_cast<double>(n) * static_cast<double>(n) *
                             std::sqrt(static_cast<double>(r)));
  return static_cast<long>(std::ceil(v - 1e-12));
}

long golfing_batch_size(double nu, int r, int n, long l, double beta) {
  if (!(nu > 0.0) || r < 1 || n < 1 || l < 1 || !(beta >= 0.0)) {
    throw std::invalid_argument("golfing_batch_size: invalid arguments");
  }
  const double logs = std::log(6.0 * static_cast<double>(n) * static_cast<double>(r)) +
                      std::log(2.0 * static_cast<double>(l)) +
                      beta * std::log(static_cast<double>(n));
  return static_cast<long>(
      std::ceil(64.0 * nu * static_cast<double>(r) * static_cast<double>(n) * logs));
}

CertificateCheck verify_certificate(const DualCertificate& cert,
                                    const OperatorBasis& basis, const Matrix& a,
                                    const TangentProjector& p) {
  const Matrix sym = require_symmetric(a, "verify_certificate");
  const int n = basis.n();
  if (cert.y.rows() != n || cert.y.cols() != n || sym.rows() != n) {
    throw std::invalid_argument("verify_certificate: dimension mismatch");
  }
  const Matrix sign_a = sgn(sym);
  CertificateCheck out;
  const std::set<int> distinct(cert.omegas.begin(), cert.omegas.end());
  Matrix proj = Matrix::Zero(n, n);
  for (const int idx : distinct) {
    if (idx < 1 || idx > basis.size()) {
      throw std::invalid_argument("verify_certificate: index out of range");
    }
    basis.accumulate(idx, basis.inner(idx, cert.y), proj);
  }
  out.range_gap = (cert.y - proj).norm();
  out.in_range = out.range_gap <= 1e-8 * std::max(1.0, cert.y.norm());
  out.tangent_gap = (tangent_project(p, cert.y) - sign_a).norm();
  out.cond_ii =
      out.tangent_gap <= 1.0 / (2.0 * static_cast<double>(n) * static_cast<double>(n));
  out.complement_norm = operator_norm(tangent_complement(p, cert.y));
  out.cond_iii = out.complement_norm <= 0.5;
  return out;
}

namespace {

/// Orthonormal frame adapted to T: columns of q complete u_basis to a basis
/// of R^n, and the dyads q_p q_q^T with p < r or q < r form an orthonormal
/// basis of T (dimension 2rn - r^2).
struct TangentFrame {
  Matrix q;
  std::vector<std::pair<int, int>> pairs;
  int n = 0;
  int r = 0;
};

TangentFrame tangent_frame(const TangentProjector& p) {
  TangentFrame f;
  f.n = static_cast<int>(p.u_basis.rows());
  f.r = static_cast<int>(p.u_basis.cols());
  const Eigen::HouseholderQR<Matrix> qr(p.u_basis);
  f.q = qr.householderQ() * Matrix::Identity(f.n, f.n);
  f.pairs.reserve(static_cast<std::size_t>(2 * f.r * f.n - f.r * f.r));
  for (int pp = 0; pp < f.n; ++pp) {
    for (int qq = 0; qq < f.n; ++qq) {
      if (pp < f.r || qq < f.r) f.pairs.emplace_back(pp, qq);
    }
  }
  return f;
}

/// Columns sqrt(n^2 c_a / m) * (coordinates of X_a on the T frame), one per
/// distinct sampled index with multiplicity c_a; the restricted operator is
/// then I - W W^T.
Matrix restricted_defect_matrix(const OperatorBasis& basis,
                                const TangentFrame& f,
                                const std::vector<int>& omegas) {
  std::map<int, int> counts;
  for (const int idx : omegas) {
    if (idx < 1 || idx > basis.size()) {
      throw std::invalid_argument("tangent operator: index out of range");
    }
    ++counts[idx];
  }
  const Index d_t = static_cast<Index>(f.pairs.size());
  const double m = static_cast<double>(omegas.size());
  Matrix w(d_t, static_cast<Index>(counts.size()));
  Index col = 0;
  for (const auto& [idx, c] : counts) {
    const double scale = std::sqrt(static_cast<double>(f.n) * static_cast<double>(f.n) *
                                   static_cast<double>(c) / m);
    if (basis.is_entry()) {
      const int i = (idx - 1) / f.n;
      const int j = (idx - 1) % f.n;
      for (Index k = 0; k < d_t; ++k) {
        const auto& [pp, qq] = f.pairs[static_cast<std::size_t>(k)];
        w(k, col) = scale * f.q(i, pp) * f.q(j, qq);
      }
    } else {
      const Matrix g = f.q.transpose() * basis.element(idx) * f.q;
      for (Index k = 0; k < d_t; ++k) {
        const auto& [pp, qq] = f.pairs[static_cast<std::size_t>(k)];
        w(k, col) = scale * g(pp, qq);
      }
    }
    ++col;
  }
  return w;
}

/// Largest singular value of a symmetric matrix by power iteration: the
/// norm growth ||M v_k|| of the normalized iteration converges to max|lambda|
/// even for a dominant +/- pair. Three deterministic restarts, 200 steps,
/// tolerance 1e-10.
double power_iteration_norm(const Matrix& m_sym) {
  const Index d = m_sym.rows();
  if (d == 0) return 0.0;
  double best = 0.0;
  for (int restart = 0; restart < 3; ++restart) {
    RngStream rng(0x706f776572, static_cast<std::uint64_t>(restart));
    Vector v = gaussian_vector(rng, static_cast<int>(d));
    const double vn = v.norm();
    v = vn > 0.0 ? Vector(v / vn) : Vector(Vector::Unit(d, 0));
    double est = 0.0;
    for (int it = 0; it < 200; ++it) {
      const Vector w = m_sym * v;
      const double wn = w.norm();
      if (wn < 1e-300) {
        est = 0.0;
        break;
      }
      v = w / wn;
      if (it > 0 && std::abs(wn - est) <= 1e-10 * std::max(1.0, wn)) {
        est = wn;
        break;
      }
      est = wn;
    }
    best = std::max(best, est);
  }
  return best;
}

double restricted_norm(const OperatorBasis& basis, const TangentFrame& f,
                       const std::vector<int>& omegas) {
  const Matrix w = restricted_defect_matrix(basis, f, omegas);
  Matrix m_op = Matrix::Identity(w.rows(), w.rows()) - w * w.transpose();
  m_op = 0.5 * (m_op + m_op.transpose());
  return power_iteration_norm(m_op);
}

/// Tangent coherence max_a ||P_T X_a||_F^2 * n / (2r), the nu that the
/// restricted-operator tail bound needs. For the entry basis this uses the
/// closed form ||P_T e_i e_j^T||_F^2 = h_i + h_j - h_i h_j with
/// h_i = ||row i of u_basis||^2, maximized at h_i = h_j = max h.
double tangent_nu(const OperatorBasis& basis, const TangentProjector& p) {
  const int n = basis.n();
  const int r = static_cast<int>(p.u_basis.cols());
  double max_sq = 0.0;
  if (basis.is_entry()) {
    double hmax = 0.0;
    for (int i = 0; i < n; ++i) {
      hmax = std::max(hmax, p.u_basis.row(i).squaredNorm());
    }
    max_sq = 2.0 * hmax - hmax * hmax;
  } else {
    for (int a = 1; a <= basis.size(); ++a) {
      max_sq = std::max(max_sq, tangent_project(p, basis.element(a)).squaredNorm());
    }
  }
  return max_sq * static_cast<double>(n) / (2.0 * static_cast<double>(r));
}

} // namespace

double tangent_restricted_operator_norm(const OperatorBasis& basis,
                                        const TangentProjector& p,
                                        const std::vector<int>& omegas) {
  if (p.u_basis.rows() != basis.n()) {
    throw std::invalid_argument("tangent operator: projector does not match basis dimension");
  }
  if (omegas.empty()) {
    throw std::invalid_argument("tangent operator: no sampled indices");
  }
  return restricted_norm(basis, tangent_frame(p), omegas);
}

double tangent_operator_bound(double nu, int r, int n, long m, double t) {
  if (!(nu > 0.0) || r < 1 || n < 1 || m < 1) {
    throw std::invalid_argument("tangent_operator_bound: invalid arguments");
  }
  if (!(t > 0.0 && t < 2.0)) {
    throw std::invalid_argument("tangent_operator_bound: need 0 < t < 2");
  }
  const double denom =
      4.0 * (2.0 * nu * static_cast<double>(r) * static_cast<double>(n) + 1.0);
  return 4.0 * static_cast<double>(n) * static_cast<double>(r) *
         std::exp(-t * t * static_cast<double>(m) / denom);
}

TailReport tangent_operator_concentration(const OperatorBasis& basis,
                                          const TangentProjector& p, long m,
                                          long trials,
                                          const std::vector<double>& ts,
                                          RngStream& rng, int threads) {
  if (p.u_basis.rows() != basis.n()) {
    throw std::invalid_argument(
        "tangent_operator_concentration: projector does not match basis dimension");
  }
  if (m < 1 || trials < 1) {
    throw std::invalid_argument("tangent_operator_concentration: need m, trials >= 1");
  }
  if (ts.empty()) {
    throw std::invalid_argument("tangent_operator_concentration: no thresholds");
  }
  for (const double t : ts) {
    if (!(t > 0.0 && t < 2.0)) {
      throw std::invalid_argument(
          "tangent_operator_concentration: thresholds must lie in (0, 2)");
    }
  }
  const TangentFrame frame = tangent_frame(p);
  const double nu = tangent_nu(basis, p);
  const int r = static_cast<int>(p.u_basis.cols());
  std::vector<double> norms(static_cast<std::size_t>(trials));
  parallel_trials(trials, threads, [&](long t_idx) {
    RngStream s = rng.fork(static_cast<std::uint64_t>(t_idx));
    const std::vector<int> omegas = sample_indices(s, basis.size(), m, true);
    norms[static_cast<std::size_t>(t_idx)] = restricted_norm(basis, frame, omegas);
  });
  TailReport rep;
  rep.trials = trials;
  rep.thresholds = ts;
  rep.empirical.reserve(ts.size());
  rep.bound.reserve(ts.size());
  for (const double t : ts) {
    long hits = 0;
    for (const double nm : norms) {
      if (nm >= t) ++hits;
    }
    rep.empirical.push_back(static_cast<double>(hits) / static_cast<double>(trials));
    rep.bound.push_back(tangent_operator_bound(nu, r, basis.n(), m, t));
  }
  return rep;
}

} // namespace lrr
