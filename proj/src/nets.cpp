#include "lrr/nets.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "lrr/linalg.hpp"

namespace lrr {
namespace {

void check_cap(double eps, double exponent, long cap, const char* what) {
  if (!(eps > 0.0)) {
    std::ostringstream msg;
    msg << what << ": eps must be positive";
    throw std::invalid_argument(msg.str());
  }
  if (cap <= 0) {
    std::ostringstream msg;
    msg << what << ": cap must be positive";
    throw std::invalid_argument(msg.str());
  }
  const double bound = net_cardinality_bound(eps, exponent);
  if (!(bound <= static_cast<double>(cap))) {
    std::ostringstream msg;
    msg << what << ": cardinality bound (1+2/eps)^" << exponent << " = "
        << bound << " exceeds cap " << cap;
    throw std::invalid_argument(msg.str());
  }
}

Vector unit_sphere_draw(RngStream& rng, int n) {
  for (;;) {
    Vector g(n);
    for (int i = 0; i < n; ++i) g(i) = rng.next_gaussian();
    const double norm = g.norm();
    if (norm > 1e-12) return g / norm;
  }
}

Vector unit_ball_draw(RngStream& rng, int n) {
  const Vector dir = unit_sphere_draw(rng, n);
  const double radius = std::pow(rng.next_unit(), 1.0 / static_cast<double>(n));
  return radius * dir;
}

// Greedy maximal packing at separation eps: accept a candidate iff it is
// eps-far from everything kept so far; stop once 50 * |net| candidates in a
// row were rejected. Maximality of the packing is what yields the covering
// property, so the stop rule trades a vanishing miss probability for
// termination.
Net greedy_packing(NetAmbient ambient, int n, double eps, RngStream& rng,
                   const std::function<Vector(RngStream&)>& draw) {
  Net net;
  net.ambient = ambient;
  net.n = n;
  net.eps = eps;
  long consecutive_rejected = 0;
  while (consecutive_rejected <
         50 * std::max<long>(1, static_cast<long>(net.elements.size()))) {
    const Vector candidate = draw(rng);
    bool separated = true;
    for (const Matrix& kept : net.elements) {
      if ((kept.col(0) - candidate).norm() < eps) {
        separated = false;
        break;
      }
    }
    if (separated) {
      net.elements.push_back(candidate);
      consecutive_rejected = 0;
    } else {
      ++consecutive_rejected;
    }
  }
  return net;
}

// Nearest orthonormal-row matrix in Frobenius norm (polar factor W V^T).
Matrix polar_orthonormal_rows(const Matrix& u) {
  Eigen::JacobiSVD<Matrix> dec(u, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return dec.matrixU() * dec.matrixV().transpose();
}

} // namespace

std::string net_ambient_name(NetAmbient a) {
  switch (a) {
    case NetAmbient::Sphere: return "sphere";
    case NetAmbient::Ball: return "ball";
    case NetAmbient::Stiefel: return "stiefel";
    case NetAmbient::LowRank: return "lowrank";
  }
  return "unknown";
}

double net_cardinality_bound(double eps, double exponent) {
  if (!(eps > 0.0) || exponent < 0.0) {
    throw std::invalid_argument("net_cardinality_bound: bad parameters");
  }
  const double log_bound = exponent * std::log1p(2.0 / eps);
  if (log_bound > 700.0) return std::numeric_limits<double>::infinity();
  return std::exp(log_bound);
}

double dist_two_inf(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "dist_two_inf");
  return (a - b).rowwise().norm().maxCoeff();
}

Net sphere_net(int n, double eps, RngStream& rng, long cap) {
  if (n <= 0) throw std::invalid_argument("sphere_net: n must be positive");
  check_cap(eps, static_cast<double>(n), cap, "sphere_net");
  return greedy_packing(NetAmbient::Sphere, n, eps, rng,
                        [n](RngStream& r) { return unit_sphere_draw(r, n); });
}

Net ball_net(int n, double eps, RngStream& rng, long cap) {
  if (n <= 0) throw std::invalid_argument("ball_net: n must be positive");
  check_cap(eps, static_cast<double>(n), cap, "ball_net");
  Net net = greedy_packing(NetAmbient::Ball, n, eps, rng,
                           [n](RngStream& r) { return unit_ball_draw(r, n); });
  return net;
}

Net stiefel_net(int n, int k, double eps, RngStream& rng, long cap) {
  if (n <= 0 || k <= 0 || k > n) {
    throw std::invalid_argument("stiefel_net: need 0 < k <= n");
  }
  check_cap(eps, static_cast<double>(n) * k, cap, "stiefel_net");

  const Net rows = sphere_net(n, eps, rng, cap);
  const std::size_t base = rows.elements.size();
  double product_size = 1.0;
  for (int j = 0; j < k; ++j) product_size *= static_cast<double>(base);
  if (!(product_size <= static_cast<double>(cap))) {
    std::ostringstream msg;
    msg << "stiefel_net: product enumeration " << product_size
        << " exceeds cap " << cap;
    throw std::invalid_argument(msg.str());
  }

  Net net;
  net.ambient = NetAmbient::Stiefel;
  net.n = n;
  net.k = k;
  net.eps = eps;

  // Odometer over the k-fold product of the sphere net. A candidate whose
  // polar projection onto the manifold moves it further than eps in the
  // 2,inf metric is left out, mirroring the near-feasibility filter of the
  // product construction.
  std::vector<std::size_t> idx(static_cast<std::size_t>(k), 0);
  Matrix candidate(k, n);
  for (;;) {
    for (int j = 0; j < k; ++j) {
      candidate.row(j) = rows.elements[idx[static_cast<std::size_t>(j)]].transpose();
    }
    const Matrix projected = polar_orthonormal_rows(candidate);
    const double moved = dist_two_inf(candidate, projected);
    if (moved <= eps) {
      net.elements.push_back(projected);
      net.projection_dist.push_back(moved);
    }

    int pos = k - 1;
    while (pos >= 0) {
      auto& digit = idx[static_cast<std::size_t>(pos)];
      if (++digit < base) break;
      digit = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  return net;
}

Net lowrank_net(int n, int N, int r, double rho, RngStream& rng, long cap) {
  if (n <= 0 || N <= 0) throw std::invalid_argument("lowrank_net: bad dimensions");
  if (r <= 0 || r > std::min(n, N)) {
    throw std::invalid_argument("lowrank_net: need 0 < r <= min(n, N)");
  }
  if (!(rho > 0.0)) throw std::invalid_argument("lowrank_net: rho must be positive");
  {
    const double exponent = static_cast<double>(r) * (n + N + 1);
    const double log_bound = exponent * std::log1p(10.0 / rho);
    const double bound =
        log_bound > 700.0 ? std::numeric_limits<double>::infinity()
                          : std::exp(log_bound);
    if (!(bound <= static_cast<double>(cap))) {
      std::ostringstream msg;
      msg << "lowrank_net: cardinality bound (1+10/rho)^" << exponent << " = "
          << bound << " exceeds cap " << cap;
      throw std::invalid_argument(msg.str());
    }
  }

  const double component_eps = rho / 5.0;
  const Net left = stiefel_net(n, r, component_eps, rng, cap);
  const Net right = stiefel_net(N, r, component_eps, rng, cap);
  const Net spectra = ball_net(r, component_eps, rng, cap);

  const double total = static_cast<double>(left.elements.size()) *
                       static_cast<double>(right.elements.size()) *
                       static_cast<double>(spectra.elements.size());
  if (!(total <= static_cast<double>(cap))) {
    std::ostringstream msg;
    msg << "lowrank_net: assembled size " << total << " exceeds cap " << cap;
    throw std::invalid_argument(msg.str());
  }

  Net net;
  net.ambient = NetAmbient::LowRank;
  net.n = n;
  net.k = N;
  net.r = r;
  net.eps = rho;
  net.elements.reserve(static_cast<std::size_t>(total));
  for (const Matrix& u : left.elements) {
    for (const Matrix& v : right.elements) {
      for (const Matrix& s : spectra.elements) {
        // u is r x n, v is r x N, s is r x 1.
        net.elements.push_back(u.transpose() * s.col(0).asDiagonal() * v);
      }
    }
  }
  return net;
}

double net_operator_norm_bound(const std::function<Vector(const Vector&)>& apply,
                               const Net& net, double eps) {
  if (!apply) throw std::invalid_argument("net_operator_norm_bound: null map");
  if (net.ambient != NetAmbient::Sphere) {
    throw std::invalid_argument(
        "net_operator_norm_bound: requires a sphere net of the domain");
  }
  if (!(eps > 0.0 && eps < 1.0)) {
    throw std::invalid_argument("net_operator_norm_bound: eps must lie in (0, 1)");
  }
  double best = 0.0;
  for (const Matrix& z : net.elements) {
    best = std::max(best, apply(z.col(0)).norm());
  }
  return best / (1.0 - eps);
}

} // namespace lrr
