#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lrr/rng.hpp"
#include "lrr/types.hpp"

namespace lrr {

enum class NetAmbient { Sphere, Ball, Stiefel, LowRank };

std::string net_ambient_name(NetAmbient a);

/// Finite net in one of four ambient sets. Elements are stored as matrices:
/// n x 1 columns for sphere/ball nets, k x n orthonormal-row matrices for
/// Stiefel nets, and n x cols rank <= r matrices of Frobenius norm <= 1 for
/// low-rank nets. `eps` echoes the construction parameter; the covering
/// radius is eps for sphere/ball, 2*eps for Stiefel, and (via the factor
/// decomposition) eps for low-rank nets built at component resolution eps/5,
/// in each case up to the small uncovered remnant left by the randomized
/// stopping rule described at sphere_net.
struct Net {
  NetAmbient ambient = NetAmbient::Sphere;
  int n = 0;    // vector dimension / row dimension of the domain
  int k = 0;    // Stiefel: number of orthonormal rows; LowRank: column dim
  int r = 0;    // LowRank: rank cap
  double eps = 0.0;
  std::vector<Matrix> elements;
  /// Stiefel only: achieved 2,inf distance moved by the feasibility
  /// projection of each kept product candidate.
  std::vector<double> projection_dist;
};

/// (1 + 2/eps)^exponent, saturating to +inf on overflow.
double net_cardinality_bound(double eps, double exponent);

/// max row-wise Euclidean distance between equal-shaped matrices.
double dist_two_inf(const Matrix& a, const Matrix& b);

/// Greedy random maximal packing of the unit sphere in R^n at separation
/// eps; a truly maximal packing is automatically an eps-net. Construction
/// stops after 50 * |net| consecutive rejected candidates, which approximates
/// maximality: an uncovered remnant of mass on the order of the inverse
/// streak length can survive, so the eps-covering holds for all but a
/// vanishing fraction of the sphere. Requires the volumetric cardinality
/// bound (1 + 2/eps)^n <= cap.
Net sphere_net(int n, double eps, RngStream& rng, long cap = 1000000);

/// Same construction inside the unit ball; same cardinality bound.
Net ball_net(int n, double eps, RngStream& rng, long cap = 1000000);

/// Net for the manifold of k x n matrices with orthonormal rows in the
/// 2,inf metric, radius 2*eps: the k-fold product of a sphere net, with each
/// near-feasible product candidate replaced by its polar-factor projection
/// and kept only when the projection moved it by at most eps. Cardinality is
/// bounded by (1 + 2/eps)^{n k} <= cap.
Net stiefel_net(int n, int k, double eps, RngStream& rng, long cap = 1000000);

/// Net at radius rho for { A in R^{n x N} : rank A <= r, ||A||_F <= 1 },
/// assembled as U^T diag(sigma) V from Stiefel nets for U, V and a ball net
/// for sigma, each at resolution rho/5. Cardinality is bounded by
/// (1 + 10/rho)^{r(n + N + 1)} <= cap.
Net lowrank_net(int n, int N, int r, double rho, RngStream& rng,
                long cap = 1000000);

/// Upper bound (1 - eps)^{-1} max_{z in net} ||apply(z)|| for the operator
/// norm of the linear map `apply`, valid when `net` is an eps-net of the
/// unit sphere of the domain.
double net_operator_norm_bound(const std::function<Vector(const Vector&)>& apply,
                               const Net& net, double eps);

} // namespace lrr
