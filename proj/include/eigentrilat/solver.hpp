#ifndef EIGENTRILAT_SOLVER_HPP
#define EIGENTRILAT_SOLVER_HPP

#include "eigentrilat/smalleig.hpp"
#include "eigentrilat/types.hpp"

namespace eigentrilat {

// Reduced data of the normalized problem. Weights are rescaled so
// sum_ij w_ij = 1 and senders are translated by t so that their weighted
// mean is zero. In that frame the gradient of the cost is
//   grad h(x) = (x^T x) x - A x + g.
struct NormalData {
  Mat A;   // n x n symmetric
  Vec g;   // n
  Vec t;   // translation removed from the senders
  double weight_sum = 0.0;  // original sum_ij w_ij, for rescaling costs
};

// Normal data rotated into the eigenbasis of A: D = rotation^T A rotation
// diagonal with entries descending, b = rotation^T g.
struct SpectralData {
  Mat rotation;
  Vec Dvals;  // descending
  Vec b;
  Vec t;
};

struct SolveOptions {
  double rank_tol = 1e-8;         // relative tie threshold lambda vs D_kk
  double imag_tol = 1e-8;         // realness filter for eigenvalues
  double consistency_tol = 1e-8;  // radicand floor, relative
  double distance_clamp = kDefaultDistanceClamp;
};

// A stationary point family of the rotated cost, at eigenvalue coordinate
// lambda = y^T y. kernel_dims == 0 marks a single point y; otherwise the
// family is the sphere {y + u : u in the span of the tied coordinates,
// |u| = radius}.
struct StationaryPoint {
  double lambda = 0.0;
  Vec y;                // the point, or the pinned part on singular shifts
  double radius = 0.0;  // 0 for unique points
  int kernel_dims = 0;  // tied coordinate count

  bool unique() const { return kernel_dims == 0; }
};

NormalData build_normal_data(const TrilaterationProblem& p);

SpectralData spectral_data(const NormalData& nd);

// (2n+1) x (2n+1) companion-style matrix in the eigenbasis,
//   [ D  -diag(b)  0 ]
//   [ 0      D    -b ]
//   [ 1^T    0     0 ]
// Its rightmost eigenvalue is the lambda of the global minimizer.
Mat build_M(const SpectralData& sd);

// Same spectrum, assembled from A and g without the symmetric
// eigendecomposition:
//   [  A     I    0 ]
//   [  0     A   -g ]
//   [ -g^T   0    0 ]
Mat build_MA(const NormalData& nd);

// Global minimizers of the weighted squared-distance cost, classified by
// the multiplicity structure at the rightmost eigenvalue. Exhaustive over
// the solution set: Unique and Pair list the points, Sphere carries the
// center/radius/subspace description, IllDefined means the reconstruction
// was inconsistent at the given tolerances.
SolutionSet solve(const TrilaterationProblem& p, const SolveOptions& opts = {});

// Plain variant: rightmost eigenvalue of build_MA, then one linear solve
// (lambda I - A) x = -g. Throws NearSingular when the shifted matrix has
// condition beyond 1e12; use solve() near degenerate geometry.
SolutionSet solve_simple(const TrilaterationProblem& p,
                         const SolveOptions& opts = {});

// Every stationary point family of the rotated cost, one entry per real
// eigenvalue of M, sorted by descending lambda. Nonsingular shifts give
// unique points y = -(lambda I - D)^{-1} b; singular shifts give spheres
// through the pseudo-inverse, skipped when the system is inconsistent or
// the squared radius is negative beyond tolerance.
std::vector<StationaryPoint> stationary_points(const SpectralData& sd,
                                               const SolveOptions& opts = {});

// Quartic cost h(x) = 1/4 sum_ij w_ij f_i(x) f_j(x),
// f_j(x) = |x - s_j|^2 - d_j^2, with the problem's weights as given.
double cost_h(const Vec& x, const TrilaterationProblem& p);

// grad h(x) = sum_ij w_ij f_i(x) (x - s_j).
Vec gradient_h(const Vec& x, const TrilaterationProblem& p);

// Problem with a subset of coordinates pinned to known values. Distances
// are shrunk by the pinned offsets; embed() maps reduced solutions back.
struct ReducedProblem {
  TrilaterationProblem problem;
  std::vector<int> free_coords;
  std::vector<int> known_coords;
  Vec known_values;

  Vec embed(const Vec& x_reduced) const;
};

ReducedProblem reduce_known_coordinates(const TrilaterationProblem& p,
                                        const std::vector<int>& coords,
                                        const Vec& values);

}  // namespace eigentrilat

#endif
