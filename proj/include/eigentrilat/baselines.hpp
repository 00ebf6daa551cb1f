#ifndef EIGENTRILAT_BASELINES_HPP
#define EIGENTRILAT_BASELINES_HPP

#include "eigentrilat/types.hpp"

namespace eigentrilat {

// Classical linearization: subtracting |x|^2 from every squared-distance
// equation leaves the linear system
//   [ 1  -2 s_j^T ] [ alpha; x ] = d_j^2 - s_j^T s_j,
// solved in the least-squares sense. Needs m >= n + 1 senders in general
// position; throws RankDeficient otherwise. alpha is discarded.
Vec solve_linear(const TrilaterationProblem& p);

struct MlRefineOptions {
  int max_iterations = 100;
  double initial_damping = 1e-3;
  // Step accepted: damping /= 10. Step rejected: damping *= 10.
  double tol_per_residual = 1e-10;  // stop when the loss drops less than
                                    // tol_per_residual * m in an iteration
};

// Local maximum-likelihood polish of the range cost
//   l(x) = sum_j (|x - s_j| - d_j)^2 / sigma_j^2
// by damped Gauss-Newton steps from x0. sigma empty means unit sigmas.
// Throws NonSmoothPoint when an iterate lands on a sender, where the
// residual loses differentiability.
Vec refine_ml(const TrilaterationProblem& p, const Vec& x0,
              const Vec& sigma = Vec(), const MlRefineOptions& opts = {});

}  // namespace eigentrilat

#endif
