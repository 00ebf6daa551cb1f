#ifndef EIGENTRILAT_WEIGHTS_HPP
#define EIGENTRILAT_WEIGHTS_HPP

#include <variant>

#include "eigentrilat/types.hpp"

namespace eigentrilat {

// Noise models determine the normalization transform Psi_j applied to the
// squared distances and hence the weighting of the squared-distance cost.
struct GaussianDistanceNoise {
  Vec sigma;  // per-measurement std in length units; Psi_j(z) = sqrt(z)
};

struct LogNormalRssNoise {
  Vec eta;           // per-sender path-loss exponent
  Vec c0;            // per-sender dBm at unit distance
  double sigma_rss;  // shared dBm std; Psi_j(z) = 5 eta_j log10(z)
};

struct CustomPsiNoise {
  Vec psi_prime_at_d2;  // Psi'_j(d_j^2)
};

struct UnitNoise {};

using NoiseModel = std::variant<GaussianDistanceNoise, LogNormalRssNoise,
                                CustomPsiNoise, UnitNoise>;

// TOA/RTT weighting: diagonal W with w_jj = 1 / (4 sigma_j^2 d_j^2).
// With shared sigma this reproduces w_jj = 1/4d_j^2 up to a scale, which the
// solver is invariant to.
WeightMatrix weights_toa(const Vec& d, const Vec& sigma);

// d^2 = 10^((c0 - C) / (5 eta)) for an RSS reading C under the log-distance
// path loss model.
double rss_to_distance_squared(double C, double c0, double eta);

// RSS weighting: diagonal W with w_jj = (5 eta_j / (sigma_rss d_j^2 ln 10))^2.
WeightMatrix weights_rss(const Vec& d2, const Vec& eta, double sigma_rss);

// General form w_ij = psi'_i P_ij psi'_j. Diagonal P keeps diagonal storage.
WeightMatrix build_weight_matrix(const Vec& psi_prime, const WeightMatrix& P);

// Derive the weight matrix a noise model induces for the given (clamped)
// distances.
WeightMatrix weights_for_model(const NoiseModel& model, const Vec& d);

// Exact normalized residual cost h0(x) = r(x)^T P r(x) with residuals
// r_j = Psi_j(|x-s_j|^2) - Psi_j(d_j^2). Diagnostic; the solver minimizes
// the Taylor approximation of this.
double eval_h0(const Vec& x, const TrilaterationProblem& p,
               const NoiseModel& model, const Mat& P);

}  // namespace eigentrilat

#endif
