#include "eigentrilat/weights.hpp"

#include <cmath>

namespace eigentrilat {

namespace {

void require_positive(const Vec& v, const char* what) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i]) || v[i] <= 0.0) {
      fail(ErrorCode::NonPositiveWeights,
           std::string(what) + " must be finite and positive");
    }
  }
}

void require_nonzero(const Vec& v, const char* what) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i]) || v[i] == 0.0) {
      fail(ErrorCode::NonPositiveWeights,
           std::string(what) + " must be finite and nonzero");
    }
  }
}

}  // namespace

WeightMatrix weights_toa(const Vec& d, const Vec& sigma) {
  if (d.size() != sigma.size()) {
    fail(ErrorCode::DimensionMismatch, "weights_toa: size mismatch");
  }
  require_positive(d, "distances");
  require_positive(sigma, "sigma");
  Vec w(d.size());
  for (Eigen::Index j = 0; j < d.size(); ++j) {
    w[j] = 1.0 / (4.0 * sigma[j] * sigma[j] * d[j] * d[j]);
  }
  return WeightMatrix::Diagonal(w);
}

double rss_to_distance_squared(double C, double c0, double eta) {
  if (!std::isfinite(C) || !std::isfinite(c0) || !std::isfinite(eta) ||
      eta <= 0.0) {
    fail(ErrorCode::InvalidArgument, "rss_to_distance_squared: bad inputs");
  }
  return std::pow(10.0, (c0 - C) / (5.0 * eta));
}

WeightMatrix weights_rss(const Vec& d2, const Vec& eta, double sigma_rss) {
  if (d2.size() != eta.size()) {
    fail(ErrorCode::DimensionMismatch, "weights_rss: size mismatch");
  }
  require_positive(d2, "squared distances");
  require_positive(eta, "eta");
  if (!std::isfinite(sigma_rss) || sigma_rss <= 0.0) {
    fail(ErrorCode::NonPositiveWeights, "sigma_rss must be positive");
  }
  const double ln10 = std::log(10.0);
  Vec w(d2.size());
  for (Eigen::Index j = 0; j < d2.size(); ++j) {
    const double a = 5.0 * eta[j] / (sigma_rss * d2[j] * ln10);
    w[j] = a * a;
  }
  return WeightMatrix::Diagonal(w);
}

WeightMatrix build_weight_matrix(const Vec& psi_prime, const WeightMatrix& P) {
  const Eigen::Index m = psi_prime.size();
  if (P.size() != m) {
    fail(ErrorCode::DimensionMismatch, "build_weight_matrix: size mismatch");
  }
  require_nonzero(psi_prime, "psi'");
  if (P.diagonal()) {
    Vec w(m);
    for (Eigen::Index j = 0; j < m; ++j) {
      w[j] = psi_prime[j] * P.diag()[j] * psi_prime[j];
    }
    return WeightMatrix::Diagonal(w);
  }
  Mat w = psi_prime.asDiagonal() * P.full() * psi_prime.asDiagonal();
  return WeightMatrix::Full(w);
}

WeightMatrix weights_for_model(const NoiseModel& model, const Vec& d) {
  if (std::holds_alternative<UnitNoise>(model)) {
    return WeightMatrix::Unit(d.size());
  }
  if (const auto* g = std::get_if<GaussianDistanceNoise>(&model)) {
    return weights_toa(d, g->sigma);
  }
  if (const auto* r = std::get_if<LogNormalRssNoise>(&model)) {
    return weights_rss(d.array().square(), r->eta, r->sigma_rss);
  }
  const auto& c = std::get<CustomPsiNoise>(model);
  if (c.psi_prime_at_d2.size() != d.size()) {
    fail(ErrorCode::DimensionMismatch, "weights_for_model: size mismatch");
  }
  require_nonzero(c.psi_prime_at_d2, "psi'");
  Vec w = c.psi_prime_at_d2.array().square();
  return WeightMatrix::Diagonal(w);
}

namespace {

double psi_value(const NoiseModel& model, Eigen::Index j, double z) {
  if (std::holds_alternative<UnitNoise>(model)) {
    return z;  // identity transform; residuals stay in squared units
  }
  if (std::holds_alternative<GaussianDistanceNoise>(model)) {
    return std::sqrt(z);
  }
  if (std::holds_alternative<CustomPsiNoise>(model)) {
    fail(ErrorCode::InvalidArgument,
         "eval_h0 needs a full transform; a derivative sample is not enough");
  }
  const auto& r = std::get<LogNormalRssNoise>(model);
  return 5.0 * r.eta[j] * std::log10(z);
}

}  // namespace

double eval_h0(const Vec& x, const TrilaterationProblem& p,
               const NoiseModel& model, const Mat& P) {
  const Eigen::Index m = p.senders.cols();
  if (x.size() != p.dim || P.rows() != m || P.cols() != m) {
    fail(ErrorCode::DimensionMismatch, "eval_h0: size mismatch");
  }
  Vec r(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    const double z = (x - p.senders.col(j)).squaredNorm();
    r[j] = psi_value(model, j, z) -
           psi_value(model, j, p.distances[j] * p.distances[j]);
  }
  return r.dot(P * r);
}

}  // namespace eigentrilat
