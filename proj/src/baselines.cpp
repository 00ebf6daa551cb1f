#include "eigentrilat/baselines.hpp"

#include <cmath>

namespace eigentrilat {

Vec solve_linear(const TrilaterationProblem& p) {
  const TrilaterationProblem q = validate_problem(p);
  const Eigen::Index n = q.dim;
  const Eigen::Index m = q.sender_count();
  if (m < n + 1) {
    fail(ErrorCode::RankDeficient,
         "linear baseline needs at least dim + 1 senders");
  }
  Mat B(m, n + 1);
  Vec rhs(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    B(j, 0) = 1.0;
    B.row(j).tail(n) = -2.0 * q.senders.col(j).transpose();
    rhs[j] = q.distances[j] * q.distances[j] - q.senders.col(j).squaredNorm();
  }
  Eigen::ColPivHouseholderQR<Mat> qr(B);
  qr.setThreshold(1e-10);
  if (qr.rank() < n + 1) {
    fail(ErrorCode::RankDeficient, "sender geometry is rank deficient");
  }
  Vec sol = qr.solve(rhs);
  return sol.tail(n);
}

Vec refine_ml(const TrilaterationProblem& p, const Vec& x0, const Vec& sigma,
              const MlRefineOptions& opts) {
  const TrilaterationProblem q = validate_problem(p);
  const Eigen::Index n = q.dim;
  const Eigen::Index m = q.sender_count();
  if (x0.size() != n) {
    fail(ErrorCode::DimensionMismatch, "refine_ml: x0 has wrong dimension");
  }
  Vec sig;
  if (sigma.size() == 0) {
    sig = Vec::Ones(m);
  } else if (sigma.size() == m) {
    sig = sigma;
  } else {
    fail(ErrorCode::DimensionMismatch, "refine_ml: sigma size mismatch");
  }
  for (Eigen::Index j = 0; j < m; ++j) {
    if (!std::isfinite(sig[j]) || sig[j] <= 0.0) {
      fail(ErrorCode::NonPositiveWeights, "refine_ml: sigma must be positive");
    }
  }

  auto residuals = [&](const Vec& x, Vec& r, Mat* J) {
    for (Eigen::Index j = 0; j < m; ++j) {
      const Vec diff = x - q.senders.col(j);
      const double dist = diff.norm();
      if (dist < 1e-12) {
        fail(ErrorCode::NonSmoothPoint,
             "refine_ml: iterate coincides with a sender");
      }
      r[j] = (dist - q.distances[j]) / sig[j];
      if (J) J->row(j) = diff.transpose() / (dist * sig[j]);
    }
  };

  Vec x = x0;
  Vec r(m);
  Mat J(m, n);
  residuals(x, r, &J);
  double loss = r.squaredNorm();
  double damping = opts.initial_damping;
  const double tol = opts.tol_per_residual * static_cast<double>(m);

  for (int it = 0; it < opts.max_iterations; ++it) {
    const Mat JtJ = J.transpose() * J;
    const Vec Jtr = J.transpose() * r;
    const Vec step =
        (JtJ + damping * Mat::Identity(n, n)).ldlt().solve(-Jtr);
    const Vec x_next = x + step;
    Vec r_next(m);
    residuals(x_next, r_next, nullptr);
    const double loss_next = r_next.squaredNorm();
    if (loss_next < loss) {
      const double drop = loss - loss_next;
      x = x_next;
      residuals(x, r, &J);
      loss = loss_next;
      damping = std::max(damping / 10.0, 1e-15);
      if (drop <= tol) break;
    } else {
      damping *= 10.0;
      if (damping > 1e15) break;
    }
  }
  return x;
}

}  // namespace eigentrilat
