#include "eigentrilat/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace eigentrilat {

NormalData build_normal_data(const TrilaterationProblem& p) {
  const Eigen::Index n = p.dim;
  const Eigen::Index m = p.sender_count();
  NormalData nd;
  nd.weight_sum = p.weights.sum();
  if (!(nd.weight_sum > 0.0) || !std::isfinite(nd.weight_sum)) {
    fail(ErrorCode::NonPositiveWeights, "weight sum must be positive");
  }
  const WeightMatrix W = p.weights.scaled(1.0 / nd.weight_sum);
  const Vec r = W.row_sums();
  nd.t = p.senders * r;
  const Mat St = p.senders.colwise() - nd.t;

  Vec c(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    c[j] = p.distances[j] * p.distances[j] - St.col(j).squaredNorm();
  }
  Vec Wc = W.diagonal() ? Vec(W.diag().cwiseProduct(c)) : Vec(W.full() * c);
  nd.g = St * Wc;
  Mat SWS = W.diagonal() ? Mat(St * W.diag().asDiagonal() * St.transpose())
                         : Mat(St * W.full() * St.transpose());
  nd.A = c.dot(r) * Mat::Identity(n, n) - 2.0 * SWS;
  nd.A = 0.5 * (nd.A + nd.A.transpose()).eval();
  return nd;
}

SpectralData spectral_data(const NormalData& nd) {
  SymEig se = sym_eig(nd.A);
  SpectralData sd;
  sd.rotation = std::move(se.rotation);
  sd.Dvals = std::move(se.values);
  sd.b = sd.rotation.transpose() * nd.g;
  sd.t = nd.t;
  return sd;
}

Mat build_M(const SpectralData& sd) {
  const Eigen::Index n = sd.Dvals.size();
  Mat M = Mat::Zero(2 * n + 1, 2 * n + 1);
  M.block(0, 0, n, n) = sd.Dvals.asDiagonal();
  M.block(0, n, n, n) = Mat((-sd.b).asDiagonal());
  M.block(n, n, n, n) = sd.Dvals.asDiagonal();
  M.block(n, 2 * n, n, 1) = -sd.b;
  M.block(2 * n, 0, 1, n) = Vec::Ones(n).transpose();
  return M;
}

Mat build_MA(const NormalData& nd) {
  const Eigen::Index n = nd.A.rows();
  Mat M = Mat::Zero(2 * n + 1, 2 * n + 1);
  M.block(0, 0, n, n) = nd.A;
  M.block(0, n, n, n) = Mat::Identity(n, n);
  M.block(n, n, n, n) = nd.A;
  M.block(n, 2 * n, n, 1) = -nd.g;
  M.block(2 * n, 0, 1, n) = -nd.g.transpose();
  return M;
}

namespace {

// Maps lambda to the set of minimizers via the shifted-diagonal system
// (lambda I - D) y = -b plus the closure |y|^2 = lambda. Coordinates tied
// with lambda are resolved through the radicand; ties beyond the first
// open up a sphere of solutions.
SolutionSet reconstruct(const SpectralData& sd, double lambda,
                        const SolveOptions& opts) {
  const Eigen::Index n = sd.Dvals.size();
  SolutionSet out;
  out.lambda = lambda;

  // Deficient coordinates form a prefix: Dvals is descending and
  // lambda >= Dvals[0].
  const Eigen::Index deficiency =
      n - shifted_diag_rank(lambda, sd.Dvals, opts.rank_tol);
  const Eigen::Index fixed_from = std::max<Eigen::Index>(deficiency, 1);

  Vec y = Vec::Zero(n);
  double tail = 0.0;
  for (Eigen::Index k = fixed_from; k < n; ++k) {
    y[k] = -sd.b[k] / (lambda - sd.Dvals[k]);
    tail += y[k] * y[k];
  }
  const double radicand = lambda - tail;
  const double ctol = opts.consistency_tol * (1.0 + std::abs(lambda));
  if (radicand < -ctol) {
    out.kind = SolutionKind::IllDefined;
    return out;
  }
  const double rho = std::sqrt(std::max(radicand, 0.0));

  auto lift = [&](const Vec& yy) { return Vec(sd.rotation * yy + sd.t); };

  if (deficiency <= 1) {
    if (deficiency == 0) {
      y[0] = sd.b[0] > 0.0 ? -rho : rho;
      out.kind = SolutionKind::Unique;
      out.points.push_back(lift(y));
    } else if (radicand <= ctol) {
      out.kind = SolutionKind::Unique;
      out.points.push_back(lift(y));
    } else {
      out.kind = SolutionKind::Pair;
      y[0] = rho;
      out.points.push_back(lift(y));
      y[0] = -rho;
      out.points.push_back(lift(y));
    }
    return out;
  }

  // Two or more tied coordinates: minimizers fill a sphere of dimension
  // deficiency - 1 around the lifted partial solution.
  if (radicand <= ctol) {
    out.kind = SolutionKind::Unique;
    out.points.push_back(lift(y));
    return out;
  }
  out.kind = SolutionKind::Sphere;
  SolutionSphere sphere;
  sphere.center = lift(y);
  sphere.radius = rho;
  sphere.normal_space = sd.rotation.leftCols(deficiency);
  out.sphere = std::move(sphere);
  return out;
}

double representative_cost(const SolutionSet& s,
                           const TrilaterationProblem& p) {
  if (!s.points.empty()) {
    return cost_h(s.points[0], p);
  }
  if (s.sphere) {
    Vec x = s.sphere->center + s.sphere->radius * s.sphere->normal_space.col(0);
    return cost_h(x, p);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

SolutionSet solve(const TrilaterationProblem& p, const SolveOptions& opts) {
  const TrilaterationProblem q = validate_problem(p, opts.distance_clamp);
  const NormalData nd = build_normal_data(q);
  const SpectralData sd = spectral_data(nd);
  double lambda = largest_real_eigenvalue(build_M(sd), opts.imag_tol);
  // The rightmost eigenvalue never falls below the top of the spectrum
  // of A; round-off may put it epsilon short.
  lambda = std::max(lambda, sd.Dvals[0]);
  SolutionSet out = reconstruct(sd, lambda, opts);
  out.cost = representative_cost(out, q);
  return out;
}

SolutionSet solve_simple(const TrilaterationProblem& p,
                         const SolveOptions& opts) {
  const TrilaterationProblem q = validate_problem(p, opts.distance_clamp);
  const NormalData nd = build_normal_data(q);
  const double lambda = largest_real_eigenvalue(build_MA(nd), opts.imag_tol);
  const Eigen::Index n = nd.A.rows();
  Eigen::FullPivLU<Mat> lu(lambda * Mat::Identity(n, n) - nd.A);
  if (!(lu.rcond() > 1e-12)) {
    fail(ErrorCode::NearSingular,
         "shifted matrix is near singular; use solve()");
  }
  SolutionSet out;
  out.kind = SolutionKind::Unique;
  out.lambda = lambda;
  out.points.push_back(Vec(lu.solve(-nd.g) + nd.t));
  out.cost = cost_h(out.points[0], q);
  return out;
}

std::vector<StationaryPoint> stationary_points(const SpectralData& sd,
                                               const SolveOptions& opts) {
  const Eigen::Index n = sd.Dvals.size();
  const EigenvalueList ev = all_eigenvalues(build_M(sd));

  std::vector<double> lambdas;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    const double re = ev.real_parts[i];
    const double im = ev.imag_parts[i];
    if (std::abs(im) > opts.imag_tol * (1.0 + std::abs(re))) continue;
    const bool seen = std::any_of(
        lambdas.begin(), lambdas.end(), [&](double l) {
          return std::abs(l - re) <= 1e-8 * std::max(1.0, std::abs(l));
        });
    if (!seen) lambdas.push_back(re);
  }
  std::sort(lambdas.begin(), lambdas.end(), std::greater<double>());

  const double bnorm = sd.b.norm();
  std::vector<StationaryPoint> pts;
  for (double lambda : lambdas) {
    const double ttol = opts.rank_tol * std::max(1.0, std::abs(lambda));
    Vec y = Vec::Zero(n);
    double pinned_sq = 0.0;
    double tied_b_sq = 0.0;
    int tied = 0;
    for (Eigen::Index k = 0; k < n; ++k) {
      if (std::abs(lambda - sd.Dvals[k]) <= ttol) {
        ++tied;
        tied_b_sq += sd.b[k] * sd.b[k];
      } else {
        y[k] = -sd.b[k] / (lambda - sd.Dvals[k]);
        pinned_sq += y[k] * y[k];
      }
    }
    if (tied == 0) {
      pts.push_back({lambda, std::move(y), 0.0, 0});
      continue;
    }
    // Pseudo-inverse residual is exactly the b mass on the tied set.
    if (std::sqrt(tied_b_sq) > 1e-8 * bnorm) continue;
    const double rad2 = lambda - pinned_sq;
    if (rad2 < -opts.consistency_tol * (1.0 + std::abs(lambda))) continue;
    pts.push_back({lambda, std::move(y), std::sqrt(std::max(rad2, 0.0)), tied});
  }
  return pts;
}

double cost_h(const Vec& x, const TrilaterationProblem& p) {
  const Eigen::Index m = p.sender_count();
  if (x.size() != p.dim) {
    fail(ErrorCode::DimensionMismatch, "cost_h: point has wrong dimension");
  }
  Vec f(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    f[j] = (x - p.senders.col(j)).squaredNorm() -
           p.distances[j] * p.distances[j];
  }
  Vec Wf = p.weights.diagonal() ? Vec(p.weights.diag().cwiseProduct(f))
                                : Vec(p.weights.full() * f);
  return 0.25 * f.dot(Wf);
}

Vec gradient_h(const Vec& x, const TrilaterationProblem& p) {
  const Eigen::Index m = p.sender_count();
  if (x.size() != p.dim) {
    fail(ErrorCode::DimensionMismatch, "gradient_h: point has wrong dimension");
  }
  Vec f(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    f[j] = (x - p.senders.col(j)).squaredNorm() -
           p.distances[j] * p.distances[j];
  }
  Vec Wf = p.weights.diagonal() ? Vec(p.weights.diag().cwiseProduct(f))
                                : Vec(p.weights.full() * f);
  return Wf.sum() * x - p.senders * Wf;
}

Vec ReducedProblem::embed(const Vec& x_reduced) const {
  if (x_reduced.size() != static_cast<Eigen::Index>(free_coords.size())) {
    fail(ErrorCode::DimensionMismatch, "embed: wrong reduced dimension");
  }
  Vec full(free_coords.size() + known_coords.size());
  for (std::size_t i = 0; i < known_coords.size(); ++i) {
    full[known_coords[i]] = known_values[i];
  }
  for (std::size_t i = 0; i < free_coords.size(); ++i) {
    full[free_coords[i]] = x_reduced[i];
  }
  return full;
}

ReducedProblem reduce_known_coordinates(const TrilaterationProblem& p,
                                        const std::vector<int>& coords,
                                        const Vec& values) {
  if (static_cast<Eigen::Index>(coords.size()) != values.size()) {
    fail(ErrorCode::DimensionMismatch,
         "reduce_known_coordinates: coords/values size mismatch");
  }
  std::vector<bool> known(p.dim, false);
  for (int c : coords) {
    if (c < 0 || c >= p.dim) {
      fail(ErrorCode::InvalidArgument, "known coordinate index out of range");
    }
    if (known[c]) {
      fail(ErrorCode::InvalidArgument, "duplicate known coordinate");
    }
    known[c] = true;
  }
  if (!values.allFinite()) {
    fail(ErrorCode::NonFiniteInput, "known coordinate values must be finite");
  }
  if (static_cast<int>(coords.size()) >= p.dim) {
    fail(ErrorCode::AllCoordinatesKnown,
         "at least one coordinate must stay free");
  }

  ReducedProblem rp;
  rp.known_coords = coords;
  rp.known_values = values;
  for (int c = 0; c < p.dim; ++c) {
    if (!known[c]) rp.free_coords.push_back(c);
  }

  const Eigen::Index m = p.sender_count();
  const Eigen::Index nf = static_cast<Eigen::Index>(rp.free_coords.size());
  rp.problem.dim = static_cast<int>(nf);
  rp.problem.senders.resize(nf, m);
  for (Eigen::Index i = 0; i < nf; ++i) {
    rp.problem.senders.row(i) = p.senders.row(rp.free_coords[i]);
  }
  rp.problem.distances.resize(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    double off = 0.0;
    for (std::size_t i = 0; i < coords.size(); ++i) {
      const double delta = values[i] - p.senders(coords[i], j);
      off += delta * delta;
    }
    const double d2 = p.distances[j] * p.distances[j] - off;
    rp.problem.distances[j] = std::sqrt(std::max(d2, 0.0));
  }
  rp.problem.weights = p.weights;
  return rp;
}

}  // namespace eigentrilat
