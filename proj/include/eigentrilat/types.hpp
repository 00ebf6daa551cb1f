#ifndef EIGENTRILAT_TYPES_HPP
#define EIGENTRILAT_TYPES_HPP

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace eigentrilat {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class ErrorCode {
  DimensionMismatch,
  NonFiniteInput,
  NonPositiveWeights,
  NotSymmetric,
  NoConvergence,
  NoRealEigenvalue,
  NearSingular,
  RankDeficient,
  NonSmoothPoint,
  AllCoordinatesKnown,
  InsufficientData,
  DegenerateFit,
  UnknownAnchor,
  EmptyProblem,
  InvalidArgument,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

// Positive definite weighting matrix, tagged diagonal or full symmetric.
// Diagonal is the fast path; all the synthetic experiments use it.
class WeightMatrix {
 public:
  WeightMatrix() = default;

  static WeightMatrix Diagonal(Vec w);
  static WeightMatrix Full(Mat w);
  static WeightMatrix Unit(Eigen::Index m);

  bool diagonal() const { return diagonal_; }
  Eigen::Index size() const;

  double operator()(Eigen::Index i, Eigen::Index j) const;

  // Sum of all entries, sum_ij w_ij.
  double sum() const;
  // Row sums, (sum_j w_ij)_i. Equal to column sums by symmetry.
  Vec row_sums() const;

  const Vec& diag() const { return diag_; }
  const Mat& full() const { return full_; }
  Mat dense() const;

  WeightMatrix scaled(double c) const;

  // Throws unless symmetric, finite, and positive definite.
  void check_positive_definite() const;

 private:
  bool diagonal_ = true;
  Vec diag_;
  Mat full_;
};

struct TrilaterationProblem {
  int dim = 0;
  Mat senders;  // dim x m, column j holds sender position s_j
  Vec distances;
  WeightMatrix weights;

  Eigen::Index sender_count() const { return senders.cols(); }
};

enum class SolutionKind { Unique, Pair, Sphere, IllDefined };

// Solution hypersphere embedded in R^n: points center + v with v in the
// column span of normal_space and |v| = radius.
struct SolutionSphere {
  Vec center;
  double radius = 0.0;
  Mat normal_space;  // n x k basis of ker(lambda I - D) rotated back
};

// Classified set of global minimizers of the weighted squared-distance cost.
struct SolutionSet {
  SolutionKind kind = SolutionKind::IllDefined;
  std::vector<Vec> points;  // one point for Unique, two for Pair
  double lambda = std::numeric_limits<double>::quiet_NaN();
  double cost = std::numeric_limits<double>::quiet_NaN();
  std::optional<SolutionSphere> sphere;

  bool well_posed() const {
    return kind == SolutionKind::Unique || kind == SolutionKind::Pair;
  }
};

constexpr double kDefaultDistanceClamp = 1e-3;

// d_j <- max(d_j, threshold). Idempotent, monotone.
Vec clamp_distances(const Vec& d, double threshold = kDefaultDistanceClamp);

// Checks shapes, finiteness, nonnegative distances, and weight positivity.
// Returns the problem with distances clamped. Idempotent.
TrilaterationProblem validate_problem(const TrilaterationProblem& p,
                                      double clamp = kDefaultDistanceClamp);

}  // namespace eigentrilat

#endif
