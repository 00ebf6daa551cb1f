#include "eigentrilat/types.hpp"

#include <cmath>

namespace eigentrilat {

namespace {

bool all_finite(const Mat& m) { return m.allFinite(); }
bool all_finite(const Vec& v) { return v.allFinite(); }

}  // namespace

WeightMatrix WeightMatrix::Diagonal(Vec w) {
  WeightMatrix out;
  out.diagonal_ = true;
  out.diag_ = std::move(w);
  return out;
}

WeightMatrix WeightMatrix::Full(Mat w) {
  if (w.rows() != w.cols())
    fail(ErrorCode::DimensionMismatch, "weight matrix must be square");
  WeightMatrix out;
  out.diagonal_ = false;
  out.full_ = std::move(w);
  return out;
}

WeightMatrix WeightMatrix::Unit(Eigen::Index m) {
  return Diagonal(Vec::Ones(m));
}

Eigen::Index WeightMatrix::size() const {
  return diagonal_ ? diag_.size() : full_.rows();
}

double WeightMatrix::operator()(Eigen::Index i, Eigen::Index j) const {
  if (diagonal_) return i == j ? diag_[i] : 0.0;
  return full_(i, j);
}

double WeightMatrix::sum() const {
  return diagonal_ ? diag_.sum() : full_.sum();
}

Vec WeightMatrix::row_sums() const {
  return diagonal_ ? diag_ : Vec(full_.rowwise().sum());
}

Mat WeightMatrix::dense() const {
  if (diagonal_) return Mat(diag_.asDiagonal());
  return full_;
}

WeightMatrix WeightMatrix::scaled(double c) const {
  if (diagonal_) return Diagonal(diag_ * c);
  return Full(full_ * c);
}

void WeightMatrix::check_positive_definite() const {
  if (diagonal_) {
    if (!all_finite(diag_))
      fail(ErrorCode::NonFiniteInput, "weight matrix has non-finite entries");
    if ((diag_.array() <= 0.0).any())
      fail(ErrorCode::NonPositiveWeights,
           "diagonal weight matrix must have strictly positive entries");
    return;
  }
  if (!all_finite(full_))
    fail(ErrorCode::NonFiniteInput, "weight matrix has non-finite entries");
  double scale = full_.cwiseAbs().maxCoeff();
  if ((full_ - full_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    fail(ErrorCode::NonPositiveWeights, "weight matrix must be symmetric");
  Eigen::LLT<Mat> llt(full_);
  if (llt.info() != Eigen::Success)
    fail(ErrorCode::NonPositiveWeights, "weight matrix is not positive definite");
}

Vec clamp_distances(const Vec& d, double threshold) {
  return d.cwiseMax(threshold);
}

TrilaterationProblem validate_problem(const TrilaterationProblem& p,
                                      double clamp) {
  if (p.dim < 1) fail(ErrorCode::DimensionMismatch, "dim must be >= 1");
  const Eigen::Index m = p.senders.cols();
  if (m < 1) fail(ErrorCode::DimensionMismatch, "at least one sender required");
  if (p.senders.rows() != p.dim)
    fail(ErrorCode::DimensionMismatch, "sender dimension does not match dim");
  if (p.distances.size() != m)
    fail(ErrorCode::DimensionMismatch,
         "distances length does not match sender count");
  if (!all_finite(p.senders) || !all_finite(p.distances))
    fail(ErrorCode::NonFiniteInput, "senders and distances must be finite");
  if ((p.distances.array() < 0.0).any())
    fail(ErrorCode::NonFiniteInput, "distances must be nonnegative");
  if (p.weights.size() != m)
    fail(ErrorCode::DimensionMismatch,
         "weight matrix dimension does not match sender count");
  p.weights.check_positive_definite();

  TrilaterationProblem out = p;
  out.distances = clamp_distances(p.distances, clamp);
  return out;
}

}  // namespace eigentrilat
