#ifndef EIGENTRILAT_SMALLEIG_HPP
#define EIGENTRILAT_SMALLEIG_HPP

#include "eigentrilat/types.hpp"

namespace eigentrilat {

// Eigendecomposition of a real symmetric matrix, S = Q diag(values) Q^T,
// with values sorted nonincreasing.
struct SymEig {
  Mat rotation;  // orthogonal Q, columns are eigenvectors
  Vec values;    // descending
};

// All eigenvalues of a real square matrix, with multiplicity. Complex
// eigenvalues come in conjugate pairs. Sorted by descending real part,
// ties by descending imaginary part.
struct EigenvalueList {
  Vec real_parts;
  Vec imag_parts;

  Eigen::Index size() const { return real_parts.size(); }
};

constexpr double kDefaultImagTol = 1e-8;

// Cyclic Jacobi sweeps. Throws NotSymmetric if S deviates from symmetry by
// more than 1e-12 * |S|.
SymEig sym_eig(const Mat& S);

// Balancing + Householder Hessenberg reduction + implicitly shifted
// double-step QR. Throws NoConvergence past 100 * order double steps.
EigenvalueList all_eigenvalues(const Mat& G);

// Max over real parts of eigenvalues with |imag| <= imag_tol * (1 + |real|).
// Throws NoRealEigenvalue when no eigenvalue qualifies.
double largest_real_eigenvalue(const Mat& G, double imag_tol = kDefaultImagTol);

// Count of k with |lambda - D_kk| > rel_tol * max(1, |lambda|).
// Dvals is expected sorted descending.
int shifted_diag_rank(double lambda, const Vec& Dvals, double rel_tol);

}  // namespace eigentrilat

#endif
