#include "eigentrilat/smalleig.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace eigentrilat {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double sign_with(double magnitude, double sign_source) {
  return sign_source >= 0.0 ? std::abs(magnitude) : -std::abs(magnitude);
}

// Parlett-Reinsch balancing, radix 2. Similarity transform, eigenvalues
// unchanged; no back-transform needed since we only want eigenvalues.
void balance(Mat& a) {
  const Eigen::Index n = a.rows();
  const double radix = 2.0;
  const double sqrdx = radix * radix;
  bool done = false;
  while (!done) {
    done = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double r = 0.0, c = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix;
      double f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= sqrdx;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= sqrdx;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        const double ginv = 1.0 / f;
        a.row(i) *= ginv;
        a.col(i) *= f;
      }
    }
  }
}

// Householder reduction to upper Hessenberg form.
void hessenberg(Mat& a) {
  const Eigen::Index n = a.rows();
  for (Eigen::Index k = 0; k + 2 < n; ++k) {
    const Eigen::Index len = n - k - 1;
    Vec x = a.block(k + 1, k, len, 1);
    const double xnorm = x.norm();
    if (xnorm == 0.0) continue;
    Vec v = x;
    v[0] += sign_with(xnorm, x[0]);
    const double vnorm2 = v.squaredNorm();
    if (vnorm2 == 0.0) continue;
    const double beta = 2.0 / vnorm2;
    // a <- (I - beta v v^T) a (I - beta v v^T), restricted to trailing blocks
    a.block(k + 1, k, len, n - k) -=
        (beta * v) * (v.transpose() * a.block(k + 1, k, len, n - k));
    a.block(0, k + 1, n, len) -=
        (a.block(0, k + 1, n, len) * v) * (beta * v).transpose();
    a.block(k + 2, k, len - 1, 1).setZero();
  }
}

// Francis implicit double-shift QR on an upper Hessenberg matrix.
// Classic EISPACK hqr, eigenvalues only.
void hqr(Mat& h, Vec& wr, Vec& wi) {
  const Eigen::Index n = h.rows();
  wr.resize(n);
  wi.resize(n);

  double anorm = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = std::max<Eigen::Index>(i - 1, 0); j < n; ++j)
      anorm += std::abs(h(i, j));
  if (anorm == 0.0) {
    wr.setZero();
    wi.setZero();
    return;
  }

  const long max_steps = 100 * static_cast<long>(n);
  long steps = 0;
  Eigen::Index nn = n - 1;
  double t = 0.0;
  int its = 0;

  while (nn >= 0) {
    // Look for a single small subdiagonal element.
    Eigen::Index l = nn;
    for (; l >= 1; --l) {
      double s = std::abs(h(l - 1, l - 1)) + std::abs(h(l, l));
      if (s == 0.0) s = anorm;
      if (std::abs(h(l, l - 1)) <= kEps * s) {
        h(l, l - 1) = 0.0;
        break;
      }
    }

    double x = h(nn, nn);
    if (l == nn) {  // one root found
      wr[nn] = x + t;
      wi[nn] = 0.0;
      --nn;
      its = 0;
      continue;
    }

    double y = h(nn - 1, nn - 1);
    double w = h(nn, nn - 1) * h(nn - 1, nn);
    if (l == nn - 1) {  // two roots found
      double p = 0.5 * (y - x);
      double q = p * p + w;
      double z = std::sqrt(std::abs(q));
      x += t;
      if (q >= 0.0) {  // real pair
        z = p + sign_with(z, p);
        wr[nn - 1] = wr[nn] = x + z;
        if (z != 0.0) wr[nn] = x - w / z;
        wi[nn - 1] = wi[nn] = 0.0;
      } else {  // complex conjugate pair
        wr[nn - 1] = wr[nn] = x + p;
        wi[nn - 1] = z;
        wi[nn] = -z;
      }
      nn -= 2;
      its = 0;
      continue;
    }

    // No root yet; perform a double QR step.
    if (steps++ >= max_steps)
      fail(ErrorCode::NoConvergence, "QR iteration exceeded step cap");
    if (its != 0 && its % 10 == 0) {
      // Exceptional shift.
      t += x;
      for (Eigen::Index i = 0; i <= nn; ++i) h(i, i) -= x;
      const double s = std::abs(h(nn, nn - 1)) + std::abs(h(nn - 1, nn - 2));
      y = x = 0.75 * s;
      w = -0.4375 * s * s;
    }
    ++its;

    // Find two consecutive small subdiagonal elements.
    Eigen::Index m = nn - 2;
    double p = 0.0, q = 0.0, r = 0.0;
    for (; m >= l; --m) {
      const double z = h(m, m);
      const double rr = x - z;
      const double ss = y - z;
      p = (rr * ss - w) / h(m + 1, m) + h(m, m + 1);
      q = h(m + 1, m + 1) - z - rr - ss;
      r = h(m + 2, m + 1);
      const double s = std::abs(p) + std::abs(q) + std::abs(r);
      p /= s;
      q /= s;
      r /= s;
      if (m == l) break;
      const double u = std::abs(h(m, m - 1)) * (std::abs(q) + std::abs(r));
      const double v = std::abs(p) * (std::abs(h(m - 1, m - 1)) +
                                      std::abs(z) + std::abs(h(m + 1, m + 1)));
      if (u <= kEps * v) break;
    }
    for (Eigen::Index i = m + 2; i <= nn; ++i) {
      h(i, i - 2) = 0.0;
      if (i != m + 2) h(i, i - 3) = 0.0;
    }

    // Double QR sweep over rows l..nn and columns l..nn.
    for (Eigen::Index k = m; k <= nn - 1; ++k) {
      if (k != m) {
        p = h(k, k - 1);
        q = h(k + 1, k - 1);
        r = (k != nn - 1) ? h(k + 2, k - 1) : 0.0;
        x = std::abs(p) + std::abs(q) + std::abs(r);
        if (x != 0.0) {
          p /= x;
          q /= x;
          r /= x;
        }
      }
      double s = sign_with(std::sqrt(p * p + q * q + r * r), p);
      if (s == 0.0) continue;
      if (k == m) {
        if (l != m) h(k, k - 1) = -h(k, k - 1);
      } else {
        h(k, k - 1) = -s * x;
      }
      p += s;
      x = p / s;
      y = q / s;
      double z = r / s;
      q /= p;
      r /= p;
      for (Eigen::Index j = k; j <= nn; ++j) {  // row modification
        p = h(k, j) + q * h(k + 1, j);
        if (k != nn - 1) {
          p += r * h(k + 2, j);
          h(k + 2, j) -= p * z;
        }
        h(k + 1, j) -= p * y;
        h(k, j) -= p * x;
      }
      const Eigen::Index mmin = std::min<Eigen::Index>(nn, k + 3);
      for (Eigen::Index i = l; i <= mmin; ++i) {  // column modification
        p = x * h(i, k) + y * h(i, k + 1);
        if (k != nn - 1) {
          p += z * h(i, k + 2);
          h(i, k + 2) -= p * r;
        }
        h(i, k + 1) -= p * q;
        h(i, k) -= p;
      }
    }
  }
}

}  // namespace

SymEig sym_eig(const Mat& S) {
  if (S.rows() != S.cols())
    fail(ErrorCode::DimensionMismatch, "sym_eig requires a square matrix");
  const Eigen::Index n = S.rows();
  const double scale = std::max(S.cwiseAbs().maxCoeff(), 1e-300);
  if ((S - S.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    fail(ErrorCode::NotSymmetric, "matrix is not symmetric");

  Mat b = 0.5 * (S + S.transpose());
  Mat q = Mat::Identity(n, n);
  const double fro = b.norm();

  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index r = p + 1; r < n; ++r) off += b(p, r) * b(p, r);
    off = std::sqrt(2.0 * off);
    if (off <= n * kEps * std::max(fro, 1e-300)) break;

    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index r = p + 1; r < n; ++r) {
        const double apq = b(p, r);
        if (apq == 0.0) continue;
        const double tau = (b(r, r) - b(p, p)) / (2.0 * apq);
        const double tt = sign_with(1.0, tau) /
                          (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + tt * tt);
        const double s = tt * c;
        // B <- J^T B J with J the (p, r) rotation
        for (Eigen::Index k = 0; k < n; ++k) {
          const double bkp = b(k, p);
          const double bkr = b(k, r);
          b(k, p) = c * bkp - s * bkr;
          b(k, r) = s * bkp + c * bkr;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double bpk = b(p, k);
          const double brk = b(r, k);
          b(p, k) = c * bpk - s * brk;
          b(r, k) = s * bpk + c * brk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double qkp = q(k, p);
          const double qkr = q(k, r);
          q(k, p) = c * qkp - s * qkr;
          q(k, r) = s * qkp + c * qkr;
        }
      }
    }
  }

  Vec values(n);
  for (Eigen::Index i = 0; i < n; ++i) values[i] = b(i, i);

  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index c) {
                     return values[a] > values[c];
                   });
  SymEig out;
  out.values.resize(n);
  out.rotation.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values[i] = values[order[i]];
    out.rotation.col(i) = q.col(order[i]);
  }
  return out;
}

EigenvalueList all_eigenvalues(const Mat& G) {
  if (G.rows() != G.cols())
    fail(ErrorCode::DimensionMismatch,
         "all_eigenvalues requires a square matrix");
  if (!G.allFinite())
    fail(ErrorCode::NonFiniteInput, "matrix has non-finite entries");

  const Eigen::Index n = G.rows();
  EigenvalueList out;
  if (n == 0) {
    out.real_parts.resize(0);
    out.imag_parts.resize(0);
    return out;
  }

  Mat h = G;
  balance(h);
  hessenberg(h);
  hqr(h, out.real_parts, out.imag_parts);

  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) {
                     if (out.real_parts[a] != out.real_parts[b])
                       return out.real_parts[a] > out.real_parts[b];
                     return out.imag_parts[a] > out.imag_parts[b];
                   });
  EigenvalueList sorted;
  sorted.real_parts.resize(n);
  sorted.imag_parts.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    sorted.real_parts[i] = out.real_parts[order[i]];
    sorted.imag_parts[i] = out.imag_parts[order[i]];
  }
  return sorted;
}

double largest_real_eigenvalue(const Mat& G, double imag_tol) {
  const EigenvalueList eigs = all_eigenvalues(G);
  bool found = false;
  double best = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < eigs.size(); ++i) {
    if (std::abs(eigs.imag_parts[i]) <=
        imag_tol * (1.0 + std::abs(eigs.real_parts[i]))) {
      best = std::max(best, eigs.real_parts[i]);
      found = true;
    }
  }
  if (!found)
    fail(ErrorCode::NoRealEigenvalue,
         "no eigenvalue within the realness tolerance");
  return best;
}

int shifted_diag_rank(double lambda, const Vec& Dvals, double rel_tol) {
  const double scale = std::max(1.0, std::abs(lambda));
  int rank = 0;
  for (Eigen::Index k = 0; k < Dvals.size(); ++k)
    if (std::abs(lambda - Dvals[k]) > rel_tol * scale) ++rank;
  return rank;
}

}  // namespace eigentrilat
