#pragma once

// Dependency-free one-sided (Hestenes) Jacobi SVD for the small dense
// matrices that arise from finite joint distributions.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

namespace ikg {

/// Row-major dense matrix.
struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  DenseMatrix() = default;
  DenseMatrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  [[nodiscard]] DenseMatrix transposed() const {
    DenseMatrix t(cols, rows);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
    return t;
  }
};

/// A = U diag(s) V^T with k = min(rows, cols) columns in U and V.
struct SvdResult {
  std::vector<double> singular_values;  // descending
  DenseMatrix u;                        // rows x k
  DenseMatrix v;                        // cols x k
};

namespace detail {

// Column j of a (rows x k) matrix completed to an orthonormal set against
// columns [0, j) by Gram-Schmidt over the standard basis.
inline void complete_column(DenseMatrix& q, std::size_t j) {
  const std::size_t n = q.rows;
  for (std::size_t e = 0; e < n; ++e) {
    std::vector<double> cand(n, 0.0);
    cand[e] = 1.0;
    for (int sweep = 0; sweep < 2; ++sweep) {
      for (std::size_t c = 0; c < j; ++c) {
        double dot = 0.0;
        for (std::size_t i = 0; i < n; ++i) dot += cand[i] * q(i, c);
        for (std::size_t i = 0; i < n; ++i) cand[i] -= dot * q(i, c);
      }
    }
    double norm = 0.0;
    for (double x : cand) norm += x * x;
    norm = std::sqrt(norm);
    if (norm > 1e-6) {
      for (std::size_t i = 0; i < n; ++i) q(i, j) = cand[i] / norm;
      return;
    }
  }
}

}  // namespace detail

inline SvdResult jacobi_svd(const DenseMatrix& a, double tol = 1e-13, int max_sweeps = 100) {
  const bool flip = a.rows < a.cols;
  DenseMatrix w = flip ? a.transposed() : a;  // m x n with m >= n
  const std::size_t m = w.rows, n = w.cols;
  DenseMatrix v(n, n);
  for (std::size_t i = 0; i < n; ++i) v(i, i) = 1.0;

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          alpha += w(i, p) * w(i, p);
          beta += w(i, q) * w(i, q);
          gamma += w(i, p) * w(i, q);
        }
        if (gamma == 0.0 || std::abs(gamma) <= tol * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < m; ++i) {
          const double wp = w(i, p), wq = w(i, q);
          w(i, p) = c * wp - s * wq;
          w(i, q) = s * wp + c * wq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double vp = v(i, p), vq = v(i, q);
          v(i, p) = c * vp - s * vq;
          v(i, q) = s * vp + c * vq;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) {
    double norm = 0.0;
    for (std::size_t i = 0; i < m; ++i) norm += w(i, j) * w(i, j);
    sigma[j] = std::sqrt(norm);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return sigma[l] > sigma[r]; });

  SvdResult out;
  out.u = DenseMatrix(m, n);
  out.v = DenseMatrix(n, n);
  const double cutoff = (sigma.empty() ? 0.0 : sigma[order[0]]) * 1e-14;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = order[k];
    out.singular_values.push_back(sigma[j]);
    for (std::size_t i = 0; i < n; ++i) out.v(i, k) = v(i, j);
    if (sigma[j] > cutoff) {
      for (std::size_t i = 0; i < m; ++i) out.u(i, k) = w(i, j) / sigma[j];
    } else {
      detail::complete_column(out.u, k);
    }
  }
  if (flip) std::swap(out.u, out.v);
  return out;
}

}  // namespace ikg
