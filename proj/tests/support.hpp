#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "vbdf2/mesh.hpp"
#include "vbdf2/rng.hpp"

namespace vbdf2::testing {

/// Independent eigenvalue oracle: cyclic Jacobi rotations on a dense
/// symmetric matrix (row-major n x n). Deliberately shares nothing with the
/// Sturm bisection it cross-checks.
inline double jacobi_min_eigenvalue(std::vector<double> a, int n) {
  auto at = [&](int i, int j) -> double& {
    return a[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + j];
  };
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
    }
    if (off < 1e-30) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(at(p, q)) < 1e-300) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * at(p, q));
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = at(k, p);
          const double akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = at(p, k);
          const double aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  double min_eig = at(0, 0);
  for (int i = 1; i < n; ++i) min_eig = std::min(min_eig, at(i, i));
  return min_eig;
}

/// Dense symmetric tridiagonal with the kernel layout: diagonal 2*b0^{(k)},
/// off-diagonal b1^{(k+1)}.
inline std::vector<double> dense_kernel_matrix(const std::vector<double>& diag,
                                               const std::vector<double>& off) {
  const int n = static_cast<int>(diag.size());
  std::vector<double> a(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    a[static_cast<std::size_t>(i) * n + i] = diag[static_cast<std::size_t>(i)];
    if (i + 1 < n) {
      a[static_cast<std::size_t>(i) * n + i + 1] = off[static_cast<std::size_t>(i)];
      a[static_cast<std::size_t>(i + 1) * n + i] = off[static_cast<std::size_t>(i)];
    }
  }
  return a;
}

inline TimeMesh mesh_from_steps(std::initializer_list<double> steps) {
  return TimeMesh::from_steps(std::vector<double>(steps));
}

inline std::vector<double> random_vector(SplitMix64& rng, int n, double lo,
                                         double hi) {
  std::vector<double> w(static_cast<std::size_t>(n));
  for (double& x : w) x = rng.uniform(lo, hi);
  return w;
}

}  // namespace vbdf2::testing
