#pragma once

#include <span>
#include <vector>

#include "vbdf2/mesh.hpp"

namespace vbdf2 {

/// Banded convolution kernels B^{(n)}_{n-k} of a multi-step difference
/// operator D v^n = sum_k B^{(n)}_{n-k} (v^k - v^{k-1}). The orthogonal
/// kernel construction below only needs the leading coefficient and the
/// band, so it is written against this interface; the two-step BDF kernels
/// are the shipped instance.
class KernelProvider {
 public:
  virtual ~KernelProvider() = default;

  /// Number of time levels N.
  virtual int levels() const = 0;

  /// Band width w: B^{(n)}_j == 0 for j >= w.
  virtual int bandwidth() const = 0;

  /// B^{(n)}_j for 0 <= j < min(bandwidth, n).
  virtual double coeff(int n, int j) const = 0;
};

/// Variable-step BDF2 convolution kernels on a given mesh:
///   b0^{(1)} = 1/tau_1,
///   b0^{(n)} = (1+2 r_n)/(tau_n (1+r_n)),   b1^{(n)} = -r_n^2/(tau_n (1+r_n))
/// for n >= 2. b0 > 0, b1 < 0 and b0^{(n)} - b1^{(n)} = (1+r_n)/tau_n.
class Bdf2Kernels final : public KernelProvider {
 public:
  explicit Bdf2Kernels(TimeMesh mesh);

  int levels() const override { return mesh_.n_steps(); }
  int bandwidth() const override { return 2; }
  double coeff(int n, int j) const override;

  double b0(int n) const { return b0_[static_cast<std::size_t>(n) - 1]; }
  double b1(int n) const { return b1_[static_cast<std::size_t>(n) - 2]; }

  const TimeMesh& mesh() const { return mesh_; }

  /// Per-step decay factor r_k^2/(1+2 r_k) of the normalized orthogonal
  /// kernels; equals -b1^{(k)}/b0^{(k)}. Defined for 2 <= k <= N.
  double theta_hat_factor(int k) const;

 private:
  TimeMesh mesh_;
  std::vector<double> b0_;  // n = 1..N
  std::vector<double> b1_;  // n = 2..N
};

Bdf2Kernels build_bdf2_kernels(const TimeMesh& mesh);

/// Windowed table of the discrete orthogonal convolution kernels
/// theta^{(n)}_{n-k} and their normalized form theta_hat = theta * b0^{(k)}.
/// Row n holds entries for k = 1..n at index k-1.
struct DocKernels {
  int n_begin = 1;
  int n_end = 0;
  std::vector<std::vector<double>> theta;
  std::vector<std::vector<double>> theta_hat;
};

/// Row n of the orthogonal kernels by back-substitution through the defining
/// recursion theta_0^{(n)} = 1/B_0^{(n)},
/// theta_{n-k}^{(n)} = -(1/B_0^{(k)}) sum_{j>k} theta_{n-j}^{(n)} B_{j-k}^{(j)}.
/// Returned indexed by k (entry k-1 holds theta^{(n)}_{n-k}).
std::vector<double> doc_recursive(const KernelProvider& kernels, int n);

/// Closed form for the BDF2 orthogonal kernels,
/// theta^{(n)}_{n-k} = (1/b0^{(k)}) prod_{i=k+1..n} r_i^2/(1+2 r_i),
/// evaluated as a running product in O(n-k).
double doc_explicit(const Bdf2Kernels& kernels, int n, int k);

/// Normalized orthogonal kernel theta_hat^{(n)}_{n-k} =
/// prod_{i=k+1..n} r_i^2/(1+2 r_i); equals 1 at k = n. Long products are
/// accumulated in log space, and a fully underflowed tail returns exactly 0.
double theta_hat(const Bdf2Kernels& kernels, int n, int k);

/// Windowed table of rows n_begin..n_end (used by diagnostics and the kernel
/// dump; the integrator itself never materializes the triangle).
DocKernels doc_window(const Bdf2Kernels& kernels, int n_begin, int n_end);

/// Residual of the orthogonality identity
/// sum_{j=k}^{n} theta^{(n)}_{n-j} B^{(j)}_{j-k} = delta_{nk}, maximized over
/// k = 1..n. Each column residual is normalized by max(1, sum of summand
/// magnitudes): columns whose summands exceed unit scale (ratios beyond
/// 1+sqrt(2) make the kernels grow geometrically) are measured relative to
/// that scale, everything else stays an absolute residual.
double orthogonality_defect(const KernelProvider& kernels, int n);

/// sum_{j=1}^{n} theta^{(n)}_{n-j}; the identity value is tau_n.
double doc_row_sum(const KernelProvider& kernels, int n);

/// Bilinear form sum_{k<=n} w_k sum_{j<=k} B^{(k)}_{k-j} w_j with n = w.size().
/// Nonnegative whenever the kernels are positive semi-definite.
double quadratic_form(const KernelProvider& kernels, std::span<const double> w);

/// Smallest eigenvalue of the n-by-n symmetric tridiagonal matrix with
/// diagonal 2 b0^{(k)} and off-diagonal b1^{(k+1)}, by bisection on the Sturm
/// negative-pivot count (no dense eigensolver). The kernels are positive
/// semi-definite exactly when this is >= 0.
double psd_min_eigenvalue(const Bdf2Kernels& kernels, int n);

/// Step-ratio constant C_r = (rhat_c^2/(1+2 rhat_c))^{N0} *
/// (1+2 r_c)/(1+2 r_c - r_c^2) bounding the tail sums of theta_hat.
/// Throws std::domain_error when the bound is vacuous: r_c >= 1+sqrt(2), or a
/// profile containing ratios beyond (3+sqrt(17))/2.
double c_r_constant(double r_c, int n0_count, double r_hat_c);
double c_r_constant(const RatioProfile& profile);

/// Column tail sum_{k=j}^{n} theta_hat^{(k)}_{k-j}; bounded by C_r on meshes
/// whose ratios are capped as in c_r_constant.
double doc_tail_sum(const Bdf2Kernels& kernels, int j, int n);

}  // namespace vbdf2
