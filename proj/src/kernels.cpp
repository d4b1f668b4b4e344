#include "vbdf2/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace vbdf2 {

namespace {

void check_level(const KernelProvider& kernels, int n, const char* who) {
  if (n < 1 || n > kernels.levels()) {
    throw std::invalid_argument(std::string(who) + ": level index " +
                                std::to_string(n) + " outside 1.." +
                                std::to_string(kernels.levels()));
  }
}

}  // namespace

Bdf2Kernels::Bdf2Kernels(TimeMesh mesh) : mesh_(std::move(mesh)) {
  const int n_steps = mesh_.n_steps();
  b0_.resize(static_cast<std::size_t>(n_steps));
  b0_[0] = 1.0 / mesh_.tau(1);
  if (n_steps >= 2) {
    b1_.resize(static_cast<std::size_t>(n_steps) - 1);
    for (int n = 2; n <= n_steps; ++n) {
      const double r = mesh_.ratio(n);
      const double denom = mesh_.tau(n) * (1.0 + r);
      b0_[static_cast<std::size_t>(n) - 1] = (1.0 + 2.0 * r) / denom;
      b1_[static_cast<std::size_t>(n) - 2] = -(r * r) / denom;
    }
  }
}

double Bdf2Kernels::coeff(int n, int j) const {
  if (j == 0) return b0(n);
  if (j == 1 && n >= 2) return b1(n);
  return 0.0;
}

double Bdf2Kernels::theta_hat_factor(int k) const {
  const double r = mesh_.ratio(k);
  return (r * r) / (1.0 + 2.0 * r);
}

Bdf2Kernels build_bdf2_kernels(const TimeMesh& mesh) {
  return Bdf2Kernels(mesh);
}

std::vector<double> doc_recursive(const KernelProvider& kernels, int n) {
  check_level(kernels, n, "doc_recursive");
  const int bw = kernels.bandwidth();
  std::vector<double> theta(static_cast<std::size_t>(n));
  theta[static_cast<std::size_t>(n) - 1] = 1.0 / kernels.coeff(n, 0);
  for (int k = n - 1; k >= 1; --k) {
    double acc = 0.0;
    const int j_hi = std::min(n, k + bw - 1);
    for (int j = k + 1; j <= j_hi; ++j) {
      acc += theta[static_cast<std::size_t>(j) - 1] * kernels.coeff(j, j - k);
    }
    theta[static_cast<std::size_t>(k) - 1] = -acc / kernels.coeff(k, 0);
  }
  return theta;
}

double theta_hat(const Bdf2Kernels& kernels, int n, int k) {
  check_level(kernels, n, "theta_hat");
  if (k < 1 || k > n) {
    throw std::invalid_argument("theta_hat: need 1 <= k <= n");
  }
  if (n - k <= 512) {
    double prod = 1.0;
    for (int i = k + 1; i <= n; ++i) prod *= kernels.theta_hat_factor(i);
    return prod;
  }
  // Long products are summed in log space; a fully underflowed tail comes
  // back as an exact 0.
  double logsum = 0.0;
  for (int i = k + 1; i <= n; ++i) {
    logsum += std::log(kernels.theta_hat_factor(i));
  }
  return std::exp(logsum);
}

double doc_explicit(const Bdf2Kernels& kernels, int n, int k) {
  return theta_hat(kernels, n, k) / kernels.b0(k);
}

DocKernels doc_window(const Bdf2Kernels& kernels, int n_begin, int n_end) {
  check_level(kernels, n_begin, "doc_window");
  check_level(kernels, n_end, "doc_window");
  if (n_begin > n_end) {
    throw std::invalid_argument("doc_window: empty window");
  }
  DocKernels table;
  table.n_begin = n_begin;
  table.n_end = n_end;
  for (int n = n_begin; n <= n_end; ++n) {
    std::vector<double> hat(static_cast<std::size_t>(n));
    std::vector<double> theta_row(static_cast<std::size_t>(n));
    double prod = 1.0;
    for (int k = n; k >= 1; --k) {
      hat[static_cast<std::size_t>(k) - 1] = prod;
      theta_row[static_cast<std::size_t>(k) - 1] = prod / kernels.b0(k);
      if (k >= 2) prod *= kernels.theta_hat_factor(k);
    }
    table.theta.push_back(std::move(theta_row));
    table.theta_hat.push_back(std::move(hat));
  }
  return table;
}

double orthogonality_defect(const KernelProvider& kernels, int n) {
  check_level(kernels, n, "orthogonality_defect");
  const std::vector<double> theta = doc_recursive(kernels, n);
  const int bw = kernels.bandwidth();
  double worst = 0.0;
  for (int k = 1; k <= n; ++k) {
    double sum = 0.0;
    double scale = 0.0;
    const int j_hi = std::min(n, k + bw - 1);
    for (int j = k; j <= j_hi; ++j) {
      const double term =
          theta[static_cast<std::size_t>(j) - 1] * kernels.coeff(j, j - k);
      sum += term;
      scale += std::abs(term);
    }
    const double target = (k == n) ? 1.0 : 0.0;
    worst = std::max(worst, std::abs(sum - target) / std::max(1.0, scale));
  }
  return worst;
}

double doc_row_sum(const KernelProvider& kernels, int n) {
  const std::vector<double> theta = doc_recursive(kernels, n);
  double sum = 0.0;
  for (double x : theta) sum += x;
  return sum;
}

double quadratic_form(const KernelProvider& kernels,
                      std::span<const double> w) {
  const int n = static_cast<int>(w.size());
  if (n > kernels.levels()) {
    throw std::invalid_argument("quadratic_form: sequence longer than mesh");
  }
  const int bw = kernels.bandwidth();
  double total = 0.0;
  for (int k = 1; k <= n; ++k) {
    double row = 0.0;
    const int j_lo = std::max(1, k - bw + 1);
    for (int j = j_lo; j <= k; ++j) {
      row += kernels.coeff(k, k - j) * w[static_cast<std::size_t>(j) - 1];
    }
    total += w[static_cast<std::size_t>(k) - 1] * row;
  }
  return total;
}

double psd_min_eigenvalue(const Bdf2Kernels& kernels, int n) {
  check_level(kernels, n, "psd_min_eigenvalue");
  std::vector<double> diag(static_cast<std::size_t>(n));
  std::vector<double> off(static_cast<std::size_t>(std::max(0, n - 1)));
  for (int k = 1; k <= n; ++k) {
    diag[static_cast<std::size_t>(k) - 1] = 2.0 * kernels.b0(k);
  }
  for (int k = 1; k <= n - 1; ++k) {
    off[static_cast<std::size_t>(k) - 1] = kernels.b1(k + 1);
  }

  double norm_inf = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double e_left = (i > 0) ? std::abs(off[static_cast<std::size_t>(i) - 1]) : 0.0;
    const double e_right =
        (i < n - 1) ? std::abs(off[static_cast<std::size_t>(i)]) : 0.0;
    norm_inf = std::max(norm_inf, diag[static_cast<std::size_t>(i)] + e_left + e_right);
    lo = std::min(lo, diag[static_cast<std::size_t>(i)] - e_left - e_right);
    hi = std::max(hi, diag[static_cast<std::size_t>(i)] + e_left + e_right);
  }

  const double safe_floor = norm_inf * std::numeric_limits<double>::epsilon();
  // Negative-pivot count of the shifted LDL^T factorization; equals the
  // number of eigenvalues below x.
  auto count_below = [&](double x) {
    int count = 0;
    double q = diag[0] - x;
    if (q < 0.0) ++count;
    for (int i = 1; i < n; ++i) {
      double denom = q;
      if (std::abs(denom) < safe_floor) {
        denom = (denom < 0.0) ? -safe_floor : safe_floor;
      }
      const double e = off[static_cast<std::size_t>(i) - 1];
      q = diag[static_cast<std::size_t>(i)] - x - (e * e) / denom;
      if (q < 0.0) ++count;
    }
    return count;
  };

  const double tol = 1e-14 * norm_inf;
  for (int it = 0; it < 200 && (hi - lo) > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (count_below(mid) >= 1) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double c_r_constant(double r_c, int n0_count, double r_hat_c) {
  const double rg = grigorieff_ratio_limit();
  if (r_c >= rg) {
    throw std::domain_error(
        "c_r_constant: r_c >= 1+sqrt(2), the geometric tail bound is vacuous");
  }
  if (r_c < 0.0 || n0_count < 0) {
    throw std::invalid_argument("c_r_constant: negative inputs");
  }
  double cr = (1.0 + 2.0 * r_c) / (1.0 + 2.0 * r_c - r_c * r_c);
  if (n0_count > 0) {
    const double f = (r_hat_c * r_hat_c) / (1.0 + 2.0 * r_hat_c);
    cr *= std::pow(f, n0_count);
  }
  return cr;
}

double c_r_constant(const RatioProfile& profile) {
  if (!check_s1(profile)) {
    throw std::domain_error(
        "c_r_constant: profile has ratios beyond (3+sqrt(17))/2");
  }
  return c_r_constant(profile.r_c, profile.n0_count, profile.r_hat_c);
}

double doc_tail_sum(const Bdf2Kernels& kernels, int j, int n) {
  check_level(kernels, n, "doc_tail_sum");
  if (j < 1 || j > n) {
    throw std::invalid_argument("doc_tail_sum: need 1 <= j <= n");
  }
  double partial = 1.0;  // theta_hat^{(j)}_0
  double sum = partial;
  for (int k = j + 1; k <= n; ++k) {
    partial *= kernels.theta_hat_factor(k);
    sum += partial;
  }
  return sum;
}

}  // namespace vbdf2
