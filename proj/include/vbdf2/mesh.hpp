#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace vbdf2 {

/// Largest step ratio under which the two-step kernels stay positive
/// semi-definite: (3+sqrt(17))/2, the positive root of 2+3r-r^2 = 0.
/// Computed from the square root at runtime so boundary comparisons do not
/// drift against hard-coded decimals.
double s1_ratio_limit();

/// Classical zero-stability ratio bound 1+sqrt(2); step ratios strictly below
/// it give geometrically decaying orthogonal kernels.
double grigorieff_ratio_limit();

/// Nonuniform time grid 0 = t_0 < t_1 < ... < t_N = T. Immutable after
/// construction; levels, steps and ratios use the 1-based indexing of the
/// underlying difference scheme (tau(k) = t(k) - t(k-1) for 1 <= k <= N).
/// Whichever representation a mesh is built from is kept verbatim, so step
/// ratios of a steps-built mesh are exact; on meshes whose step sizes span
/// hundreds of orders of magnitude the accumulated levels may round to
/// repeated values even though every step is positive.
class TimeMesh {
 public:
  /// Validates and adopts a level sequence. Throws std::invalid_argument if
  /// the levels do not increase strictly from t_0 = 0.
  static TimeMesh from_levels(std::vector<double> levels);

  /// Adopts positive steps and accumulates levels from t_0 = 0.
  static TimeMesh from_steps(std::vector<double> steps);

  int n_steps() const { return static_cast<int>(t_.size()) - 1; }
  double final_time() const { return t_.back(); }

  double t(int k) const { return t_[static_cast<std::size_t>(k)]; }
  double tau(int k) const { return tau_[static_cast<std::size_t>(k) - 1]; }
  /// Adjacent step ratio r_k = tau_k / tau_{k-1}, defined for 2 <= k <= N.
  double ratio(int k) const {
    return tau_[static_cast<std::size_t>(k) - 1] / tau_[static_cast<std::size_t>(k) - 2];
  }
  double max_step() const;

  std::span<const double> levels() const { return t_; }
  std::span<const double> steps() const { return tau_; }

 private:
  TimeMesh(std::vector<double> t, std::vector<double> tau);

  std::vector<double> t_;    // size N+1
  std::vector<double> tau_;  // size N
};

/// Step-ratio statistics of a mesh.  n0_count counts ratios in the closed
/// band [1+sqrt(2), (3+sqrt(17))/2]; n1_count counts ratios at or above
/// (3+sqrt(17))/2.  r_c is the largest ratio strictly below 1+sqrt(2) and
/// r_hat_c the largest ratio inside the band; both are 0 when their set is
/// empty.
struct RatioProfile {
  std::vector<double> r;  // r_k for k = 2..N, stored at r[k-2]
  double r_max = 0.0;
  int n0_count = 0;
  int n1_count = 0;
  double r_c = 0.0;
  double r_hat_c = 0.0;
  int n_steps = 0;  // N of the originating mesh
};

/// Equal partition of [0,T] into N steps.
TimeMesh uniform_mesh(double final_time, int n_steps);

/// Random mesh tau_k = T*e_k/S with e_k ~ U(0,1) and S the draw total.
/// Levels are built cumulatively so t_N = T exactly. Deterministic per seed.
TimeMesh random_mesh(double final_time, int n_steps, std::uint64_t seed);

/// Random mesh with every ratio clipped to r_cap: forward sweep
/// tau_k <- min(tau_k, r_cap*tau_{k-1}), renormalization to T, repeated until
/// no clip occurs (at most 10 sweeps). Throws for r_cap < 1e-3.
TimeMesh capped_random_mesh(double final_time, int n_steps, std::uint64_t seed,
                            double r_cap);

/// Fixed-ratio mesh tau_k proportional to ratio^(k-1), normalized to T.
TimeMesh geometric_mesh(double final_time, int n_steps, double ratio);

RatioProfile ratio_profile(const TimeMesh& mesh);

/// True iff every ratio satisfies r_k <= (3+sqrt(17))/2, boundary included.
/// This is sufficient for positive semi-definiteness of the two-step kernels,
/// not necessary.
bool check_s1(const RatioProfile& profile);

/// Becker/Le Roux mesh quantity sum_{k=2}^{n-2} max{0, r_k - r_{k+2}},
/// a diagnostic appearing in classical stability prefactors. Zero for n < 4.
double gamma_n(const RatioProfile& profile, int n);

}  // namespace vbdf2
