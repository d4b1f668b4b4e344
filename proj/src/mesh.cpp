#include "vbdf2/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "vbdf2/rng.hpp"

namespace vbdf2 {

double s1_ratio_limit() { return (3.0 + std::sqrt(17.0)) / 2.0; }

double grigorieff_ratio_limit() { return 1.0 + std::sqrt(2.0); }

TimeMesh::TimeMesh(std::vector<double> t, std::vector<double> tau)
    : t_(std::move(t)), tau_(std::move(tau)) {}

TimeMesh TimeMesh::from_levels(std::vector<double> levels) {
  if (levels.size() < 2) {
    throw std::invalid_argument("mesh needs at least two time levels");
  }
  if (levels.front() != 0.0) {
    throw std::invalid_argument("mesh must start at t_0 = 0");
  }
  std::vector<double> tau(levels.size() - 1);
  for (std::size_t k = 1; k < levels.size(); ++k) {
    tau[k - 1] = levels[k] - levels[k - 1];
    if (!(tau[k - 1] > 0.0)) {
      throw std::invalid_argument("time levels must be strictly increasing");
    }
  }
  return TimeMesh(std::move(levels), std::move(tau));
}

TimeMesh TimeMesh::from_steps(std::vector<double> steps) {
  if (steps.empty()) {
    throw std::invalid_argument("mesh needs at least one step");
  }
  std::vector<double> t(steps.size() + 1, 0.0);
  for (std::size_t k = 0; k < steps.size(); ++k) {
    if (!(steps[k] > 0.0)) {
      throw std::invalid_argument("all steps must be positive");
    }
    t[k + 1] = t[k] + steps[k];
  }
  return TimeMesh(std::move(t), std::move(steps));
}

double TimeMesh::max_step() const {
  return *std::max_element(tau_.begin(), tau_.end());
}

TimeMesh uniform_mesh(double final_time, int n_steps) {
  if (!(final_time > 0.0)) {
    throw std::invalid_argument("final time must be positive");
  }
  if (n_steps < 1) {
    throw std::invalid_argument("need at least one step");
  }
  std::vector<double> t(static_cast<std::size_t>(n_steps) + 1);
  for (int k = 0; k <= n_steps; ++k) {
    t[static_cast<std::size_t>(k)] = final_time * k / n_steps;
  }
  t.back() = final_time;
  return TimeMesh::from_levels(std::move(t));
}

namespace {

// Levels from raw positive step weights, normalized so t_N = T exactly.
TimeMesh levels_from_weights(double final_time, const std::vector<double>& w) {
  std::vector<double> t(w.size() + 1, 0.0);
  double total = 0.0;
  for (double x : w) total += x;
  double run = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    run += w[k];
    t[k + 1] = final_time * (run / total);
  }
  t.back() = final_time;
  return TimeMesh::from_levels(std::move(t));
}

// Steps normalized to total T with the weight ratios kept exact; the step
// sum then matches T only to accumulation roundoff, which the ratio-capped
// and fixed-ratio constructions prefer over exact-T levels.
TimeMesh steps_from_weights(double final_time, const std::vector<double>& w) {
  double total = 0.0;
  for (double x : w) total += x;
  std::vector<double> tau(w.size());
  for (std::size_t k = 0; k < w.size(); ++k) {
    tau[k] = final_time * (w[k] / total);
  }
  return TimeMesh::from_steps(std::move(tau));
}

}  // namespace

TimeMesh random_mesh(double final_time, int n_steps, std::uint64_t seed) {
  if (!(final_time > 0.0)) {
    throw std::invalid_argument("final time must be positive");
  }
  if (n_steps < 1) {
    throw std::invalid_argument("need at least one step");
  }
  SplitMix64 rng(seed);
  std::vector<double> w(static_cast<std::size_t>(n_steps));
  for (double& x : w) x = rng.uniform01();
  return levels_from_weights(final_time, w);
}

TimeMesh capped_random_mesh(double final_time, int n_steps, std::uint64_t seed,
                            double r_cap) {
  if (r_cap < 1e-3) {
    throw std::invalid_argument("ratio cap below 1e-3 is not supported");
  }
  if (!(final_time > 0.0)) {
    throw std::invalid_argument("final time must be positive");
  }
  if (n_steps < 1) {
    throw std::invalid_argument("need at least one step");
  }
  SplitMix64 rng(seed);
  std::vector<double> w(static_cast<std::size_t>(n_steps));
  for (double& x : w) x = rng.uniform01();

  // Forward clipping sweep; ratios are invariant under renormalization, so
  // one clean sweep terminates. The clip backs off a hair so the realized
  // ratios stay at or below the cap after the normalization roundoff.
  for (int pass = 0; pass < 10; ++pass) {
    bool clipped = false;
    for (std::size_t k = 1; k < w.size(); ++k) {
      const double cap = r_cap * w[k - 1] * (1.0 - 1e-14);
      if (w[k] > cap) {
        w[k] = cap;
        clipped = true;
      }
    }
    if (!clipped) break;
  }
  return steps_from_weights(final_time, w);
}

TimeMesh geometric_mesh(double final_time, int n_steps, double ratio) {
  if (!(ratio > 0.0)) {
    throw std::invalid_argument("ratio must be positive");
  }
  if (!(final_time > 0.0)) {
    throw std::invalid_argument("final time must be positive");
  }
  if (n_steps < 1) {
    throw std::invalid_argument("need at least one step");
  }
  std::vector<double> w(static_cast<std::size_t>(n_steps));
  double x = 1.0;
  for (double& wk : w) {
    wk = x;
    x *= ratio;
  }
  return steps_from_weights(final_time, w);
}

RatioProfile ratio_profile(const TimeMesh& mesh) {
  RatioProfile p;
  p.n_steps = mesh.n_steps();
  const double rs = s1_ratio_limit();
  const double rg = grigorieff_ratio_limit();
  p.r.reserve(static_cast<std::size_t>(std::max(0, mesh.n_steps() - 1)));
  for (int k = 2; k <= mesh.n_steps(); ++k) {
    const double rk = mesh.ratio(k);
    p.r.push_back(rk);
    p.r_max = std::max(p.r_max, rk);
    if (rk >= rg && rk <= rs) {
      ++p.n0_count;
      p.r_hat_c = std::max(p.r_hat_c, rk);
    }
    if (rk >= rs) ++p.n1_count;
    if (rk < rg) p.r_c = std::max(p.r_c, rk);
  }
  return p;
}

bool check_s1(const RatioProfile& profile) {
  const double rs = s1_ratio_limit();
  for (double rk : profile.r) {
    if (rk > rs) return false;
  }
  return true;
}

double gamma_n(const RatioProfile& profile, int n) {
  if (n < 1 || n > profile.n_steps) {
    throw std::invalid_argument("gamma_n: level index " + std::to_string(n) +
                                " outside 1.." + std::to_string(profile.n_steps));
  }
  double sum = 0.0;
  // r_k lives at profile.r[k-2]; the last usable term needs r_{k+2}.
  for (int k = 2; k <= n - 2; ++k) {
    const double rk = profile.r[static_cast<std::size_t>(k) - 2];
    const double rk2 = profile.r[static_cast<std::size_t>(k)];
    sum += std::max(0.0, rk - rk2);
  }
  return sum;
}

}  // namespace vbdf2
