#include "vbdf2/integrator.hpp"

#include <algorithm>
#include <cmath>

#include "vbdf2/spatial.hpp"

namespace vbdf2 {

std::vector<double> dahlquist_march(std::complex<double> lambda,
                                    const TimeMesh& mesh,
                                    std::complex<double> y0) {
  ScalarOperator op(lambda);
  Bdf2Config config;
  config.monitor_energy = false;
  const auto result = march(op, mesh, config, y0);
  std::vector<double> magnitudes;
  magnitudes.reserve(result.trace.records.size());
  for (const TraceRecord& rec : result.trace.records) {
    magnitudes.push_back(rec.l2_norm);
  }
  return magnitudes;
}

namespace {

// Solves b0*y - g(t,y) = rhs by damped Newton from the given initial guess.
// Under the step gate tau <= 1/(4 L) the derivative b0 - dg/dy stays positive,
// so the iteration is well posed.
double newton_step_solve(const std::function<double(double, double)>& g,
                         const std::function<double(double, double)>& dg_dy,
                         double b0, double t, double rhs, double guess) {
  const double tol = 1e-13 * std::max(1.0, std::abs(rhs));
  double y = guess;
  for (int it = 0; it < 50; ++it) {
    const double f = b0 * y - g(t, y) - rhs;
    if (std::abs(f) <= tol) return y;
    const double d = b0 - dg_dy(t, y);
    double step = f / d;
    double damping = 1.0;
    double y_next = y - step;
    while (damping > 1.0 / 64.0 &&
           std::abs(b0 * y_next - g(t, y_next) - rhs) > std::abs(f)) {
      damping *= 0.5;
      y_next = y - damping * step;
    }
    y = y_next;
  }
  throw numerical_error("Newton iteration did not reach 1e-13 in 50 steps");
}

// One scalar BDF2 trajectory of D2 y^n = g(t_n, y^n) + eps^n.
std::vector<double> nonlinear_trajectory(
    const std::function<double(double, double)>& g,
    const std::function<double(double, double)>& dg_dy, const TimeMesh& mesh,
    double y0, std::span<const double> eps) {
  const Bdf2Kernels kernels = build_bdf2_kernels(mesh);
  const int n_steps = mesh.n_steps();
  std::vector<double> y(static_cast<std::size_t>(n_steps) + 1);
  y[0] = y0;
  for (int n = 1; n <= n_steps; ++n) {
    const double perturbation =
        eps.empty() ? 0.0 : eps[static_cast<std::size_t>(n) - 1];
    double b0;
    double rhs;
    if (n == 1) {
      b0 = kernels.b0(1);
      rhs = b0 * y[0] + perturbation;
    } else {
      b0 = kernels.b0(n);
      const double b1 = kernels.b1(n);
      rhs = (b0 - b1) * y[static_cast<std::size_t>(n) - 1] +
            b1 * y[static_cast<std::size_t>(n) - 2] + perturbation;
    }
    y[static_cast<std::size_t>(n)] = newton_step_solve(
        g, dg_dy, b0, mesh.t(n), rhs, y[static_cast<std::size_t>(n) - 1]);
  }
  return y;
}

}  // namespace

double zero_stability_probe(const std::function<double(double, double)>& g,
                            const std::function<double(double, double)>& dg_dy,
                            double lipschitz, const TimeMesh& mesh, double y0,
                            double y0_perturbed,
                            std::span<const double> perturbations) {
  if (!(lipschitz > 0.0)) {
    throw std::invalid_argument("Lipschitz constant must be positive");
  }
  if (mesh.max_step() > 1.0 / (4.0 * lipschitz) * (1.0 + 1e-14)) {
    throw precondition_error(
        "zero_stability_probe: maximum step exceeds 1/(4 L)");
  }
  if (!perturbations.empty() &&
      static_cast<int>(perturbations.size()) != mesh.n_steps()) {
    throw std::invalid_argument(
        "zero_stability_probe: need one perturbation per step");
  }

  const std::vector<double> y =
      nonlinear_trajectory(g, dg_dy, mesh, y0, {});
  const std::vector<double> y_bar =
      nonlinear_trajectory(g, dg_dy, mesh, y0_perturbed, perturbations);

  double worst = 0.0;
  double eps_max = 0.0;
  const double d0 = std::abs(y0 - y0_perturbed);
  for (int n = 1; n <= mesh.n_steps(); ++n) {
    if (!perturbations.empty()) {
      eps_max = std::max(eps_max,
                         std::abs(perturbations[static_cast<std::size_t>(n) - 1]));
    }
    const double diff =
        std::abs(y[static_cast<std::size_t>(n)] - y_bar[static_cast<std::size_t>(n)]);
    const double denom = 2.0 * std::exp(4.0 * lipschitz * mesh.t(n - 1)) *
                         (d0 + 2.0 * mesh.t(n) * eps_max);
    if (denom == 0.0) continue;  // identical problems: difference stays 0
    worst = std::max(worst, diff / denom);
  }
  return worst;
}

EnergySeries energy_series(const SolveTrace& trace) {
  if (!trace.has_energy) {
    throw std::logic_error("energy_series: march ran without energy monitor");
  }
  EnergySeries series;
  series.energy.reserve(trace.records.size());
  for (const TraceRecord& rec : trace.records) {
    series.energy.push_back(rec.energy);
  }
  for (std::size_t k = 1; k < series.energy.size(); ++k) {
    series.d_energy.push_back(series.energy[k] - series.energy[k - 1]);
  }
  return series;
}

}  // namespace vbdf2
