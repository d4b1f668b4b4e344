#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "vbdf2/errors.hpp"
#include "vbdf2/field.hpp"
#include "vbdf2/kernels.hpp"
#include "vbdf2/mesh.hpp"

namespace vbdf2 {

enum class StartingScheme { bdf1, exact_first_step, trapezoid_first_step };

struct Bdf2Config {
  StartingScheme starting_scheme = StartingScheme::bdf1;
  /// Reaction bound kappa* of the step-size gate tau <= 1/(4 kappa*).
  double kappa_star = 0.0;
  /// Gate enforcement; it only bites when kappa_star > 0, so the default is
  /// effectively "on whenever a positive reaction bound is declared".
  bool enforce_tau_gate = true;
  bool monitor_energy = true;
  bool monitor_l2 = true;
};

struct TraceRecord {
  int level = 0;
  double t = 0.0;
  double tau = 0.0;  // 0 at level 0
  double r = 0.0;    // 0 at levels 0 and 1
  double l2_norm = 0.0;
  double h1_semi = 0.0;    // NaN when the energy monitor is off
  double energy = 0.0;     // NaN when the energy monitor is off
  double d_energy = 0.0;   // E^n - E^{n-1}; 0 at level 0
  double f_inner_du = 0.0; // <f^n, u^n - u^{n-1}>
  int solver_iterations = 0;
};

/// Per-level monitor records of one march. The kinetic weight of E^k uses
/// r_{k+1}; past the final level that ratio does not exist and is taken as 1
/// (any value within the stability band gives a valid dissipated energy).
struct SolveTrace {
  std::vector<TraceRecord> records;  // N+1 entries, level 0 first
  bool has_energy = false;
  bool has_l2 = false;
  /// E^k <= E^{k-1} + 1e-10*E^0 at every step; the dissipation law, which
  /// must hold on ratio-bounded dissipative runs.
  bool energy_monotone = true;
  /// |u^k| <= |u^{k-1}| + 1e-10*|u^0| at every step. Observational: the
  /// stability bound controls every |u^k| by the initial norm, not by the
  /// previous level, and transient sign oscillations do produce small
  /// per-step increases on admissible meshes.
  bool l2_monotone = true;
  /// |u^n| <= (|u^0| + 2 t_n max_j |f^j|)(1+1e-8); evaluated on monitored
  /// runs of dissipative problems (kappa <= 0) on ratio-bounded meshes.
  bool l2_bound_ok = true;
  double max_forcing_norm = 0.0;
};

template <class Op>
struct MarchResult {
  typename Op::field_type u_final;
  SolveTrace trace;
};

/// Two-step backward difference of a discrete history,
///   D2 v^n = b0^{(n)} (v^n - v^{n-1}) + b1^{(n)} (v^{n-1} - v^{n-2}),
/// with the one-step formula at n = 1 (v_nm2 is ignored there). Exact for
/// quadratics when n >= 2, for linears at n = 1.
template <class Field>
Field bdf2_apply(const Bdf2Kernels& kernels, int n, const Field& v_n,
                 const Field& v_nm1, const Field& v_nm2) {
  if (n < 1 || n > kernels.levels()) {
    throw std::invalid_argument("bdf2_apply: level outside mesh");
  }
  if (n == 1) {
    const double b0 = kernels.b0(1);
    return lincomb(b0, v_n, -b0, v_nm1);
  }
  const double b0 = kernels.b0(n);
  const double b1 = kernels.b1(n);
  Field d = lincomb(b0, v_n, b1 - b0, v_nm1);
  add_inplace(d, scaled(-b1, v_nm2));
  return d;
}

/// First-level solution u^1 for the selected starting scheme.
///  - bdf1:       (I/tau_1 - A) u^1 = u^0/tau_1 + f^1
///  - exact:      u^1 = reference(t_1)
///  - trapezoid:  (I/tau_1 - A/2) u^1 = (I/tau_1 + A/2) u^0 + (f^0+f^1)/2
template <class Op>
typename Op::field_type first_step(
    const Op& op, const TimeMesh& mesh, StartingScheme scheme,
    const typename Op::field_type& u0,
    const std::function<typename Op::field_type(double)>& forcing = {},
    const std::function<typename Op::field_type(double)>& reference = {},
    int* iterations = nullptr) {
  const double tau1 = mesh.tau(1);
  switch (scheme) {
    case StartingScheme::bdf1: {
      auto rhs = scaled(1.0 / tau1, u0);
      if (forcing) add_inplace(rhs, forcing(mesh.t(1)));
      return op.shifted_solve(1.0 / tau1, rhs, iterations);
    }
    case StartingScheme::exact_first_step: {
      if (!reference) {
        throw std::invalid_argument(
            "exact first step requires a reference solution");
      }
      if (iterations) *iterations = 0;
      return reference(mesh.t(1));
    }
    case StartingScheme::trapezoid_first_step: {
      auto rhs = lincomb(2.0 / tau1, u0, 1.0, op.apply(u0));
      if (forcing) {
        add_inplace(rhs, forcing(mesh.t(0)));
        add_inplace(rhs, forcing(mesh.t(1)));
      }
      return op.shifted_solve(2.0 / tau1, rhs, iterations);
    }
  }
  throw std::invalid_argument("unknown starting scheme");
}

/// Marches D2 u^n = A u^n + f^n over the mesh. Each step n >= 2 solves
///   (b0^{(n)} I - A) u^n = b0^{(n)} u^{n-1} - b1^{(n)} (u^{n-1} - u^{n-2}) + f^n
/// and level 1 uses the configured starting scheme. Forcing is sampled
/// pointwise at t_n. Monitors populate the trace as configured.
template <class Op>
MarchResult<Op> march(
    const Op& op, const TimeMesh& mesh, const Bdf2Config& config,
    const typename Op::field_type& u0,
    const std::function<typename Op::field_type(double)>& forcing = {},
    const std::function<typename Op::field_type(double)>& reference = {}) {
  using Field = typename Op::field_type;

  if (config.kappa_star < 0.0) {
    throw std::invalid_argument("kappa_star must be nonnegative");
  }
  if (config.enforce_tau_gate && config.kappa_star > 0.0) {
    const double gate = 1.0 / (4.0 * config.kappa_star);
    if (mesh.max_step() > gate * (1.0 + 1e-14)) {
      throw precondition_error(
          "maximum time step exceeds 1/(4 kappa*); refine the mesh or disable "
          "the gate");
    }
  }

  const Bdf2Kernels kernels = build_bdf2_kernels(mesh);
  const int n_steps = mesh.n_steps();
  const bool dissipative = op.kappa_max() <= 0.0;
  const bool ratio_bounded = check_s1(ratio_profile(mesh));
  const double nan = std::numeric_limits<double>::quiet_NaN();

  SolveTrace trace;
  trace.has_energy = config.monitor_energy;
  trace.has_l2 = config.monitor_l2;
  trace.records.reserve(static_cast<std::size_t>(n_steps) + 1);

  const double u0_norm = op.l2_norm(u0);
  double prev_l2 = u0_norm;
  double prev_energy = 0.0;

  // Level-0 record; the initial energy carries no kinetic term.
  {
    TraceRecord rec;
    rec.level = 0;
    rec.t = mesh.t(0);
    rec.l2_norm = u0_norm;
    if (config.monitor_energy) {
      rec.h1_semi = op.h1_seminorm(u0);
      rec.energy = op.energy(u0);
      prev_energy = rec.energy;
    } else {
      rec.h1_semi = nan;
      rec.energy = nan;
      rec.d_energy = nan;
    }
    trace.records.push_back(rec);
  }

  Field u_prev2 = u0;
  Field u_prev = u0;
  Field u = u0;

  for (int n = 1; n <= n_steps; ++n) {
    int iterations = 0;
    std::optional<Field> f_n;
    if (forcing) f_n = forcing(mesh.t(n));

    if (n == 1) {
      u = first_step(op, mesh, config.starting_scheme, u0, forcing, reference,
                     &iterations);
    } else {
      const double b0 = kernels.b0(n);
      const double b1 = kernels.b1(n);
      Field rhs = lincomb(b0 - b1, u_prev, b1, u_prev2);
      if (f_n) add_inplace(rhs, *f_n);
      u = op.shifted_solve(b0, rhs, &iterations);
    }

    TraceRecord rec;
    rec.level = n;
    rec.t = mesh.t(n);
    rec.tau = mesh.tau(n);
    rec.r = (n >= 2) ? mesh.ratio(n) : 0.0;
    rec.l2_norm = op.l2_norm(u);
    rec.solver_iterations = iterations;

    const Field du = lincomb(1.0, u, -1.0, u_prev);
    if (f_n) {
      rec.f_inner_du = op.inner(*f_n, du);
      trace.max_forcing_norm =
          std::max(trace.max_forcing_norm, op.l2_norm(*f_n));
    }

    if (config.monitor_energy) {
      rec.h1_semi = op.h1_seminorm(u);
      const double r_next = (n < n_steps) ? mesh.ratio(n + 1) : 1.0;
      const double du_norm = op.l2_norm(du);
      const double kinetic =
          r_next / (1.0 + r_next) * du_norm * du_norm / mesh.tau(n);
      rec.energy = kinetic + op.energy(u);
      rec.d_energy = rec.energy - prev_energy;
      if (rec.energy >
          prev_energy + 1e-10 * std::abs(trace.records[0].energy)) {
        trace.energy_monotone = false;
      }
      prev_energy = rec.energy;
    } else {
      rec.h1_semi = nan;
      rec.energy = nan;
      rec.d_energy = nan;
    }

    if (config.monitor_l2) {
      if (rec.l2_norm > prev_l2 + 1e-10 * u0_norm) trace.l2_monotone = false;
      if (dissipative && ratio_bounded) {
        const double bound =
            (u0_norm + 2.0 * mesh.t(n) * trace.max_forcing_norm) *
            (1.0 + 1e-8);
        if (rec.l2_norm > bound) trace.l2_bound_ok = false;
      }
    }
    prev_l2 = rec.l2_norm;

    trace.records.push_back(rec);
    u_prev2 = std::move(u_prev);
    u_prev = std::move(u);
  }

  return MarchResult<Op>{u_prev, std::move(trace)};
}

/// |y^n| for the scheme D2 y^n = lambda y^n. On ratio-bounded meshes with
/// Re(lambda) <= 0 the sequence never exceeds |y^0| (A-stability), and it
/// collapses rapidly as lambda*tau -> -infinity (L-stability).
std::vector<double> dahlquist_march(std::complex<double> lambda,
                                    const TimeMesh& mesh,
                                    std::complex<double> y0);

/// Worst ratio of the trajectory separation |y^n - ybar^n| to the
/// perturbation bound 2 exp(4 L t_{n-1}) (|y^0-ybar^0| + 2 t_n max_j |eps^j|)
/// for D2 y^n = g(t_n, y^n) solved by damped Newton. Requires
/// max tau <= 1/(4 L). Identical trajectories report 0.
double zero_stability_probe(const std::function<double(double, double)>& g,
                            const std::function<double(double, double)>& dg_dy,
                            double lipschitz, const TimeMesh& mesh, double y0,
                            double y0_perturbed,
                            std::span<const double> perturbations);

struct EnergySeries {
  std::vector<double> energy;    // E^k, k = 0..N
  std::vector<double> d_energy;  // E^k - E^{k-1}, k = 1..N
};

/// Extracts the discrete energy and its first differences from a trace.
/// Throws std::logic_error if the march ran without the energy monitor.
EnergySeries energy_series(const SolveTrace& trace);

/// Consistency record for a smooth reference solution: per-level norms of
/// eta^j = D2 u(t_j) - u'(t_j) (one-step stencil at j = 1) and their global
/// sum weighted by the orthogonal kernels,
/// sum_k sum_j theta^{(k)}_{k-j} |eta^j|.
struct ConsistencyReport {
  std::vector<double> eta_norms;  // j = 1..N at index j-1
  double weighted_sum = 0.0;
};

template <class Op>
ConsistencyReport consistency_errors(
    const Op& op, const Bdf2Kernels& kernels,
    const std::function<typename Op::field_type(double)>& exact,
    const std::function<typename Op::field_type(double)>& dudt) {
  using Field = typename Op::field_type;
  const TimeMesh& mesh = kernels.mesh();
  const int n_steps = mesh.n_steps();

  ConsistencyReport report;
  report.eta_norms.resize(static_cast<std::size_t>(n_steps));

  Field u_prev2 = exact(mesh.t(0));
  Field u_prev = u_prev2;
  for (int j = 1; j <= n_steps; ++j) {
    Field u_j = exact(mesh.t(j));
    Field eta = bdf2_apply(kernels, j, u_j, u_prev, u_prev2);
    add_inplace(eta, scaled(-1.0, dudt(mesh.t(j))));
    report.eta_norms[static_cast<std::size_t>(j) - 1] = op.l2_norm(eta);
    u_prev2 = std::move(u_prev);
    u_prev = std::move(u_j);
  }

  // sum_{k=j..N} theta^{(k)}_{k-j} = tail_j / b0^{(j)} with the normalized
  // tails accumulated backwards in O(N).
  double tail = 1.0;
  std::vector<double> tails(static_cast<std::size_t>(n_steps));
  tails.back() = 1.0;
  for (int j = n_steps - 1; j >= 1; --j) {
    tail = 1.0 + kernels.theta_hat_factor(j + 1) * tail;
    tails[static_cast<std::size_t>(j) - 1] = tail;
  }
  for (int j = 1; j <= n_steps; ++j) {
    report.weighted_sum += report.eta_norms[static_cast<std::size_t>(j) - 1] *
                           tails[static_cast<std::size_t>(j) - 1] /
                           kernels.b0(j);
  }
  return report;
}

/// Right-hand side of the consistency bound
///   tau_1 (sum_k theta_hat^{(k)}_{k-1}) G2 + (3/2) sum_j tau_j^2
///   (sum_{k>=j} theta_hat^{(k)}_{k-j}) G3_j,
/// with G2 = int_0^{t_1} |u_tt| dt and G3_j the per-step integrals of
/// |u_ttt|, evaluated by trapezoid quadrature `refine` points per step.
template <class Op>
double consistency_bound_rhs(
    const Op& op, const Bdf2Kernels& kernels,
    const std::function<typename Op::field_type(double)>& d2u_dt2,
    const std::function<typename Op::field_type(double)>& d3u_dt3,
    int refine = 10) {
  const TimeMesh& mesh = kernels.mesh();
  const int n_steps = mesh.n_steps();

  auto trapezoid = [&](const std::function<typename Op::field_type(double)>& f,
                       double a, double b) {
    const double dh = (b - a) / refine;
    double acc = 0.5 * (op.l2_norm(f(a)) + op.l2_norm(f(b)));
    for (int q = 1; q < refine; ++q) acc += op.l2_norm(f(a + q * dh));
    return acc * dh;
  };

  std::vector<double> tails(static_cast<std::size_t>(n_steps));
  tails.back() = 1.0;
  for (int j = n_steps - 1; j >= 1; --j) {
    tails[static_cast<std::size_t>(j) - 1] =
        1.0 + kernels.theta_hat_factor(j + 1) * tails[static_cast<std::size_t>(j)];
  }

  double rhs = mesh.tau(1) * tails[0] * trapezoid(d2u_dt2, 0.0, mesh.t(1));
  for (int j = 1; j <= n_steps; ++j) {
    const double tau_j = mesh.tau(j);
    rhs += 1.5 * tau_j * tau_j * tails[static_cast<std::size_t>(j) - 1] *
           trapezoid(d3u_dt3, mesh.t(j - 1), mesh.t(j));
  }
  return rhs;
}

}  // namespace vbdf2
