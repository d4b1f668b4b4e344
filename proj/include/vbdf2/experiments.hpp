#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vbdf2/integrator.hpp"
#include "vbdf2/mesh.hpp"

namespace vbdf2 {

enum class MeshFamily { uniform, random, capped_random, geometric };

MeshFamily mesh_family_from_string(const std::string& name);
std::string to_string(MeshFamily family);

/// Builds the n-th mesh of a family; random families derive their seed from
/// (seed, stream) so separate rows never share generator state.
TimeMesh make_mesh(MeshFamily family, double final_time, int n_steps,
                   std::uint64_t seed, std::uint64_t stream, double r_cap,
                   double geometric_ratio);

/// One row of a temporal refinement study: final-time L2 error, estimated
/// order log2(e(N)/e(2N)) against the previous row, and the ratio statistics
/// of the mesh that produced it.
struct ConvergenceRow {
  int n_steps = 0;
  double error = 0.0;
  double tau_max = 0.0;
  std::optional<double> order;
  double r_max = 0.0;
  int n1 = 0;
};

struct ExperimentConfig {
  double epsilon = 1.0;
  double final_time = 1.0;
  std::vector<int> n_list = {64, 128, 256, 512, 1024};
  std::uint64_t seed = 1;
  MeshFamily mesh_family = MeshFamily::random;
  StartingScheme starting_scheme = StartingScheme::bdf1;
  int modes = 32;
  double r_cap = 0.0;           // 0 means the S1 bound (3+sqrt(17))/2
  double geometric_ratio = 1.5;
};

/// Heat-equation refinement study against the manufactured solution
/// u = exp(-t) sin(2 pi x) cos(2 pi y) on (0,2)^2, Fourier collocation in
/// space. Deterministic for a fixed config.
std::vector<ConvergenceRow> run_convergence(const ExperimentConfig& config);

/// Solves the same manufactured problem once and returns the final-time L2
/// error together with the march trace.
struct HeatRunResult {
  double error = 0.0;
  SolveTrace trace;
  GridField u_final;
  GridField u_exact;
};
HeatRunResult solve_manufactured_heat(double epsilon, const TimeMesh& mesh,
                                      StartingScheme scheme, int modes);

/// Least-squares slope of log2(error) against log2(N), negated so that
/// second-order decay reports ~2.
double fitted_order(const std::vector<ConvergenceRow>& rows);

/// One randomized verification suite: name, runs, failure count and the
/// worst margin observed (its meaning is suite-specific; negative margins
/// are failures for the gated suites). Informational entries never fail.
struct SuiteEntry {
  std::string name;
  int runs = 0;
  int failures = 0;
  double worst_margin = 0.0;
  bool informational = false;
  std::string note;
};

struct StabilityReport {
  std::uint64_t seed = 0;
  int counts = 0;
  std::vector<SuiteEntry> entries;
  bool all_pass() const;
};

/// Randomized stability suites over `counts` meshes each: kernel
/// orthogonality, positive semi-definiteness under the ratio bound, energy
/// and L2 monotonicity of the dissipative heat problem, Dahlquist
/// A-stability, the nonlinear perturbation probe, and an informational
/// eigenvalue probe on deliberately un-gated meshes. counts == 0 yields an
/// empty report.
StabilityReport run_stability_suite(std::uint64_t seed, int counts);

}  // namespace vbdf2
