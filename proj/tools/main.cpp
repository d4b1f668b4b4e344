// Command-line front end: mesh inspection, kernel dumps, the manufactured
// heat runs, the scalar stability probes, refinement studies and the
// randomized verification suites.

#include <CLI11.hpp>

#include <complex>
#include <cstdio>
#include <exception>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vbdf2/errors.hpp"
#include "vbdf2/experiments.hpp"
#include "vbdf2/integrator.hpp"
#include "vbdf2/io.hpp"
#include "vbdf2/kernels.hpp"
#include "vbdf2/log.hpp"
#include "vbdf2/mesh.hpp"
#include "vbdf2/spatial.hpp"

namespace {

using namespace vbdf2;

// Mesh argument: either a CSV file path or a generator spec of the form
//   uniform:T,N | random:T,N,seed | capped:T,N,seed,cap | geometric:T,N,ratio
TimeMesh resolve_mesh(const std::string& arg) {
  const auto colon = arg.find(':');
  if (colon == std::string::npos) return read_mesh_csv(arg);

  const std::string family = arg.substr(0, colon);
  std::vector<std::string> parts;
  std::string rest = arg.substr(colon + 1);
  std::size_t pos = 0;
  while (pos <= rest.size()) {
    const auto comma = rest.find(',', pos);
    if (comma == std::string::npos) {
      parts.push_back(rest.substr(pos));
      break;
    }
    parts.push_back(rest.substr(pos, comma - pos));
    pos = comma + 1;
  }
  auto need = [&](std::size_t n) {
    if (parts.size() != n) {
      throw std::invalid_argument("mesh spec '" + arg + "': expected " +
                                  std::to_string(n) + " parameters");
    }
  };
  if (family == "uniform") {
    need(2);
    return uniform_mesh(std::stod(parts[0]), std::stoi(parts[1]));
  }
  if (family == "random") {
    need(3);
    return random_mesh(std::stod(parts[0]), std::stoi(parts[1]),
                       std::stoull(parts[2]));
  }
  if (family == "capped" || family == "capped-random") {
    need(4);
    return capped_random_mesh(std::stod(parts[0]), std::stoi(parts[1]),
                              std::stoull(parts[2]), std::stod(parts[3]));
  }
  if (family == "geometric") {
    need(3);
    return geometric_mesh(std::stod(parts[0]), std::stoi(parts[1]),
                          std::stod(parts[2]));
  }
  throw std::invalid_argument("unknown mesh spec family: " + family);
}

void write_or_print(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::fputs(text.c_str(), stdout);
  } else {
    write_text_file(path, text);
  }
}

int run(int argc, char** argv) {
  CLI::App app{"variable-step BDF2 toolkit"};
  app.require_subcommand(1);

  // kernels
  auto* kernels_cmd =
      app.add_subcommand("kernels", "dump BDF2 and orthogonal kernels");
  std::string kernels_mesh;
  std::string window = "";
  std::string kernels_out;
  kernels_cmd->add_option("--mesh", kernels_mesh, "mesh file or gen-spec")
      ->required();
  kernels_cmd->add_option("--window", window, "row window a:b (default all)");
  kernels_cmd->add_option("--out", kernels_out, "output path (default stdout)");
  kernels_cmd->callback([&] {
    const TimeMesh mesh = resolve_mesh(kernels_mesh);
    int lo = 1, hi = mesh.n_steps();
    if (!window.empty()) {
      const auto colon = window.find(':');
      if (colon == std::string::npos) {
        throw std::invalid_argument("window must be a:b");
      }
      lo = std::stoi(window.substr(0, colon));
      hi = std::stoi(window.substr(colon + 1));
    }
    const Bdf2Kernels kernels = build_bdf2_kernels(mesh);
    write_or_print(kernel_window_to_csv(kernels, lo, hi), kernels_out);
  });

  // check-mesh
  auto* check_cmd =
      app.add_subcommand("check-mesh", "ratio statistics of a mesh file");
  std::string check_path;
  check_cmd->add_option("file", check_path, "mesh CSV or gen-spec")->required();
  check_cmd->callback([&] {
    const TimeMesh mesh = resolve_mesh(check_path);
    const RatioProfile profile = ratio_profile(mesh);
    std::printf("N            %d\n", mesh.n_steps());
    std::printf("T            %s\n", format_double(mesh.final_time()).c_str());
    std::printf("tau_max      %s\n", format_double(mesh.max_step()).c_str());
    std::printf("r_max        %s\n", format_double(profile.r_max).c_str());
    std::printf("n0 (band)    %d\n", profile.n0_count);
    std::printf("n1 (>= s1)   %d\n", profile.n1_count);
    std::printf("r_c          %s\n", format_double(profile.r_c).c_str());
    std::printf("r_hat_c      %s\n", format_double(profile.r_hat_c).c_str());
    std::printf("s1           %s\n", check_s1(profile) ? "yes" : "no");
    std::printf("gamma_N      %s\n",
                format_double(gamma_n(profile, mesh.n_steps())).c_str());
    try {
      std::printf("C_r          %s\n",
                  format_double(c_r_constant(profile)).c_str());
    } catch (const std::domain_error&) {
      std::printf("C_r          vacuous (ratios beyond (3+sqrt(17))/2)\n");
    }
  });

  // solve-heat
  auto* heat_cmd = app.add_subcommand(
      "solve-heat", "manufactured heat problem, Fourier collocation");
  double eps = 1.0;
  int heat_n = 1024;
  std::string heat_family = "random";
  std::uint64_t heat_seed = 1;
  int modes = 32;
  std::string start = "bdf1";
  std::string trace_path, dump_path;
  double heat_cap = 0.0, heat_ratio = 1.5;
  heat_cmd->add_option("--eps", eps, "diffusivity");
  heat_cmd->add_option("--N", heat_n, "number of steps");
  heat_cmd->add_option("--mesh-family", heat_family,
                       "uniform|random|capped-random|geometric");
  heat_cmd->add_option("--seed", heat_seed, "RNG seed");
  heat_cmd->add_option("--modes", modes, "spatial modes per direction");
  heat_cmd->add_option("--start", start, "bdf1|exact|trapezoid");
  heat_cmd->add_option("--r-cap", heat_cap, "ratio cap for capped-random");
  heat_cmd->add_option("--ratio", heat_ratio, "ratio for geometric");
  heat_cmd->add_option("--trace", trace_path, "write per-step trace CSV");
  heat_cmd->add_option("--dump", dump_path, "write final field CSV");
  heat_cmd->callback([&] {
    StartingScheme scheme = StartingScheme::bdf1;
    if (start == "exact") scheme = StartingScheme::exact_first_step;
    else if (start == "trapezoid") scheme = StartingScheme::trapezoid_first_step;
    else if (start != "bdf1") throw std::invalid_argument("unknown start");
    const TimeMesh mesh =
        make_mesh(mesh_family_from_string(heat_family), 1.0, heat_n, heat_seed,
                  static_cast<std::uint64_t>(heat_n), heat_cap, heat_ratio);
    const HeatRunResult result =
        solve_manufactured_heat(eps, mesh, scheme, modes);
    const RatioProfile profile = ratio_profile(mesh);
    std::printf("N=%d e(N)=%s tau=%s max_r=%s N1=%d\n", heat_n,
                format_double(result.error).c_str(),
                format_double(mesh.max_step()).c_str(),
                format_double(profile.r_max).c_str(), profile.n1_count);
    if (!trace_path.empty()) {
      write_text_file(trace_path, trace_to_csv(result.trace));
    }
    if (!dump_path.empty()) {
      write_text_file(dump_path, field_to_csv(result.u_final));
    }
  });

  // dahlquist
  auto* dq_cmd = app.add_subcommand("dahlquist", "scalar stability probe");
  std::string lambda_arg = "-1,0";
  double dq_T = 1.0;
  int dq_n = 64;
  std::string dq_family = "capped-random";
  std::uint64_t dq_seed = 1;
  double dq_cap = 0.0, dq_ratio = 1.5;
  std::string dq_out;
  dq_cmd->add_option("--lambda", lambda_arg, "complex rate 're,im'");
  dq_cmd->add_option("--T", dq_T, "final time");
  dq_cmd->add_option("--N", dq_n, "number of steps");
  dq_cmd->add_option("--mesh-family", dq_family, "mesh family");
  dq_cmd->add_option("--seed", dq_seed, "RNG seed");
  dq_cmd->add_option("--r-cap", dq_cap, "ratio cap for capped-random");
  dq_cmd->add_option("--ratio", dq_ratio, "ratio for geometric");
  dq_cmd->add_option("--out", dq_out, "output path (default stdout)");
  dq_cmd->callback([&] {
    const auto comma = lambda_arg.find(',');
    const std::complex<double> lambda(
        std::stod(lambda_arg.substr(0, comma)),
        comma == std::string::npos ? 0.0
                                   : std::stod(lambda_arg.substr(comma + 1)));
    const TimeMesh mesh =
        make_mesh(mesh_family_from_string(dq_family), dq_T, dq_n, dq_seed,
                  static_cast<std::uint64_t>(dq_n), dq_cap, dq_ratio);
    const std::vector<double> mags = dahlquist_march(lambda, mesh, 1.0);
    std::string csv = "n,t,abs_y\n";
    double worst = 0.0;
    for (int n = 0; n <= mesh.n_steps(); ++n) {
      csv += std::to_string(n);
      csv += ',';
      csv += format_double(mesh.t(n));
      csv += ',';
      csv += format_double(mags[static_cast<std::size_t>(n)]);
      csv += '\n';
      worst = std::max(worst, mags[static_cast<std::size_t>(n)]);
    }
    write_or_print(csv, dq_out);
    std::fprintf(stderr, "max |y^n|/|y^0| = %s\n",
                 format_double(worst).c_str());
  });

  // converge
  auto* conv_cmd =
      app.add_subcommand("converge", "temporal refinement study");
  ExperimentConfig conv_config;
  std::string conv_family = "random";
  std::string conv_format = "md";
  std::string conv_out;
  std::string conv_start = "bdf1";
  conv_cmd->add_option("--eps", conv_config.epsilon, "diffusivity");
  conv_cmd->add_option("--seed", conv_config.seed, "RNG seed");
  conv_cmd->add_option("--n-list", conv_config.n_list, "step counts")
      ->delimiter(',');
  conv_cmd->add_option("--mesh-family", conv_family, "mesh family");
  conv_cmd->add_option("--format", conv_format, "csv|json|md");
  conv_cmd->add_option("--modes", conv_config.modes, "spatial modes");
  conv_cmd->add_option("--start", conv_start, "bdf1|exact|trapezoid");
  conv_cmd->add_option("--out", conv_out, "output path (default stdout)");
  conv_cmd->callback([&] {
    conv_config.mesh_family = mesh_family_from_string(conv_family);
    if (conv_start == "exact") {
      conv_config.starting_scheme = StartingScheme::exact_first_step;
    } else if (conv_start == "trapezoid") {
      conv_config.starting_scheme = StartingScheme::trapezoid_first_step;
    }
    const auto rows = run_convergence(conv_config);
    const EmitFormat format = emit_format_from_string(conv_format);
    std::string text;
    switch (format) {
      case EmitFormat::csv:
        text = convergence_to_csv(rows);
        break;
      case EmitFormat::json:
        text = convergence_to_json(rows);
        break;
      case EmitFormat::markdown:
        text = convergence_to_markdown(rows);
        break;
    }
    write_or_print(text, conv_out);
    if (rows.size() >= 2) {
      std::fprintf(stderr, "fitted order %s\n",
                   format_double(fitted_order(rows)).c_str());
    }
  });

  // stability-suite
  auto* suite_cmd = app.add_subcommand(
      "stability-suite", "randomized kernel and integrator verification");
  std::uint64_t suite_seed = 1;
  int counts = 100;
  std::string suite_format = "md";
  std::string suite_out;
  suite_cmd->add_option("--seed", suite_seed, "RNG seed");
  suite_cmd->add_option("--counts", counts, "meshes per suite");
  suite_cmd->add_option("--format", suite_format, "csv|json|md");
  suite_cmd->add_option("--out", suite_out, "output path (default stdout)");
  suite_cmd->callback([&] {
    const StabilityReport report = run_stability_suite(suite_seed, counts);
    const EmitFormat format = emit_format_from_string(suite_format);
    std::string text;
    switch (format) {
      case EmitFormat::csv:
        text = report_to_csv(report);
        break;
      case EmitFormat::json:
        text = report_to_json(report);
        break;
      case EmitFormat::markdown:
        text = report_to_markdown(report);
        break;
    }
    write_or_print(text, suite_out);
    std::fprintf(stderr, "all gated suites pass: %s\n",
                 report.all_pass() ? "yes" : "no");
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const numerical_error& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::logic_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
