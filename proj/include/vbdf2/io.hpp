#pragma once

#include <string>
#include <vector>

#include "vbdf2/experiments.hpp"
#include "vbdf2/field.hpp"
#include "vbdf2/integrator.hpp"
#include "vbdf2/kernels.hpp"
#include "vbdf2/mesh.hpp"

namespace vbdf2 {

enum class EmitFormat { csv, json, markdown };

EmitFormat emit_format_from_string(const std::string& name);

/// Shortest decimal representation that parses back to the same double
/// (std::to_chars); all CSV output goes through this, which both keeps files
/// byte-deterministic and makes mesh round-trips exact.
std::string format_double(double x);

/// Mesh file: header "k,t_k", one row per level including k = 0.
void write_mesh_csv(const TimeMesh& mesh, const std::string& path);
std::string mesh_to_csv(const TimeMesh& mesh);
TimeMesh read_mesh_csv(const std::string& path);
TimeMesh mesh_from_csv(const std::string& text);

/// Kernel dump for a window of rows: "n,k,b0,b1,theta,theta_hat" with b1
/// blank at n = 1 where the two-step kernel has no second coefficient.
std::string kernel_window_to_csv(const Bdf2Kernels& kernels, int n_begin,
                                 int n_end);

/// March trace: "n,t_n,tau_n,r_n,l2_norm,h1_semi,energy,d_energy".
std::string trace_to_csv(const SolveTrace& trace);

/// Field snapshot: "i,j,value", row-major.
std::string field_to_csv(const GridField& field);

std::string convergence_to_csv(const std::vector<ConvergenceRow>& rows);
std::string convergence_to_json(const std::vector<ConvergenceRow>& rows);
/// Markdown table with the layout N | e(N) | tau | Order | max r_k | N_1.
std::string convergence_to_markdown(const std::vector<ConvergenceRow>& rows);

std::string report_to_csv(const StabilityReport& report);
std::string report_to_json(const StabilityReport& report);
std::string report_to_markdown(const StabilityReport& report);

void emit(const std::vector<ConvergenceRow>& rows, const std::string& path,
          EmitFormat format);
void emit(const StabilityReport& report, const std::string& path,
          EmitFormat format);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace vbdf2
