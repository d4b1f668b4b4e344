#include "vbdf2/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include <json.hpp>

namespace vbdf2 {

EmitFormat emit_format_from_string(const std::string& name) {
  if (name == "csv") return EmitFormat::csv;
  if (name == "json") return EmitFormat::json;
  if (name == "md" || name == "markdown") return EmitFormat::markdown;
  throw std::invalid_argument("unknown output format: " + name);
}

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

namespace {

double parse_double(const std::string& token) {
  double value = 0.0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw std::invalid_argument("bad numeric field: '" + token + "'");
  }
  return value;
}

std::string scientific(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*e", digits, x);
  return buf;
}

std::string fixed(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, x);
  return buf;
}

}  // namespace

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string mesh_to_csv(const TimeMesh& mesh) {
  std::string out = "k,t_k\n";
  for (int k = 0; k <= mesh.n_steps(); ++k) {
    out += std::to_string(k);
    out += ',';
    out += format_double(mesh.t(k));
    out += '\n';
  }
  return out;
}

void write_mesh_csv(const TimeMesh& mesh, const std::string& path) {
  write_text_file(path, mesh_to_csv(mesh));
}

TimeMesh mesh_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "k,t_k") {
    throw std::invalid_argument("mesh file must start with header 'k,t_k'");
  }
  std::vector<double> levels;
  int expected = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw std::invalid_argument("bad mesh row: '" + line + "'");
    }
    const int k = static_cast<int>(parse_double(line.substr(0, comma)));
    if (k != expected) {
      throw std::invalid_argument("mesh rows must be consecutive from k=0");
    }
    levels.push_back(parse_double(line.substr(comma + 1)));
    ++expected;
  }
  return TimeMesh::from_levels(std::move(levels));
}

TimeMesh read_mesh_csv(const std::string& path) {
  return mesh_from_csv(read_text_file(path));
}

std::string kernel_window_to_csv(const Bdf2Kernels& kernels, int n_begin,
                                 int n_end) {
  const DocKernels table = doc_window(kernels, n_begin, n_end);
  std::string out = "n,k,b0,b1,theta,theta_hat\n";
  for (int n = n_begin; n <= n_end; ++n) {
    const auto& theta = table.theta[static_cast<std::size_t>(n - n_begin)];
    const auto& hat = table.theta_hat[static_cast<std::size_t>(n - n_begin)];
    for (int k = 1; k <= n; ++k) {
      out += std::to_string(n);
      out += ',';
      out += std::to_string(k);
      out += ',';
      out += format_double(kernels.b0(n));
      out += ',';
      if (n >= 2) out += format_double(kernels.b1(n));
      out += ',';
      out += format_double(theta[static_cast<std::size_t>(k) - 1]);
      out += ',';
      out += format_double(hat[static_cast<std::size_t>(k) - 1]);
      out += '\n';
    }
  }
  return out;
}

std::string trace_to_csv(const SolveTrace& trace) {
  std::string out = "n,t_n,tau_n,r_n,l2_norm,h1_semi,energy,d_energy\n";
  for (const TraceRecord& rec : trace.records) {
    out += std::to_string(rec.level);
    out += ',';
    out += format_double(rec.t);
    out += ',';
    out += format_double(rec.tau);
    out += ',';
    out += format_double(rec.r);
    out += ',';
    out += format_double(rec.l2_norm);
    out += ',';
    out += format_double(rec.h1_semi);
    out += ',';
    out += format_double(rec.energy);
    out += ',';
    out += format_double(rec.d_energy);
    out += '\n';
  }
  return out;
}

std::string field_to_csv(const GridField& field) {
  std::string out = "i,j,value\n";
  for (int i = 0; i < field.nx; ++i) {
    for (int j = 0; j < field.ny; ++j) {
      out += std::to_string(i);
      out += ',';
      out += std::to_string(j);
      out += ',';
      out += format_double(field.at(i, j));
      out += '\n';
    }
  }
  return out;
}

std::string convergence_to_csv(const std::vector<ConvergenceRow>& rows) {
  std::string out = "N,e_N,tau,order,max_r,N1\n";
  for (const ConvergenceRow& row : rows) {
    out += std::to_string(row.n_steps);
    out += ',';
    out += format_double(row.error);
    out += ',';
    out += format_double(row.tau_max);
    out += ',';
    if (row.order) out += format_double(*row.order);
    out += ',';
    out += format_double(row.r_max);
    out += ',';
    out += std::to_string(row.n1);
    out += '\n';
  }
  return out;
}

std::string convergence_to_json(const std::vector<ConvergenceRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const ConvergenceRow& row : rows) {
    nlohmann::json obj;
    obj["N"] = row.n_steps;
    obj["e_N"] = row.error;
    obj["tau"] = row.tau_max;
    if (row.order) {
      obj["order"] = *row.order;
    } else {
      obj["order"] = nullptr;
    }
    obj["max_r"] = row.r_max;
    obj["N1"] = row.n1;
    arr.push_back(obj);
  }
  return arr.dump(2) + "\n";
}

std::string convergence_to_markdown(const std::vector<ConvergenceRow>& rows) {
  std::string out;
  out += "> random meshes are seed-specific; compare orders and error "
         "magnitudes, not individual values\n\n";
  out += "| N | e(N) | tau | Order | max r_k | N_1 |\n";
  out += "|---|------|-----|-------|---------|-----|\n";
  for (const ConvergenceRow& row : rows) {
    out += "| " + std::to_string(row.n_steps);
    out += " | " + scientific(row.error, 2);
    out += " | " + scientific(row.tau_max, 2);
    out += " | " + (row.order ? fixed(*row.order, 2) : std::string("--"));
    out += " | " + fixed(row.r_max, 2);
    out += " | " + std::to_string(row.n1);
    out += " |\n";
  }
  return out;
}

std::string report_to_csv(const StabilityReport& report) {
  std::string out = "suite,runs,failures,worst_margin,informational,note\n";
  for (const SuiteEntry& entry : report.entries) {
    out += entry.name;
    out += ',';
    out += std::to_string(entry.runs);
    out += ',';
    out += std::to_string(entry.failures);
    out += ',';
    out += format_double(entry.worst_margin);
    out += ',';
    out += entry.informational ? "1" : "0";
    out += ',';
    out += entry.note;
    out += '\n';
  }
  return out;
}

std::string report_to_json(const StabilityReport& report) {
  nlohmann::json obj;
  obj["seed"] = report.seed;
  obj["counts"] = report.counts;
  obj["all_pass"] = report.all_pass();
  nlohmann::json arr = nlohmann::json::array();
  for (const SuiteEntry& entry : report.entries) {
    nlohmann::json e;
    e["suite"] = entry.name;
    e["runs"] = entry.runs;
    e["failures"] = entry.failures;
    e["worst_margin"] = entry.worst_margin;
    e["informational"] = entry.informational;
    e["note"] = entry.note;
    arr.push_back(e);
  }
  obj["entries"] = arr;
  return obj.dump(2) + "\n";
}

std::string report_to_markdown(const StabilityReport& report) {
  std::string out;
  out += "| suite | runs | failures | worst margin | note |\n";
  out += "|-------|------|----------|--------------|------|\n";
  for (const SuiteEntry& entry : report.entries) {
    out += "| " + entry.name + (entry.informational ? " (info)" : "");
    out += " | " + std::to_string(entry.runs);
    out += " | " + std::to_string(entry.failures);
    out += " | " + scientific(entry.worst_margin, 3);
    out += " | " + entry.note;
    out += " |\n";
  }
  return out;
}

namespace {

template <class T>
std::string render(const T& value, EmitFormat format,
                   std::string (*csv)(const T&), std::string (*json)(const T&),
                   std::string (*md)(const T&)) {
  switch (format) {
    case EmitFormat::csv:
      return csv(value);
    case EmitFormat::json:
      return json(value);
    case EmitFormat::markdown:
      return md(value);
  }
  throw std::invalid_argument("unknown format");
}

}  // namespace

void emit(const std::vector<ConvergenceRow>& rows, const std::string& path,
          EmitFormat format) {
  write_text_file(path, render(rows, format, convergence_to_csv,
                               convergence_to_json, convergence_to_markdown));
}

void emit(const StabilityReport& report, const std::string& path,
          EmitFormat format) {
  write_text_file(path, render(report, format, report_to_csv, report_to_json,
                               report_to_markdown));
}

}  // namespace vbdf2
