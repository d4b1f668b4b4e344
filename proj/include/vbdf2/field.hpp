#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace vbdf2 {

/// Nodal values on a rectangular grid together with the quadrature weight of
/// the discrete L2 inner product (h^2 for both discretizations). Row-major:
/// value(i,j) is the node with x-index i and y-index j.
struct GridField {
  int nx = 0;
  int ny = 0;
  double weight = 0.0;
  std::vector<double> v;

  GridField() = default;
  GridField(int nx_, int ny_, double weight_)
      : nx(nx_), ny(ny_), weight(weight_),
        v(static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_), 0.0) {}

  double& at(int i, int j) {
    return v[static_cast<std::size_t>(i) * static_cast<std::size_t>(ny) +
             static_cast<std::size_t>(j)];
  }
  double at(int i, int j) const {
    return v[static_cast<std::size_t>(i) * static_cast<std::size_t>(ny) +
             static_cast<std::size_t>(j)];
  }
  std::size_t size() const { return v.size(); }

  bool same_grid(const GridField& other) const {
    return nx == other.nx && ny == other.ny;
  }
};

inline void check_same_grid(const GridField& a, const GridField& b,
                            const char* who) {
  if (!a.same_grid(b)) {
    throw std::invalid_argument(std::string(who) + ": grid mismatch");
  }
}

/// a*x + b*y
inline GridField lincomb(double a, const GridField& x, double b,
                         const GridField& y) {
  check_same_grid(x, y, "lincomb");
  GridField z(x.nx, x.ny, x.weight);
  for (std::size_t i = 0; i < z.v.size(); ++i) z.v[i] = a * x.v[i] + b * y.v[i];
  return z;
}

inline std::complex<double> lincomb(double a, const std::complex<double>& x,
                                    double b, const std::complex<double>& y) {
  return a * x + b * y;
}

/// y += x
inline void add_inplace(GridField& y, const GridField& x) {
  check_same_grid(y, x, "add_inplace");
  for (std::size_t i = 0; i < y.v.size(); ++i) y.v[i] += x.v[i];
}

inline void add_inplace(std::complex<double>& y, const std::complex<double>& x) {
  y += x;
}

inline GridField scaled(double a, const GridField& x) {
  GridField z(x.nx, x.ny, x.weight);
  for (std::size_t i = 0; i < z.v.size(); ++i) z.v[i] = a * x.v[i];
  return z;
}

inline std::complex<double> scaled(double a, const std::complex<double>& x) {
  return a * x;
}

}  // namespace vbdf2
