#pragma once

#include <complex>
#include <functional>
#include <memory>

#include "vbdf2/field.hpp"

namespace vbdf2 {

/// Side length of the square domain (0,L)^2 shared by both grid operators.
inline constexpr double kDomainLength = 2.0;

/// Scalar test operator A = lambda, the building block of the Dahlquist and
/// perturbation probes. Fields are complex numbers.
class ScalarOperator {
 public:
  using field_type = std::complex<double>;

  explicit ScalarOperator(std::complex<double> lambda) : lambda_(lambda) {}

  std::complex<double> lambda() const { return lambda_; }

  field_type apply(const field_type& u) const { return lambda_ * u; }

  /// (sigma - lambda)^{-1} rhs; throws std::domain_error on a singular shift.
  field_type shifted_solve(double sigma, const field_type& rhs,
                           int* iterations = nullptr) const;

  double inner(const field_type& u, const field_type& w) const {
    return std::real(u * std::conj(w));
  }
  double l2_norm(const field_type& u) const { return std::abs(u); }
  double h1_seminorm(const field_type&) const { return 0.0; }

  /// -Re(lambda) |u|^2, the reaction part of the energy functional.
  double energy(const field_type& u) const {
    return -lambda_.real() * std::norm(u);
  }

  double kappa_max() const { return lambda_.real(); }

 private:
  std::complex<double> lambda_;
};

/// Fourier collocation operator A = eps*Laplace + kappa on the periodic
/// M x M grid over (0,2)^2. Apply and shifted solve are exact per mode;
/// concurrent use of one instance is serialized internally.
class SpectralOperator {
 public:
  using field_type = GridField;

  SpectralOperator(int modes, double epsilon, double kappa);
  ~SpectralOperator();
  SpectralOperator(const SpectralOperator&) = delete;
  SpectralOperator& operator=(const SpectralOperator&) = delete;

  int modes() const;
  double epsilon() const;
  double kappa() const;
  double grid_spacing() const;

  /// Symbol -eps*(kx^2+ky^2) + kappa at mode indices in [-M/2, M/2).
  double symbol(int mx, int my) const;

  GridField zero() const;
  GridField sample(const std::function<double(double, double)>& f) const;

  GridField apply(const GridField& u) const;
  GridField shifted_solve(double sigma, const GridField& rhs,
                          int* iterations = nullptr) const;

  double inner(const GridField& u, const GridField& w) const;
  double l2_norm(const GridField& u) const;
  double h1_seminorm(const GridField& u) const;

  /// eps |u|_1^2 + <-kappa u, u>.
  double energy(const GridField& u) const;

  double kappa_max() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Five-point finite-difference operator A = eps*Laplace + kappa(x) with
/// homogeneous Dirichlet data on (0,2)^2; unknowns are the (M-1)^2 interior
/// nodes. The shifted solve runs plain conjugate gradients to a 1e-10
/// relative residual.
class FdDirichletOperator {
 public:
  using field_type = GridField;

  /// kappa sampled at interior nodes; |kappa| must stay within kappa_star.
  FdDirichletOperator(int m, double epsilon,
                      const std::function<double(double, double)>& kappa,
                      double kappa_star);
  /// Constant-kappa convenience.
  FdDirichletOperator(int m, double epsilon, double kappa);

  int m() const { return m_; }
  double epsilon() const { return epsilon_; }
  double kappa_star() const { return kappa_star_; }
  double grid_spacing() const { return h_; }

  GridField zero() const;
  GridField sample(const std::function<double(double, double)>& f) const;

  GridField apply(const GridField& u) const;
  GridField shifted_solve(double sigma, const GridField& rhs,
                          int* iterations = nullptr) const;

  double inner(const GridField& u, const GridField& w) const;
  double l2_norm(const GridField& u) const;
  double h1_seminorm(const GridField& u) const;
  double energy(const GridField& u) const;

  double kappa_max() const { return kappa_max_; }

 private:
  int m_;
  double epsilon_;
  double h_;
  double kappa_star_;
  double kappa_max_;
  GridField kappa_;
};

/// Samples a space-time function at the operator's nodes at time t.
template <class Op>
GridField project_exact(const Op& op, double t,
                        const std::function<double(double, double, double)>& f) {
  return op.sample([&](double x, double y) { return f(t, x, y); });
}

}  // namespace vbdf2
