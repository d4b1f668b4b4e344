#include "vbdf2/spatial.hpp"

#include <fftw3.h>

#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "vbdf2/errors.hpp"

namespace vbdf2 {

ScalarOperator::field_type ScalarOperator::shifted_solve(
    double sigma, const field_type& rhs, int* iterations) const {
  const std::complex<double> denom = sigma - lambda_;
  if (std::abs(denom) == 0.0) {
    throw std::domain_error("shifted_solve: singular shift sigma == lambda");
  }
  if (iterations) *iterations = 1;
  return rhs / denom;
}

// ---------------------------------------------------------------------------
// Spectral operator
// ---------------------------------------------------------------------------

struct SpectralOperator::Impl {
  int m = 0;
  double epsilon = 0.0;
  double kappa = 0.0;
  double h = 0.0;
  std::vector<double> symbol;          // per mode, row-major m x m
  std::vector<double> laplace_symbol;  // kx^2 + ky^2 per mode
  mutable std::vector<std::complex<double>> buf;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  mutable std::mutex fft_mutex;

  ~Impl() {
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }
};

namespace {

// Signed mode index in [-M/2, M/2) for array position i.
int mode_index(int i, int m) { return (i < m / 2) ? i : i - m; }

}  // namespace

SpectralOperator::SpectralOperator(int modes, double epsilon, double kappa)
    : impl_(std::make_unique<Impl>()) {
  if (modes < 4 || modes % 2 != 0) {
    throw std::invalid_argument("spectral grid needs an even M >= 4");
  }
  if (!(epsilon > 0.0)) {
    throw std::invalid_argument("diffusivity must be positive");
  }
  impl_->m = modes;
  impl_->epsilon = epsilon;
  impl_->kappa = kappa;
  impl_->h = kDomainLength / modes;
  impl_->symbol.resize(static_cast<std::size_t>(modes) * modes);
  impl_->laplace_symbol.resize(impl_->symbol.size());
  const double k1 = 2.0 * std::numbers::pi / kDomainLength;
  for (int i = 0; i < modes; ++i) {
    const double kx = k1 * mode_index(i, modes);
    for (int j = 0; j < modes; ++j) {
      const double ky = k1 * mode_index(j, modes);
      const std::size_t idx =
          static_cast<std::size_t>(i) * static_cast<std::size_t>(modes) + j;
      impl_->laplace_symbol[idx] = kx * kx + ky * ky;
      impl_->symbol[idx] = -epsilon * (kx * kx + ky * ky) + kappa;
    }
  }
  impl_->buf.resize(impl_->symbol.size());
  auto* raw = reinterpret_cast<fftw_complex*>(impl_->buf.data());
  impl_->forward =
      fftw_plan_dft_2d(modes, modes, raw, raw, FFTW_FORWARD, FFTW_ESTIMATE);
  impl_->backward =
      fftw_plan_dft_2d(modes, modes, raw, raw, FFTW_BACKWARD, FFTW_ESTIMATE);
}

SpectralOperator::~SpectralOperator() = default;

int SpectralOperator::modes() const { return impl_->m; }
double SpectralOperator::epsilon() const { return impl_->epsilon; }
double SpectralOperator::kappa() const { return impl_->kappa; }
double SpectralOperator::grid_spacing() const { return impl_->h; }
double SpectralOperator::kappa_max() const { return impl_->kappa; }

double SpectralOperator::symbol(int mx, int my) const {
  const int m = impl_->m;
  const int i = (mx + m) % m;
  const int j = (my + m) % m;
  return impl_->symbol[static_cast<std::size_t>(i) * m + j];
}

GridField SpectralOperator::zero() const {
  return GridField(impl_->m, impl_->m, impl_->h * impl_->h);
}

GridField SpectralOperator::sample(
    const std::function<double(double, double)>& f) const {
  GridField out = zero();
  for (int i = 0; i < impl_->m; ++i) {
    for (int j = 0; j < impl_->m; ++j) {
      out.at(i, j) = f(i * impl_->h, j * impl_->h);
    }
  }
  return out;
}

namespace {

void check_spectral_grid(const GridField& u, int m, const char* who) {
  if (u.nx != m || u.ny != m) {
    throw std::invalid_argument(std::string(who) + ": grid mismatch");
  }
}

}  // namespace

GridField SpectralOperator::apply(const GridField& u) const {
  check_spectral_grid(u, impl_->m, "apply");
  std::lock_guard<std::mutex> lock(impl_->fft_mutex);
  const std::size_t n = impl_->buf.size();
  for (std::size_t i = 0; i < n; ++i) impl_->buf[i] = u.v[i];
  fftw_execute(impl_->forward);
  for (std::size_t i = 0; i < n; ++i) impl_->buf[i] *= impl_->symbol[i];
  fftw_execute(impl_->backward);
  GridField out = zero();
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) out.v[i] = impl_->buf[i].real() * scale;
  return out;
}

GridField SpectralOperator::shifted_solve(double sigma, const GridField& rhs,
                                          int* iterations) const {
  check_spectral_grid(rhs, impl_->m, "shifted_solve");
  if (!(sigma - impl_->kappa > 0.0)) {
    throw std::domain_error("shifted_solve: indefinite shift sigma <= kappa");
  }
  std::lock_guard<std::mutex> lock(impl_->fft_mutex);
  const std::size_t n = impl_->buf.size();
  for (std::size_t i = 0; i < n; ++i) impl_->buf[i] = rhs.v[i];
  fftw_execute(impl_->forward);
  for (std::size_t i = 0; i < n; ++i) {
    impl_->buf[i] /= (sigma - impl_->symbol[i]);
  }
  fftw_execute(impl_->backward);
  GridField out = zero();
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) out.v[i] = impl_->buf[i].real() * scale;
  if (iterations) *iterations = 1;
  return out;
}

double SpectralOperator::inner(const GridField& u, const GridField& w) const {
  check_same_grid(u, w, "inner");
  double s = 0.0;
  for (std::size_t i = 0; i < u.v.size(); ++i) s += u.v[i] * w.v[i];
  return u.weight * s;
}

double SpectralOperator::l2_norm(const GridField& u) const {
  return std::sqrt(inner(u, u));
}

double SpectralOperator::h1_seminorm(const GridField& u) const {
  check_spectral_grid(u, impl_->m, "h1_seminorm");
  std::lock_guard<std::mutex> lock(impl_->fft_mutex);
  const std::size_t n = impl_->buf.size();
  for (std::size_t i = 0; i < n; ++i) impl_->buf[i] = u.v[i];
  fftw_execute(impl_->forward);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    s += impl_->laplace_symbol[i] * std::norm(impl_->buf[i]);
  }
  // |u|_1^2 = L^2 sum |k|^2 |u_hat|^2 with u_hat the normalized coefficients.
  const double m2 = static_cast<double>(n);
  return std::sqrt(kDomainLength * kDomainLength * s / (m2 * m2));
}

double SpectralOperator::energy(const GridField& u) const {
  const double h1 = h1_seminorm(u);
  const double l2 = l2_norm(u);
  return impl_->epsilon * h1 * h1 - impl_->kappa * l2 * l2;
}

// ---------------------------------------------------------------------------
// Finite-difference Dirichlet operator
// ---------------------------------------------------------------------------

FdDirichletOperator::FdDirichletOperator(
    int m, double epsilon, const std::function<double(double, double)>& kappa,
    double kappa_star)
    : m_(m), epsilon_(epsilon), h_(kDomainLength / m), kappa_star_(kappa_star) {
  if (m < 2) throw std::invalid_argument("need at least one interior node");
  if (!(epsilon > 0.0)) {
    throw std::invalid_argument("diffusivity must be positive");
  }
  if (kappa_star < 0.0) {
    throw std::invalid_argument("kappa_star must be nonnegative");
  }
  kappa_ = GridField(m - 1, m - 1, h_ * h_);
  kappa_max_ = -std::numeric_limits<double>::infinity();
  double kappa_abs = 0.0;
  for (int i = 1; i < m; ++i) {
    for (int j = 1; j < m; ++j) {
      const double k = kappa(i * h_, j * h_);
      kappa_.at(i - 1, j - 1) = k;
      kappa_max_ = std::max(kappa_max_, k);
      kappa_abs = std::max(kappa_abs, std::abs(k));
    }
  }
  if (kappa_abs > kappa_star * (1.0 + 1e-12)) {
    throw std::invalid_argument("reaction coefficient exceeds kappa_star");
  }
}

FdDirichletOperator::FdDirichletOperator(int m, double epsilon, double kappa)
    : FdDirichletOperator(
          m, epsilon, [kappa](double, double) { return kappa; },
          std::abs(kappa)) {}

GridField FdDirichletOperator::zero() const {
  return GridField(m_ - 1, m_ - 1, h_ * h_);
}

GridField FdDirichletOperator::sample(
    const std::function<double(double, double)>& f) const {
  GridField out = zero();
  for (int i = 1; i < m_; ++i) {
    for (int j = 1; j < m_; ++j) {
      out.at(i - 1, j - 1) = f(i * h_, j * h_);
    }
  }
  return out;
}

GridField FdDirichletOperator::apply(const GridField& u) const {
  check_same_grid(u, kappa_, "apply");
  GridField out = zero();
  const int n = m_ - 1;
  const double ih2 = epsilon_ / (h_ * h_);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double c = u.at(i, j);
      const double left = (i > 0) ? u.at(i - 1, j) : 0.0;
      const double right = (i < n - 1) ? u.at(i + 1, j) : 0.0;
      const double down = (j > 0) ? u.at(i, j - 1) : 0.0;
      const double up = (j < n - 1) ? u.at(i, j + 1) : 0.0;
      out.at(i, j) =
          ih2 * (left + right + down + up - 4.0 * c) + kappa_.at(i, j) * c;
    }
  }
  return out;
}

GridField FdDirichletOperator::shifted_solve(double sigma, const GridField& rhs,
                                             int* iterations) const {
  check_same_grid(rhs, kappa_, "shifted_solve");
  if (!(sigma - kappa_max_ > 0.0)) {
    throw std::domain_error(
        "shifted_solve: indefinite shift sigma <= max kappa");
  }
  // Plain conjugate gradients on the SPD operator sigma*I - A.
  auto matvec = [&](const GridField& x) {
    GridField y = apply(x);
    for (std::size_t i = 0; i < y.v.size(); ++i) {
      y.v[i] = sigma * x.v[i] - y.v[i];
    }
    return y;
  };
  auto dot = [](const GridField& a, const GridField& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.v.size(); ++i) s += a.v[i] * b.v[i];
    return s;
  };

  GridField x = zero();
  GridField r = rhs;
  const double rhs_norm2 = dot(rhs, rhs);
  if (rhs_norm2 == 0.0) {
    if (iterations) *iterations = 0;
    return x;
  }
  GridField p = r;
  double rho = dot(r, r);
  const double tol2 = 1e-20 * rhs_norm2;  // (1e-10 relative residual)^2
  const int max_iterations = 10 * m_ * m_;
  for (int it = 1; it <= max_iterations; ++it) {
    const GridField q = matvec(p);
    const double alpha = rho / dot(p, q);
    for (std::size_t i = 0; i < x.v.size(); ++i) {
      x.v[i] += alpha * p.v[i];
      r.v[i] -= alpha * q.v[i];
    }
    const double rho_next = dot(r, r);
    if (rho_next <= tol2) {
      if (iterations) *iterations = it;
      return x;
    }
    const double beta = rho_next / rho;
    rho = rho_next;
    for (std::size_t i = 0; i < p.v.size(); ++i) {
      p.v[i] = r.v[i] + beta * p.v[i];
    }
  }
  throw numerical_error("conjugate gradients failed to converge in " +
                        std::to_string(max_iterations) + " iterations");
}

double FdDirichletOperator::inner(const GridField& u, const GridField& w) const {
  check_same_grid(u, w, "inner");
  double s = 0.0;
  for (std::size_t i = 0; i < u.v.size(); ++i) s += u.v[i] * w.v[i];
  return u.weight * s;
}

double FdDirichletOperator::l2_norm(const GridField& u) const {
  return std::sqrt(inner(u, u));
}

double FdDirichletOperator::h1_seminorm(const GridField& u) const {
  check_same_grid(u, kappa_, "h1_seminorm");
  const int n = m_ - 1;
  // Forward differences against the zero boundary; the h^2 quadrature weight
  // cancels the 1/h^2 of the squared difference quotient.
  double s = 0.0;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i <= n; ++i) {
      const double a = (i > 0) ? u.at(i - 1, j) : 0.0;
      const double b = (i < n) ? u.at(i, j) : 0.0;
      s += (b - a) * (b - a);
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= n; ++j) {
      const double a = (j > 0) ? u.at(i, j - 1) : 0.0;
      const double b = (j < n) ? u.at(i, j) : 0.0;
      s += (b - a) * (b - a);
    }
  }
  return std::sqrt(s);
}

double FdDirichletOperator::energy(const GridField& u) const {
  const double h1 = h1_seminorm(u);
  double reaction = 0.0;
  for (std::size_t i = 0; i < u.v.size(); ++i) {
    reaction -= kappa_.v[i] * u.v[i] * u.v[i];
  }
  return epsilon_ * h1 * h1 + u.weight * reaction;
}

}  // namespace vbdf2
