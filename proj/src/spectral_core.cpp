#include "hypocns/spectral_core.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include "hypocns/errors.hpp"

namespace hypocns {

namespace {

// The FFTW planner is not re-entrant; execution with the new-array interface is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

struct SpectralGrid::Plans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;

  explicit Plans(int n) {
    std::vector<double> x(static_cast<std::size_t>(n));
    std::vector<Complex> c(static_cast<std::size_t>(n / 2 + 1));
    auto* cx = reinterpret_cast<fftw_complex*>(c.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    std::lock_guard lock(planner_mutex());
    r2c = fftw_plan_dft_r2c_1d(n, x.data(), cx, flags);
    c2r = fftw_plan_dft_c2r_1d(n, cx, x.data(), flags | FFTW_DESTROY_INPUT);
  }
  ~Plans() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(r2c);
    fftw_destroy_plan(c2r);
  }
};

SpectralGrid::SpectralGrid(int n_points, double domain_length)
    : n_(n_points), length_(domain_length) {
  if (n_points < 8 || !is_power_of_two(n_points)) {
    throw ParameterError("grid size must be a power of two >= 8, got " + std::to_string(n_points));
  }
  if (!(domain_length > 0.0) || !std::isfinite(domain_length)) {
    throw ParameterError("domain length must be positive and finite");
  }
  wavenumbers_.resize(n_modes());
  for (std::size_t k = 0; k < wavenumbers_.size(); ++k) {
    wavenumbers_[k] = 2.0 * std::numbers::pi * static_cast<double>(k) / length_;
  }
  plans_ = std::make_unique<Plans>(n_);
}

SpectralGrid::~SpectralGrid() = default;

std::shared_ptr<const SpectralGrid> SpectralGrid::create(int n_points, double domain_length) {
  return std::make_shared<const SpectralGrid>(n_points, domain_length);
}

std::vector<double> SpectralGrid::signed_wavenumbers() const {
  std::vector<double> xi(static_cast<std::size_t>(n_));
  for (int m = -n_ / 2; m < n_ / 2; ++m) {
    xi[static_cast<std::size_t>(m + n_ / 2)] = 2.0 * std::numbers::pi * m / length_;
  }
  return xi;
}

std::vector<double> SpectralGrid::coordinates() const {
  std::vector<double> x(static_cast<std::size_t>(n_));
  for (int j = 0; j < n_; ++j) x[static_cast<std::size_t>(j)] = length_ * j / n_;
  return x;
}

void SpectralGrid::forward(std::span<const double> physical, std::span<Complex> spectrum) const {
  // r2c leaves its input intact, the const_cast only satisfies the C signature.
  fftw_execute_dft_r2c(plans_->r2c, const_cast<double*>(physical.data()),
                       reinterpret_cast<fftw_complex*>(spectrum.data()));
  const double inv_n = 1.0 / n_;
  for (auto& c : spectrum) c *= inv_n;
  spectrum.front().imag(0.0);
  spectrum.back().imag(0.0);
}

void SpectralGrid::inverse(std::span<const Complex> spectrum, std::span<double> physical) const {
  std::vector<Complex> scratch(spectrum.begin(), spectrum.end());
  fftw_execute_dft_c2r(plans_->c2r, reinterpret_cast<fftw_complex*>(scratch.data()),
                       physical.data());
}

// ---------------------------------------------------------------------------

Field::Field(GridPtr grid) : grid_(std::move(grid)), spectrum_(grid_->n_modes()) {}

Field::Field(GridPtr grid, std::vector<Complex> spectrum)
    : grid_(std::move(grid)), spectrum_(std::move(spectrum)) {
  if (spectrum_.size() != grid_->n_modes()) {
    throw ParameterError("spectrum length does not match grid");
  }
  spectrum_.front().imag(0.0);
  spectrum_.back().imag(0.0);
}

Field Field::from_physical(GridPtr grid, std::span<const double> values) {
  if (values.size() != static_cast<std::size_t>(grid->n_points())) {
    throw ParameterError("physical field length does not match grid");
  }
  Field f(grid);
  grid->forward(values, f.spectrum_);
  return f;
}

std::vector<double> Field::physical() const {
  std::vector<double> x(static_cast<std::size_t>(grid_->n_points()));
  grid_->inverse(spectrum_, x);
  return x;
}

std::vector<Complex> Field::full_spectrum() const {
  const int n = grid_->n_points();
  std::vector<Complex> full(static_cast<std::size_t>(n));
  for (int m = 0; m <= n / 2; ++m) full[static_cast<std::size_t>(m)] = spectrum_[static_cast<std::size_t>(m)];
  for (int m = 1; m < n / 2; ++m) {
    full[static_cast<std::size_t>(n - m)] = std::conj(spectrum_[static_cast<std::size_t>(m)]);
  }
  return full;
}

double Field::l2_norm_squared() const {
  double sum = 0.0;
  for (std::size_t k = 0; k < spectrum_.size(); ++k) sum += grid_->mode_weight(k) * std::norm(spectrum_[k]);
  return grid_->domain_length() * sum;
}

double Field::l2_norm() const { return std::sqrt(l2_norm_squared()); }

bool Field::is_mean_zero(double rel_tol) const {
  const double mean_part = std::sqrt(grid_->domain_length()) * std::abs(spectrum_[0]);
  return mean_part <= rel_tol * l2_norm();
}

Field& Field::operator+=(const Field& other) {
  for (std::size_t k = 0; k < spectrum_.size(); ++k) spectrum_[k] += other.spectrum_[k];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  for (std::size_t k = 0; k < spectrum_.size(); ++k) spectrum_[k] -= other.spectrum_[k];
  return *this;
}

Field& Field::operator*=(double scale) {
  for (auto& c : spectrum_) c *= scale;
  return *this;
}

Field operator+(Field lhs, const Field& rhs) { return lhs += rhs; }
Field operator-(Field lhs, const Field& rhs) { return lhs -= rhs; }
Field operator*(double scale, Field f) { return f *= scale; }
Field operator*(Field f, double scale) { return f *= scale; }

double inner_product(const Field& f, const Field& g) {
  const auto& grid = f.grid_ref();
  double sum = 0.0;
  for (std::size_t k = 0; k < grid.n_modes(); ++k) {
    sum += grid.mode_weight(k) * (std::conj(f[k]) * g[k]).real();
  }
  return grid.domain_length() * sum;
}

double radial_symbol(double xi, double s) {
  if (s == 0.0) return 1.0;
  if (xi == 0.0) return 0.0;
  return std::pow(xi, s);
}

Field fractional_laplacian(const Field& f, double beta) {
  if (!(beta >= 0.0 && beta <= 1.0)) {
    throw ParameterError("fractional Laplacian order must lie in [0, 1], got " + std::to_string(beta));
  }
  const double order = 2.0 * beta;
  return apply_radial_multiplier(f, [order](double xi) { return radial_symbol(xi, order); });
}

Field riesz_power(const Field& f, double s) {
  if (s < 0.0 && !f.is_mean_zero()) {
    throw DegenerateInputError("negative Riesz power of a field with nonzero mean");
  }
  return apply_radial_multiplier(f, [s](double xi) { return radial_symbol(xi, s); });
}

Field derivative(const Field& f) {
  Field out = f;
  const auto xi = f.grid_ref().wavenumbers();
  for (std::size_t k = 0; k < xi.size(); ++k) out[k] *= Complex(0.0, xi[k]);
  out[f.grid_ref().nyquist_index()] = 0.0;
  return out;
}

Field dealias(const Field& f) {
  Field out = f;
  const auto cutoff = static_cast<std::size_t>(f.grid_ref().dealias_cutoff());
  for (std::size_t k = cutoff + 1; k < out.spectrum().size(); ++k) out[k] = 0.0;
  return out;
}

Field product(const Field& f, const Field& g) {
  auto x = f.physical();
  const auto y = g.physical();
  for (std::size_t j = 0; j < x.size(); ++j) x[j] *= y[j];
  return dealias(Field::from_physical(f.grid(), x));
}

}  // namespace hypocns
