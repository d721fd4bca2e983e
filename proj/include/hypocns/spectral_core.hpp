#pragma once

// Periodic pseudo-spectral foundation: grid, real fields held as half spectra,
// Fourier-multiplier operators and the two-thirds dealiasing rule.
//
// Conventions
//   x_j   = j L / N,                       j = 0 .. N-1
//   xi_m  = 2 pi m / L,                    m = -N/2 .. N/2-1
//   c_m   = (1/N) sum_j f_j exp(-i xi_m x_j)   (forward transform carries 1/N)
//   d/dx  -> i xi
//   ||f||^2_{L^2} = (L/N) sum_j f_j^2 = L sum_m |c_m|^2
//
// Fields are real, so only m = 0 .. N/2 are stored; index N/2 is the Nyquist
// mode (m = -N/2), whose coefficient is real.

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace hypocns {

using Complex = std::complex<double>;

class SpectralGrid {
 public:
  SpectralGrid(int n_points, double domain_length);
  ~SpectralGrid();
  SpectralGrid(const SpectralGrid&) = delete;
  SpectralGrid& operator=(const SpectralGrid&) = delete;

  static std::shared_ptr<const SpectralGrid> create(int n_points, double domain_length);

  int n_points() const { return n_; }
  double domain_length() const { return length_; }
  double dx() const { return length_ / n_; }
  /// Number of stored (non-negative) modes, N/2 + 1.
  std::size_t n_modes() const { return static_cast<std::size_t>(n_ / 2 + 1); }
  std::size_t nyquist_index() const { return static_cast<std::size_t>(n_ / 2); }
  /// Largest |m| kept by the two-thirds rule.
  int dealias_cutoff() const { return n_ / 3; }
  /// Smallest nonzero wavenumber 2 pi / L.
  double fundamental() const { return wavenumbers_[1]; }
  /// |xi| of the largest resolved mode (the Nyquist mode).
  double max_wavenumber() const { return wavenumbers_.back(); }

  /// |xi_k| for the stored modes k = 0 .. N/2.
  std::span<const double> wavenumbers() const { return wavenumbers_; }
  /// Full signed set xi_m, m = -N/2 .. N/2-1, in increasing order.
  std::vector<double> signed_wavenumbers() const;
  std::vector<double> coordinates() const;

  /// Multiplicity of stored mode k in the full Hermitian spectrum (1 or 2).
  double mode_weight(std::size_t k) const { return (k == 0 || k == nyquist_index()) ? 1.0 : 2.0; }

  void forward(std::span<const double> physical, std::span<Complex> spectrum) const;
  void inverse(std::span<const Complex> spectrum, std::span<double> physical) const;

 private:
  struct Plans;
  int n_;
  double length_;
  std::vector<double> wavenumbers_;
  std::unique_ptr<Plans> plans_;
};

using GridPtr = std::shared_ptr<const SpectralGrid>;

/// Real periodic field stored by its non-negative half spectrum.
class Field {
 public:
  explicit Field(GridPtr grid);
  Field(GridPtr grid, std::vector<Complex> spectrum);

  static Field from_physical(GridPtr grid, std::span<const double> values);

  template <class Fn>
  static Field from_function(GridPtr grid, Fn&& fn) {
    const auto x = grid->coordinates();
    std::vector<double> values(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) values[j] = fn(x[j]);
    return from_physical(std::move(grid), values);
  }

  const GridPtr& grid() const { return grid_; }
  const SpectralGrid& grid_ref() const { return *grid_; }
  std::span<const Complex> spectrum() const { return spectrum_; }
  std::span<Complex> spectrum() { return spectrum_; }
  Complex& operator[](std::size_t k) { return spectrum_[k]; }
  const Complex& operator[](std::size_t k) const { return spectrum_[k]; }

  std::vector<double> physical() const;
  /// All N coefficients in FFT order (m = 0 .. N/2-1, then -N/2 .. -1).
  std::vector<Complex> full_spectrum() const;

  double mean() const { return spectrum_[0].real(); }
  double integral() const { return grid_->domain_length() * mean(); }
  double l2_norm_squared() const;
  double l2_norm() const;
  /// True when the mean contributes less than `rel_tol` of the L^2 norm.
  bool is_mean_zero(double rel_tol = 1e-10) const;

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double scale);

 private:
  GridPtr grid_;
  std::vector<Complex> spectrum_;
};

Field operator+(Field lhs, const Field& rhs);
Field operator-(Field lhs, const Field& rhs);
Field operator*(double scale, Field f);
Field operator*(Field f, double scale);

/// L^2 inner product <f, g> = integral of f g over the box.
double inner_product(const Field& f, const Field& g);

/// Multiplies every stored mode k by multiplier(|xi_k|). The multiplier must be
/// even in xi (a real function of |xi|); odd symbols go through derivative().
template <class Multiplier>
Field apply_radial_multiplier(const Field& f, Multiplier&& multiplier) {
  Field out = f;
  const auto xi = f.grid_ref().wavenumbers();
  for (std::size_t k = 0; k < xi.size(); ++k) out[k] *= multiplier(xi[k]);
  return out;
}

/// (-Delta)^beta: multiplier |xi|^{2 beta}. beta in [0, 1].
Field fractional_laplacian(const Field& f, double beta);

/// Lambda^s = (-Delta)^{s/2}: multiplier |xi|^s, zero mode set to 0 (s = 0 is the identity).
/// Negative s requires a mean-zero field.
Field riesz_power(const Field& f, double s);

/// d/dx: multiplier i xi. The Nyquist mode is dropped so the result stays real.
Field derivative(const Field& f);

/// Two-thirds rule: zero all modes with |m| > N/3.
Field dealias(const Field& f);

/// Pointwise product evaluated on the grid, then dealiased.
Field product(const Field& f, const Field& g);

/// |xi|^s with the convention 0^0 = 1 and 0^s = 0 for s != 0.
double radial_symbol(double xi, double s);

}  // namespace hypocns
