#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hypocns/errors.hpp"
#include "hypocns/spectral_core.hpp"

using namespace hypocns;
using std::numbers::pi;

namespace {

// O(N^2) DFT of real samples with the 1/N convention.
std::vector<Complex> naive_dft(const std::vector<double>& x) {
  const auto n = x.size();
  std::vector<Complex> c(n);
  for (std::size_t m = 0; m < n; ++m) {
    Complex sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      sum += x[j] * std::polar(1.0, -2.0 * pi * static_cast<double>(m * j) / static_cast<double>(n));
    }
    c[m] = sum / static_cast<double>(n);
  }
  return c;
}

std::vector<double> naive_idft(const std::vector<Complex>& c) {
  const auto n = c.size();
  std::vector<double> x(n);
  for (std::size_t j = 0; j < n; ++j) {
    Complex sum = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
      sum += c[m] * std::polar(1.0, 2.0 * pi * static_cast<double>(m * j) / static_cast<double>(n));
    }
    x[j] = sum.real();
  }
  return x;
}

std::vector<double> random_values(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

TEST_CASE("grid construction and geometry") {
  CHECK_THROWS_AS(SpectralGrid::create(12, 1.0), ParameterError);
  CHECK_THROWS_AS(SpectralGrid::create(4, 1.0), ParameterError);
  CHECK_THROWS_AS(SpectralGrid::create(16, 0.0), ParameterError);
  CHECK_THROWS_AS(SpectralGrid::create(16, -1.0), ParameterError);

  const auto g = SpectralGrid::create(16, 2.0 * pi);
  CHECK(g->n_modes() == 9);
  CHECK(g->nyquist_index() == 8);
  CHECK(g->dealias_cutoff() == 5);
  CHECK(g->dx() == doctest::Approx(2.0 * pi / 16));
  CHECK(g->fundamental() == doctest::Approx(1.0));
  CHECK(g->max_wavenumber() == doctest::Approx(8.0));
  const auto xi = g->signed_wavenumbers();
  CHECK(xi.front() == doctest::Approx(-8.0));
  CHECK(xi.back() == doctest::Approx(7.0));
  CHECK(g->mode_weight(0) == 1.0);
  CHECK(g->mode_weight(3) == 2.0);
  CHECK(g->mode_weight(8) == 1.0);
}

TEST_CASE("forward transform matches a direct DFT") {
  const auto g = SpectralGrid::create(32, 3.0);
  const auto x = random_values(32, 7);
  const auto f = Field::from_physical(g, x);
  const auto ref = naive_dft(x);
  for (std::size_t m = 0; m <= 16; ++m) {
    CHECK(std::abs(f[m] - ref[m]) < 1e-14);
  }
  const auto full = f.full_spectrum();
  for (std::size_t m = 0; m < 32; ++m) CHECK(std::abs(full[m] - ref[m]) < 1e-14);
  CHECK(max_diff(f.physical(), x) < 1e-14);
}

TEST_CASE("Parseval, mean and integral") {
  const auto g = SpectralGrid::create(64, 2.0 * pi);
  const auto s = Field::from_function(g, [](double x) { return std::sin(x); });
  CHECK(s.l2_norm() == doctest::Approx(std::sqrt(pi)).epsilon(1e-14));
  CHECK(s.is_mean_zero());

  const auto c = Field::from_function(g, [](double x) { return 0.5 + std::cos(3 * x); });
  CHECK(c.mean() == doctest::Approx(0.5));
  CHECK(c.integral() == doctest::Approx(pi));
  CHECK_FALSE(c.is_mean_zero());
  CHECK(inner_product(s, c) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(inner_product(c, c) == doctest::Approx(c.l2_norm_squared()));
}

TEST_CASE("derivative of trigonometric fields") {
  const auto g = SpectralGrid::create(64, 2.0 * pi);
  const auto f = Field::from_function(g, [](double x) { return std::sin(3 * x) + std::cos(x); });
  const auto df = derivative(f).physical();
  const auto xs = g->coordinates();
  for (std::size_t j = 0; j < xs.size(); ++j) {
    CHECK(df[j] == doctest::Approx(3 * std::cos(3 * xs[j]) - std::sin(xs[j])).epsilon(1e-12));
  }
  // the Nyquist mode has no real derivative
  const auto nyq = Field::from_function(g, [](double x) { return std::cos(32 * x); });
  CHECK(derivative(nyq).l2_norm() < 1e-14);
}

TEST_CASE("fractional Laplacian against the symbol") {
  const double length = 7.0;
  const auto g = SpectralGrid::create(64, length);
  const double k = 2.0 * pi * 3 / length;
  const auto f = Field::from_function(g, [k](double x) { return std::cos(k * x); });
  for (double beta : {0.25, 0.5, 0.6, 1.0}) {
    const auto lf = fractional_laplacian(f, beta).physical();
    const auto xs = g->coordinates();
    for (std::size_t j = 0; j < xs.size(); ++j) {
      CHECK(lf[j] == doctest::Approx(std::pow(k, 2 * beta) * std::cos(k * xs[j])).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(fractional_laplacian(f, -0.1), ParameterError);
  CHECK_THROWS_AS(fractional_laplacian(f, 1.5), ParameterError);

  // beta = 0 is the identity, mean included
  const auto m = Field::from_function(g, [](double x) { return 2.0 + std::sin(x); });
  CHECK(max_diff(fractional_laplacian(m, 0.0).physical(), m.physical()) < 1e-14);
}

TEST_CASE("fractional Laplacian matches a direct DFT multiplier") {
  const std::size_t n = 16;
  const double length = 5.0;
  const auto g = SpectralGrid::create(static_cast<int>(n), length);
  const auto x = random_values(n, 11);
  auto c = naive_dft(x);
  const double beta = 0.7;
  for (std::size_t m = 0; m < n; ++m) {
    const int signed_m = m <= n / 2 ? static_cast<int>(m) : static_cast<int>(m) - static_cast<int>(n);
    const double xi = std::abs(2.0 * pi * signed_m / length);
    c[m] *= xi == 0.0 ? 0.0 : std::pow(xi, 2 * beta);
  }
  const auto ref = naive_idft(c);
  const auto got = fractional_laplacian(Field::from_physical(g, x), beta).physical();
  CHECK(max_diff(got, ref) < 1e-12);
}

TEST_CASE("Riesz powers") {
  const auto g = SpectralGrid::create(64, 2.0 * pi);
  const auto with_mean = Field::from_function(g, [](double x) { return 1.0 + std::sin(2 * x); });
  CHECK_THROWS_AS(riesz_power(with_mean, -0.5), DegenerateInputError);
  CHECK_NOTHROW(riesz_power(with_mean, 0.5));

  const auto f = Field::from_function(g, [](double x) { return std::sin(2 * x) + 0.3 * std::cos(5 * x); });
  const auto back = riesz_power(riesz_power(f, 0.8), -0.8);
  CHECK(max_diff(back.physical(), f.physical()) < 1e-13);
  CHECK(radial_symbol(0.0, 0.0) == 1.0);
  CHECK(radial_symbol(0.0, 0.5) == 0.0);
  CHECK(radial_symbol(4.0, 0.5) == doctest::Approx(2.0));
}

TEST_CASE("two-thirds dealiasing and products") {
  const auto g = SpectralGrid::create(32, 2.0 * pi);
  const auto f = Field::from_function(g, [](double x) { return std::cos(10 * x) + std::cos(11 * x); });
  const auto d = dealias(f);
  CHECK(std::abs(d[10]) > 0.4);
  CHECK(std::abs(d[11]) == 0.0);

  const auto a = Field::from_function(g, [](double x) { return std::cos(x); });
  const auto b = Field::from_function(g, [](double x) { return std::cos(2 * x); });
  const auto p = product(a, b).physical();
  const auto xs = g->coordinates();
  for (std::size_t j = 0; j < xs.size(); ++j) {
    CHECK(p[j] == doctest::Approx(0.5 * (std::cos(xs[j]) + std::cos(3 * xs[j]))).epsilon(1e-13));
  }
}

TEST_CASE("field arithmetic") {
  const auto g = SpectralGrid::create(16, 1.0);
  const auto a = Field::from_physical(g, random_values(16, 1));
  const auto b = Field::from_physical(g, random_values(16, 2));
  const auto sum = (a + b).physical();
  const auto diff = (2.0 * a - b * 1.0).physical();
  const auto pa = a.physical();
  const auto pb = b.physical();
  for (std::size_t j = 0; j < 16; ++j) {
    CHECK(sum[j] == doctest::Approx(pa[j] + pb[j]));
    CHECK(diff[j] == doctest::Approx(2 * pa[j] - pb[j]));
  }
  CHECK_THROWS_AS(Field::from_physical(g, std::vector<double>(8)), ParameterError);
}
