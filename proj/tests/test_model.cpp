#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>

#include "hypocns/errors.hpp"
#include "hypocns/model.hpp"

using namespace hypocns;
using std::numbers::pi;

namespace {

// G(rho) = rho int_1^rho (s^gamma - 1)/s^2 ds by adaptive Gauss-Kronrod.
double potential_by_quadrature(double rho, double gamma) {
  auto f = [gamma](double s) { return (std::pow(s, gamma) - 1.0) / (s * s); };
  double err = 0.0;
  const double integral = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 1.0, rho, 15, 1e-14, &err);
  return rho * integral;
}

// K(a) = gamma a/(1+a) + (P'(1) - P'(1+a))/(1+a), P'(rho) = gamma rho^{gamma-1}
double k_by_definition(double a, double gamma) {
  const double rho = 1.0 + a;
  return gamma * a / rho + (gamma - gamma * std::pow(rho, gamma - 1.0)) / rho;
}

ModelParams params(double beta = 0.6, double gamma = 1.4) {
  ModelParams p;
  p.beta = beta;
  p.gamma = gamma;
  p.s_reg = default_regularity(beta, false);
  return p;
}

}  // namespace

TEST_CASE("parameter validation") {
  ModelParams p = params();
  CHECK_NOTHROW(p.validate());
  p.beta = 0.4;
  CHECK_THROWS_AS(p.validate(), ParameterError);
  p.beta = 1.0;
  CHECK_THROWS_AS(p.validate(), ParameterError);
  p = params();
  p.gamma = 1.0;
  CHECK_THROWS_AS(p.validate(), ParameterError);
  p = params(0.5);
  p.s_reg = 0.5;
  CHECK_THROWS_AS(p.validate(), ParameterError);
  p = params(0.8);
  p.large_data = true;
  p.s_reg = 1.8;
  CHECK_THROWS_AS(p.validate(), ParameterError);

  CHECK(default_regularity(0.6, false) == 0.6);
  CHECK(default_regularity(0.5, false) == 0.6);
  CHECK(default_regularity(0.6, true) == doctest::Approx(1.6));
}

TEST_CASE("potential energy density against quadrature") {
  for (double gamma : {1.2, 1.4, 5.0 / 3.0, 2.0, 3.0}) {
    for (double rho : {0.3, 0.8, 0.999, 1.0, 1.001, 1.1, 1.7, 3.5}) {
      const double expected = potential_by_quadrature(rho, gamma);
      CHECK(std::abs(potential_density(rho, gamma) - expected) <= 1e-10 * std::max(1.0, std::abs(expected)));
    }
  }
  CHECK(potential_density(1.1, 1.4) == doctest::Approx(0.006864).epsilon(1e-4));
  CHECK(potential_density(1.0, 1.4) == 0.0);
  CHECK_THROWS_AS(potential_density(0.0, 1.4), DomainError);
  CHECK_THROWS_AS(potential_density(-0.5, 1.4), DomainError);
}

TEST_CASE("potential energy closed form at gamma = 2") {
  for (double rho : {0.5, 0.9, 1.2, 2.0}) {
    CHECK(potential_density(rho, 2.0) == doctest::Approx((rho - 1) * (rho - 1)).epsilon(1e-13));
  }
}

TEST_CASE("pressure coefficient K") {
  for (double a : {-0.5, -0.1, 0.0, 0.2, 1.5}) {
    CHECK(pressure_coeff(a, 2.0) == 0.0);
    for (double gamma : {1.4, 1.67, 3.0}) {
      CHECK(pressure_coeff(a, gamma) == doctest::Approx(k_by_definition(a, gamma)).epsilon(1e-12));
    }
  }
  const auto g = SpectralGrid::create(32, 2.0 * pi);
  ModelParams p = params();
  p.gamma = 2.0;
  const auto a = Field::from_function(g, [](double x) { return 0.3 * std::sin(x); });
  CHECK(pressure_coeff_K(a, p).l2_norm() == 0.0);
  const auto vac = Field::from_function(g, [](double x) { return -1.2 + 0.1 * std::sin(x); });
  CHECK_THROWS_AS(pressure_coeff_K(vac, p), VacuumError);
}

TEST_CASE("density checks") {
  const auto g = SpectralGrid::create(32, 2.0 * pi);
  State s(Field::from_function(g, [](double x) { return 0.5 * std::sin(x); }), Field(g));
  auto r = check_density(s);
  CHECK(r.min_density == doctest::Approx(0.5).epsilon(1e-3));
  CHECK_FALSE(r.out_of_bounds);
  r = check_density(s, {0.6, 4.0});
  CHECK(r.out_of_bounds);
  CHECK_FALSE(r.vacuum);
  State v(Field::from_function(g, [](double x) { return -1.5 + 0.1 * std::sin(x); }), Field(g));
  CHECK(check_density(v).vacuum);

  const auto other = SpectralGrid::create(32, 2.0 * pi);
  CHECK_THROWS_AS(State(Field(g), Field(other)), ParameterError);
}

TEST_CASE("nonlinear right-hand side structure") {
  const auto g = SpectralGrid::create(64, 20.0);
  const ModelParams p = params();
  const auto zero = State::zero(g);
  const auto rz = nonlinear_rhs(zero, p);
  CHECK(rz.da_dt.l2_norm() == 0.0);
  CHECK(rz.du_dt.l2_norm() == 0.0);

  State s(Field::from_function(g, [](double x) { return 0.1 * std::exp(-(x - 10) * (x - 10) / 4); }),
          Field::from_function(g, [](double x) { return 0.05 * std::sin(2 * pi * x / 20); }));
  const auto r = nonlinear_rhs(s, p);
  CHECK(r.da_dt[0] == Complex(0.0, 0.0));
}

TEST_CASE("conservative remainder agrees with the primitive form") {
  // m_t computed from (a_t, u_t) of the primitive system must equal
  // -Lambda^{2 beta} m - gamma a_x + R(a, m) of the conservative system.
  const auto g = SpectralGrid::create(256, 40.0);
  const ModelParams p = params(0.6, 1.4);
  auto bump = [](double amp, double c) {
    return [amp, c](double x) { return amp * std::exp(-(x - c) * (x - c) / 8); };
  };
  const State s(Field::from_function(g, bump(0.02, 20)), Field::from_function(g, bump(0.015, 18)));
  const auto rhs = nonlinear_rhs(s, p);
  const auto ap = s.a.physical();
  const auto up = s.u.physical();
  const auto at = rhs.da_dt.physical();
  const auto ut = rhs.du_dt.physical();
  std::vector<double> mt(ap.size());
  for (std::size_t j = 0; j < ap.size(); ++j) mt[j] = at[j] * up[j] + (1 + ap[j]) * ut[j];
  const auto m_t_primitive = Field::from_physical(g, mt);

  const auto m = momentum_density(s.a, s.u);
  const auto m_t_conservative =
      momentum_remainder(s.a, m, p) - fractional_laplacian(m, p.beta) - p.gamma * derivative(s.a);
  const double scale = m_t_primitive.l2_norm();
  CHECK((m_t_primitive - m_t_conservative).l2_norm() < 1e-8 * scale);
}

TEST_CASE("momentum remainder conserves the zero mode and guards density") {
  const auto g = SpectralGrid::create(64, 20.0);
  const ModelParams p = params();
  const auto a = Field::from_function(g, [](double x) { return 0.2 * std::cos(2 * pi * x / 20); });
  const auto m = Field::from_function(g, [](double x) { return 0.3 + 0.1 * std::sin(2 * pi * x / 10); });
  double umax = -1.0;
  const auto r = momentum_remainder(a, m, p, {}, &umax);
  CHECK(r[0] == Complex(0.0, 0.0));
  CHECK(r[g->nyquist_index()] == Complex(0.0, 0.0));
  CHECK(umax > 0.3);
  CHECK_THROWS_AS(momentum_remainder(a, m, p, {0.9, 1.1}), VacuumError);

  const auto u = velocity_from_momentum(a, momentum_density(a, Field::from_function(g, [](double x) {
                                                              return 0.1 * std::sin(2 * pi * x / 20);
                                                            })));
  const auto ref = Field::from_function(g, [](double x) { return 0.1 * std::sin(2 * pi * x / 20); });
  CHECK((u - ref).l2_norm() < 1e-12);
}
