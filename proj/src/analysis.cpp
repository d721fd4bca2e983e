#include "hypocns/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hypocns/errors.hpp"

namespace hypocns {

namespace {

// L * sum_k w_k |xi_k|^{2s} |c_k|^2, the squared L^2 norm of Lambda^s f.
double riesz_energy(const Field& f, double s) {
  const auto& grid = f.grid_ref();
  const auto xi = grid.wavenumbers();
  const double two_s = 2.0 * s;
  double sum = 0.0;
  for (std::size_t k = 0; k < xi.size(); ++k) {
    sum += grid.mode_weight(k) * radial_symbol(xi[k], two_s) * std::norm(f[k]);
  }
  return grid.domain_length() * sum;
}

// Smooth step from 0 (r <= 0) to 1 (r >= 1).
double smooth_step(double r) {
  if (r <= 0.0) return 0.0;
  if (r >= 1.0) return 1.0;
  const double left = std::exp(-1.0 / r);
  const double right = std::exp(-1.0 / (1.0 - r));
  return left / (left + right);
}

}  // namespace

double sobolev_norm(const Field& f, double s) {
  if (s < 0.0 && !f.is_mean_zero()) {
    throw DegenerateInputError("negative-order Sobolev norm of a field with nonzero mean");
  }
  return std::sqrt(riesz_energy(f, s));
}

double sobolev_norm(const Field& a, const Field& u, double s) {
  if (s < 0.0 && !(a.is_mean_zero() && u.is_mean_zero())) {
    throw DegenerateInputError("negative-order Sobolev norm of a field with nonzero mean");
  }
  return std::sqrt(riesz_energy(a, s) + riesz_energy(u, s));
}

double hsigma_inner(const Field& f, const Field& g, double sigma) {
  const auto& grid = f.grid_ref();
  const auto xi = grid.wavenumbers();
  const double two_sigma = 2.0 * sigma;
  double sum = 0.0;
  for (std::size_t k = 0; k < xi.size(); ++k) {
    const double weight = 1.0 + radial_symbol(xi[k], two_sigma);
    sum += grid.mode_weight(k) * weight * (std::conj(f[k]) * g[k]).real();
  }
  return grid.domain_length() * sum;
}

double hsigma_norm_squared(const Field& f, double sigma) { return hsigma_inner(f, f, sigma); }

// ---------------------------------------------------------------------------
// Littlewood-Paley blocks

LPBlocks::LPBlocks(const SpectralGrid& grid) {
  const double lowest = grid.fundamental();
  const double highest = grid.max_wavenumber();
  j_min_ = static_cast<int>(std::ceil(std::log2(lowest / 0.75) - 1e-12));
  j_max_ = static_cast<int>(std::floor(std::log2(highest / (8.0 / 3.0)) + 1e-12));
  if (j_min_ > j_max_) throw ParameterError("grid too coarse for any Littlewood-Paley block");
}

LPBlocks::LPBlocks(int j_min, int j_max) : j_min_(j_min), j_max_(j_max) {
  if (j_min > j_max) throw ParameterError("empty Littlewood-Paley range");
}

double LPBlocks::chi(double xi) {
  constexpr double kInner = 0.75;
  constexpr double kOuter = 4.0 / 3.0;
  return smooth_step((kOuter - std::abs(xi)) / (kOuter - kInner));
}

double LPBlocks::phi(double xi) { return chi(0.5 * xi) - chi(xi); }

double LPBlocks::weight(int j, double xi) { return phi(std::ldexp(xi, -j)); }

double LPBlocks::lower_cover() const { return std::ldexp(4.0 / 3.0, j_min_); }
double LPBlocks::upper_cover() const { return std::ldexp(0.75, j_max_ + 1); }

bool LPBlocks::covered(double xi) const {
  const double a = std::abs(xi);
  return a >= lower_cover() && a <= upper_cover();
}

Field LPBlocks::block(const Field& f, int j) const {
  return apply_radial_multiplier(f, [j](double xi) { return weight(j, xi); });
}

namespace {

double block_energy(const Field& f, int j) {
  const auto& grid = f.grid_ref();
  const auto xi = grid.wavenumbers();
  double sum = 0.0;
  for (std::size_t k = 1; k < xi.size(); ++k) {
    const double w = LPBlocks::weight(j, xi[k]);
    if (w != 0.0) sum += grid.mode_weight(k) * w * w * std::norm(f[k]);
  }
  return grid.domain_length() * sum;
}

void check_mean(const Field& f, MeanPolicy policy) {
  if (policy == MeanPolicy::kRequireZero && !f.is_mean_zero()) {
    throw PreconditionError("homogeneous Besov norm requires a mean-zero field");
  }
}

}  // namespace

double besov_neg_half_norm(const Field& f, const LPBlocks& blocks, MeanPolicy policy) {
  check_mean(f, policy);
  double best = 0.0;
  for (int j = blocks.j_min(); j <= blocks.j_max(); ++j) {
    best = std::max(best, std::ldexp(1.0, -j) * block_energy(f, j));
  }
  return std::sqrt(best);
}

double besov_neg_half_norm(const Field& a, const Field& u, const LPBlocks& blocks,
                           MeanPolicy policy) {
  check_mean(a, policy);
  check_mean(u, policy);
  double best = 0.0;
  for (int j = blocks.j_min(); j <= blocks.j_max(); ++j) {
    best = std::max(best, std::ldexp(1.0, -j) * (block_energy(a, j) + block_energy(u, j)));
  }
  return std::sqrt(best);
}

// ---------------------------------------------------------------------------

FourierSplit fourier_split_low_energy(const State& state, double t, const ModelParams& params) {
  if (t < 0.0) throw ParameterError("Fourier splitting time must be nonnegative");
  FourierSplit out;
  const double threshold = params.c2_split / (1.0 + t);
  out.set_measure = 2.0 * std::pow(threshold, 1.0 / (2.0 * params.beta));
  const auto& grid = state.a.grid_ref();
  const auto xi = grid.wavenumbers();
  double sum = 0.0;
  for (std::size_t k = 0; k < xi.size(); ++k) {
    if (radial_symbol(xi[k], 2.0 * params.beta) > threshold) break;
    sum += grid.mode_weight(k) * (std::norm(state.a[k]) + std::norm(state.u[k]));
  }
  out.low_energy = grid.domain_length() * sum;
  return out;
}

GnReport gn_check(const Field& f, double p, double s, double s1, double s2, double ceiling) {
  if (!(p >= 2.0)) throw ExponentError("Gagliardo-Nirenberg needs p >= 2");
  if (!(s >= 0.0 && s1 >= 0.0 && s1 <= s2)) {
    throw ExponentError("Gagliardo-Nirenberg needs 0 <= s, 0 <= s1 <= s2");
  }
  const double inv_p = std::isinf(p) ? 0.0 : 1.0 / p;
  const double target = s + 0.5 - inv_p;
  constexpr double kSlack = 1e-12;
  GnReport r;
  if (s2 == s1) {
    if (std::abs(target - s1) > kSlack) throw ExponentError("no theta balances the exponents");
    r.theta = 0.0;
  } else {
    r.theta = (target - s1) / (s2 - s1);
    if (r.theta < -kSlack || r.theta > 1.0 + kSlack) {
      throw ExponentError("interpolation exponent theta = " + std::to_string(r.theta) +
                          " outside [0, 1]");
    }
    r.theta = std::clamp(r.theta, 0.0, 1.0);
  }
  if (std::isinf(p) && !(r.theta > 0.0 && r.theta < 1.0 && s1 <= s)) {
    throw ExponentError("p = infinity needs 0 < theta < 1 and s1 <= s");
  }

  if (p == 2.0) {
    r.lhs = sobolev_norm(f, s);
  } else {
    const auto g = riesz_power(f, s).physical();
    if (std::isinf(p)) {
      for (double v : g) r.lhs = std::max(r.lhs, std::abs(v));
    } else {
      double sum = 0.0;
      for (double v : g) sum += std::pow(std::abs(v), p);
      r.lhs = std::pow(f.grid_ref().dx() * sum, 1.0 / p);
    }
  }
  r.rhs = std::pow(sobolev_norm(f, s1), 1.0 - r.theta) * std::pow(sobolev_norm(f, s2), r.theta);
  r.ratio = r.rhs > 0.0 ? r.lhs / r.rhs : (r.lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
  r.flagged = r.ratio > ceiling;
  return r;
}

// ---------------------------------------------------------------------------

double FunctionalSample::sobolev(double s1) const {
  const auto it = sobolev_norms.find(s1);
  if (it == sobolev_norms.end()) throw PreconditionError("Sobolev index not sampled");
  return it->second;
}

double energy_E0(const State& state, double gamma) {
  const auto a = state.a.physical();
  const auto u = state.u.physical();
  double sum = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double rho = 1.0 + a[j];
    sum += 2.0 * potential_density(rho, gamma) + rho * u[j] * u[j];
  }
  return state.a.grid_ref().dx() * sum;
}

double pair_hs_norm_squared(const State& state, double s) {
  return hsigma_norm_squared(state.a, s) + hsigma_norm_squared(state.u, s);
}

FunctionalSuite::FunctionalSuite(const GridPtr& grid, ModelParams params,
                                 std::vector<double> requested_s1)
    : params_(params), requested_s1_(std::move(requested_s1)), blocks_(*grid) {}

FunctionalSample FunctionalSuite::operator()(const State& state) const {
  const auto& p = params_;
  const double beta = p.beta;
  const double gamma = p.gamma;
  const double k = p.k_cross;
  const double s = p.s_reg;
  const double sigma = s - 2.0 * beta + 1.0;
  const Field& a = state.a;
  const Field& u = state.u;

  FunctionalSample out;
  out.time = state.time;

  const auto ap = a.physical();
  const auto up = u.physical();
  const double dx = a.grid_ref().dx();
  double e0 = 0.0;
  double mom = 0.0;
  double min_a = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < ap.size(); ++j) {
    const double rho = 1.0 + ap[j];
    if (!(rho > 0.0)) throw VacuumError("vacuum while evaluating functionals");
    e0 += 2.0 * potential_density(rho, gamma) + rho * up[j] * up[j];
    mom += rho * up[j];
    min_a = std::min(min_a, ap[j]);
  }
  out.E0 = dx * e0;
  out.momentum = dx * mom;
  out.min_density = 1.0 + min_a;
  out.mean_a = a.mean();

  out.E_s = gamma * riesz_energy(a, s) + riesz_energy(u, s);

  const Field a_x = derivative(a);
  const Field cross0_rhs = 2.0 * k * riesz_power(a_x, 2.0 * beta - 2.0);
  out.script_E0 = out.E0 + out.E_s + hsigma_inner(u, cross0_rhs, sigma);
  out.script_D0 = k * gamma * hsigma_norm_squared(riesz_power(a, beta), sigma) +
                  hsigma_norm_squared(riesz_power(u, beta), s);

  const double e1 = gamma * riesz_energy(a, 1.0) + riesz_energy(u, 1.0);
  const double e1s = gamma * riesz_energy(a, 1.0 + s) + riesz_energy(u, 1.0 + s);
  out.script_E1 = e1 + e1s + hsigma_inner(riesz_power(a_x, beta), 2.0 * k * riesz_power(u, beta), sigma);
  out.script_D1 = k * gamma * hsigma_norm_squared(riesz_power(a, 1.0 + beta), sigma) +
                  hsigma_norm_squared(riesz_power(u, 1.0 + beta), s);

  for (double s1 : requested_s1_) out.sobolev_norms[s1] = sobolev_norm(a, u, s1);
  out.besov_neg_half = besov_neg_half_norm(a, u, blocks_, MeanPolicy::kIgnoreMean);
  out.low_freq_energy = fourier_split_low_energy(state, state.time, p).low_energy;
  out.viscous_dissipation = riesz_energy(u, beta);
  return out;
}

FunctionalSample functional_suite(const State& state, const ModelParams& params,
                                  const std::vector<double>& requested_s1) {
  return FunctionalSuite(state.grid(), params, requested_s1)(state);
}

}  // namespace hypocns
