#pragma once

// Norms and functionals: homogeneous Sobolev norms, the split H^sigma inner
// product, Littlewood-Paley blocks with the B^{-1/2}_{2,inf} norm, the
// energy/dissipation functionals, Fourier-splitting diagnostics and a
// Gagliardo-Nirenberg ratio checker.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hypocns/model.hpp"
#include "hypocns/spectral_core.hpp"

namespace hypocns {

/// ||Lambda^s f||_{L^2}. Negative s requires a mean-zero field.
double sobolev_norm(const Field& f, double s);
/// ||Lambda^s (a, u)||_{L^2} for the pair.
double sobolev_norm(const Field& a, const Field& u, double s);

/// <f, g>_{H^sigma} = <f, g>_{L^2} + <Lambda^sigma f, Lambda^sigma g>_{L^2}.
double hsigma_inner(const Field& f, const Field& g, double sigma);
/// ||f||^2_{H^sigma} in the same split form.
double hsigma_norm_squared(const Field& f, double sigma);

/// Smooth dyadic partition of unity built by telescoping a C-infinity cutoff chi:
///   chi = 1 on |xi| <= 3/4, chi = 0 on |xi| >= 4/3,  phi(xi) = chi(xi/2) - chi(xi),
/// so supp phi lies in the annulus 3/4 <= |xi| <= 8/3.
class LPBlocks {
 public:
  /// Blocks j with 2^j * 3/4 >= 2 pi / L and 2^j * 8/3 <= max resolved |xi|.
  explicit LPBlocks(const SpectralGrid& grid);
  LPBlocks(int j_min, int j_max);

  static double chi(double xi);
  static double phi(double xi);

  int j_min() const { return j_min_; }
  int j_max() const { return j_max_; }
  /// phi(2^{-j} xi)
  static double weight(int j, double xi);
  /// Band where the truncated telescoping sum is exactly 1.
  bool covered(double xi) const;
  double lower_cover() const;
  double upper_cover() const;

  /// Dot-Delta_j f.
  Field block(const Field& f, int j) const;

 private:
  int j_min_;
  int j_max_;
};

enum class MeanPolicy {
  kRequireZero,  ///< throw PreconditionError on a field with nonzero mean
  kIgnoreMean,   ///< evaluate anyway; the blocks never see the zero mode
};

/// max_j 2^{-j/2} ||Dot-Delta_j f||_{L^2} over the available blocks.
double besov_neg_half_norm(const Field& f, const LPBlocks& blocks,
                           MeanPolicy policy = MeanPolicy::kRequireZero);
/// Pair version: max_j 2^{-j/2} ||Dot-Delta_j (a, u)||_{L^2}.
double besov_neg_half_norm(const Field& a, const Field& u, const LPBlocks& blocks,
                           MeanPolicy policy = MeanPolicy::kRequireZero);

struct FourierSplit {
  double set_measure = 0.0;  ///< continuum measure of S(t) = {|xi|^{2 beta} <= C_2/(1+t)}
  double low_energy = 0.0;   ///< ||(a, u)||^2 restricted to grid modes in S(t)
};

FourierSplit fourier_split_low_energy(const State& state, double t, const ModelParams& params);

struct GnReport {
  double theta = 0.0;
  double lhs = 0.0;  ///< ||Lambda^s f||_{L^p}
  double rhs = 0.0;  ///< ||Lambda^{s1} f||^{1-theta} ||Lambda^{s2} f||^theta
  double ratio = 0.0;
  bool flagged = false;  ///< ratio above the ceiling
};

/// Gagliardo-Nirenberg diagnostic; p may be +infinity. Throws ExponentError when
/// no theta in [0, 1] solves s + 1/2 - 1/p = (1 - theta) s1 + theta s2.
GnReport gn_check(const Field& f, double p, double s, double s1, double s2, double ceiling = 100.0);

struct FunctionalSample {
  double time = 0.0;
  double E0 = 0.0;         ///< int (2 G(rho) + rho u^2)
  double E_s = 0.0;        ///< ||(sqrt(gamma) a, u)||^2_{Hdot^s}
  double script_E0 = 0.0;
  double script_D0 = 0.0;
  double script_E1 = 0.0;
  double script_D1 = 0.0;
  std::map<double, double> sobolev_norms;  ///< s1 -> ||Lambda^{s1}(a, u)||_{L^2}
  double besov_neg_half = 0.0;
  double low_freq_energy = 0.0;
  double mean_a = 0.0;
  double momentum = 0.0;  ///< int rho u
  double min_density = 1.0;
  double viscous_dissipation = 0.0;  ///< ||Lambda^beta u||^2_{L^2}

  double sobolev(double s1) const;
  /// Physical energy int (G(rho) + rho u^2 / 2) = E0 / 2.
  double physical_energy() const { return 0.5 * E0; }
};

/// Evaluates every functional of a state. Holds the LP blocks for one grid.
class FunctionalSuite {
 public:
  FunctionalSuite(const GridPtr& grid, ModelParams params, std::vector<double> requested_s1);
  FunctionalSample operator()(const State& state) const;

  const ModelParams& params() const { return params_; }
  const LPBlocks& blocks() const { return blocks_; }
  const std::vector<double>& requested_s1() const { return requested_s1_; }

 private:
  ModelParams params_;
  std::vector<double> requested_s1_;
  LPBlocks blocks_;
};

FunctionalSample functional_suite(const State& state, const ModelParams& params,
                                  const std::vector<double>& requested_s1);

/// int (2 G(rho) + rho u^2) dx.
double energy_E0(const State& state, double gamma);

/// ||(a, u)||^2_{H^s} = ||(a,u)||^2_{L^2} + ||Lambda^s (a,u)||^2_{L^2}.
double pair_hs_norm_squared(const State& state, double s);

}  // namespace hypocns
