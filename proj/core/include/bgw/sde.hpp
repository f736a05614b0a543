#pragma once

// Two-dimensional jump diffusion
//
//   dZ = b(Z) dt + sum_k sqrt(v_k(Z)) (c_k1, c_k2) dW^k
//        + sum_d p_d(Z-) [ int h(u) 1_{theta <= kappa_d(Z-)} Ntilde_d + int (u - h(u)) 1_{...} N_d ]
//
// with independent scalar Brownian drivers W^k and jump drivers d whose
// point measures have intensity ds dtheta nu_d(du) on [0, inf)^2. The
// general coupled system (one axis-aligned driver per coordinate) and the
// two-sex limit system are both expressed in this form.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bgw/conditions.hpp"
#include "bgw/limit_params.hpp"
#include "bgw/measure.hpp"
#include "bgw/path.hpp"
#include "bgw/rng.hpp"
#include "bgw/sampler.hpp"
#include "bgw/truncation.hpp"

namespace bgw {

using Coefficient = std::function<double(double, double)>;

struct DiffusionDriver {
  Coefficient variance;
  double c1 = 0.0;
  double c2 = 0.0;
};

struct JumpDriver {
  Coefficient rate;
  Coefficient scale;
  JointJumpMeasure measure;
};

/// Coefficients of the general coupled system in its own notation: drift
/// b_i, diffusion square l_i, jump rate kappa_i, jump scale p_i and jump
/// measure lambda_i driving coordinate i.
struct GeneralCoefficients {
  std::array<Coefficient, 2> b;
  std::array<Coefficient, 2> ell;
  std::array<Coefficient, 2> kappa;
  std::array<Coefficient, 2> p;
  std::array<JumpMeasure, 2> lambda;
};

struct JumpSdeSystem {
  std::array<Coefficient, 2> drift;
  std::vector<DiffusionDriver> diffusions;
  std::vector<JumpDriver> jumps;
  TruncationFunction h = TruncationFunction::clamp();
  double L_growth = 0.0;
  double A_growth = 0.0;
  /// Lower-triangular-by-columns factor of the mating noise, row major;
  /// identity for the general system.
  std::array<double, 4> brownian_factor{1.0, 0.0, 0.0, 1.0};
  std::optional<GeneralCoefficients> general;
  std::optional<LimitSystemParams> limit;

  /// Diffusion square of coordinate i: sum_k v_k c_ki^2.
  double ell(int i, double x, double y) const;
};

/// Factor M = [[sqrt(sf^2 - sfm^4 / sm^2), sfm^2 / sm], [0, sm]] with
/// M M^T = [[sf^2, sfm^2], [sfm^2, sm^2]]. kDegenerateCovariance when sm = 0
/// and sfm > 0; kConstraint when sf^2 sm^2 < sfm^4.
std::array<double, 4> correlation_factor(double sigma_f_S, double sigma_m_S, double sigma_fm_S);

/// Maps the limit system onto drivers: solo diffusions sqrt(sigma^2 x),
/// mating diffusions sqrt(g) through the correlation factor, solo jumps at
/// rate = own coordinate, mating jumps at rate g, drift alpha x + alpha^S g.
/// Growth constants come from the coefficients and g's domination constants.
JumpSdeSystem build_limit_system(const LimitSystemParams& params);

/// General system from its coefficient functions. L_growth and A_growth are
/// taken as given; `detect_uniqueness_regime` tests them on a grid.
JumpSdeSystem make_general_system(GeneralCoefficients coefficients,
                                  const TruncationFunction& h, double L_growth, double A_growth);

/// Coefficients from expressions in (x, y).
GeneralCoefficients general_from_expressions(const std::array<std::string, 2>& b,
                                             const std::array<std::string, 2>& ell,
                                             const std::array<std::string, 2>& kappa,
                                             const std::array<std::string, 2>& p,
                                             std::array<JumpMeasure, 2> lambda);

enum class SmallJumpMode { kGaussianCorrect, kCompensateDrop };

struct IntegrateOptions {
  double dt = 1e-3;
  /// Jumps with max(u1, u2) <= epsilon are small; must not exceed the
  /// agreement radius of h.
  double epsilon = 1e-3;
  SmallJumpMode small_jumps = SmallJumpMode::kGaussianCorrect;
  double explosion_ceiling = 1e9;
};

/// Euler scheme with exact Poisson counts for the large jumps at frozen
/// coefficients. Per-driver samplers and compensators are built once.
class SdeIntegrator {
 public:
  /// kParameter when a driver has infinitely many large jumps or epsilon is
  /// outside (0, agreement radius].
  SdeIntegrator(JumpSdeSystem system, IntegrateOptions options = {});

  /// States at each record time (steps are shortened to land on them).
  /// A coordinate that reaches 0 stays 0. Crossing the explosion ceiling
  /// sets exploded_at and ends the path.
  Path integrate(std::array<double, 2> z0, double horizon, const std::vector<double>& record_times,
                 Rng& rng) const;

  const JumpSdeSystem& system() const noexcept { return system_; }
  const IntegrateOptions& options() const noexcept { return options_; }

 private:
  struct Prepared {
    JointSampler large;
    std::array<double, 2> compensator{};  // int_{large} h(u_c) dnu
    std::array<double, 3> small_chol{};   // Cholesky of int_{small} u u^T dnu: l11, l21, l22
  };
  JumpSdeSystem system_;
  IntegrateOptions options_;
  std::vector<Prepared> prepared_;
};

Path integrate(const JumpSdeSystem& system, std::array<double, 2> z0, double horizon,
               const std::vector<double>& record_times, const IntegrateOptions& options, Rng& rng);

/// Paths 0..num_paths-1, path i driven by stream_for(seed, i).
std::vector<Path> simulate_sde_ensemble(const SdeIntegrator& integrator, std::array<double, 2> z0,
                                        double horizon, const std::vector<double>& record_times,
                                        std::size_t num_paths, std::uint64_t seed,
                                        unsigned threads = 1);

struct AprioriReport {
  double a = 0.0;
  double L = 0.0;
  double A = 0.0;
  double mc_mean = 0.0;
  double standard_error = 0.0;
  double bound = 0.0;
  /// Supremum estimate with a configurable BDG constant; advisory only.
  double sup_bound_advisory = 0.0;
  bool pass = false;
};

/// E(X_t + Y_t) <= (x0 + y0 + a A t) e^{a L t}, a = 2 + int |u - h(u)| over
/// every jump driver and coordinate. kPrecondition when int (u^2 ^ u) is
/// infinite. Passes iff mc_mean <= bound + 4 SE.
AprioriReport check_apriori_bound(const SdeIntegrator& integrator, std::array<double, 2> z0,
                                  double t, std::size_t num_paths, std::uint64_t seed,
                                  unsigned threads = 1, double bdg_constant = 6.0);

}  // namespace bgw
