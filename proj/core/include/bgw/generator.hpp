#pragma once

// Generator of the exponentially transformed process X = (e^{-F}, e^{-M})
// on the monomials H_{i,j}(u1, u2) = u1^i u2^j, at x = (e^{-y}, e^{-z}).

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "bgw/chain.hpp"
#include "bgw/limit_params.hpp"
#include "bgw/quadrature.hpp"

namespace bgw {

/// Tolerance used by the generator quadratures unless overridden.
inline QuadOptions generator_quad_options() {
  QuadOptions o;
  o.rel_tol = 1e-12;
  return o;
}

/// f_k(u) = 1 - e^{-k u}.
double f_k(int k, double u);
/// f_{k,l}(u1, u2) = 1 - e^{-k u1 - l u2}.
double f_kl(int k, int l, double u1, double u2);
double binomial_coefficient(int n, int k);
/// sum_{k=0}^{i} C(i, k) (-1)^{i-k} fn(k).
double alternating_binomial_sum(int i, const std::function<double(int)>& fn);

/// alpha_f k - sigma_f^2 k^2 / 2 + int (f_k(u) - k h(u)) nu_f(du).
double gamma_f(const LimitSystemParams& p, int k, const QuadOptions& q = generator_quad_options());
double gamma_m(const LimitSystemParams& p, int l, const QuadOptions& q = generator_quad_options());
/// alpha_f^S k + alpha_m^S l - ((sigma_f^S k)^2 + (sigma_m^S l)^2) / 2 - (sigma_fm^S)^2 k l
/// + int (f_{k,l} - k h(u1) - l h(u2)) dnu_S.
double gamma_S(const LimitSystemParams& p, int k, int l,
               const QuadOptions& q = generator_quad_options());

/// Closed form of G_x(H_{i,j}) (Kronecker-delta terms plus three integrals).
/// The mating cross integrand is f_1(u1)^i f_1(u2)^j and the covariance
/// term enters as -delta_{i1} delta_{j1} (sigma_fm^S)^2 inside the bracket,
/// as the alternating-sum form requires.
double limiting_generator(const LimitSystemParams& p, int i, int j, double y, double z,
                          const QuadOptions& q = generator_quad_options());

/// -e^{-iy-jz} sum_{k,l} (-1)^{i-k+j-l} C(i,k) C(j,l) (y gamma_k^f + z gamma_l^m + g gamma_{k,l}^S).
double limiting_generator_alternating(const LimitSystemParams& p, int i, int j, double y,
                                      double z, const QuadOptions& q = generator_quad_options());

/// Exact prelimit generator v_N E[H_{i,j}(X_1 - x) | Z_0 = (F0, M0)] from the
/// law transforms, with x = (e^{-F0/N}, e^{-M0/N}).
double prelimit_generator(const ScalingFamily& family, int i, int j, std::int64_t F0,
                          std::int64_t M0);

struct GeneratorEstimate {
  int i = 0;
  int j = 0;
  double estimate = 0.0;
  double standard_error = 0.0;
  std::int64_t samples = 0;
};

/// Monte Carlo mean of v_N H_{i,j}(X_1 - x) over one-step simulations from
/// (floor(N y), floor(N z)), with x = e^{-Z_0/N}.
GeneratorEstimate empirical_generator(const ScalingFamily& family, int i, int j, double y, double z,
                                      std::int64_t num_samples, Rng& rng);

/// Same, for several (i, j) sharing the one-step samples. Samples are drawn
/// in fixed blocks, block b from stream_for(seed, b), so results do not
/// depend on the thread count.
std::vector<GeneratorEstimate> empirical_generator(const ScalingFamily& family,
                                                   const std::vector<std::pair<int, int>>& indices,
                                                   double y, double z, std::int64_t num_samples,
                                                   std::uint64_t seed, unsigned threads = 1);

}  // namespace bgw
