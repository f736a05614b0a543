#include <doctest.h>

#include <cmath>
#include <random>

#include "bgw/errors.hpp"
#include "bgw/generator.hpp"
#include "oracles.hpp"
#include "random_params.hpp"

using namespace bgw;
using testing_params::random_params;

TEST_SUITE("generator") {
  TEST_CASE("gamma constants: documented values") {
    LimitSystemParams p;
    CHECK(gamma_f(p, 0) == 0.0);
    p.alpha_f = 1;
    CHECK(gamma_f(p, 1) == 1.0);
    LimitSystemParams q;
    q.sigma_f = 1;
    q.nu_f = JumpMeasure::atom(1, 1);
    CHECK(gamma_f(q, 2) == doctest::Approx(-2 + (1 - std::exp(-2.0)) - 2).epsilon(1e-10));
    LimitSystemParams m;
    m.sigma_m = 1;
    m.nu_m = JumpMeasure::atom(1, 1);
    CHECK(gamma_m(m, 0) == 0.0);
    CHECK(gamma_m(m, 2) == doctest::Approx(-2 + (1 - std::exp(-2.0)) - 2).epsilon(1e-10));

    LimitSystemParams s;
    CHECK(gamma_S(s, 0, 0) == 0.0);
    s.alpha_f_S = 2;
    CHECK(gamma_S(s, 1, 0) == 2.0);
    LimitSystemParams c;
    c.sigma_f_S = c.sigma_m_S = c.sigma_fm_S = 1;
    c.nu_S = JointJumpMeasure::atom(1, 1, 1);
    // the sigma_f^S, sigma_m^S terms contribute -1/2 - 1/2 on top of the documented -1
    CHECK(gamma_S(c, 1, 1) == doctest::Approx(-1 - 1 + (1 - std::exp(-2.0)) - 2).epsilon(1e-10));
    LimitSystemParams only;
    only.sigma_fm_S = 1;
    only.nu_S = JointJumpMeasure::atom(1, 1, 1);
    CHECK(gamma_S(only, 1, 1) == doctest::Approx(-1 + (1 - std::exp(-2.0)) - 2).epsilon(1e-10));
  }

  TEST_CASE("binomial identities") {
    for (int i = 0; i <= 6; ++i) {
      CHECK(alternating_binomial_sum(i, [](int) { return 1.0; }) == (i == 0 ? 1.0 : 0.0));
      CHECK(alternating_binomial_sum(i, [](int k) { return double(k); }) == (i == 1 ? 1.0 : 0.0));
      CHECK(alternating_binomial_sum(i, [](int k) { return double(k * k); }) == 2.0 * (i == 2) + (i == 1));
      if (i == 0) continue;
      for (double u = 0.0; u <= 5.0; u += 0.125) {
        double lhs = alternating_binomial_sum(i, [&](int k) { return f_k(k, u); });
        double rhs = ((i + 1) % 2 == 0 ? 1.0 : -1.0) * std::pow(f_k(1, u), i);
        CHECK(std::fabs(lhs - rhs) <= 1e-12 * std::fabs(rhs) + 1e-14);
      }
    }
    for (double a = 0; a <= 3; a += 0.25) {
      for (double b = 0; b <= 3; b += 0.25) {
        for (int k = 0; k <= 3; ++k) {
          for (int l = 0; l <= 3; ++l) {
            CHECK(f_kl(k, l, a, b) == doctest::Approx(f_k(k, a) + f_k(l, b) - f_k(k, a) * f_k(l, b)).epsilon(1e-14));
          }
        }
      }
    }
    CHECK(binomial_coefficient(6, 3) == 20.0);
    CHECK(binomial_coefficient(6, 7) == 0.0);
  }

  TEST_CASE("gamma at zero index is zero for random parameters") {
    std::mt19937_64 gen(3);
    for (int k = 0; k < 10; ++k) {
      auto p = random_params(gen);
      CHECK(gamma_f(p, 0) == 0.0);
      CHECK(gamma_m(p, 0) == 0.0);
      CHECK(gamma_S(p, 0, 0) == 0.0);
    }
  }

  TEST_CASE("limiting generator: documented values") {
    LimitSystemParams z;
    for (auto [i, j] : {std::pair{1, 0}, {0, 1}, {2, 1}, {1, 3}}) {
      CHECK(limiting_generator(z, i, j, 0.7, 1.3) == 0.0);
    }
    LimitSystemParams a;
    a.alpha_f = 1;
    for (double y : {0.3, 1.0, 2.5}) {
      CHECK(limiting_generator(a, 1, 0, y, 0.8) == doctest::Approx(-y * std::exp(-y)).epsilon(1e-14));
    }
    LimitSystemParams only;
    only.sigma_fm_S = 1;
    for (auto [y, z] : {std::pair{0.5, 0.5}, {1.0, 2.0}, {3.0, 0.25}}) {
      double expect = std::exp(-y - z) * std::min(y, z);
      CHECK(limiting_generator(only, 1, 1, y, z) == doctest::Approx(expect).epsilon(1e-14));
      CHECK(limiting_generator_alternating(only, 1, 1, y, z) == doctest::Approx(expect).epsilon(1e-14));
    }
    CHECK_THROWS_AS(limiting_generator(z, 0, 0, 1, 1), Error);
  }

  TEST_CASE("closed form equals the alternating sum for random parameters") {
    std::mt19937_64 gen(77);
    std::uniform_real_distribution<double> u(0.05, 3.0);
    int checked = 0;
    for (int draw = 0; draw < 40; ++draw) {
      auto p = random_params(gen);
      double y = u(gen), z = u(gen);
      for (int i = 0; i <= 4; ++i) {
        for (int j = 0; i + j <= 4; ++j) {
          if (i + j == 0) continue;
          double a = limiting_generator(p, i, j, y, z);
          double b = limiting_generator_alternating(p, i, j, y, z);
          CHECK(std::fabs(a - b) <= 1e-8 * std::max(std::fabs(a), std::fabs(b)) + 1e-13);
          ++checked;
        }
      }
    }
    CHECK(checked == 40 * 14);
  }

  TEST_CASE("empirical generator: zero family and death-only oracle") {
    auto zero = OffspringLaw::constant(0);
    ScalingFamily fz(64, 64, zero, zero, PairLaw::independent(zero, zero), MatingFunction::min());
    Rng rng(1);
    auto e = empirical_generator(fz, 1, 0, 0.5, 0.5, 1000, rng);
    CHECK(e.estimate == 0.0);
    CHECK(e.standard_error == 0.0);

    const long N = 100;
    ScalingFamily deaths(N, double(N), OffspringLaw::bernoulli_death(0.8, N), zero,
                         PairLaw::independent(zero, zero), MatingFunction::min());
    const double y = 0.75;
    double exact = oracle::death_only_generator_10(0.8, N, N, static_cast<long>(std::floor(N * y)));
    auto mc = empirical_generator(deaths, {{1, 0}}, y, 1.0, 200000, 5).front();
    CHECK(std::fabs(mc.estimate - exact) < 4 * mc.standard_error);
    CHECK(prelimit_generator(deaths, 1, 0, 75, 100) == doctest::Approx(exact).epsilon(1e-12));
  }

  TEST_CASE("empirical generator is independent of the thread count") {
    auto fam = build_survival_sexual(1.0, JumpMeasure::atom(1, 1), 0.5, 0.2, 0.2, 256, 256);
    auto a = empirical_generator(fam, {{1, 0}, {1, 1}}, 0.5, 0.5, 20000, 8, 1);
    auto b = empirical_generator(fam, {{1, 0}, {1, 1}}, 0.5, 0.5, 20000, 8, 4);
    for (std::size_t k = 0; k < a.size(); ++k) {
      CHECK(a[k].estimate == b[k].estimate);
      CHECK(a[k].standard_error == b[k].standard_error);
    }
  }

  TEST_CASE("exact prelimit generator tends to the limit for the survival-sexual preset") {
    auto mu = JumpMeasure::atom(1, 1);
    auto lim = survival_sexual_limit(1.0, mu, 0.5, 0.2, 0.2);
    for (auto [y, z] : {std::pair{0.5, 0.5}, {1.0, 2.0}}) {
      for (auto [i, j] : {std::pair{1, 0}, {0, 1}, {2, 0}, {0, 2}, {1, 1}}) {
        double L = limiting_generator(lim, i, j, y, z);
        double prev = 1e300;
        for (long N : {64L, 256L, 1024L, 4096L}) {
          auto fam = build_survival_sexual(1.0, mu, 0.5, 0.2, 0.2, N, double(N));
          double gap = std::fabs(prelimit_generator(fam, i, j, std::lround(N * y), std::lround(N * z)) - L);
          CHECK(gap < prev);
          prev = gap;
        }
        CHECK(prev < 1e-4);
      }
    }
  }
}
