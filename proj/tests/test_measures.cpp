#include <doctest.h>

#include <chrono>
#include <cmath>
#include <random>

#include "bgw/conditions.hpp"
#include "bgw/errors.hpp"
#include "bgw/measure.hpp"
#include "bgw/quadrature.hpp"
#include "bgw/sampler.hpp"
#include "bgw/truncation.hpp"
#include "oracles.hpp"

using namespace bgw;

namespace {

double sq(double u) { return u * u; }

JumpMeasure random_measure(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(0.1, 3.0);
  std::vector<Atom> atoms;
  int na = static_cast<int>(gen() % 3);
  for (int k = 0; k < na; ++k) atoms.push_back({u(gen), u(gen)});
  std::vector<DensityPart> parts;
  if (gen() % 2) parts.push_back(DensityPart::power(u(gen), -1.0 - 0.9 * std::uniform_real_distribution<double>(0, 1)(gen), 0.0, 1.0));
  if (gen() % 2) parts.push_back(DensityPart::power(u(gen), -2.5, 1.0, kInf));
  return JumpMeasure(atoms, parts);
}

}  // namespace

TEST_SUITE("measures") {
  TEST_CASE("integrate: documented examples") {
    CHECK(JumpMeasure::atom(1.0, 1.0).integrate(sq) == 1.0);
    auto d = JumpMeasure::density(DensityPart::power(1.0, -2.0, 0.0, 1.0));
    CHECK(d.integrate(sq) == doctest::Approx(1.0).epsilon(1e-8));
    auto h = TruncationFunction::clamp();
    CHECK(JumpMeasure::atom(2.0, 1.0).integrate([&](double u) { return sq(h(u)); }) == 1.0);
    CHECK(integrate(d, sq) == doctest::Approx(1.0).epsilon(1e-8));
  }

  TEST_CASE("quadrature: singular endpoints, infinite ranges and divergence") {
    CHECK(integrate_interval([](double u) { return 1.0 / std::sqrt(u); }, 0.0, 1.0) ==
          doctest::Approx(2.0).epsilon(1e-8));
    CHECK(integrate_interval([](double u) { return std::exp(-u); }, 0.0, kInf) ==
          doctest::Approx(1.0).epsilon(1e-8));
    CHECK(integrate_interval([](double u) { return 1.0 / (u * u); }, 1.0, kInf) ==
          doctest::Approx(1.0).epsilon(1e-8));
    CHECK_THROWS_AS(integrate_interval([](double u) { return 1.0 / u; }, 0.0, 1.0), Error);
    CHECK_THROWS_AS(integrate_interval([](double u) { return 1.0 / u; }, 1.0, kInf), Error);
  }

  TEST_CASE("construction rejects invalid measures") {
    CHECK_THROWS_AS(JumpMeasure::atom(0.0, 1.0), Error);
    CHECK_THROWS_AS(JumpMeasure::atom(1.0, -1.0), Error);
    CHECK_THROWS_AS(JumpMeasure::density(DensityPart::power(1.0, -3.0, 0.0, 1.0)), Error);
    CHECK_THROWS_AS(JumpMeasure::density(DensityPart::custom([](double) { return -1.0; }, 0.5, 1.0)), Error);
    CHECK_NOTHROW(JumpMeasure::density(DensityPart::power(1.0, -3.0, 0.0, 1.0), Validation::kSkip));
  }

  TEST_CASE("additivity of integrals") {
    std::mt19937_64 gen(5);
    auto phi = [](double u) { return std::min(u * u, 1.0); };
    for (int k = 0; k < 30; ++k) {
      JumpMeasure a = random_measure(gen), b = random_measure(gen);
      double lhs = (a + b).integrate(phi);
      double rhs = a.integrate(phi) + b.integrate(phi);
      CHECK(std::fabs(lhs - rhs) <= 2e-8 * std::max(1.0, std::fabs(rhs)));
    }
  }

  TEST_CASE("tail, restriction, scaling") {
    auto d = JumpMeasure::density(DensityPart::power(1.0, -2.0, 1.0, kInf));
    CHECK(d.tail(2.0) == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(d.restricted({1.0, 4.0, false}).total_mass() == doctest::Approx(0.75).epsilon(1e-8));
    // image of u^-2 du on (1, inf) under u -> 2u is 2 w^-2 dw on (2, inf)
    CHECK(d.scaled(2.0).tail(4.0) == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(JumpMeasure::atom(1.0, 3.0).scaled(0.5).integrate([](double u) { return u; }) == 1.5);
  }

  TEST_CASE("combine_nu examples and mass identity") {
    auto q = 0.5;
    auto lin = [](double a, double b) { return a + b; };
    CHECK(combine_nu(JumpMeasure::atom(1, 1), {}, {}).integrate(lin) == 1.0);
    auto img = JointJumpMeasure::sex_split_image(JumpMeasure::atom(1, 1), q);
    CHECK(combine_nu({}, {}, img).integrate(lin) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(combine_nu({}, {}, {}).is_zero());

    auto nf = JumpMeasure::density(DensityPart::power(0.7, -1.5, 0.0, 2.0));
    auto nm = JumpMeasure::atom(0.3, 2.0);
    auto ns = JointJumpMeasure::sex_split_image(JumpMeasure::density(DensityPart::power(1.0, -2.5, 0.5, kInf)), 0.3);
    auto phi = [](double a, double b) { return std::min(1.0, a * a + b * b) * (1.0 + std::sin(a + 2 * b)); };
    double lhs = combine_nu(nf, nm, ns).integrate(phi);
    double rhs = nf.integrate([&](double u) { return phi(u, 0); }) + nm.integrate([&](double u) { return phi(0, u); }) +
                 ns.integrate(phi);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
  }

  TEST_CASE("curve image matches the push-forward of mu") {
    auto mu = JumpMeasure::density(DensityPart::power(2.0, -1.5, 0.0, 3.0));
    auto img = JointJumpMeasure::sex_split_image(mu, 0.25);
    auto f = [](double a, double b) { return std::min(1.0, a * a + b * b); };
    double direct = mu.integrate([&](double u) { return f(0.25 * u, 0.75 * u); });
    CHECK(img.integrate(f) == doctest::Approx(direct).epsilon(1e-8));
    auto proj = img.projection(Axis::kSecond);
    CHECK(proj.integrate([](double u) { return std::min(u * u, 1.0); }) ==
          doctest::Approx(mu.integrate([](double u) { return std::min(0.5625 * u * u, 1.0); })).epsilon(1e-8));
  }

  TEST_CASE("box split of a joint measure") {
    auto ns = JointJumpMeasure::sex_split_image(JumpMeasure::density(DensityPart::power(1.0, -2.0, 0.0, 1.0)), 0.5);
    auto f = [](double a, double b) { return a * a + b * b; };
    double all = ns.integrate(f);
    double in = ns.inside_box(0.1).integrate(f);
    double out = ns.outside_box(0.1).integrate(f);
    CHECK(in + out == doctest::Approx(all).epsilon(1e-8));
    // max(u/2, u/2) <= 0.1 iff u <= 0.2: int_0^0.2 (u^2/2) u^-2 du = 0.1
    CHECK(in == doctest::Approx(0.1).epsilon(1e-8));
  }

  TEST_CASE("sampler reproduces the normalised measure") {
    auto mu = JumpMeasure(std::vector<Atom>{{3.0, 0.5}}, {DensityPart::power(1.0, -2.0, 1.0, kInf)});
    MeasureSampler s(mu, {1.0, kInf, false});
    CHECK(s.mass() == doctest::Approx(1.5).epsilon(1e-8));
    Rng rng(3);
    const int n = 200000;
    int atom = 0, above2 = 0;
    for (int k = 0; k < n; ++k) {
      double u = s.draw(rng);
      atom += (u == 3.0);
      above2 += (u >= 2.0 && u != 3.0);
    }
    // P(atom) = 1/3, P(density part >= 2) = 0.5 / 1.5
    double pa = 1.0 / 3.0, pb = 1.0 / 3.0;
    CHECK(std::fabs(atom / double(n) - pa) < 4 * std::sqrt(pa * (1 - pa) / n));
    CHECK(std::fabs(above2 / double(n) - pb) < 4 * std::sqrt(pb * (1 - pb) / n));
  }

  TEST_CASE("sampler rejects infinite mass") {
    auto d = JumpMeasure::density(DensityPart::power(1.0, -2.0, 0.0, 1.0));
    CHECK_THROWS_AS(MeasureSampler(d, Interval::positive()), Error);
    CHECK_NOTHROW(MeasureSampler(d, {0.01, kInf, false}));
  }
}

TEST_SUITE("conditions") {
  TEST_CASE("check_F0") {
    CHECK(check_F0(JumpMeasure::density(DensityPart::power(1.0, -2.0, 0.0, 1.0))).satisfied());
    CHECK(check_F0(JumpMeasure::density(DensityPart::power(1.0, -3.0, 0.0, 1.0), Validation::kSkip)).status ==
          Status::kViolated);
    CHECK(check_F0(JumpMeasure(std::vector<Atom>{{1, 2}, {5, 1}}, {})).satisfied());
  }

  TEST_CASE("check_first_moment") {
    auto nu = combine_nu({}, {}, JointJumpMeasure::sex_split_image(JumpMeasure::atom(1, 1), 0.5));
    CHECK(check_first_moment(nu).satisfied());
    auto small = JointJumpMeasure::curve(JumpMeasure::density(DensityPart::power(1.0, -2.0, 0.0, 1.0)), 1.0, 1.0);
    // int 1 ^ (u1 + u2) diverges at 0; int (u1^2 + u2^2) ^ (u1 + u2) does not
    auto v_small = check_first_moment(small);
    CHECK(v_small.status == Status::kViolated);
    CHECK_FALSE(v_small.finite_before_explosion.value());
    CHECK(v_small.no_explosion.value());
    auto large = JointJumpMeasure::curve(JumpMeasure::density(DensityPart::power(1.0, -2.0, 1.0, kInf)), 1.0, 1.0);
    auto v_large = check_first_moment(large);
    CHECK(v_large.status == Status::kViolated);
    CHECK(v_large.finite_before_explosion.value());
    CHECK_FALSE(v_large.no_explosion.value());
    CHECK(check_first_moment(JointJumpMeasure::zero()).satisfied());
  }

  TEST_CASE("check_F6 on the worked examples, each under a second") {
    using clock = std::chrono::steady_clock;
    auto t0 = clock::now();
    auto v = check_F6(JumpMeasure::density(DensityPart::power(1.0, -2.0, 0.0, 1.0)));
    CHECK(v.status == Status::kSatisfied);
    CHECK(v.rule == "R2");
    CHECK(std::chrono::duration<double>(clock::now() - t0).count() < 1.0);

    t0 = clock::now();
    auto w = check_F6(JumpMeasure::density(DensityPart::log_power(1.0, -2.0, 0.0, 0.5)));
    CHECK(w.status == Status::kViolated);
    CHECK(std::chrono::duration<double>(clock::now() - t0).count() < 1.0);

    auto custom = JumpMeasure::density(
        DensityPart::custom([](double z) { return -std::log(z) / (z * z); }, 0.0, 0.5, {}, "neglog"));
    CHECK(check_F6(custom).status == Status::kViolated);

    auto a = check_F6(JumpMeasure::atom(1.0, 5.0));
    CHECK(a.status == Status::kSatisfied);
    CHECK(a.rule == "R1");
  }

  TEST_CASE("check_F6 scan estimand is nonnegative") {
    for (auto m : {JumpMeasure::density(DensityPart::power(1.0, -2.0, 0.0, 1.0)),
                   JumpMeasure::density(DensityPart::log_power(1.0, -2.0, 0.0, 0.5))}) {
      auto v = check_F6(m);
      for (double w : v.witness) CHECK(w >= 0.0);
    }
  }

  TEST_CASE("check_F6 R1 fires for every finite-first-moment measure") {
    std::mt19937_64 gen(17);
    for (int k = 0; k < 25; ++k) {
      JumpMeasure m = random_measure(gen);  // exponents > -2 near 0
      auto v = check_F6(m);
      CHECK(v.status == Status::kSatisfied);
      CHECK(v.rule == "R1");
    }
  }

  TEST_CASE("check_F6_sum") {
    auto d2 = JumpMeasure::density(DensityPart::power(1.0, -2.0, 0.0, 1.0));
    auto s = check_F6_sum(d2, JumpMeasure::atom(2.0, 1.0));
    CHECK(s.status == Status::kSatisfied);
    CHECK(s.rule.find("sum+") != std::string::npos);
    CHECK(check_F6_sum(JumpMeasure::zero(), JumpMeasure::zero()).satisfied());
    auto neglog = JumpMeasure::density(DensityPart::log_power(1.0, -2.0, 0.0, 0.5));
    CHECK(check_F6_sum(neglog, JumpMeasure::zero()).status == Status::kViolated);
  }

  TEST_CASE("check_F6 rejects a malformed grid") {
    F6Options o;
    o.scan_grid = {0.5, 0.7};
    CHECK_THROWS_AS(check_F6(JumpMeasure::density(DensityPart::power(1.0, -2.0, 0.0, 1.0)), o), Error);
  }
}
