#include <doctest.h>

#include <cmath>
#include <random>

#include "bgw/chain.hpp"
#include "bgw/errors.hpp"
#include "bgw/mating.hpp"
#include "bgw/offspring.hpp"
#include "bgw/rng.hpp"
#include "oracles.hpp"

using namespace bgw;

TEST_SUITE("mating") {
  TEST_CASE("eval_limit examples and symmetry") {
    auto g = MatingFunction::min();
    CHECK(eval_limit(g, 2, 3) == 2.0);
    CHECK(eval_limit(g, 0, 5) == 0.0);
    CHECK(eval_limit(g, 4, 4) == 4.0);
    CHECK_THROWS_AS(eval_limit(g, -1, 2), Error);
    std::mt19937_64 gen(2);
    std::uniform_real_distribution<double> u(0, 30);
    for (int k = 0; k < 100; ++k) {
      double y = u(gen), z = u(gen);
      CHECK(eval_limit(g, y, z) == eval_limit(g, z, y));
    }
  }

  TEST_CASE("registered functions vanish on the axes") {
    for (const auto& g : {MatingFunction::min(), MatingFunction::expression("y*z/(1+y+z)", 1, 0),
                          MatingFunction::expression("min(y, 2*z)", 2, 0)}) {
      for (double w = 0; w <= 20; w += 0.25) {
        CHECK(g.limit(0, w) == 0.0);
        CHECK(g.limit(w, 0) == 0.0);
      }
    }
  }

  TEST_CASE("check_B1 examples") {
    std::vector<std::int64_t> Ns{8, 32, 128};
    auto exact = check_B1(MatingFunction::min(), Ns, 5.0);
    CHECK(exact.status == Status::kSatisfied);
    for (double w : exact.witness) CHECK(w == 0.0);

    auto plus_one = MatingFunction::custom([](double y, double z) { return std::min(y, z); },
                                           [](std::int64_t, std::int64_t j, std::int64_t k) { return std::min(j, k) + 1; },
                                           1, 0, "min+1");
    auto v = check_B1(plus_one, Ns, 5.0);
    CHECK(v.status == Status::kSatisfied);
    REQUIRE(v.witness.size() == Ns.size());
    for (std::size_t i = 0; i < Ns.size(); ++i) CHECK(v.witness[i] == doctest::Approx(1.0 / Ns[i]));

    auto first = MatingFunction::custom([](double y, double z) { return std::min(y, z); },
                                        [](std::int64_t, std::int64_t j, std::int64_t) { return j; }, 1, 0, "first");
    auto w = check_B1(first, Ns, 5.0);
    CHECK(w.status != Status::kSatisfied);
    // brute-force lattice sup of |j/N - min(j/N, k/N)| over [0, 5]^2 is 5
    for (double s : w.witness) CHECK(s == doctest::Approx(5.0));
  }

  TEST_CASE("check_B2_B3_B4 examples") {
    auto r = check_B2_B3_B4(MatingFunction::min(), 0.1, 10.0);
    CHECK(r.B2.satisfied());
    CHECK(r.B3.satisfied());
    CHECK(r.B4.satisfied());
    CHECK(r.b4_inf == doctest::Approx(0.1));
    CHECK(r.lipschitz_estimate == doctest::Approx(1.0).epsilon(1e-9));
    auto ratio = check_B2_B3_B4(MatingFunction::expression("y*z/(1+y+z)", 1, 0), 0.1, 10.0);
    CHECK(ratio.B2.satisfied());
    auto big = check_B2_B3_B4(MatingFunction::expression("y + z", 1, 0), 0.1, 10.0);
    CHECK(big.B2.status == Status::kViolated);
    CHECK(big.B3.status == Status::kViolated);
  }

  TEST_CASE("B4 infimum is monotone in delta") {
    auto g = MatingFunction::expression("y*z/(1+y+z)", 1, 0);
    double prev = 1e300;
    for (double d : {1.0, 0.5, 0.25, 0.125}) {
      double inf = check_B2_B3_B4(g, d, 10.0).b4_inf;
      CHECK(inf <= prev);
      prev = inf;
    }
  }

  TEST_CASE("expression prelimit is floored") {
    auto g = MatingFunction::expression("y*z/(1+y+z)", 1, 0);
    // floor(N g(j/N, k/N)) with N = 10, j = k = 10: 10 * 1/3
    CHECK(g.prelimit(10, 10, 10) == 3);
    auto p = MatingFunction::expression("min(y,z)", 1, 0, std::string("min(y,z)/2"));
    CHECK(p.prelimit(10, 5, 8) == 2);
  }
}

TEST_SUITE("chain") {
  TEST_CASE("step examples") {
    Rng rng(1);
    auto zero = OffspringLaw::constant(0);
    ScalingFamily still(10, 10, zero, zero, PairLaw::independent(zero, zero), MatingFunction::min());
    ChainState s{5, 7, 0};
    auto n = step(still, s, rng);
    CHECK(n.F == 5);
    CHECK(n.M == 7);
    CHECK(n.generation == 1);

    auto die = OffspringLaw::constant(-1);
    ScalingFamily all_die(10, 10, die, die, PairLaw::independent(zero, zero), MatingFunction::min());
    auto d = step(all_die, {3, 2, 0}, rng);
    CHECK(d.F == 0);
    CHECK(d.M == 0);

    auto fam = build_survival_sexual(0.0, JumpMeasure::zero(), 0.5, 0.0, 0.0, 100, 100);
    auto u = step(fam, {40, 60, 0}, rng);
    CHECK(u.F == 40);
    CHECK(u.M == 60);
  }

  TEST_CASE("conditional mean of one step matches linearity") {
    auto fam = build_survival_sexual(2.0, JumpMeasure::atom(1.0, 1.0), 0.4, 0.5, 0.3, 20, 20);
    ChainState s{30, 25, 0};
    double ef = fam.female_solo().mean(), lf = fam.pair().mean_f();
    double em = fam.male_solo().mean(), lm = fam.pair().mean_m();
    double target_f = 30 + 30 * ef + 25 * lf;
    double target_m = 25 + 25 * em + 25 * lm;
    Rng rng(9);
    const int n = 200000;
    double sf = 0, sf2 = 0, sm = 0, sm2 = 0;
    for (int k = 0; k < n; ++k) {
      auto x = step(fam, s, rng);
      sf += x.F;
      sf2 += double(x.F) * x.F;
      sm += x.M;
      sm2 += double(x.M) * x.M;
    }
    double mf = sf / n, mm = sm / n;
    double sef = std::sqrt((sf2 / n - mf * mf) / n), sem = std::sqrt((sm2 / n - mm * mm) / n);
    CHECK(std::fabs(mf - target_f) < 4 * sef);
    CHECK(std::fabs(mm - target_m) < 4 * sem);
  }

  TEST_CASE("replacement couples: deaths and mean increment") {
    Rng rng(4);
    auto die = OffspringLaw::constant(-1);
    auto fam = build_replacement_couples(die, die, 10, 10);
    auto s = step(fam, {6, 6, 0}, rng);
    CHECK(s.F == 0);
    CHECK(s.M == 0);

    auto tab = OffspringLaw::tabulated({-1, 0, 3}, {0.3, 0.5, 0.2});
    auto fam2 = build_replacement_couples(tab, OffspringLaw::constant(0), 10, 10);
    const int n = 100000;
    double sum = 0, sum2 = 0;
    for (int k = 0; k < n; ++k) {
      double d = double(step(fam2, {12, 9, 0}, rng).F - 12);
      sum += d;
      sum2 += d * d;
    }
    double m = sum / n, se = std::sqrt((sum2 / n - m * m) / n);
    CHECK(std::fabs(m - 9 * 0.3) < 4 * se);
  }

  TEST_CASE("counts stay nonnegative over random valid families") {
    std::mt19937_64 gen(21);
    std::uniform_real_distribution<double> u(0, 1);
    Rng rng(21);
    for (int f = 0; f < 20; ++f) {
      auto fam = build_survival_sexual(u(gen) * 3, JumpMeasure::atom(0.5 + u(gen), u(gen)), u(gen), u(gen) * 5,
                                       u(gen) * 5, 10, 10);
      ChainState s{static_cast<std::int64_t>(gen() % 30), static_cast<std::int64_t>(gen() % 30), 0};
      for (int k = 0; k < 2000; ++k) {
        s = step(fam, s, rng);
        REQUIRE(s.F >= 0);
        REQUIRE(s.M >= 0);
        if ((s.F == 0 && s.M == 0) || s.F + s.M > 100000) s = {static_cast<std::int64_t>(gen() % 30), static_cast<std::int64_t>(gen() % 30), 0};
      }
    }
  }

  TEST_CASE("F stays 0 on its axis") {
    auto fam = build_survival_sexual(1.0, JumpMeasure::atom(1.0, 1.0), 0.5, 0.2, 0.2, 50, 50);
    Rng rng(6);
    for (int k = 0; k < 200; ++k) {
      auto p = simulate_rescaled(fam, {0.0, 1.0}, 1.0, {0.25, 0.5, 1.0}, rng);
      for (const auto& z : p.states) CHECK(z[0] == 0.0);
    }
  }

  TEST_CASE("simulate_rescaled: initial record, horizon 0, determinism") {
    auto fam = build_survival_sexual(1.0, JumpMeasure::atom(1.0, 1.0), 0.5, 0.2, 0.2, 64, 64);
    Rng a(3);
    auto p = simulate_rescaled(fam, {0.37, 1.01}, 0.0, {0.0}, a);
    REQUIRE(p.states.size() == 1);
    CHECK(p.states[0][0] == std::floor(64 * 0.37) / 64);
    CHECK(p.states[0][1] == std::floor(64 * 1.01) / 64);

    auto e1 = simulate_chain_ensemble(fam, {1, 2}, 1.0, {0.0, 0.5, 1.0}, 50, 99, 1);
    auto e2 = simulate_chain_ensemble(fam, {1, 2}, 1.0, {0.0, 0.5, 1.0}, 50, 99, 3);
    for (std::size_t i = 0; i < e1.size(); ++i) {
      CHECK(e1[i].states == e2[i].states);
      CHECK(e1[i].states[0] == std::array<double, 2>{1.0, 2.0});
    }
  }

  TEST_CASE("replacement family with constant laws gives a constant path") {
    auto zero = OffspringLaw::constant(0);
    auto fam = build_replacement_couples(zero, zero, 32, 32);
    Rng rng(8);
    auto p = simulate_rescaled(fam, {1.0, 0.5}, 2.0, {0.5, 1.0, 2.0}, rng);
    for (const auto& z : p.states) CHECK(z == std::array<double, 2>{1.0, 0.5});
  }

  TEST_CASE("overflow ends the path with an explosion flag") {
    auto huge = OffspringLaw::tabulated({std::int64_t{1} << 40}, {1.0});
    auto zero = OffspringLaw::constant(0);
    ScalingFamily fam(1, 1, huge, zero, PairLaw::independent(zero, zero), MatingFunction::min());
    Rng rng(1);
    auto p = simulate_rescaled(fam, {5.0, 5.0}, 10.0, {1.0, 2.0, 5.0, 10.0}, rng);
    CHECK(p.exploded_at.has_value());
    CHECK(p.states.size() < 4);
  }
}

TEST_SUITE("chain") {
  TEST_CASE("D^N law: atom at 1 and tail identity") {
    const std::int64_t N = 50;
    const double v = 50;
    auto d = OffspringLaw::heavy_tail_DN(2.0, JumpMeasure::atom(1.0, 1.0), N, v);
    Rng rng(12);
    const int n = 1000000;
    int ones = 0, tail = 0;
    for (int k = 0; k < n; ++k) {
      auto x = d.sample(rng);
      ones += (x == 1);
      tail += (x >= N / 2);
    }
    double p1 = 2.0 / v, pt = 1.0 / (N * v);
    CHECK(std::fabs(ones / double(n) - p1) < 4 * std::sqrt(p1 * (1 - p1) / n));
    CHECK(std::fabs(tail / double(n) - pt) < 4 * std::sqrt(pt * (1 - pt) / n));
    // exact table agrees with the defining identities
    double exact1 = 0, exact_tail = 0, total = 0;
    for (auto [k, p] : d.pmf()) {
      total += p;
      if (k == 1) exact1 += p;
      if (k >= N / 2) exact_tail += p;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(exact1 == doctest::Approx(p1).epsilon(1e-14));
    CHECK(exact_tail == doctest::Approx(pt).epsilon(1e-12));
    CHECK(OffspringLaw::heavy_tail_DN(0.0, JumpMeasure::zero(), N, v).pmf().size() == 1);
  }

  TEST_CASE("sex split conserves D") {
    auto pair = PairLaw::sex_split(OffspringLaw::tabulated({0, 1, 5, 9}, {0.4, 0.3, 0.2, 0.1}), 0.3);
    Rng rng(2);
    for (int k = 0; k < 10000; ++k) {
      auto d = pair.sample(rng);
      REQUIRE(d.f + d.m == d.d);
      REQUIRE(d.f >= 0);
    }
    CHECK(pair.mean_f() == doctest::Approx(0.3 * (0.3 + 1.0 + 0.9)));
  }

  TEST_CASE("invalid probabilities are rejected") {
    CHECK_THROWS_AS(build_survival_sexual(1.0, JumpMeasure::zero(), 0.5, 2.0, 0.1, 1, 1), Error);
    CHECK_THROWS_AS(OffspringLaw::tabulated({-1, 0}, {0.5, 0.6}), Error);
    CHECK_THROWS_AS(OffspringLaw::tabulated({-2, 0}, {0.5, 0.5}), Error);
  }

  TEST_CASE("pmf sums to one for every law kind") {
    std::vector<OffspringLaw> laws{
        OffspringLaw::constant(3), OffspringLaw::bernoulli_death(0.4, 2.0),
        OffspringLaw::tabulated({-1, 2}, {0.25, 0.75}),
        OffspringLaw::triplet(1.0, 0.5, JumpMeasure::density(DensityPart::power(1.0, -2.5, 0.5, kInf)), 20, 20),
        OffspringLaw::binomial_split(OffspringLaw::tabulated({0, 4}, {0.5, 0.5}), 0.25)};
    for (const auto& l : laws) {
      INFO(l.label());
      double s = 0;
      for (auto [k, p] : l.pmf()) {
        CHECK(k >= -1);
        s += p;
      }
      INFO("deviation " << (s - 1.0));
      CHECK(std::fabs(s - 1.0) <= 1e-9);  // heavy tails enumerate millions of atoms
      CHECK(l.mgf_m1(0.0) == 0.0);
    }
  }

  TEST_CASE("verify_assumption_A: Bernoulli deaths") {
    std::vector<ScalingFamily> fams;
    for (std::int64_t N : {10, 100, 1000}) fams.push_back(build_survival_sexual(1.0, JumpMeasure::atom(1.0, 1.0), 0.5, 0.3, 0.2, N, double(N)));
    auto target = survival_sexual_limit(1.0, JumpMeasure::atom(1.0, 1.0), 0.5, 0.3, 0.2);
    auto rep = verify_assumption_A(fams, target);
    for (const auto& r : rep.rows) {
      if (r.moment == "h[Ef]") CHECK(r.estimate == doctest::Approx(-0.3).epsilon(1e-12));
      if (r.moment == "h2[Ef]") CHECK(r.estimate == doctest::Approx(0.3 / r.N).epsilon(1e-12));
    }
    CHECK(rep.all_trending);

    auto zero = OffspringLaw::constant(0);
    std::vector<ScalingFamily> zf{ScalingFamily(10, 10, zero, zero, PairLaw::independent(zero, zero), MatingFunction::min())};
    LimitSystemParams z;
    for (const auto& r : verify_assumption_A(zf, z).rows) {
      CHECK(r.estimate == 0.0);
      CHECK(r.target == 0.0);
    }
  }
}
