#include <doctest.h>

#include "bgw/convergence.hpp"

using namespace bgw;

namespace {

StudyOptions small_options(std::uint64_t seed) {
  StudyOptions o;
  o.ladder = {16, 64};
  o.paths = 60;
  o.seed = seed;
  o.sde.dt = 1e-2;
  o.bootstrap_reps = 20;
  return o;
}

FamilyBuilder survival(double alpha, JumpMeasure mu) {
  return [alpha, mu](std::int64_t N) {
    return build_survival_sexual(alpha, mu, 0.5, 0.2, 0.2, N, static_cast<double>(N));
  };
}

}  // namespace

TEST_SUITE("convergence") {
  TEST_CASE("a female-free start keeps the female marginal at zero") {
    auto mu = JumpMeasure::atom(1, 1);
    auto rep = run_study(survival(1.0, mu), survival_sexual_limit(1.0, mu, 0.5, 0.2, 0.2), {0.0, 1.0},
                         {0.5, 1.0}, small_options(2));
    for (const auto& d : rep.distances) {
      if (d.statistic == Statistic::kF) CHECK(d.w1 == 0.0);
    }
    for (const auto& m : rep.moments) {
      if (m.statistic == Statistic::kF) {
        CHECK(m.stats.mean == 0.0);
        CHECK(m.stats.variance == 0.0);
      }
    }
    CHECK(rep.ladder == std::vector<std::int64_t>{16, 64});
  }

  TEST_CASE("report shape") {
    auto mu = JumpMeasure::atom(1, 1);
    auto rep = run_study(survival(1.0, mu), survival_sexual_limit(1.0, mu, 0.5, 0.2, 0.2), {1.0, 1.0},
                         {0.5, 1.0}, small_options(3));
    // 2 times x 3 statistics x (2 chain levels + 1 SDE)
    CHECK(rep.moments.size() == 18);
    CHECK(rep.distances.size() == 12);
    CHECK(rep.trends.size() == 6);
    CHECK(rep.headline.size() == 6);
    for (const auto& t : rep.trends) CHECK(t.w1.size() == 2);
    for (const auto& d : rep.distances) {
      // percentile intervals of a biased statistic need not cover the estimate
      CHECK(d.ci.lo >= 0.0);
      CHECK(d.ci.lo <= d.ci.hi);
    }
  }

  TEST_CASE("studies are deterministic in the seed") {
    auto mu = JumpMeasure::atom(1, 1);
    auto lim = survival_sexual_limit(1.0, mu, 0.5, 0.2, 0.2);
    auto a = run_study(survival(1.0, mu), lim, {1.0, 1.0}, {1.0}, small_options(7));
    auto b = run_study(survival(1.0, mu), lim, {1.0, 1.0}, {1.0}, small_options(7));
    REQUIRE(a.distances.size() == b.distances.size());
    for (std::size_t k = 0; k < a.distances.size(); ++k) CHECK(a.distances[k].w1 == b.distances[k].w1);
    for (std::size_t k = 0; k < a.moments.size(); ++k) CHECK(a.moments[k].stats.mean == b.moments[k].stats.mean);
  }

  TEST_CASE("replacement study runs on the finite-atom preset") {
    ReplacementSpec spec;
    spec.death_f = 1.0;
    spec.death_m = 0.25;
    spec.nu_f = spec.nu_m = JumpMeasure::atom(0.5, 1.0);
    auto rep = replacement_study(spec, {1.0, 1.0}, {1.0}, small_options(11));
    CHECK(rep.headline.size() == 3);
    for (const auto& h : rep.headline) CHECK(h.tolerance >= 4 * h.joint_se);
  }
}
