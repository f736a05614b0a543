#include "bgw/chain.hpp"

#include <algorithm>
#include <cmath>

#include "bgw/errors.hpp"
#include "bgw/parallel.hpp"

namespace bgw {

ScalingFamily::ScalingFamily(std::int64_t N, double v_N, OffspringLaw female_solo,
                             OffspringLaw male_solo, PairLaw pair, MatingFunction mating)
    : N_(N),
      v_N_(v_N),
      female_(std::move(female_solo)),
      male_(std::move(male_solo)),
      pair_(std::move(pair)),
      mating_(std::move(mating)) {
  if (N_ < 1) throw Error(ErrorCode::kParameter, "N must be >= 1");
  if (!(v_N_ > 0.0) || !std::isfinite(v_N_)) throw Error(ErrorCode::kParameter, "v_N must be positive");
}

namespace {

std::int64_t checked_count(std::int64_t base, std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_add_overflow(base, a, &out) || __builtin_add_overflow(out, b, &out) ||
      out > kCountCeiling) {
    throw Error(ErrorCode::kOverflow, "population count exceeds 2^62");
  }
  return std::max<std::int64_t>(out, 0);
}

}  // namespace

ChainState step(const ScalingFamily& family, const ChainState& state, Rng& rng) {
  std::int64_t df = family.female_solo().sample_sum(state.F, rng);
  std::int64_t dm = family.male_solo().sample_sum(state.M, rng);
  std::int64_t pairs = std::max<std::int64_t>(0, family.mating().prelimit(family.N(), state.F, state.M));
  auto [lf, lm] = family.pair().sample_sum(pairs, rng);
  ChainState next;
  next.F = checked_count(state.F, df, lf);
  next.M = checked_count(state.M, dm, lm);
  next.generation = state.generation + 1;
  return next;
}

Path simulate_rescaled(const ScalingFamily& family, std::array<double, 2> z0, double horizon,
                       const std::vector<double>& record_times, Rng& rng) {
  if (!(horizon >= 0.0)) throw Error(ErrorCode::kParameter, "horizon must be >= 0");
  if (!(z0[0] >= 0.0) || !(z0[1] >= 0.0)) throw Error(ErrorCode::kParameter, "z0 must be >= 0");
  const double v = family.v_N();
  const double n = static_cast<double>(family.N());
  std::vector<std::int64_t> record_gen;
  for (double t : record_times) {
    if (t < 0.0 || t > horizon * (1.0 + 1e-12)) {
      throw Error(ErrorCode::kParameter, "record times must lie in [0, horizon]");
    }
    record_gen.push_back(static_cast<std::int64_t>(std::floor(v * t + 1e-9)));
  }
  const auto total = static_cast<std::int64_t>(std::ceil(v * horizon - 1e-9));

  Path path;
  ChainState s;
  s.F = static_cast<std::int64_t>(std::floor(n * z0[0]));
  s.M = static_cast<std::int64_t>(std::floor(n * z0[1]));
  std::size_t r = 0;
  auto record = [&](std::int64_t gen) {
    while (r < record_gen.size() && record_gen[r] <= gen) {
      path.times.push_back(record_times[r]);
      path.states.push_back({static_cast<double>(s.F) / n, static_cast<double>(s.M) / n});
      ++r;
    }
  };
  for (std::int64_t gen = 0;; ++gen) {
    if (s.F == 0 && s.M == 0 && !path.absorbed_at) path.absorbed_at = static_cast<double>(gen) / v;
    record(gen);
    if (gen >= total || r == record_gen.size()) break;
    if (path.absorbed_at) {
      record(INT64_MAX);
      break;
    }
    try {
      s = step(family, s, rng);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kOverflow) throw;
      path.exploded_at = static_cast<double>(gen + 1) / v;
      break;
    }
  }
  return path;
}

std::vector<Path> simulate_chain_ensemble(const ScalingFamily& family, std::array<double, 2> z0,
                                          double horizon, const std::vector<double>& record_times,
                                          std::size_t num_paths, std::uint64_t seed,
                                          unsigned threads) {
  std::vector<Path> out(num_paths);
  parallel_for(num_paths, threads, [&](std::size_t i) {
    Rng rng = stream_for(seed, i);
    out[i] = simulate_rescaled(family, z0, horizon, record_times, rng);
    out[i].path_id = i;
  });
  return out;
}

ScalingFamily build_survival_sexual(double alpha, const JumpMeasure& mu, double q, double p_f,
                                    double p_m, std::int64_t N, double v_N) {
  return ScalingFamily(N, v_N, OffspringLaw::bernoulli_death(p_f, v_N),
                       OffspringLaw::bernoulli_death(p_m, v_N),
                       PairLaw::sex_split(OffspringLaw::heavy_tail_DN(alpha, mu, N, v_N), q),
                       MatingFunction::min());
}

ScalingFamily build_replacement_couples(const OffspringLaw& f, const OffspringLaw& m,
                                        std::int64_t N, double v_N) {
  if (f.min_value() < -1 || m.min_value() < -1) {
    throw Error(ErrorCode::kParameter, "replacement laws must take values >= -1");
  }
  return ScalingFamily(N, v_N, OffspringLaw::constant(0), OffspringLaw::constant(0),
                       PairLaw::independent(f, m), MatingFunction::min());
}

AssumptionAReport verify_assumption_A(const std::vector<ScalingFamily>& families,
                                      const LimitSystemParams& target,
                                      const std::vector<TestFunction1>& solo_tests,
                                      const std::vector<TestFunction2>& pair_tests,
                                      std::int64_t mc_samples, std::uint64_t seed) {
  const TruncationFunction& h = target.h;
  struct Moment {
    std::string name;
    std::function<double(const ScalingFamily&, double)> exact;  // E[fn] given N
    std::function<double(const ScalingFamily&, Rng&)> draw;     // one sample of fn
    double target;
  };
  std::vector<Moment> moments;
  auto add_solo = [&](const std::string& sex, bool female, const JumpMeasure& nu, double alpha,
                      double sigma) {
    auto law = [female](const ScalingFamily& fam) -> const OffspringLaw& {
      return female ? fam.female_solo() : fam.male_solo();
    };
    auto add = [&](std::string name, std::function<double(double)> fn, double tgt) {
      moments.push_back(
          {std::move(name),
           [law, fn](const ScalingFamily& fam, double n) {
             return law(fam).expect([&](std::int64_t k) { return fn(static_cast<double>(k) / n); });
           },
           [law, fn](const ScalingFamily& fam, Rng& rng) {
             return fn(static_cast<double>(law(fam).sample(rng)) / static_cast<double>(fam.N()));
           },
           tgt});
    };
    add("h[E" + sex + "]", [h](double u) { return h(u); }, alpha);
    add("h2[E" + sex + "]", [h](double u) { return h(u) * h(u); },
        sigma * sigma + nu.integrate([&](double u) { return h(u) * h(u); }));
    for (const auto& t : solo_tests) add(t.name + "[E" + sex + "]", t.fn, nu.integrate(t.fn));
  };
  add_solo("f", true, target.nu_f, target.alpha_f, target.sigma_f);
  add_solo("m", false, target.nu_m, target.alpha_m, target.sigma_m);

  auto add_pair = [&](std::string name, std::function<double(double, double)> fn, double tgt) {
    moments.push_back(
        {std::move(name),
         [fn](const ScalingFamily& fam, double n) {
           return fam.pair().expect([&](std::int64_t a, std::int64_t b) {
             return fn(static_cast<double>(a) / n, static_cast<double>(b) / n);
           });
         },
         [fn](const ScalingFamily& fam, Rng& rng) {
           auto d = fam.pair().sample(rng);
           double n = static_cast<double>(fam.N());
           return fn(static_cast<double>(d.f) / n, static_cast<double>(d.m) / n);
         },
         tgt});
  };
  const JointJumpMeasure& nu_s = target.nu_S;
  add_pair("h[Lf]", [h](double a, double) { return h(a); }, target.alpha_f_S);
  add_pair("h[Lm]", [h](double, double b) { return h(b); }, target.alpha_m_S);
  add_pair("h2[Lf]", [h](double a, double) { return h(a) * h(a); },
           target.sigma_f_S * target.sigma_f_S +
               nu_s.integrate([&](double a, double) { return h(a) * h(a); }));
  add_pair("h2[Lm]", [h](double, double b) { return h(b) * h(b); },
           target.sigma_m_S * target.sigma_m_S +
               nu_s.integrate([&](double, double b) { return h(b) * h(b); }));
  add_pair("hh[LfLm]", [h](double a, double b) { return h(a) * h(b); },
           target.sigma_fm_S * target.sigma_fm_S +
               nu_s.integrate([&](double a, double b) { return h(a) * h(b); }));
  for (const auto& t : pair_tests) add_pair(t.name + "[L]", t.fn, nu_s.integrate(t.fn));

  AssumptionAReport report;
  std::vector<std::vector<double>> gaps(moments.size());
  for (std::size_t fi = 0; fi < families.size(); ++fi) {
    const ScalingFamily& fam = families[fi];
    double n = static_cast<double>(fam.N());
    double scale = fam.v_N() * n;
    for (std::size_t mi = 0; mi < moments.size(); ++mi) {
      AssumptionARow row;
      row.N = fam.N();
      row.moment = moments[mi].name;
      row.target = moments[mi].target;
      row.estimate = scale * moments[mi].exact(fam, n);
      if (mc_samples > 0) {
        Rng rng = stream_for(seed, fi * moments.size() + mi);
        double sum = 0.0;
        double sum2 = 0.0;
        for (std::int64_t s = 0; s < mc_samples; ++s) {
          double x = scale * moments[mi].draw(fam, rng);
          sum += x;
          sum2 += x * x;
        }
        double m = sum / static_cast<double>(mc_samples);
        double var = std::max(0.0, sum2 / static_cast<double>(mc_samples) - m * m);
        row.mc_estimate = m;
        row.standard_error = std::sqrt(var / static_cast<double>(mc_samples));
      }
      gaps[mi].push_back(std::fabs(row.estimate - row.target));
      report.rows.push_back(row);
    }
  }
  for (std::size_t mi = 0; mi < moments.size(); ++mi) {
    const auto& g = gaps[mi];
    bool ok = true;
    for (std::size_t k = 1; k < g.size(); ++k) {
      if (g[k] > g[k - 1] * (1.0 + 1e-9) + 1e-12) ok = false;
    }
    if (!g.empty() && g.back() <= 1e-9) ok = true;
    report.trend.emplace_back(moments[mi].name, ok);
    report.all_trending = report.all_trending && ok;
  }
  return report;
}

}  // namespace bgw
