#include "bgw/convergence.hpp"

#include <algorithm>
#include <cmath>

#include "bgw/errors.hpp"
#include "bgw/rng.hpp"

namespace bgw {

const char* to_string(Statistic s) noexcept {
  switch (s) {
    case Statistic::kF: return "F";
    case Statistic::kM: return "M";
    case Statistic::kSum: return "F+M";
  }
  return "?";
}

std::vector<double> marginal(const std::vector<Path>& paths, std::size_t r, Statistic s) {
  std::vector<double> out;
  out.reserve(paths.size());
  for (const auto& p : paths) {
    if (r >= p.states.size()) continue;
    const auto& z = p.states[r];
    out.push_back(s == Statistic::kF ? z[0] : (s == Statistic::kM ? z[1] : z[0] + z[1]));
  }
  return out;
}

namespace {

constexpr Statistic kStats[] = {Statistic::kF, Statistic::kM, Statistic::kSum};

std::size_t exploded_before(const std::vector<Path>& paths, std::size_t r) {
  std::size_t n = 0;
  for (const auto& p : paths) n += r >= p.states.size() ? 1 : 0;
  return n;
}

bool trend_ok(const std::vector<double>& w, const std::vector<Interval95>& ci) {
  int rises = 0;
  for (std::size_t k = 0; k + 1 < w.size(); ++k) {
    if (w[k + 1] <= w[k]) continue;
    if (w[k + 1] > ci[k].hi || ++rises > 1) return false;
  }
  return true;
}

}  // namespace

ConvergenceReport run_study(const FamilyBuilder& builder, const LimitSystemParams& limit,
                            std::array<double, 2> z0, const std::vector<double>& record_times,
                            const StudyOptions& o) {
  if (o.ladder.empty() || record_times.empty() || o.paths == 0) {
    throw Error(ErrorCode::kParameter, "study needs a ladder, record times and paths");
  }
  if (!std::is_sorted(record_times.begin(), record_times.end())) {
    throw Error(ErrorCode::kParameter, "record times must be sorted");
  }
  const double horizon = record_times.back();
  ConvergenceReport rep;
  rep.ladder = o.ladder;

  SdeIntegrator integrator(build_limit_system(limit), o.sde);
  auto sde_paths = simulate_sde_ensemble(integrator, z0, horizon, record_times,
                                         o.sde_paths ? o.sde_paths : o.paths,
                                         stream_seed(o.seed, std::uint64_t{1} << 20), o.threads);

  std::vector<std::vector<Path>> chains;
  for (std::size_t k = 0; k < o.ladder.size(); ++k) {
    ScalingFamily fam = builder(o.ladder[k]);
    chains.push_back(simulate_chain_ensemble(fam, z0, horizon, record_times, o.paths,
                                             stream_seed(o.seed, k), o.threads));
  }

  for (std::size_t r = 0; r < record_times.size(); ++r) {
    const double t = record_times[r];
    for (Statistic s : kStats) {
      auto sde_sample = marginal(sde_paths, r, s);
      MomentRow sr{"sde", 0, t, s, mean_stats(sde_sample), exploded_before(sde_paths, r)};
      rep.moments.push_back(sr);
      TrendRow trend{t, s, {}, false};
      std::vector<Interval95> cis;
      MeanStats last;
      for (std::size_t k = 0; k < o.ladder.size(); ++k) {
        auto sample = marginal(chains[k], r, s);
        MomentRow cr{"chain", o.ladder[k], t, s, mean_stats(sample), exploded_before(chains[k], r)};
        rep.moments.push_back(cr);
        last = cr.stats;
        DistanceRow d{o.ladder[k], t, s, 0.0, {}};
        if (!sample.empty() && !sde_sample.empty()) {
          d.w1 = wasserstein1(sample, sde_sample);
          d.ci = bootstrap_w1_ci(sample, sde_sample, o.bootstrap_reps,
                                 stream_seed(o.seed ^ 0xB007u, k * 1000 + r * 3 + static_cast<std::size_t>(s)));
        }
        rep.distances.push_back(d);
        trend.w1.push_back(d.w1);
        cis.push_back(d.ci);
      }
      trend.decreasing = trend_ok(trend.w1, cis);
      rep.trends.push_back(trend);

      HeadlineRow h;
      h.time = t;
      h.statistic = s;
      h.chain_mean = last.mean;
      h.sde_mean = sr.stats.mean;
      h.joint_se = std::sqrt(last.standard_error * last.standard_error +
                             sr.stats.standard_error * sr.stats.standard_error);
      h.tolerance = std::max(4.0 * h.joint_se, o.scheme_tolerance);
      h.pass = std::fabs(h.chain_mean - h.sde_mean) <= h.tolerance;
      rep.headline.push_back(h);
    }
  }
  rep.headline_pass = std::all_of(rep.headline.begin(), rep.headline.end(),
                                  [](const HeadlineRow& h) { return h.pass; });
  return rep;
}

ConvergenceReport replacement_study(const ReplacementSpec& spec, std::array<double, 2> z0,
                                    const std::vector<double>& record_times,
                                    const StudyOptions& options) {
  const auto h = TruncationFunction::clamp();
  Triplet female{triplet_alpha(spec.death_f, spec.nu_f, h), spec.sigma_f, spec.nu_f};
  Triplet male{triplet_alpha(spec.death_m, spec.nu_m, h), spec.sigma_m, spec.nu_m};
  LimitSystemParams limit = replacement_limit(female, male, h);
  FamilyBuilder builder = [spec](std::int64_t N) {
    const double v = static_cast<double>(N);
    return build_replacement_couples(OffspringLaw::triplet(spec.death_f, spec.sigma_f, spec.nu_f, N, v),
                                     OffspringLaw::triplet(spec.death_m, spec.sigma_m, spec.nu_m, N, v),
                                     N, v);
  };
  return run_study(builder, limit, z0, record_times, options);
}

}  // namespace bgw
