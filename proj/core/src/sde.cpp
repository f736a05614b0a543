#include "bgw/sde.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "bgw/errors.hpp"
#include "bgw/expr.hpp"
#include "bgw/parallel.hpp"

namespace bgw {
namespace {

double ind(bool b) { return b ? 1.0 : 0.0; }

Coefficient constant_zero() {
  return [](double, double) { return 0.0; };
}

Coefficient from_expr(const std::string& text) {
  Expr e = Expr::parse(text, {"x", "y"});
  return [e](double x, double y) { return e.eval(x, y); };
}

double coordinate(const std::array<double, 2>& u, int c) { return u[static_cast<std::size_t>(c)]; }

// int over the driver measure of f(u_c), c = 0, 1.
std::array<double, 2> per_coordinate(const JointJumpMeasure& m, const std::function<double(double)>& f) {
  std::array<double, 2> out{};
  for (int c = 0; c < 2; ++c) {
    out[static_cast<std::size_t>(c)] =
        m.integrate([&](double a, double b) { return f(coordinate({a, b}, c)); });
  }
  return out;
}

}  // namespace

double JumpSdeSystem::ell(int i, double x, double y) const {
  double s = 0.0;
  for (const auto& d : diffusions) {
    double c = i == 0 ? d.c1 : d.c2;
    if (c != 0.0) s += d.variance(x, y) * c * c;
  }
  return s;
}

std::array<double, 4> correlation_factor(double sf, double sm, double sfm) {
  if (sf < 0.0 || sm < 0.0 || sfm < 0.0) {
    throw Error(ErrorCode::kParameter, "mating sigmas must be nonnegative");
  }
  if (sfm > 0.0 && sm == 0.0) {
    throw Error(ErrorCode::kDegenerateCovariance, "sigma_m^S = 0 with sigma_fm^S > 0");
  }
  const double sfm2 = sfm * sfm;
  if (sf * sf * sm * sm < sfm2 * sfm2 * (1.0 - 1e-12)) {
    throw Error(ErrorCode::kConstraint, "covariance violates (sigma_f^S sigma_m^S)^2 >= (sigma_fm^S)^4");
  }
  if (sm == 0.0) return {sf, 0.0, 0.0, 0.0};
  const double off = sfm2 / sm;
  return {std::sqrt(std::max(0.0, sf * sf - off * off)), off, 0.0, sm};
}

JumpSdeSystem build_limit_system(const LimitSystemParams& p) {
  auto factor = correlation_factor(p.sigma_f_S, p.sigma_m_S, p.sigma_fm_S);
  p.validate();
  JumpSdeSystem s;
  s.brownian_factor = factor;
  s.h = p.h;
  s.limit = p;
  const MatingFunction g = p.g;
  const double af = p.alpha_f, am = p.alpha_m, afs = p.alpha_f_S, ams = p.alpha_m_S;
  s.drift[0] = [=](double x, double y) { return af * x + afs * g.limit_unchecked(x, y); };
  s.drift[1] = [=](double x, double y) { return am * y + ams * g.limit_unchecked(x, y); };
  if (p.sigma_f > 0.0) {
    const double v = p.sigma_f * p.sigma_f;
    s.diffusions.push_back({[=](double x, double) { return v * x; }, 1.0, 0.0});
  }
  if (p.sigma_m > 0.0) {
    const double v = p.sigma_m * p.sigma_m;
    s.diffusions.push_back({[=](double, double y) { return v * y; }, 0.0, 1.0});
  }
  const auto& M = s.brownian_factor;
  Coefficient gfun = [=](double x, double y) { return g.limit_unchecked(x, y); };
  if (M[0] != 0.0 || M[2] != 0.0) s.diffusions.push_back({gfun, M[0], M[2]});
  if (M[1] != 0.0 || M[3] != 0.0) s.diffusions.push_back({gfun, M[1], M[3]});
  Coefficient one = [](double, double) { return 1.0; };
  if (!p.nu_f.is_zero()) {
    s.jumps.push_back({[](double x, double) { return x; }, one, JointJumpMeasure::on_axis(Axis::kFirst, p.nu_f)});
  }
  if (!p.nu_m.is_zero()) {
    s.jumps.push_back({[](double, double y) { return y; }, one, JointJumpMeasure::on_axis(Axis::kSecond, p.nu_m)});
  }
  if (!p.nu_S.is_zero()) s.jumps.push_back({gfun, one, p.nu_S});

  // |b1| + |b2| + l1 + l2 + kappa's <= cf x + cm y + G g, g <= a (x ^ y) + b.
  const double cf = std::fabs(af) + p.sigma_f * p.sigma_f + ind(!p.nu_f.is_zero());
  const double cm = std::fabs(am) + p.sigma_m * p.sigma_m + ind(!p.nu_m.is_zero());
  const double G = std::fabs(afs) + std::fabs(ams) + p.sigma_f_S * p.sigma_f_S +
                   p.sigma_m_S * p.sigma_m_S + ind(!p.nu_S.is_zero());
  s.L_growth = std::max(cf, cm) + G * g.a_dom() / 2.0;
  s.A_growth = G * g.b_dom();
  return s;
}

JumpSdeSystem make_general_system(GeneralCoefficients c, const TruncationFunction& h,
                                  double L_growth, double A_growth) {
  if (!(L_growth >= 0.0) || !(A_growth >= 0.0)) {
    throw Error(ErrorCode::kParameter, "growth constants must be nonnegative");
  }
  for (int i = 0; i < 2; ++i) {
    auto k = static_cast<std::size_t>(i);
    if (!c.b[k]) c.b[k] = constant_zero();
    if (!c.ell[k]) c.ell[k] = constant_zero();
    if (!c.kappa[k]) c.kappa[k] = constant_zero();
    if (!c.p[k]) c.p[k] = [](double, double) { return 1.0; };
  }
  JumpSdeSystem s;
  s.h = h;
  s.L_growth = L_growth;
  s.A_growth = A_growth;
  s.drift = c.b;
  s.diffusions.push_back({c.ell[0], 1.0, 0.0});
  s.diffusions.push_back({c.ell[1], 0.0, 1.0});
  for (int i = 0; i < 2; ++i) {
    auto k = static_cast<std::size_t>(i);
    if (c.lambda[k].is_zero()) continue;
    s.jumps.push_back({c.kappa[k], c.p[k],
                       JointJumpMeasure::on_axis(i == 0 ? Axis::kFirst : Axis::kSecond, c.lambda[k])});
  }
  s.general = std::move(c);
  return s;
}

GeneralCoefficients general_from_expressions(const std::array<std::string, 2>& b,
                                             const std::array<std::string, 2>& ell,
                                             const std::array<std::string, 2>& kappa,
                                             const std::array<std::string, 2>& p,
                                             std::array<JumpMeasure, 2> lambda) {
  GeneralCoefficients c;
  for (std::size_t i = 0; i < 2; ++i) {
    c.b[i] = from_expr(b[i]);
    c.ell[i] = from_expr(ell[i]);
    c.kappa[i] = from_expr(kappa[i]);
    c.p[i] = from_expr(p[i]);
  }
  c.lambda = std::move(lambda);
  return c;
}

SdeIntegrator::SdeIntegrator(JumpSdeSystem system, IntegrateOptions options)
    : system_(std::move(system)), options_(options) {
  if (!(options_.dt > 0.0)) throw Error(ErrorCode::kParameter, "dt must be positive");
  if (!(options_.epsilon > 0.0) || options_.epsilon > system_.h.agreement_radius()) {
    throw Error(ErrorCode::kParameter, "small-jump cutoff must lie in (0, agreement radius of h]");
  }
  const double eps = options_.epsilon;
  const auto& h = system_.h;
  for (const auto& d : system_.jumps) {
    Prepared p;
    JointJumpMeasure large = d.measure.outside_box(eps);
    try {
      p.large = JointSampler(large, eps);
      p.compensator = per_coordinate(large, [&](double u) { return h(u); });
    } catch (const Error& e) {
      throw Error(ErrorCode::kParameter, std::string("jump measure has infinite mass above the cutoff: ") + e.what());
    }
    if (!std::isfinite(p.large.mass())) {
      throw Error(ErrorCode::kParameter, "jump measure has infinite mass above the cutoff");
    }
    if (options_.small_jumps == SmallJumpMode::kGaussianCorrect) {
      JointJumpMeasure small = d.measure.inside_box(eps);
      double s11 = small.integrate([](double a, double) { return a * a; });
      double s12 = small.integrate([](double a, double b) { return a * b; });
      double s22 = small.integrate([](double, double b) { return b * b; });
      double l11 = std::sqrt(std::max(0.0, s11));
      double l21 = l11 > 0.0 ? s12 / l11 : 0.0;
      double l22 = std::sqrt(std::max(0.0, s22 - l21 * l21));
      p.small_chol = {l11, l21, l22};
    }
    prepared_.push_back(std::move(p));
  }
}

Path SdeIntegrator::integrate(std::array<double, 2> z0, double horizon,
                              const std::vector<double>& record_times, Rng& rng) const {
  if (!(z0[0] >= 0.0) || !(z0[1] >= 0.0)) throw Error(ErrorCode::kParameter, "z0 must be nonnegative");
  Path path;
  path.times = record_times;
  path.states.reserve(record_times.size());
  std::array<double, 2> z = z0;
  std::array<bool, 2> dead{z[0] == 0.0, z[1] == 0.0};
  double t = 0.0;
  std::size_t r = 0;
  std::normal_distribution<double> normal(0.0, 1.0);
  const double dt_nominal = options_.dt;
  auto record_due = [&]() {
    while (r < record_times.size() && record_times[r] <= t + 1e-12 * std::max(1.0, t)) {
      path.states.push_back(z);
      ++r;
    }
  };
  record_due();
  const double end = std::min(horizon, record_times.empty() ? horizon : record_times.back());
  while (r < record_times.size() && t < end) {
    if (dead[0] && dead[1]) {
      if (!path.absorbed_at) path.absorbed_at = t;
      while (r < record_times.size()) {
        path.states.push_back(z);
        ++r;
      }
      break;
    }
    double dt = std::min(dt_nominal, record_times[r] - t);
    if (!(dt > 0.0)) dt = dt_nominal;
    const double x = z[0], y = z[1];
    std::array<double, 2> inc{system_.drift[0](x, y) * dt, system_.drift[1](x, y) * dt};
    const double sq = std::sqrt(dt);
    for (const auto& d : system_.diffusions) {
      double v = d.variance(x, y);
      if (!(v > 0.0)) continue;
      double w = std::sqrt(v) * sq * normal(rng);
      inc[0] += d.c1 * w;
      inc[1] += d.c2 * w;
    }
    for (std::size_t k = 0; k < system_.jumps.size(); ++k) {
      const auto& d = system_.jumps[k];
      const auto& p = prepared_[k];
      double rate = d.rate(x, y);
      if (!(rate > 0.0)) continue;
      double scale = d.scale(x, y);
      inc[0] -= rate * scale * p.compensator[0] * dt;
      inc[1] -= rate * scale * p.compensator[1] * dt;
      if (!p.large.empty()) {
        double mean = rate * p.large.mass() * dt;
        auto n = std::poisson_distribution<std::int64_t>(mean)(rng);
        for (std::int64_t e = 0; e < n; ++e) {
          auto u = p.large.draw(rng);
          inc[0] += scale * u[0];
          inc[1] += scale * u[1];
        }
      }
      if (p.small_chol[0] > 0.0 || p.small_chol[2] > 0.0) {
        double s = scale * std::sqrt(rate * dt);
        double n1 = normal(rng);
        double n2 = normal(rng);
        inc[0] += s * p.small_chol[0] * n1;
        inc[1] += s * (p.small_chol[1] * n1 + p.small_chol[2] * n2);
      }
    }
    for (std::size_t c = 0; c < 2; ++c) {
      if (dead[c]) continue;
      z[c] = std::max(0.0, z[c] + inc[c]);
      if (z[c] == 0.0) dead[c] = true;
    }
    t += dt;
    if (z[0] > options_.explosion_ceiling || z[1] > options_.explosion_ceiling ||
        !std::isfinite(z[0]) || !std::isfinite(z[1])) {
      path.exploded_at = t;
      path.times.resize(path.states.size());
      return path;
    }
    record_due();
  }
  while (r < record_times.size()) {
    path.states.push_back(z);
    ++r;
  }
  return path;
}

Path integrate(const JumpSdeSystem& system, std::array<double, 2> z0, double horizon,
               const std::vector<double>& record_times, const IntegrateOptions& options, Rng& rng) {
  return SdeIntegrator(system, options).integrate(z0, horizon, record_times, rng);
}

std::vector<Path> simulate_sde_ensemble(const SdeIntegrator& integrator, std::array<double, 2> z0,
                                        double horizon, const std::vector<double>& record_times,
                                        std::size_t num_paths, std::uint64_t seed, unsigned threads) {
  std::vector<Path> paths(num_paths);
  parallel_for(num_paths, threads, [&](std::size_t i) {
    Rng rng = stream_for(seed, i);
    paths[i] = integrator.integrate(z0, horizon, record_times, rng);
    paths[i].path_id = i;
  });
  return paths;
}

AprioriReport check_apriori_bound(const SdeIntegrator& integrator, std::array<double, 2> z0,
                                  double t, std::size_t num_paths, std::uint64_t seed,
                                  unsigned threads, double bdg_constant) {
  const auto& sys = integrator.system();
  const auto& h = sys.h;
  AprioriReport rep;
  double excess = 0.0;
  std::array<double, 2> h2{};
  for (const auto& d : sys.jumps) {
    std::array<double, 2> moment{}, ex{}, hh{};
    try {
      moment = per_coordinate(d.measure, [](double u) { return std::min(u * u, u); });
      ex = per_coordinate(d.measure, [&](double u) { return std::fabs(u - h(u)); });
      hh = per_coordinate(d.measure, [&](double u) { return h(u) * h(u); });
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNonConvergent) throw;
      throw Error(ErrorCode::kPrecondition, "int (u^2 ^ u) of the jump measure is infinite");
    }
    (void)moment;
    excess += ex[0] + ex[1];
    h2[0] += hh[0];
    h2[1] += hh[1];
  }
  rep.a = 2.0 + excess;
  rep.L = sys.L_growth;
  rep.A = sys.A_growth;
  const double x0 = z0[0] + z0[1];
  rep.bound = (x0 + rep.a * rep.A * t) * std::exp(rep.a * rep.L * t);
  const double D = bdg_constant * (2.0 + std::sqrt(h2[0]) + std::sqrt(h2[1]));
  rep.sup_bound_advisory = (x0 + D + (D + rep.a) * rep.A * t) * std::exp((D + rep.a) * rep.L * t);

  auto paths = simulate_sde_ensemble(integrator, z0, t, {t}, num_paths, seed, threads);
  double sum = 0.0, sum2 = 0.0;
  std::size_t n = 0;
  for (const auto& p : paths) {
    if (p.states.empty()) continue;  // exploded before t
    double v = p.states.back()[0] + p.states.back()[1];
    sum += v;
    sum2 += v * v;
    ++n;
  }
  if (n > 0) {
    rep.mc_mean = sum / static_cast<double>(n);
    double var = std::max(0.0, sum2 / static_cast<double>(n) - rep.mc_mean * rep.mc_mean);
    if (n > 1) var *= static_cast<double>(n) / static_cast<double>(n - 1);
    rep.standard_error = std::sqrt(var / static_cast<double>(n));
  }
  rep.pass = n == num_paths && rep.mc_mean <= rep.bound + 4.0 * rep.standard_error;
  return rep;
}

}  // namespace bgw
