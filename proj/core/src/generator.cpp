#include "bgw/generator.hpp"

#include <algorithm>
#include <cmath>

#include "bgw/errors.hpp"
#include "bgw/parallel.hpp"

namespace bgw {
namespace {

// e^{-x} - 1 + x without cancellation for small x.
double phi2(double x) {
  if (std::fabs(x) < 0.5) {
    double term = x * x / 2.0;
    double sum = term;
    for (int n = 3; n < 30; ++n) {
      term *= -x / n;
      sum += term;
      if (std::fabs(term) <= 1e-17 * std::fabs(sum)) break;
    }
    return sum;
  }
  return std::expm1(-x) + x;
}

double f1(double u) { return -std::expm1(-u); }

int delta(int a, int b) { return a == b ? 1 : 0; }

// (-1)^{i+1} f_1(u)^i - delta_{i1} h(u), stable near 0.
double solo_integrand(int i, double u, const TruncationFunction& h) {
  if (i == 1) return -phi2(u) + (u - h(u));
  double v = std::pow(f1(u), i);
  return (i % 2 == 1) ? v : -v;
}

void check_index(int i, int j) {
  if (i < 0 || j < 0 || (i == 0 && j == 0)) {
    throw Error(ErrorCode::kParameter, "generator index needs i, j >= 0 and (i, j) != (0, 0)");
  }
}

double monomial(int i, int j, double a, double b) {
  double v = 1.0;
  for (int k = 0; k < i; ++k) v *= a;
  for (int k = 0; k < j; ++k) v *= b;
  return v;
}

}  // namespace

double f_k(int k, double u) { return -std::expm1(-k * u); }

double f_kl(int k, int l, double u1, double u2) { return -std::expm1(-k * u1 - l * u2); }

double binomial_coefficient(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double c = 1.0;
  for (int m = 1; m <= k; ++m) c = c * (n - k + m) / m;
  return std::round(c);
}

double alternating_binomial_sum(int i, const std::function<double(int)>& fn) {
  double s = 0.0;
  for (int k = 0; k <= i; ++k) {
    s += binomial_coefficient(i, k) * (((i - k) % 2 == 0) ? 1.0 : -1.0) * fn(k);
  }
  return s;
}

double gamma_f(const LimitSystemParams& p, int k, const QuadOptions& q) {
  if (k < 0) throw Error(ErrorCode::kParameter, "k must be >= 0");
  if (k == 0) return 0.0;
  const auto& h = p.h;
  double integral =
      p.nu_f.integrate([&](double u) { return -phi2(k * u) + k * (u - h(u)); }, Interval::positive(), q);
  return p.alpha_f * k - 0.5 * p.sigma_f * p.sigma_f * k * k + integral;
}

double gamma_m(const LimitSystemParams& p, int l, const QuadOptions& q) {
  if (l < 0) throw Error(ErrorCode::kParameter, "l must be >= 0");
  if (l == 0) return 0.0;
  const auto& h = p.h;
  double integral =
      p.nu_m.integrate([&](double u) { return -phi2(l * u) + l * (u - h(u)); }, Interval::positive(), q);
  return p.alpha_m * l - 0.5 * p.sigma_m * p.sigma_m * l * l + integral;
}

double gamma_S(const LimitSystemParams& p, int k, int l, const QuadOptions& q) {
  if (k < 0 || l < 0) throw Error(ErrorCode::kParameter, "k, l must be >= 0");
  if (k == 0 && l == 0) return 0.0;
  const auto& h = p.h;
  double integral = p.nu_S.integrate(
      [&](double a, double b) {
        return -phi2(k * a + l * b) + k * (a - h(a)) + l * (b - h(b));
      },
      Rect{}, q);
  double sf = p.sigma_f_S;
  double sm = p.sigma_m_S;
  double sfm2 = p.sigma_fm_S * p.sigma_fm_S;
  return p.alpha_f_S * k + p.alpha_m_S * l - 0.5 * sf * sf * k * k - 0.5 * sm * sm * l * l -
         sfm2 * k * l + integral;
}

double limiting_generator(const LimitSystemParams& p, int i, int j, double y, double z,
                          const QuadOptions& q) {
  check_index(i, j);
  const auto& h = p.h;
  double bracket = 0.0;
  if (j == 0) {
    double t = delta(i, 1) * p.alpha_f - (2 * delta(i, 2) + delta(i, 1)) * p.sigma_f * p.sigma_f / 2.0 +
               p.nu_f.integrate([&](double u) { return solo_integrand(i, u, h); }, Interval::positive(), q);
    bracket += y * t;
  }
  if (i == 0) {
    double t = delta(j, 1) * p.alpha_m - (2 * delta(j, 2) + delta(j, 1)) * p.sigma_m * p.sigma_m / 2.0 +
               p.nu_m.integrate([&](double u) { return solo_integrand(j, u, h); }, Interval::positive(), q);
    bracket += z * t;
  }
  double gyz = p.g.limit(y, z);
  if (gyz != 0.0) {
    double t = 0.0;
    if (j == 0) {
      t += delta(i, 1) * p.alpha_f_S -
           (2 * delta(i, 2) + delta(i, 1)) * p.sigma_f_S * p.sigma_f_S / 2.0;
    }
    if (i == 0) {
      t += delta(j, 1) * p.alpha_m_S -
           (2 * delta(j, 2) + delta(j, 1)) * p.sigma_m_S * p.sigma_m_S / 2.0;
    }
    t -= delta(i, 1) * delta(j, 1) * p.sigma_fm_S * p.sigma_fm_S;
    t += p.nu_S.integrate(
        [&](double a, double b) {
          double v = 0.0;
          if (j == 0) v += solo_integrand(i, a, h);
          if (i == 0) v += solo_integrand(j, b, h);
          if (i != 0 && j != 0) {
            double cross = std::pow(f1(a), i) * std::pow(f1(b), j);
            v -= ((i + j) % 2 == 0) ? cross : -cross;
          }
          return v;
        },
        Rect{}, q);
    bracket += gyz * t;
  }
  return -std::exp(-i * y - j * z) * bracket;
}

double limiting_generator_alternating(const LimitSystemParams& p, int i, int j, double y,
                                      double z, const QuadOptions& q) {
  check_index(i, j);
  double gyz = p.g.limit(y, z);
  std::vector<double> gf(i + 1), gm(j + 1);
  for (int k = 0; k <= i; ++k) gf[k] = gamma_f(p, k, q);
  for (int l = 0; l <= j; ++l) gm[l] = gamma_m(p, l, q);
  double sum = 0.0;
  for (int k = 0; k <= i; ++k) {
    for (int l = 0; l <= j; ++l) {
      double c = binomial_coefficient(i, k) * binomial_coefficient(j, l) *
                 (((i - k + j - l) % 2 == 0) ? 1.0 : -1.0);
      double gs = gyz != 0.0 ? gamma_S(p, k, l, q) : 0.0;
      sum += c * (y * gf[k] + z * gm[l] + gyz * gs);
    }
  }
  return -std::exp(-i * y - j * z) * sum;
}

double prelimit_generator(const ScalingFamily& family, int i, int j, std::int64_t F0,
                          std::int64_t M0) {
  check_index(i, j);
  const double n = static_cast<double>(family.N());
  const double pairs = static_cast<double>(
      std::max<std::int64_t>(0, family.mating().prelimit(family.N(), F0, M0)));
  const double y = static_cast<double>(F0) / n;
  const double z = static_cast<double>(M0) / n;
  double sum = 0.0;
  for (int k = 0; k <= i; ++k) {
    for (int l = 0; l <= j; ++l) {
      double c = binomial_coefficient(i, k) * binomial_coefficient(j, l) *
                 (((i - k + j - l) % 2 == 0) ? 1.0 : -1.0);
      double log_a = 0.0;
      if (k > 0 && F0 > 0) log_a += static_cast<double>(F0) * std::log1p(family.female_solo().mgf_m1(-k / n));
      if (l > 0 && M0 > 0) log_a += static_cast<double>(M0) * std::log1p(family.male_solo().mgf_m1(-l / n));
      if ((k > 0 || l > 0) && pairs > 0.0) log_a += pairs * std::log1p(family.pair().mgf_m1(-k / n, -l / n));
      sum += c * family.v_N() * std::expm1(log_a);
    }
  }
  return std::exp(-i * y - j * z) * sum;
}

namespace {

constexpr std::int64_t kBlock = 4096;

struct Accum {
  std::vector<double> sum;
  std::vector<double> sum2;
};

void one_step_block(const ScalingFamily& family, const std::vector<std::pair<int, int>>& indices,
                    const ChainState& start, std::int64_t count, Rng& rng, Accum& acc) {
  const double n = static_cast<double>(family.N());
  const double x1 = std::exp(-static_cast<double>(start.F) / n);
  const double x2 = std::exp(-static_cast<double>(start.M) / n);
  for (std::int64_t s = 0; s < count; ++s) {
    ChainState next = step(family, start, rng);
    // X_1 - x = x (e^{-dZ/N} - 1)
    double d1 = x1 * std::expm1(-static_cast<double>(next.F - start.F) / n);
    double d2 = x2 * std::expm1(-static_cast<double>(next.M - start.M) / n);
    for (std::size_t q = 0; q < indices.size(); ++q) {
      double v = family.v_N() * monomial(indices[q].first, indices[q].second, d1, d2);
      acc.sum[q] += v;
      acc.sum2[q] += v * v;
    }
  }
}

std::vector<GeneratorEstimate> finish(const std::vector<std::pair<int, int>>& indices,
                                      const Accum& acc, std::int64_t samples) {
  std::vector<GeneratorEstimate> out;
  for (std::size_t q = 0; q < indices.size(); ++q) {
    GeneratorEstimate e;
    e.i = indices[q].first;
    e.j = indices[q].second;
    e.samples = samples;
    if (samples > 0) {
      double m = acc.sum[q] / static_cast<double>(samples);
      double var = std::max(0.0, acc.sum2[q] / static_cast<double>(samples) - m * m);
      if (samples > 1) var *= static_cast<double>(samples) / static_cast<double>(samples - 1);
      e.estimate = m;
      e.standard_error = std::sqrt(var / static_cast<double>(samples));
    }
    out.push_back(e);
  }
  return out;
}

ChainState start_state(const ScalingFamily& family, double y, double z) {
  if (!(y >= 0.0) || !(z >= 0.0)) throw Error(ErrorCode::kParameter, "(y, z) must be >= 0");
  const double n = static_cast<double>(family.N());
  ChainState s;
  s.F = static_cast<std::int64_t>(std::floor(n * y));
  s.M = static_cast<std::int64_t>(std::floor(n * z));
  return s;
}

}  // namespace

GeneratorEstimate empirical_generator(const ScalingFamily& family, int i, int j, double y, double z,
                                      std::int64_t num_samples, Rng& rng) {
  check_index(i, j);
  std::vector<std::pair<int, int>> idx{{i, j}};
  Accum acc{{0.0}, {0.0}};
  one_step_block(family, idx, start_state(family, y, z), num_samples, rng, acc);
  return finish(idx, acc, num_samples).front();
}

std::vector<GeneratorEstimate> empirical_generator(const ScalingFamily& family,
                                                   const std::vector<std::pair<int, int>>& indices,
                                                   double y, double z, std::int64_t num_samples,
                                                   std::uint64_t seed, unsigned threads) {
  for (auto [i, j] : indices) check_index(i, j);
  const ChainState start = start_state(family, y, z);
  const std::int64_t blocks = (num_samples + kBlock - 1) / kBlock;
  std::vector<Accum> parts(static_cast<std::size_t>(blocks),
                           Accum{std::vector<double>(indices.size()), std::vector<double>(indices.size())});
  parallel_for(static_cast<std::size_t>(blocks), threads, [&](std::size_t b) {
    Rng rng = stream_for(seed, b);
    std::int64_t count = std::min<std::int64_t>(kBlock, num_samples - static_cast<std::int64_t>(b) * kBlock);
    one_step_block(family, indices, start, count, rng, parts[b]);
  });
  Accum total{std::vector<double>(indices.size()), std::vector<double>(indices.size())};
  for (const auto& p : parts) {
    for (std::size_t q = 0; q < indices.size(); ++q) {
      total.sum[q] += p.sum[q];
      total.sum2[q] += p.sum2[q];
    }
  }
  return finish(indices, total, num_samples);
}

}  // namespace bgw
