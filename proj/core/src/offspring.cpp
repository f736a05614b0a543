#include "bgw/offspring.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "bgw/errors.hpp"

namespace bgw {
namespace {

std::int64_t mul_checked(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw Error(ErrorCode::kOverflow, "offspring sum overflows");
  return out;
}

std::int64_t add_checked(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) throw Error(ErrorCode::kOverflow, "offspring sum overflows");
  return out;
}

std::int64_t binomial(std::int64_t n, double p, Rng& rng) {
  if (n <= 0 || p <= 0.0) return 0;
  if (p >= 1.0) return n;
  return std::binomial_distribution<std::int64_t>(n, p)(rng);
}

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorCode::kParameter, std::string(what) + " must lie in [0, 1], got " + std::to_string(p));
  }
}

// Largest integer k with k / N <= u.
std::int64_t lattice_floor(std::int64_t N, double u) {
  double n = static_cast<double>(N);
  auto k = static_cast<std::int64_t>(std::floor(u * n));
  while (static_cast<double>(k + 1) / n <= u) ++k;
  while (k > 0 && static_cast<double>(k) / n > u) --k;
  return k;
}

std::vector<double> binomial_pmf(std::int64_t n, double q) {
  std::vector<double> out(static_cast<std::size_t>(n + 1), 0.0);
  if (q <= 0.0) {
    out[0] = 1.0;
    return out;
  }
  if (q >= 1.0) {
    out[static_cast<std::size_t>(n)] = 1.0;
    return out;
  }
  double lq = std::log(q);
  double lp = std::log1p(-q);
  double ln = std::lgamma(static_cast<double>(n) + 1.0);
  for (std::int64_t k = 0; k <= n; ++k) {
    double kk = static_cast<double>(k);
    out[static_cast<std::size_t>(k)] =
        std::exp(ln - std::lgamma(kk + 1.0) - std::lgamma(static_cast<double>(n - k) + 1.0) +
                 kk * lq + static_cast<double>(n - k) * lp);
  }
  return out;
}

}  // namespace

OffspringLaw OffspringLaw::constant(std::int64_t k) {
  if (k < -1) throw Error(ErrorCode::kParameter, "offspring values must be >= -1");
  OffspringLaw law;
  law.kind_ = Kind::kConstant;
  law.value_ = k;
  law.label_ = "constant(" + std::to_string(k) + ")";
  return law;
}

OffspringLaw OffspringLaw::bernoulli_death(double p, double v_N) {
  if (!(v_N > 0.0)) throw Error(ErrorCode::kParameter, "v_N must be positive");
  check_probability(p / v_N, "death probability p / v_N");
  OffspringLaw law;
  law.kind_ = Kind::kBernoulliDeath;
  law.p_ = p / v_N;
  law.label_ = "bernoulli_death";
  return law;
}

OffspringLaw OffspringLaw::tabulated(std::vector<std::int64_t> support, std::vector<double> probs) {
  if (support.empty() || support.size() != probs.size()) {
    throw Error(ErrorCode::kParameter, "tabulated law needs matching nonempty support and probabilities");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (support[i] < -1) throw Error(ErrorCode::kParameter, "offspring values must be >= -1");
    check_probability(probs[i], "tabulated probability");
    total += probs[i];
  }
  if (std::fabs(total - 1.0) > 1e-12) {
    throw Error(ErrorCode::kParameter, "tabulated probabilities must sum to 1");
  }
  OffspringLaw law;
  law.kind_ = Kind::kTabulated;
  law.support_ = std::move(support);
  law.probs_ = std::move(probs);
  law.label_ = "tabulated";
  return law;
}

OffspringLaw OffspringLaw::lattice_tail(double p_minus, double p_plus, const JumpMeasure& nu,
                                        std::int64_t N, double scale) {
  if (N < 1) throw Error(ErrorCode::kParameter, "N must be >= 1");
  if (!(scale >= 0.0)) throw Error(ErrorCode::kParameter, "tail scale must be nonnegative");
  check_probability(p_minus, "P(L = -1)");
  check_probability(p_plus, "P(L = 1)");
  auto tail = std::make_shared<Tail>();
  tail->p_minus = p_minus;
  tail->p_plus = p_plus;
  tail->N = N;
  tail->scale = scale;
  tail->nu = nu;
  if (!nu.is_zero() && scale > 0.0) {
    tail->sampler = MeasureSampler(nu, Interval{2.0 / static_cast<double>(N), kInf, true});
    tail->p_tail = scale * tail->sampler.mass();
  }
  if (p_minus + p_plus + tail->p_tail > 1.0 + 1e-12) {
    throw Error(ErrorCode::kParameter,
                "P(L = -1) + P(L = 1) + P(L >= 2) exceeds 1; increase v_N or N");
  }
  OffspringLaw law;
  law.kind_ = Kind::kLatticeTail;
  law.tail_ = std::move(tail);
  law.label_ = "lattice_tail";
  return law;
}

OffspringLaw OffspringLaw::heavy_tail_DN(double alpha, const JumpMeasure& mu, std::int64_t N,
                                         double v_N) {
  if (!(alpha >= 0.0)) throw Error(ErrorCode::kParameter, "alpha must be >= 0");
  if (!(v_N > 0.0)) throw Error(ErrorCode::kParameter, "v_N must be positive");
  OffspringLaw law = lattice_tail(0.0, alpha / v_N, mu, N, 1.0 / (static_cast<double>(N) * v_N));
  law.kind_ = Kind::kLatticeTail;
  law.label_ = "heavy_tail_DN";
  return law;
}

OffspringLaw OffspringLaw::triplet(double death_rate, double sigma, const JumpMeasure& nu,
                                   std::int64_t N, double v_N) {
  if (!(death_rate >= 0.0) || !(sigma >= 0.0) || !(v_N > 0.0)) {
    throw Error(ErrorCode::kParameter, "triplet law needs death_rate >= 0, sigma >= 0, v_N > 0");
  }
  double n = static_cast<double>(N);
  double diffusive = sigma * sigma * n / (2.0 * v_N);
  OffspringLaw law =
      lattice_tail(diffusive + death_rate / v_N, diffusive, nu, N, 1.0 / (n * v_N));
  law.label_ = "triplet";
  return law;
}

OffspringLaw OffspringLaw::binomial_split(const OffspringLaw& count, double q) {
  check_probability(q, "q");
  if (count.min_value() < 0) throw Error(ErrorCode::kParameter, "binomial split needs a count law >= 0");
  OffspringLaw law;
  law.kind_ = Kind::kBinomialSplit;
  law.p_ = q;
  law.count_ = std::make_shared<const OffspringLaw>(count);
  law.label_ = "binomial_split(" + count.label() + ")";
  return law;
}

std::int64_t OffspringLaw::min_value() const noexcept {
  switch (kind_) {
    case Kind::kConstant: return value_;
    case Kind::kBernoulliDeath: return p_ > 0.0 ? -1 : 0;
    case Kind::kTabulated: {
      std::int64_t m = INT64_MAX;
      for (std::size_t i = 0; i < support_.size(); ++i) {
        if (probs_[i] > 0.0) m = std::min(m, support_[i]);
      }
      return m;
    }
    case Kind::kLatticeTail: return tail_->p_minus > 0.0 ? -1 : 0;
    case Kind::kBinomialSplit: return 0;
  }
  return 0;
}

std::int64_t OffspringLaw::sample_tail_value(Rng& rng) const {
  return lattice_floor(tail_->N, tail_->sampler.draw(rng));
}

std::int64_t OffspringLaw::sample(Rng& rng) const {
  switch (kind_) {
    case Kind::kConstant: return value_;
    case Kind::kBernoulliDeath: return rng.uniform() < p_ ? -1 : 0;
    case Kind::kTabulated: {
      double u = rng.uniform();
      double acc = 0.0;
      for (std::size_t i = 0; i < support_.size(); ++i) {
        acc += probs_[i];
        if (u < acc) return support_[i];
      }
      return support_.back();
    }
    case Kind::kLatticeTail: {
      const Tail& t = *tail_;
      double u = rng.uniform();
      if (u < t.p_minus) return -1;
      if (u < t.p_minus + t.p_plus) return 1;
      if (u < t.p_minus + t.p_plus + t.p_tail) return sample_tail_value(rng);
      return 0;
    }
    case Kind::kBinomialSplit: return binomial(count_->sample(rng), p_, rng);
  }
  return 0;
}

std::int64_t OffspringLaw::sample_sum(std::int64_t n, Rng& rng) const {
  if (n <= 0) return 0;
  switch (kind_) {
    case Kind::kConstant: return mul_checked(n, value_);
    case Kind::kBernoulliDeath: return -binomial(n, p_, rng);
    case Kind::kTabulated: {
      std::int64_t rem = n;
      double rem_p = 1.0;
      std::int64_t sum = 0;
      for (std::size_t i = 0; i + 1 < support_.size() && rem > 0; ++i) {
        std::int64_t c = rem_p > 0.0 ? binomial(rem, std::min(1.0, probs_[i] / rem_p), rng) : 0;
        sum = add_checked(sum, mul_checked(c, support_[i]));
        rem -= c;
        rem_p -= probs_[i];
      }
      return add_checked(sum, mul_checked(rem, support_.back()));
    }
    case Kind::kLatticeTail: {
      const Tail& t = *tail_;
      std::int64_t deaths = binomial(n, t.p_minus, rng);
      std::int64_t rem = n - deaths;
      double rem_p = 1.0 - t.p_minus;
      std::int64_t ones = rem_p > 0.0 ? binomial(rem, std::min(1.0, t.p_plus / rem_p), rng) : 0;
      rem -= ones;
      rem_p -= t.p_plus;
      std::int64_t tails = rem_p > 0.0 ? binomial(rem, std::min(1.0, t.p_tail / rem_p), rng) : 0;
      std::int64_t sum = ones - deaths;
      for (std::int64_t i = 0; i < tails; ++i) sum = add_checked(sum, sample_tail_value(rng));
      return sum;
    }
    case Kind::kBinomialSplit: return binomial(count_->sample_sum(n, rng), p_, rng);
  }
  return 0;
}

const Pmf& OffspringLaw::pmf() const {
  std::call_once(cache_->once, [this] {
    Pmf& out = cache_->pmf;
    switch (kind_) {
      case Kind::kConstant: out = {{value_, 1.0}}; break;
      case Kind::kBernoulliDeath: out = {{-1, p_}, {0, 1.0 - p_}}; break;
      case Kind::kTabulated: {
        std::vector<double> acc;
        for (std::size_t i = 0; i < support_.size(); ++i) {
          auto it = std::find_if(out.begin(), out.end(),
                                 [&](const auto& e) { return e.first == support_[i]; });
          if (it == out.end()) out.emplace_back(support_[i], probs_[i]);
          else it->second += probs_[i];
        }
        std::sort(out.begin(), out.end());
        break;
      }
      case Kind::kLatticeTail: {
        const Tail& t = *tail_;
        std::vector<std::pair<std::int64_t, double>> tail;
        double n = static_cast<double>(t.N);
        for (const Atom& a : t.nu.atoms()) {
          std::int64_t k = lattice_floor(t.N, a.location);
          if (k >= 2) tail.emplace_back(k, t.scale * a.mass);
        }
        for (const DensityPart& d : t.nu.densities()) {
          JumpMeasure part({}, {d}, Validation::kSkip);
          double part_mass = part.tail(2.0 / n);
          if (!(part_mass > 0.0)) continue;
          double sup = d.hi();
          std::int64_t k_hi = std::isfinite(sup) ? lattice_floor(t.N, sup) : INT64_MAX;
          double seen = 0.0;
          for (std::int64_t k = std::max<std::int64_t>(2, lattice_floor(t.N, d.lo()));
               k <= k_hi && k < (1 << 24); ++k) {
            double m = part.integrate([](double) { return 1.0; },
                                      Interval{k / n, (k + 1) / n, true});
            // Interval (lo, hi] vs [k/N, (k+1)/N): identical for densities.
            seen += m;
            if (m > 0.0) tail.emplace_back(k, t.scale * m);
            if (!std::isfinite(sup) && part_mass - seen <= 1e-15 * part_mass) break;
          }
        }
        std::sort(tail.begin(), tail.end());
        double tail_mass = 0.0;
        for (auto& [k, p] : tail) tail_mass += p;
        if (t.p_minus > 0.0) out.emplace_back(-1, t.p_minus);
        out.emplace_back(0, std::max(0.0, 1.0 - t.p_minus - t.p_plus - tail_mass));
        if (t.p_plus > 0.0) out.emplace_back(1, t.p_plus);
        for (auto& e : tail) {
          if (!out.empty() && out.back().first == e.first) out.back().second += e.second;
          else out.push_back(e);
        }
        break;
      }
      case Kind::kBinomialSplit: {
        std::vector<double> acc;
        for (const auto& [c, pc] : count_->pmf()) {
          std::vector<double> b = binomial_pmf(c, p_);
          if (acc.size() < b.size()) acc.resize(b.size(), 0.0);
          for (std::size_t i = 0; i < b.size(); ++i) acc[i] += pc * b[i];
        }
        for (std::size_t i = 0; i < acc.size(); ++i) {
          if (acc[i] > 0.0) out.emplace_back(static_cast<std::int64_t>(i), acc[i]);
        }
        break;
      }
    }
  });
  return cache_->pmf;
}

double OffspringLaw::mean() const {
  switch (kind_) {
    case Kind::kConstant: return static_cast<double>(value_);
    case Kind::kBernoulliDeath: return -p_;
    case Kind::kBinomialSplit: return p_ * count_->mean();
    default: break;
  }
  return expect([](std::int64_t k) { return static_cast<double>(k); });
}

double OffspringLaw::mgf_m1(double t) const {
  switch (kind_) {
    case Kind::kConstant: return std::expm1(t * static_cast<double>(value_));
    case Kind::kBernoulliDeath: return p_ * std::expm1(-t);
    case Kind::kBinomialSplit: return count_->mgf_m1(std::log1p(p_ * std::expm1(t)));
    default: break;
  }
  return expect([t](std::int64_t k) { return std::expm1(t * static_cast<double>(k)); });
}

double OffspringLaw::expect(const std::function<double(std::int64_t)>& fn) const {
  double s = 0.0;
  for (const auto& [k, p] : pmf()) {
    if (p > 0.0) s += p * fn(k);
  }
  return s;
}

// ------------------------------------------------------------------ PairLaw

PairLaw PairLaw::independent(OffspringLaw f, OffspringLaw m) {
  return PairLaw(Kind::kIndependent, std::move(f), std::move(m), 0.5);
}

PairLaw PairLaw::sex_split(OffspringLaw d, double q) {
  check_probability(q, "q");
  if (d.min_value() < 0) throw Error(ErrorCode::kParameter, "sex split needs D >= 0");
  return PairLaw(Kind::kSexSplit, d, OffspringLaw::constant(0), q);
}

PairLaw PairLaw::shifted(std::int64_t sf, std::int64_t sm) const {
  PairLaw out = *this;
  out.sf_ += sf;
  out.sm_ += sm;
  return out;
}

PairLaw::Draw PairLaw::sample(Rng& rng) const {
  Draw d{};
  if (kind_ == Kind::kIndependent) {
    d.f = a_.sample(rng);
    d.m = b_.sample(rng);
    d.d = d.f + d.m;
  } else {
    d.d = a_.sample(rng);
    d.f = binomial(d.d, q_, rng);
    d.m = d.d - d.f;
  }
  d.f += sf_;
  d.m += sm_;
  return d;
}

std::pair<std::int64_t, std::int64_t> PairLaw::sample_sum(std::int64_t n, Rng& rng) const {
  if (n <= 0) return {0, 0};
  std::int64_t f = 0;
  std::int64_t m = 0;
  if (kind_ == Kind::kIndependent) {
    f = a_.sample_sum(n, rng);
    m = b_.sample_sum(n, rng);
  } else {
    std::int64_t total = a_.sample_sum(n, rng);
    f = binomial(total, q_, rng);
    m = total - f;
  }
  return {f + n * sf_, m + n * sm_};
}

double PairLaw::mean_f() const {
  return (kind_ == Kind::kIndependent ? a_.mean() : q_ * a_.mean()) + static_cast<double>(sf_);
}

double PairLaw::mean_m() const {
  return (kind_ == Kind::kIndependent ? b_.mean() : (1.0 - q_) * a_.mean()) +
         static_cast<double>(sm_);
}

double PairLaw::mgf_m1(double t1, double t2) const {
  double x = 0.0;
  if (kind_ == Kind::kIndependent) {
    double a = a_.mgf_m1(t1);
    double b = b_.mgf_m1(t2);
    x = a + b + a * b;
  } else {
    x = a_.mgf_m1(std::log1p(q_ * std::expm1(t1) + (1.0 - q_) * std::expm1(t2)));
  }
  double c = t1 * static_cast<double>(sf_) + t2 * static_cast<double>(sm_);
  if (c == 0.0) return x;
  return x * std::exp(c) + std::expm1(c);
}

double PairLaw::expect(const std::function<double(std::int64_t, std::int64_t)>& fn) const {
  double s = 0.0;
  if (kind_ == Kind::kIndependent) {
    for (const auto& [i, pi] : a_.pmf()) {
      for (const auto& [j, pj] : b_.pmf()) {
        if (pi * pj > 0.0) s += pi * pj * fn(i + sf_, j + sm_);
      }
    }
    return s;
  }
  for (const auto& [d, pd] : a_.pmf()) {
    if (!(pd > 0.0)) continue;
    std::vector<double> b = binomial_pmf(d, q_);
    double inner = 0.0;
    for (std::int64_t i = 0; i <= d; ++i) {
      double w = b[static_cast<std::size_t>(i)];
      if (w > 0.0) inner += w * fn(i + sf_, d - i + sm_);
    }
    s += pd * inner;
  }
  return s;
}

}  // namespace bgw
