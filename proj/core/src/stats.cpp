#include "bgw/stats.hpp"

#include <algorithm>
#include <cmath>

#include "bgw/errors.hpp"
#include "bgw/rng.hpp"

namespace bgw {
namespace {

std::vector<double> resample(const std::vector<double>& src, std::size_t n, Rng& rng) {
  std::vector<double> out(n);
  for (auto& v : out) {
    auto k = static_cast<std::size_t>(rng.uniform() * static_cast<double>(src.size()));
    v = src[std::min(k, src.size() - 1)];
  }
  return out;
}

double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  double pos = q * static_cast<double>(v.size() - 1);
  auto i = static_cast<std::size_t>(std::floor(pos));
  double frac = pos - static_cast<double>(i);
  if (i + 1 >= v.size()) return v.back();
  return v[i] + frac * (v[i + 1] - v[i]);
}

}  // namespace

MeanStats mean_stats(const std::vector<double>& s) {
  MeanStats m;
  m.n = s.size();
  if (s.empty()) return m;
  double sum = 0.0;
  for (double v : s) sum += v;
  m.mean = sum / static_cast<double>(s.size());
  double ss = 0.0;
  for (double v : s) ss += (v - m.mean) * (v - m.mean);
  if (s.size() > 1) m.variance = ss / static_cast<double>(s.size() - 1);
  m.standard_error = std::sqrt(m.variance / static_cast<double>(s.size()));
  return m;
}

double wasserstein1(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::kParameter, "wasserstein1 needs nonempty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double prev = std::min(a.front(), b.front());
  double total = 0.0;
  while (i < a.size() || j < b.size()) {
    double next;
    if (j >= b.size() || (i < a.size() && a[i] <= b[j])) {
      next = a[i];
    } else {
      next = b[j];
    }
    double fa = static_cast<double>(i) / na;
    double fb = static_cast<double>(j) / nb;
    total += std::fabs(fa - fb) * (next - prev);
    prev = next;
    while (i < a.size() && a[i] == next) ++i;
    while (j < b.size() && b[j] == next) ++j;
  }
  return total;
}

Interval95 bootstrap_w1_ci(const std::vector<double>& a, const std::vector<double>& b, int reps,
                           std::uint64_t seed, double level) {
  std::vector<double> w;
  w.reserve(static_cast<std::size_t>(reps));
  for (int r = 0; r < reps; ++r) {
    Rng rng = stream_for(seed, static_cast<std::uint64_t>(r));
    w.push_back(wasserstein1(resample(a, a.size(), rng), resample(b, b.size(), rng)));
  }
  double tail = (1.0 - level) / 2.0;
  return {quantile(w, tail), quantile(w, 1.0 - tail)};
}

double w1_null_band(const std::vector<double>& a, const std::vector<double>& b, int reps,
                    std::uint64_t seed, double level) {
  std::vector<double> pooled(a);
  pooled.insert(pooled.end(), b.begin(), b.end());
  std::vector<double> w;
  w.reserve(static_cast<std::size_t>(reps));
  for (int r = 0; r < reps; ++r) {
    Rng rng = stream_for(seed, static_cast<std::uint64_t>(r));
    w.push_back(wasserstein1(resample(pooled, a.size(), rng), resample(pooled, b.size(), rng)));
  }
  return quantile(w, level);
}

}  // namespace bgw
