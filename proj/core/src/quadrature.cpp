#include "bgw/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "bgw/errors.hpp"

namespace bgw {
namespace {

double finite_piece(const std::function<double(double)>& f, double a, double b,
                    const QuadOptions& options) {
  if (!(b > a)) return 0.0;
  // Boost compares an unscaled error estimate with a scaled tolerance, so short
  // intervals never converge. Integrate over [0, 1] instead.
  const double w = b - a;
  auto unit = [&](double t) { return w * f(a + w * t); };
  double error = 0.0;
  double value = boost::math::quadrature::gauss_kronrod<double, 21>::integrate(
      unit, 0.0, 1.0, 12, options.rel_tol * 0.1, &error);
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::kNonConvergent,
                "non-finite integrand on [" + std::to_string(a) + ", " + std::to_string(b) + "]");
  }
  return value;
}

// Sums geometric pieces produced by `piece(k)` until the tail is negligible.
template <class Piece>
double geometric_sum(Piece piece, int max_pieces, const QuadOptions& options, const char* where) {
  double sum = 0.0;
  double prev = std::numeric_limits<double>::quiet_NaN();
  int stalled = 0;
  int zeros = 0;
  for (int k = 0; k < max_pieces; ++k) {
    double inc = piece(k);
    sum += inc;
    double mag = std::fabs(inc);
    if (std::fabs(sum) > options.ceiling) {
      throw Error(ErrorCode::kNonConvergent,
                  std::string("partial sums exceed ceiling near ") + where);
    }
    if (mag == 0.0) {
      if (++zeros >= 3 && k >= 3) return sum;
      prev = 0.0;
      stalled = 0;
      continue;
    }
    zeros = 0;
    if (std::isfinite(prev) && prev > 0.0) {
      double ratio = mag / prev;
      if (ratio >= 1.0 - 1e-9) {
        if (++stalled >= options.stall_window) {
          throw Error(ErrorCode::kNonConvergent,
                      std::string("piece contributions do not decay near ") + where);
        }
      } else {
        stalled = 0;
        double tail = mag * ratio / (1.0 - ratio);
        if (k >= 4 && tail <= options.rel_tol * std::fabs(sum)) return sum;
      }
    }
    prev = mag;
  }
  if (stalled > 0) {
    throw Error(ErrorCode::kNonConvergent, std::string("refinement budget exhausted near ") + where);
  }
  return sum;
}

double toward_zero(const std::function<double(double)>& f, double b, const QuadOptions& options) {
  return geometric_sum(
      [&](int k) {
        double hi = std::ldexp(b, -k);
        double lo = std::ldexp(b, -k - 1);
        return finite_piece(f, lo, hi, options);
      },
      options.max_pieces, options, "0");
}

double toward_infinity(const std::function<double(double)>& f, double a,
                       const QuadOptions& options) {
  int budget = std::min(options.max_pieces, 1000 - static_cast<int>(std::max(0.0, std::log2(a))));
  return geometric_sum(
      [&](int k) { return finite_piece(f, std::ldexp(a, k), std::ldexp(a, k + 1), options); },
      std::max(budget, 8), options, "infinity");
}

}  // namespace

double integrate_interval(const std::function<double(double)>& f, double lo, double hi,
                          std::span<const double> breakpoints, const QuadOptions& options) {
  if (!(hi > lo)) return 0.0;
  std::vector<double> cuts{lo};
  for (double b : breakpoints) {
    if (b > lo && b < hi && std::isfinite(b)) cuts.push_back(b);
  }
  if (std::isinf(hi) && cuts.back() < 1.0 && lo < 1.0) cuts.push_back(1.0);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  cuts.push_back(hi);

  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double a = cuts[i];
    double b = cuts[i + 1];
    if (std::isinf(b)) {
      if (a <= 0.0) a = 1.0;  // unreachable: a cut at 1 is inserted above
      total += toward_infinity(f, a, options);
    } else if (a == 0.0) {
      total += toward_zero(f, b, options);
    } else {
      total += finite_piece(f, a, b, options);
    }
    if (std::fabs(total) > options.ceiling) {
      throw Error(ErrorCode::kNonConvergent, "integral exceeds ceiling");
    }
  }
  return total;
}

}  // namespace bgw
