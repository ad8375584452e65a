#include "varbound/moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <tuple>

#include "varbound/error.hpp"

namespace varbound {
namespace {

// Relative size of a negative m2 residue that is treated as rounding noise.
constexpr double kNegativeM2Slop = 1e-9;

void require_finite(double x) {
  if (!std::isfinite(x)) {
    throw InputError("observation must be finite");
  }
}

}  // namespace

MomentAccumulator MomentAccumulator::from_state(std::uint64_t count, double mean, double m2) {
  if (!std::isfinite(mean) || !std::isfinite(m2)) {
    throw InputError("accumulator state must be finite");
  }
  if (m2 < 0.0) {
    throw InputError("accumulator m2 must be non-negative");
  }
  if (count == 0 && (mean != 0.0 || m2 != 0.0)) {
    throw InputError("empty accumulator must have mean = 0 and m2 = 0");
  }
  if (count == 1 && m2 != 0.0) {
    throw InputError("single-observation accumulator must have m2 = 0");
  }
  return MomentAccumulator(count, mean, m2);
}

MomentAccumulator push(const MomentAccumulator& acc, double x) {
  require_finite(x);
  if (acc.count_ == std::numeric_limits<std::uint64_t>::max()) {
    throw DomainError("accumulator count overflow");
  }
  const std::uint64_t n = acc.count_ + 1;
  const double delta = x - acc.mean_;
  const double mean = acc.mean_ + delta / static_cast<double>(n);
  // delta and (x - mean) share a sign, so the increment is non-negative.
  const double m2 = acc.m2_ + delta * (x - mean);
  return MomentAccumulator(n, mean, n == 1 ? 0.0 : m2);
}

MomentAccumulator remove(const MomentAccumulator& acc, double x) {
  require_finite(x);
  if (acc.count_ == 0) {
    throw DomainError("remove from empty accumulator");
  }
  if (acc.count_ == 1) {
    return {};
  }
  const std::uint64_t n = acc.count_ - 1;
  const double delta = x - acc.mean_;
  const double mean = acc.mean_ - delta / static_cast<double>(n);
  const double removed = delta * (x - mean);
  double m2 = acc.m2_ - removed;
  if (n == 1) {
    return MomentAccumulator(1, mean, 0.0);
  }
  if (m2 < 0.0) {
    // Rounding in delta is on the order of eps * |x|, so the residue can
    // reach eps * |delta| * |x| even when x was a genuine member.
    const double scale = std::max({acc.m2_, removed, std::abs(delta) * std::max(std::abs(x), std::abs(acc.mean_))});
    if (-m2 > kNegativeM2Slop * scale) {
      throw DomainError("removed value is inconsistent with the accumulator (m2 would be negative)");
    }
    m2 = 0.0;
  }
  return MomentAccumulator(n, mean, m2);
}

MomentAccumulator merge(const MomentAccumulator& a, const MomentAccumulator& b) {
  // Canonical order: larger count first, ties broken on (mean, m2), so that
  // merge(a, b) and merge(b, a) evaluate the same expression.
  const bool swap = std::tie(a.count_, a.mean_, a.m2_) < std::tie(b.count_, b.mean_, b.m2_);
  const MomentAccumulator& big = swap ? b : a;
  const MomentAccumulator& small = swap ? a : b;

  if (small.count_ == 0) {
    return big;
  }
  if (big.count_ > std::numeric_limits<std::uint64_t>::max() - small.count_) {
    throw DomainError("accumulator count overflow");
  }
  const std::uint64_t n = big.count_ + small.count_;
  const double nd = static_cast<double>(n);
  const double delta = small.mean_ - big.mean_;
  const double small_share = static_cast<double>(small.count_) / nd;
  const double mean = big.mean_ + delta * small_share;
  const double m2 = big.m2_ + small.m2_ + delta * delta * static_cast<double>(big.count_) * small_share;
  return MomentAccumulator(n, mean, m2);
}

MomentAccumulator from_values(std::span<const double> xs) {
  long double sum = 0.0L;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i])) {
      throw InputError("non-finite value at index " + std::to_string(i));
    }
    sum += xs[i];
  }
  if (xs.empty()) {
    return {};
  }
  const long double n = static_cast<long double>(xs.size());
  const long double mean = sum / n;
  long double m2 = 0.0L;
  for (const double x : xs) {
    const long double d = x - mean;
    m2 += d * d;
  }
  return MomentAccumulator(xs.size(), static_cast<double>(mean),
                           xs.size() == 1 ? 0.0 : static_cast<double>(m2));
}

double population_variance(const MomentAccumulator& acc) {
  if (acc.empty()) {
    throw DomainError("population variance of an empty accumulator");
  }
  return acc.m2() / static_cast<double>(acc.count());
}

double sample_variance(const MomentAccumulator& acc) {
  if (acc.count() < 2) {
    throw DomainError("sample variance needs at least two observations");
  }
  return acc.m2() / static_cast<double>(acc.count() - 1);
}

double mean(const MomentAccumulator& acc) {
  if (acc.empty()) {
    throw DomainError("mean of an empty accumulator");
  }
  return acc.mean();
}

}  // namespace varbound
