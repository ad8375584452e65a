#include "varbound/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "varbound/error.hpp"
#include "varbound/moments.hpp"

namespace varbound {
namespace {

double square(double x) { return x * x; }

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) {
    throw InputError(std::string(what) + " must be finite");
  }
}

void require_range(const DataSummary& s) {
  if (!s.min || !s.max) {
    throw InputError("range bound needs both min and max");
  }
}

double variance_without(std::span<const double> xs, std::size_t skip_a, std::size_t skip_b) {
  std::vector<double> rest;
  rest.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i != skip_a && i != skip_b) {
      rest.push_back(xs[i]);
    }
  }
  return population_variance(from_values(rest));
}

}  // namespace

double Tolerance::absolute(double observed, double bound) const {
  return relative * std::max({1.0, std::abs(observed), std::abs(bound)});
}

DataSummary DataSummary::make(std::uint64_t n, double mean, double variance,
                              std::optional<double> min, std::optional<double> max) {
  if (n < 1) {
    throw InputError("summary needs n >= 1");
  }
  require_finite(mean, "mean");
  require_finite(variance, "variance");
  if (variance < 0.0) {
    throw InputError("variance must be non-negative");
  }
  if (min) require_finite(*min, "min");
  if (max) require_finite(*max, "max");
  return DataSummary{n, mean, variance, min, max};
}

DataSummary DataSummary::of(std::span<const double> xs) {
  if (xs.empty()) {
    throw InputError("summary of an empty dataset");
  }
  const MomentAccumulator acc = from_values(xs);
  const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  return DataSummary{acc.count(), acc.mean(), population_variance(acc), *lo, *hi};
}

double DataSummary::sd() const { return std::sqrt(variance); }

SubsetSummary SubsetSummary::make(std::uint64_t size, std::optional<double> mean,
                                  std::optional<double> variance) {
  if (size < 1) {
    throw InputError("subset size must be >= 1");
  }
  if (!mean && !variance) {
    throw InputError("subset needs a mean or a variance");
  }
  if (mean) require_finite(*mean, "subset mean");
  if (variance) {
    require_finite(*variance, "subset variance");
    if (*variance < 0.0) {
      throw InputError("subset variance must be non-negative");
    }
  }
  return SubsetSummary{size, mean, variance};
}

BoundResult BoundResult::lower(double bound, double observed, Tolerance tol) {
  const double slack = observed - bound;
  return {bound, observed, slack, slack >= -tol.absolute(observed, bound)};
}

BoundResult BoundResult::upper(double bound, double observed, Tolerance tol) {
  const double slack = bound - observed;
  return {bound, observed, slack, slack >= -tol.absolute(observed, bound)};
}

Interval samuelson_interval(const DataSummary& s) {
  if (s.n < 2) {
    throw DomainError("Samuelson undefined for n<2");
  }
  const double half_width = std::sqrt(static_cast<double>(s.n - 1) * s.variance);
  return {s.mean - half_width, s.mean + half_width};
}

std::vector<BoundResult> check_samuelson(std::span<const double> xs, Tolerance tol) {
  if (xs.size() < 2) {
    throw DomainError("Samuelson undefined for n<2");
  }
  const MomentAccumulator acc = from_values(xs);
  const double observed = static_cast<double>(acc.count() - 1) * population_variance(acc);
  std::vector<BoundResult> out;
  out.reserve(xs.size());
  for (const double x : xs) {
    out.push_back(BoundResult::lower(square(x - acc.mean()), observed, tol));
  }
  return out;
}

double pair_bound(std::uint64_t n, double xj, double xk) {
  if (n < 2) {
    throw DomainError("pair bound needs n >= 2");
  }
  return square(xj - xk) / (2.0 * static_cast<double>(n));
}

BoundResult nagy_bound(const DataSummary& s, Tolerance tol) {
  if (s.n < 2) {
    throw DomainError("Nagy bound needs n >= 2");
  }
  require_range(s);
  return BoundResult::lower(pair_bound(s.n, *s.max, *s.min), s.variance, tol);
}

BoundResult refined_range_bound(const DataSummary& s, Tolerance tol) {
  if (s.n < 3) {
    throw DomainError("refinement needs n >= 3");
  }
  require_range(s);
  const double midrange = 0.5 * (*s.min + *s.max);
  const double bound = pair_bound(s.n, *s.max, *s.min) +
                       2.0 / static_cast<double>(s.n - 2) * square(s.mean - midrange);
  return BoundResult::lower(bound, s.variance, tol);
}

BoundResult mallows_richter_bound(const DataSummary& s, const SubsetSummary& sub, Tolerance tol) {
  if (!sub.mean) {
    throw InputError("Mallows-Richter bound needs the subset mean");
  }
  if (sub.size < 1 || sub.size >= s.n) {
    throw DomainError("Mallows-Richter bound needs 1 <= r <= n-1");
  }
  const double r = static_cast<double>(sub.size);
  const double bound = r / static_cast<double>(s.n - sub.size) * square(*sub.mean - s.mean);
  return BoundResult::lower(bound, s.variance, tol);
}

double split_bound(std::uint64_t n1, std::uint64_t n2, double mean_x, double mean_y) {
  if (n1 < 1 || n2 < 1) {
    throw DomainError("split bound needs both parts non-empty");
  }
  const double a = static_cast<double>(n1);
  const double b = static_cast<double>(n2);
  const double total = a + b;
  return a * b / (total * total) * square(mean_x - mean_y);
}

BoundResult subset_variance_bound(const DataSummary& s, const SubsetSummary& sub, Tolerance tol) {
  if (!sub.variance) {
    throw InputError("subset variance bound needs the subset variance");
  }
  if (sub.size < 1 || sub.size > s.n) {
    throw DomainError("subset variance bound needs 1 <= m <= n");
  }
  const double bound = static_cast<double>(sub.size) / static_cast<double>(s.n) * *sub.variance;
  return BoundResult::lower(bound, s.variance, tol);
}

Interval boyd_hawkins_interval(const DataSummary& s, std::uint64_t k) {
  if (k < 1 || k > s.n) {
    throw DomainError("order statistic index k must be in [1, n]");
  }
  const double n = static_cast<double>(s.n);
  const double kd = static_cast<double>(k);
  const double sd = s.sd();
  return {s.mean - std::sqrt((n - kd) / kd) * sd,
          s.mean + std::sqrt((kd - 1.0) / (n - kd + 1.0)) * sd};
}

IdentityCheck identity_leave_one_out(std::span<const double> xs, std::size_t j) {
  if (xs.size() < 2) {
    throw DomainError("leave-one-out identity needs n >= 2");
  }
  if (j >= xs.size()) {
    throw DomainError("index out of range");
  }
  const MomentAccumulator all = from_values(xs);
  const double n = static_cast<double>(xs.size());
  const double lhs = population_variance(all);
  const double rest = variance_without(xs, j, j);
  const double rhs = (n - 1.0) / n * rest + square(xs[j] - all.mean()) / (n - 1.0);
  return {lhs, rhs, lhs - rhs};
}

IdentityCheck identity_pair_decomposition(std::span<const double> xs, std::size_t j,
                                          std::size_t k) {
  if (xs.size() < 3) {
    throw DomainError("pair decomposition needs n >= 3");
  }
  if (j >= xs.size() || k >= xs.size()) {
    throw DomainError("index out of range");
  }
  if (j == k) {
    throw DomainError("pair decomposition needs two distinct indices");
  }
  const MomentAccumulator all = from_values(xs);
  const double n = static_cast<double>(xs.size());
  const double lhs = population_variance(all);
  const double rest = variance_without(xs, j, k);
  const double rhs = (n - 2.0) / n * rest + square(xs[j] - xs[k]) / (2.0 * n) +
                     2.0 / (n - 2.0) * square(all.mean() - 0.5 * (xs[j] + xs[k]));
  return {lhs, rhs, lhs - rhs};
}

}  // namespace varbound
