#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace varbound {

/// Relative comparison tolerance shared by every bound check. The absolute
/// tolerance of one comparison is relative * max(1, |observed|, |bound|).
struct Tolerance {
  double relative = 1e-9;

  double absolute(double observed, double bound) const;
};

/// (n, mean, population variance, optional attained min/max).
///
/// Construction enforces n >= 1, finite fields, variance >= 0. Ordering of
/// min <= mean <= max is not enforced here: reported summaries may violate
/// it and the audit reports that as a violation rather than an error.
struct DataSummary {
  std::uint64_t n = 1;
  double mean = 0.0;
  double variance = 0.0;
  std::optional<double> min;
  std::optional<double> max;

  static DataSummary make(std::uint64_t n, double mean, double variance,
                          std::optional<double> min = std::nullopt,
                          std::optional<double> max = std::nullopt);

  /// Exact summary of a dataset (two-pass moments plus observed extremes).
  static DataSummary of(std::span<const double> xs);

  double sd() const;
};

/// Statistics of an r-element (or m-element) subset of the data.
struct SubsetSummary {
  std::uint64_t size = 1;
  std::optional<double> mean;      // subset mean
  std::optional<double> variance;  // subset population variance

  static SubsetSummary make(std::uint64_t size, std::optional<double> mean,
                            std::optional<double> variance);
};

/// One evaluated inequality. For lower bounds slack = observed - bound, for
/// upper bounds slack = bound - observed; satisfied <=> slack >= -tolerance.
struct BoundResult {
  double bound = 0.0;
  double observed = 0.0;
  double slack = 0.0;
  bool satisfied = true;

  static BoundResult lower(double bound, double observed, Tolerance tol = {});
  static BoundResult upper(double bound, double observed, Tolerance tol = {});
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Both sides of an algebraic identity evaluated independently.
struct IdentityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
};

/// Every member lies in mean -/+ sqrt((n-1) * variance). Requires n >= 2.
Interval samuelson_interval(const DataSummary& s);

/// Per point: observed = (n-1) * variance, bound = (x_j - mean)^2.
std::vector<BoundResult> check_samuelson(std::span<const double> xs, Tolerance tol = {});

/// (x_j - x_k)^2 / (2n), a lower bound on the population variance.
double pair_bound(std::uint64_t n, double xj, double xk);

/// (max - min)^2 / (2n) <= variance. Requires n >= 2 and both extremes.
BoundResult nagy_bound(const DataSummary& s, Tolerance tol = {});

/// Nagy bound plus 2/(n-2) * (mean - midrange)^2. Requires n >= 3.
BoundResult refined_range_bound(const DataSummary& s, Tolerance tol = {});

/// r/(n-r) * (subset mean - mean)^2 <= variance for 1 <= r <= n-1.
BoundResult mallows_richter_bound(const DataSummary& s, const SubsetSummary& sub,
                                  Tolerance tol = {});

/// n1*n2/(n1+n2)^2 * (meanX - meanY)^2: the between-group term of the pooled
/// variance, hence a lower bound on it.
double split_bound(std::uint64_t n1, std::uint64_t n2, double mean_x, double mean_y);

/// (m/n) * subset variance <= variance for 1 <= m <= n.
BoundResult subset_variance_bound(const DataSummary& s, const SubsetSummary& sub,
                                  Tolerance tol = {});

/// Admissible interval for the k-th smallest value (1-based):
/// [mean - sqrt((n-k)/k) sd, mean + sqrt((k-1)/(n-k+1)) sd]. Accepts 1 <= k <= n.
Interval boyd_hawkins_interval(const DataSummary& s, std::uint64_t k);

/// variance(xs) against ((n-1)/n) variance(rest) + (x_j - mean)^2 / (n-1),
/// where rest is xs without element j. Requires n >= 2.
IdentityCheck identity_leave_one_out(std::span<const double> xs, std::size_t j);

/// variance(xs) against ((n-2)/n) variance(rest) + (x_j - x_k)^2 / (2n)
///   + 2/(n-2) (mean - (x_j + x_k)/2)^2, rest = xs without j and k.
/// Requires n >= 3 and j != k.
IdentityCheck identity_pair_decomposition(std::span<const double> xs, std::size_t j,
                                          std::size_t k);

}  // namespace varbound
