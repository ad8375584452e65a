#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "varbound/bounds.hpp"

namespace varbound {

enum class DispersionKind { population_sd, sample_sd, population_variance, sample_variance };

std::string_view to_string(DispersionKind kind);
std::optional<DispersionKind> parse_dispersion_kind(std::string_view text);

/// Summary statistics as printed in a report. `decimals`, when present, is the
/// number of decimal places every reported figure was rounded to.
struct ReportedSummary {
  std::uint64_t n = 1;
  double mean = 0.0;
  double dispersion = 0.0;
  DispersionKind kind = DispersionKind::population_variance;
  std::optional<double> min;
  std::optional<double> max;
  std::optional<int> decimals;
};

/// Closed interval of values consistent with a rounded figure.
struct ValueRange {
  double lo = 0.0;
  double hi = 0.0;
};

/// A reported summary converted to population variance, together with the
/// interval each figure may have had before rounding.
struct NormalizedSummary {
  DataSummary point;
  double rounding = 0.0;  // half a unit in the last reported place, or 0
  ValueRange mean;
  ValueRange variance;
  std::optional<ValueRange> min;
  std::optional<ValueRange> max;

  /// Interval of a further figure reported at the same precision.
  ValueRange widen(double value) const { return {value - rounding, value + rounding}; }
};

struct AuditOptions {
  Tolerance tolerance;
  // Reported min/max are attained data values. When false, checks that treat
  // them as members (Samuelson range, Nagy, refined range) are skipped.
  bool range_attained = true;
};

struct NamedBound {
  std::string constraint;
  BoundResult result;
};

/// Outcome of an audit. An infeasible verdict proves the report cannot come
/// from any real dataset; a feasible one only means no bound was violated.
struct Verdict {
  bool feasible = true;
  std::vector<NamedBound> violations;
  // Relative tolerance of the comparisons; each check's absolute tolerance is
  // tolerance_used * max(1, |bound|, |observed|).
  double tolerance_used = 0.0;
  // Every check that was evaluated, violated or not.
  std::vector<NamedBound> checks;
};

/// Throws InputError for invalid fields and for sample_* kinds with n = 1.
NormalizedSummary normalize(const ReportedSummary& r);

/// Ordering of min/mean/max, Samuelson range of the extremes, Nagy and
/// refined range bounds, each evaluated at the most favorable point of the
/// rounding intervals.
Verdict audit_summary(const ReportedSummary& r, const AuditOptions& opts = {});

/// Is x admissible as a member? Requires n >= 2.
Verdict audit_member(double x, const ReportedSummary& r, const AuditOptions& opts = {});

/// Subset mean (needs 1 <= size <= n-1) and/or subset population variance
/// (needs 1 <= size <= n) against the reported variance.
Verdict audit_subset(const SubsetSummary& sub, const ReportedSummary& r,
                     const AuditOptions& opts = {});

/// Is `value` admissible as the k-th smallest observation (1 <= k <= n)?
Verdict audit_order_statistic(std::uint64_t k, double value, const ReportedSummary& r,
                              const AuditOptions& opts = {});

}  // namespace varbound
