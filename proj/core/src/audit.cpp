#include "varbound/audit.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "varbound/error.hpp"

namespace varbound {
namespace {

constexpr int kMaxDecimals = 15;

double square(double x) { return x * x; }

// Distance between two closed intervals (0 when they overlap).
double gap(ValueRange a, ValueRange b) { return std::max({0.0, a.lo - b.hi, b.lo - a.hi}); }

class VerdictBuilder {
 public:
  explicit VerdictBuilder(const AuditOptions& opts) : tol_(opts.tolerance) {}

  void lower(std::string name, double bound, double observed) {
    add(std::move(name), BoundResult::lower(bound, observed, tol_));
  }
  void upper(std::string name, double bound, double observed) {
    add(std::move(name), BoundResult::upper(bound, observed, tol_));
  }

  Verdict finish() && {
    verdict_.feasible = verdict_.violations.empty();
    verdict_.tolerance_used = tol_.relative;
    return std::move(verdict_);
  }

 private:
  void add(std::string name, BoundResult result) {
    if (!result.satisfied) {
      verdict_.violations.push_back({name, result});
    }
    verdict_.checks.push_back({std::move(name), result});
  }

  Tolerance tol_;
  Verdict verdict_;
};

// Most favorable summary for upper-end checks: largest mean and variance.
DataSummary high_point(const NormalizedSummary& s) {
  return DataSummary{s.point.n, s.mean.hi, s.variance.hi, std::nullopt, std::nullopt};
}

DataSummary low_point(const NormalizedSummary& s) {
  return DataSummary{s.point.n, s.mean.lo, s.variance.hi, std::nullopt, std::nullopt};
}

}  // namespace

std::string_view to_string(DispersionKind kind) {
  switch (kind) {
    case DispersionKind::population_sd:
      return "population_sd";
    case DispersionKind::sample_sd:
      return "sample_sd";
    case DispersionKind::population_variance:
      return "population_variance";
    case DispersionKind::sample_variance:
      return "sample_variance";
  }
  return "unknown";
}

std::optional<DispersionKind> parse_dispersion_kind(std::string_view text) {
  for (const auto kind : {DispersionKind::population_sd, DispersionKind::sample_sd,
                          DispersionKind::population_variance, DispersionKind::sample_variance}) {
    if (text == to_string(kind)) {
      return kind;
    }
  }
  return std::nullopt;
}

NormalizedSummary normalize(const ReportedSummary& r) {
  if (r.n < 1) {
    throw InputError("reported n must be >= 1");
  }
  if (!std::isfinite(r.dispersion) || r.dispersion < 0.0) {
    throw InputError("reported dispersion must be finite and non-negative");
  }
  if (r.decimals && (*r.decimals < 0 || *r.decimals > kMaxDecimals)) {
    throw InputError("decimals must be in [0, 15]");
  }
  const bool sample_kind =
      r.kind == DispersionKind::sample_sd || r.kind == DispersionKind::sample_variance;
  if (sample_kind && r.n < 2) {
    throw InputError("sample dispersion is undefined for n = 1");
  }
  const bool sd_kind = r.kind == DispersionKind::sample_sd || r.kind == DispersionKind::population_sd;
  const double n = static_cast<double>(r.n);
  const double to_population = sample_kind ? (n - 1.0) / n : 1.0;
  const auto to_variance = [&](double d) { return (sd_kind ? d * d : d) * to_population; };

  NormalizedSummary out;
  out.point = DataSummary::make(r.n, r.mean, to_variance(r.dispersion), r.min, r.max);
  out.rounding = r.decimals ? 0.5 * std::pow(10.0, -*r.decimals) : 0.0;
  out.mean = out.widen(r.mean);
  const ValueRange dispersion = out.widen(r.dispersion);
  out.variance = {to_variance(std::max(0.0, dispersion.lo)), to_variance(dispersion.hi)};
  if (r.min) out.min = out.widen(*r.min);
  if (r.max) out.max = out.widen(*r.max);
  return out;
}

Verdict audit_summary(const ReportedSummary& r, const AuditOptions& opts) {
  const NormalizedSummary s = normalize(r);
  const std::uint64_t n = s.point.n;
  VerdictBuilder v(opts);

  if (s.min) v.upper("min_le_mean", s.mean.hi, s.min->lo);
  if (s.max) v.upper("mean_le_max", s.max->hi, s.mean.lo);

  if (opts.range_attained && n >= 2) {
    if (s.max) v.upper("samuelson_max", samuelson_interval(high_point(s)).hi, s.max->lo);
    if (s.min) v.lower("samuelson_min", samuelson_interval(low_point(s)).lo, s.min->hi);
  }

  if (opts.range_attained && s.min && s.max && n >= 2) {
    const double range = std::max(0.0, s.max->lo - s.min->hi);
    const double nagy = pair_bound(n, range, 0.0);
    v.lower("nagy", nagy, s.variance.hi);
    if (n >= 3) {
      const ValueRange midrange{0.5 * (s.min->lo + s.max->lo), 0.5 * (s.min->hi + s.max->hi)};
      const double off_center = gap(s.mean, midrange);
      const double refined = nagy + 2.0 / static_cast<double>(n - 2) * square(off_center);
      v.lower("refined_range", refined, s.variance.hi);
    }
  }
  return std::move(v).finish();
}

Verdict audit_member(double x, const ReportedSummary& r, const AuditOptions& opts) {
  if (!std::isfinite(x)) {
    throw InputError("member value must be finite");
  }
  const NormalizedSummary s = normalize(r);
  if (s.point.n < 2) {
    throw DomainError("Samuelson undefined for n<2");
  }
  const ValueRange value = s.widen(x);
  VerdictBuilder v(opts);
  v.lower("samuelson_lower", samuelson_interval(low_point(s)).lo, value.hi);
  v.upper("samuelson_upper", samuelson_interval(high_point(s)).hi, value.lo);
  return std::move(v).finish();
}

Verdict audit_subset(const SubsetSummary& sub, const ReportedSummary& r, const AuditOptions& opts) {
  const NormalizedSummary s = normalize(r);
  const SubsetSummary checked = SubsetSummary::make(sub.size, sub.mean, sub.variance);
  const std::uint64_t n = s.point.n;
  if (checked.mean && checked.size >= n) {
    throw DomainError("subset mean needs 1 <= r <= n-1");
  }
  if (checked.variance && checked.size > n) {
    throw DomainError("subset variance needs 1 <= m <= n");
  }

  VerdictBuilder v(opts);
  if (checked.mean) {
    const double r_size = static_cast<double>(checked.size);
    const double off = gap(s.widen(*checked.mean), s.mean);
    const double bound = r_size / static_cast<double>(n - checked.size) * square(off);
    v.lower("mallows_richter", bound, s.variance.hi);
  }
  if (checked.variance) {
    const double sub_var = std::max(0.0, *checked.variance - s.rounding);
    const double bound = static_cast<double>(checked.size) / static_cast<double>(n) * sub_var;
    v.lower("subset_variance", bound, s.variance.hi);
  }
  return std::move(v).finish();
}

Verdict audit_order_statistic(std::uint64_t k, double value, const ReportedSummary& r,
                              const AuditOptions& opts) {
  if (!std::isfinite(value)) {
    throw InputError("order statistic value must be finite");
  }
  const NormalizedSummary s = normalize(r);
  if (k < 1 || k > s.point.n) {
    throw DomainError("order statistic index k must be in [1, n]");
  }
  const ValueRange claimed = s.widen(value);
  VerdictBuilder v(opts);
  v.lower("boyd_hawkins_lower", boyd_hawkins_interval(low_point(s), k).lo, claimed.hi);
  v.upper("boyd_hawkins_upper", boyd_hawkins_interval(high_point(s), k).hi, claimed.lo);
  return std::move(v).finish();
}

}  // namespace varbound
