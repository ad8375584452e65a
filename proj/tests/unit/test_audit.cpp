#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "support/testing.hpp"
#include "varbound/audit.hpp"
#include "varbound/error.hpp"

using namespace varbound;
using varbound::testing::DataGen;

namespace {

ReportedSummary report(std::uint64_t n, double mean, double dispersion, DispersionKind kind) {
  ReportedSummary r;
  r.n = n;
  r.mean = mean;
  r.dispersion = dispersion;
  r.kind = kind;
  return r;
}

bool violates(const Verdict& v, const std::string& name) {
  return std::any_of(v.violations.begin(), v.violations.end(),
                     [&](const NamedBound& b) { return b.constraint == name; });
}

void check_verdict_invariants(const Verdict& v) {
  CHECK(v.feasible == v.violations.empty());
  if (!v.feasible) {
    const bool beyond = std::any_of(v.violations.begin(), v.violations.end(),
                                    [&](const NamedBound& b) { return b.result.slack < -v.tolerance_used; });
    CHECK(beyond);
  }
}

}  // namespace

TEST_CASE("normalize") {
  const auto s = normalize(report(10, 1.0, 2.0, DispersionKind::sample_sd));
  CHECK(s.point.variance == doctest::Approx(3.6).epsilon(1e-15));
  CHECK(normalize(report(5, 0.0, 4.0, DispersionKind::population_variance)).point.variance == 4.0);
  CHECK(normalize(report(5, 0.0, 2.0, DispersionKind::population_sd)).point.variance == 4.0);
  CHECK(normalize(report(5, 0.0, 5.0, DispersionKind::sample_variance)).point.variance == 4.0);
  CHECK_THROWS_AS(normalize(report(1, 0.0, 1.0, DispersionKind::sample_sd)), InputError);
  CHECK_THROWS_AS(normalize(report(0, 0.0, 1.0, DispersionKind::population_sd)), InputError);
  CHECK_THROWS_AS(normalize(report(3, 0.0, -1.0, DispersionKind::population_sd)), InputError);

  auto rounded = report(10, 1.0, 2.0, DispersionKind::population_sd);
  rounded.decimals = 1;
  const auto w = normalize(rounded);
  CHECK(w.rounding == doctest::Approx(0.05));
  CHECK(w.mean.lo == doctest::Approx(0.95));
  CHECK(w.variance.lo == doctest::Approx(1.95 * 1.95));
  CHECK(w.variance.hi == doctest::Approx(2.05 * 2.05));
  rounded.decimals = 16;
  CHECK_THROWS_AS(normalize(rounded), InputError);
}

TEST_CASE("dispersion kind names") {
  for (const auto k : {DispersionKind::population_sd, DispersionKind::sample_sd,
                       DispersionKind::population_variance, DispersionKind::sample_variance}) {
    CHECK(parse_dispersion_kind(to_string(k)) == k);
  }
  CHECK_FALSE(parse_dispersion_kind("stddev").has_value());
}

TEST_CASE("audit_summary") {
  auto r = report(10, 0.0, 1.0, DispersionKind::population_sd);
  r.max = 5.0;
  const Verdict v = audit_summary(r);
  CHECK_FALSE(v.feasible);
  CHECK(violates(v, "samuelson_max"));
  check_verdict_invariants(v);

  auto nagy = report(4, 2.0, 1.0, DispersionKind::population_variance);
  nagy.min = 0.0;
  nagy.max = 4.0;
  const Verdict nv = audit_summary(nagy);
  CHECK_FALSE(nv.feasible);
  CHECK(violates(nv, "nagy"));
  const auto it = std::find_if(nv.violations.begin(), nv.violations.end(),
                               [](const NamedBound& b) { return b.constraint == "nagy"; });
  CHECK(it->result.bound == 2.0);
  check_verdict_invariants(nv);

  auto real = report(4, 3.25, 3.6875, DispersionKind::population_variance);
  real.min = 1.0;
  real.max = 6.0;
  CHECK(audit_summary(real).feasible);

  auto unordered = report(4, 7.0, 3.6875, DispersionKind::population_variance);
  unordered.min = 1.0;
  unordered.max = 6.0;
  CHECK(violates(audit_summary(unordered), "mean_le_max"));

  // Without attainment the range checks are skipped.
  AuditOptions loose;
  loose.range_attained = false;
  const Verdict skipped = audit_summary(nagy, loose);
  CHECK(skipped.feasible);
}

TEST_CASE("audit_summary rounding widens the feasible region") {
  // Variance 1.0 against range [0, 2.9] at n = 4: Nagy bound 2.9^2/8 = 1.05125.
  auto r = report(4, 1.45, 1.0, DispersionKind::population_variance);
  r.min = 0.0;
  r.max = 2.9;
  CHECK_FALSE(audit_summary(r).feasible);
  r.decimals = 0;  // every figure is +/-0.5
  CHECK(audit_summary(r).feasible);
}

TEST_CASE("audit_member") {
  const auto r = report(10, 0.0, 1.0, DispersionKind::population_sd);
  const Verdict out = audit_member(5.0, r);
  CHECK_FALSE(out.feasible);
  CHECK(violates(out, "samuelson_upper"));
  check_verdict_invariants(out);

  CHECK(audit_member(0.0, r).feasible);
  CHECK(audit_member(3.0, r).feasible);
  CHECK(audit_member(-3.0, r).feasible);
  CHECK_FALSE(audit_member(-3.01, r).feasible);
  CHECK_THROWS_AS(audit_member(0.0, report(1, 0.0, 0.0, DispersionKind::population_sd)), DomainError);
}

TEST_CASE("audit_subset") {
  const auto r = report(10, 0.0, 1.0, DispersionKind::population_variance);
  const Verdict v = audit_subset(SubsetSummary::make(5, 2.0, std::nullopt), r);
  CHECK_FALSE(v.feasible);
  CHECK(violates(v, "mallows_richter"));
  CHECK(v.violations.front().result.bound == 4.0);

  CHECK(audit_subset(SubsetSummary::make(5, 0.0, std::nullopt), r).feasible);

  // m = n-1 with (m/n) S_m^2 = 2 S_n^2.
  const double sub_var = 2.0 * (10.0 / 9.0) * 1.0;
  const Verdict sv = audit_subset(SubsetSummary::make(9, std::nullopt, sub_var), r);
  CHECK_FALSE(sv.feasible);
  CHECK(violates(sv, "subset_variance"));

  const auto data = report(4, 3.25, 3.6875, DispersionKind::population_variance);
  CHECK(audit_subset(SubsetSummary::make(2, 5.0, std::nullopt), data).feasible);

  CHECK_THROWS_AS(audit_subset(SubsetSummary::make(10, 0.5, std::nullopt), r), DomainError);
  CHECK_THROWS_AS(audit_subset(SubsetSummary::make(11, std::nullopt, 0.5), r), DomainError);
  CHECK(audit_subset(SubsetSummary::make(10, std::nullopt, 1.0), r).feasible);
}

TEST_CASE("audit_order_statistic") {
  const auto r = report(5, 0.0, 1.0, DispersionKind::population_sd);
  const Verdict median = audit_order_statistic(3, 2.0, r);
  CHECK_FALSE(median.feasible);
  CHECK(violates(median, "boyd_hawkins_upper"));
  CHECK(median.violations.front().result.bound == doctest::Approx(std::sqrt(2.0 / 3.0)));

  for (std::uint64_t k = 2; k <= 4; ++k) CHECK(audit_order_statistic(k, 0.0, r).feasible);
  CHECK(audit_order_statistic(5, std::sqrt(4.0), r).feasible);
  CHECK_THROWS_AS(audit_order_statistic(0, 0.0, r), DomainError);
  CHECK_THROWS_AS(audit_order_statistic(6, 0.0, r), DomainError);
}

TEST_CASE("property: soundness on summaries of real data") {
  DataGen gen(0xa0d1);
  const DispersionKind kinds[] = {DispersionKind::population_sd, DispersionKind::sample_sd,
                                  DispersionKind::population_variance, DispersionKind::sample_variance};
  for (int trial = 0; trial < 300; ++trial) {
    auto xs = gen.any_data(gen.size(2, 120));
    const auto ref = varbound::testing::reference(xs);
    const double n = static_cast<double>(xs.size());
    const DispersionKind kind = kinds[gen.index(4)];
    double dispersion = ref.variance();
    if (kind == DispersionKind::sample_variance || kind == DispersionKind::sample_sd) {
      dispersion *= n / (n - 1.0);
    }
    if (kind == DispersionKind::population_sd || kind == DispersionKind::sample_sd) {
      dispersion = std::sqrt(dispersion);
    }
    std::sort(xs.begin(), xs.end());
    ReportedSummary r = report(xs.size(), ref.mean, dispersion, kind);
    r.min = xs.front();
    r.max = xs.back();
    REQUIRE(audit_summary(r).feasible);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      REQUIRE(audit_member(xs[i], r).feasible);
      REQUIRE(audit_order_statistic(i + 1, xs[i], r).feasible);
    }
  }
}

TEST_CASE("property: coarser rounding never flips feasible to infeasible") {
  DataGen gen(0xa0d2);
  for (int trial = 0; trial < 2000; ++trial) {
    ReportedSummary r = report(gen.size(3, 30), gen.uniform(-5, 5), gen.uniform(0, 4),
                               DispersionKind::population_sd);
    r.min = gen.uniform(-10, 0);
    r.max = gen.uniform(0, 10);
    const double x = gen.uniform(-15, 15);
    const std::uint64_t k = gen.size(1, r.n);
    bool was_feasible[3] = {audit_summary(r).feasible, audit_member(x, r).feasible,
                            audit_order_statistic(k, x, r).feasible};
    for (int d = 15; d >= 0; --d) {
      r.decimals = d;
      const Verdict vs[3] = {audit_summary(r), audit_member(x, r), audit_order_statistic(k, x, r)};
      for (int i = 0; i < 3; ++i) {
        check_verdict_invariants(vs[i]);
        if (was_feasible[i]) REQUIRE(vs[i].feasible);
        was_feasible[i] = vs[i].feasible;
      }
    }
  }
}
