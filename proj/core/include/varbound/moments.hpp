#pragma once

#include <cstdint>
#include <span>

namespace varbound {

/// Mergeable first/second moment state: (count, mean, m2) where
/// m2 = sum of squared deviations from the mean.
///
/// Values are immutable; every operation returns a new accumulator.
/// Invariants: m2 >= 0; count == 0 implies mean == m2 == 0;
/// count == 1 implies m2 == 0.
class MomentAccumulator {
 public:
  constexpr MomentAccumulator() = default;

  /// Builds an accumulator from a serialized triple. Throws InputError when
  /// the triple violates the invariants above.
  static MomentAccumulator from_state(std::uint64_t count, double mean, double m2);

  constexpr std::uint64_t count() const { return count_; }
  constexpr double mean() const { return mean_; }
  constexpr double m2() const { return m2_; }
  constexpr bool empty() const { return count_ == 0; }

  friend constexpr bool operator==(const MomentAccumulator&, const MomentAccumulator&) = default;

 private:
  constexpr MomentAccumulator(std::uint64_t count, double mean, double m2)
      : count_(count), mean_(mean), m2_(m2) {}

  friend MomentAccumulator push(const MomentAccumulator&, double);
  friend MomentAccumulator remove(const MomentAccumulator&, double);
  friend MomentAccumulator merge(const MomentAccumulator&, const MomentAccumulator&);
  friend MomentAccumulator from_values(std::span<const double>);

  std::uint64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// The identity element of merge.
constexpr MomentAccumulator empty_accumulator() { return {}; }

/// Adds one observation (Welford update). Throws InputError on non-finite x.
MomentAccumulator push(const MomentAccumulator& acc, double x);

/// Removes one observation previously pushed. Membership of x is trusted,
/// not verified. Throws DomainError on an empty accumulator, or when the
/// downdate would drive m2 clearly negative (x cannot have been a member).
MomentAccumulator remove(const MomentAccumulator& acc, double x);

/// Pooled combination of two disjoint samples. Exactly commutative: the
/// arguments are put in a canonical order before evaluation.
/// Throws DomainError if the combined count overflows.
MomentAccumulator merge(const MomentAccumulator& a, const MomentAccumulator& b);

/// Two-pass reference construction: mean first, then the squared deviations.
/// Throws InputError naming the index of the first non-finite value.
MomentAccumulator from_values(std::span<const double> xs);

/// m2 / count. Throws DomainError on an empty accumulator.
double population_variance(const MomentAccumulator& acc);

/// m2 / (count - 1). Throws DomainError when count < 2.
double sample_variance(const MomentAccumulator& acc);

/// Throws DomainError on an empty accumulator.
double mean(const MomentAccumulator& acc);

}  // namespace varbound
