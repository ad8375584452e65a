#include "varbound/shard.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <thread>

#include "varbound/error.hpp"

namespace varbound {
namespace {

// Below this many values the threads cost more than they save.
constexpr std::size_t kParallelThreshold = 1 << 16;

double relative_error(double got, double want, double scale) {
  const double err = std::abs(got - want);
  if (err == 0.0) {
    return 0.0;
  }
  return err / std::max(scale, std::numeric_limits<double>::min());
}

double magnitude(std::span<const double> xs) {
  double m = 0.0;
  for (const double x : xs) m = std::max(m, std::abs(x));
  return m;
}

MomentAccumulator fold_range(std::span<const MomentAccumulator> parts) {
  if (parts.empty()) {
    return {};
  }
  if (parts.size() == 1) {
    return parts.front();
  }
  const std::size_t half = parts.size() / 2;
  return merge(fold_range(parts.first(half)), fold_range(parts.subspan(half)));
}

}  // namespace

std::string_view to_string(Topology topology) {
  switch (topology) {
    case Topology::left_fold:
      return "left_fold";
    case Topology::balanced_tree:
      return "balanced_tree";
    case Topology::random_tree:
      return "random_tree";
  }
  return "unknown";
}

std::optional<Topology> parse_topology(std::string_view text) {
  for (const auto t : {Topology::left_fold, Topology::balanced_tree, Topology::random_tree}) {
    if (text == to_string(t)) {
      return t;
    }
  }
  return std::nullopt;
}

std::vector<std::vector<double>> partition(std::span<const double> xs, const MergePlan& plan) {
  if (plan.shard_count == 0) {
    throw InputError("shard_count must be >= 1");
  }
  std::vector<std::vector<double>> shards(plan.shard_count);
  if (plan.shard_count == 1) {
    shards.front().assign(xs.begin(), xs.end());
    return shards;
  }
  std::mt19937_64 engine(plan.seed);
  for (const double x : xs) {
    shards[engine() % plan.shard_count].push_back(x);
  }
  return shards;
}

std::vector<MomentAccumulator> accumulate_shards(const std::vector<std::vector<double>>& shards) {
  std::vector<MomentAccumulator> partials(shards.size());
  const auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t i = first; i < shards.size(); i += stride) {
      MomentAccumulator acc;
      for (const double x : shards[i]) acc = push(acc, x);
      partials[i] = acc;
    }
  };

  std::size_t total = 0;
  for (const auto& s : shards) total += s.size();
  const std::size_t workers =
      std::min<std::size_t>(shards.size(), std::max(1u, std::thread::hardware_concurrency()));
  if (total < kParallelThreshold || workers < 2) {
    work(0, 1);
    return partials;
  }
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
  }
  return partials;
}

MomentAccumulator merge_partials(std::vector<MomentAccumulator> partials, Topology topology,
                                 std::uint64_t seed) {
  switch (topology) {
    case Topology::left_fold: {
      MomentAccumulator acc;
      for (const auto& p : partials) acc = merge(acc, p);
      return acc;
    }
    case Topology::balanced_tree:
      return fold_range(partials);
    case Topology::random_tree: {
      if (partials.empty()) {
        return {};
      }
      std::mt19937_64 engine(seed);
      // Repeatedly merge two randomly chosen nodes until one remains.
      while (partials.size() > 1) {
        const std::size_t size = partials.size();
        const std::size_t i = engine() % size;
        std::size_t j = engine() % (size - 1);
        if (j >= i) ++j;
        const MomentAccumulator joined = merge(partials[i], partials[j]);
        const auto [first, second] = std::minmax(i, j);
        partials.erase(partials.begin() + static_cast<std::ptrdiff_t>(second));
        partials.erase(partials.begin() + static_cast<std::ptrdiff_t>(first));
        partials.push_back(joined);
      }
      return partials.front();
    }
  }
  return {};
}

PlanResult run_plan(std::span<const double> xs, const MergePlan& plan) {
  const MomentAccumulator oracle = from_values(xs);
  // Tree shape uses its own stream so it is independent of the partition.
  const MomentAccumulator merged = merge_partials(accumulate_shards(partition(xs, plan)),
                                                  plan.topology, trial_seed(plan.seed, 0));
  DriftReport report;
  report.trials = 1;
  report.mean_rel_error = relative_error(merged.mean(), oracle.mean(), magnitude(xs));
  report.m2_rel_error = relative_error(merged.m2(), oracle.m2(), oracle.m2());
  report.worst_case_over_trials = std::max(report.mean_rel_error, report.m2_rel_error);
  return {merged, report};
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
  // splitmix64 finalizer
  std::uint64_t z = seed + (trial + 1) * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

DriftReport order_invariance_trial(std::span<const double> xs, std::uint64_t trials,
                                   const MergePlan& base) {
  if (trials == 0) {
    throw InputError("trials must be >= 1");
  }
  const MomentAccumulator oracle = from_values(xs);
  const double scale = magnitude(xs);

  DriftReport report;
  report.trials = trials;
  double mean_lo = std::numeric_limits<double>::infinity();
  double mean_hi = -mean_lo;
  double m2_lo = mean_lo;
  double m2_hi = -mean_lo;
  for (std::uint64_t t = 0; t < trials; ++t) {
    MergePlan plan = base;
    plan.seed = trial_seed(base.seed, t);
    const PlanResult result = run_plan(xs, plan);
    report.mean_rel_error = std::max(report.mean_rel_error, result.report.mean_rel_error);
    report.m2_rel_error = std::max(report.m2_rel_error, result.report.m2_rel_error);
    mean_lo = std::min(mean_lo, result.merged.mean());
    mean_hi = std::max(mean_hi, result.merged.mean());
    m2_lo = std::min(m2_lo, result.merged.m2());
    m2_hi = std::max(m2_hi, result.merged.m2());
  }
  report.worst_case_over_trials = std::max(report.mean_rel_error, report.m2_rel_error);
  report.mean_spread = relative_error(mean_hi, mean_lo, scale);
  report.m2_spread = relative_error(m2_hi, m2_lo, oracle.m2());
  return report;
}

}  // namespace varbound
