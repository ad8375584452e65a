#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "varbound/moments.hpp"

namespace varbound {

enum class Topology { left_fold, balanced_tree, random_tree };

std::string_view to_string(Topology topology);
std::optional<Topology> parse_topology(std::string_view text);

/// How a dataset is split into shards and how the partial accumulators are
/// combined. The seed fully determines both: values are assigned to shards
/// by std::mt19937_64(seed)() % shard_count in input order, and random_tree
/// picks merge pairs from std::mt19937_64(trial_seed(seed, 0)).
struct MergePlan {
  std::uint64_t shard_count = 1;
  std::uint64_t seed = 0;
  Topology topology = Topology::left_fold;
};

/// Errors against the two-pass reference. Mean errors are scaled by the data
/// magnitude max|x|, m2 errors by the reference m2. The spreads are the
/// range of the merged value across trials on the same scale.
struct DriftReport {
  double mean_rel_error = 0.0;
  double m2_rel_error = 0.0;
  double worst_case_over_trials = 0.0;
  std::uint64_t trials = 0;
  double mean_spread = 0.0;
  double m2_spread = 0.0;
};

struct PlanResult {
  MomentAccumulator merged;
  DriftReport report;
};

/// Disjoint cover of xs; shards may be empty. Relative order within a shard
/// follows the input. Throws InputError when shard_count == 0.
std::vector<std::vector<double>> partition(std::span<const double> xs, const MergePlan& plan);

/// Streams each shard into its own accumulator (shards may run on separate
/// threads; the output order is the shard order).
std::vector<MomentAccumulator> accumulate_shards(const std::vector<std::vector<double>>& shards);

/// Combines partial accumulators along the tree the plan describes.
/// `seed` is only consulted for random_tree.
MomentAccumulator merge_partials(std::vector<MomentAccumulator> partials, Topology topology,
                                 std::uint64_t seed);

/// partition -> accumulate_shards -> merge_partials, then compares against
/// from_values(xs). Throws InputError on non-finite input or a zero shard count.
PlanResult run_plan(std::span<const double> xs, const MergePlan& plan);

/// Seed used for trial t of a multi-trial run derived from `seed`.
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial);

/// Runs `trials` plans that share the base plan's shard count and topology
/// but use trial_seed(base.seed, t). Throws InputError when trials == 0.
DriftReport order_invariance_trial(std::span<const double> xs, std::uint64_t trials,
                                   const MergePlan& base);

}  // namespace varbound
