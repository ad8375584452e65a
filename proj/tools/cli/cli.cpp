#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>

#include "input.hpp"
#include "varbound/audit.hpp"
#include "varbound/bounds.hpp"
#include "varbound/error.hpp"
#include "varbound/moments.hpp"
#include "varbound/serialize.hpp"
#include "varbound/shard.hpp"

namespace varbound::cli {
namespace {

using nlohmann::json;

struct GlobalOptions {
  bool json = false;
  double tolerance = Tolerance{}.relative;
};

struct DataSource {
  std::string path;
  bool csv = false;
  std::string column;
};

// Flags shared by check/member/subset/order. CLI11 fills plain values; the
// Option pointers say which ones were given.
struct SummaryFlags {
  std::uint64_t n = 0;
  double mean = 0.0;
  double sd = 0.0;
  double var = 0.0;
  std::string kind;
  double min = 0.0;
  double max = 0.0;
  int decimals = 0;
  bool range_not_attained = false;

  CLI::Option* n_opt = nullptr;
  CLI::Option* mean_opt = nullptr;
  CLI::Option* sd_opt = nullptr;
  CLI::Option* var_opt = nullptr;
  CLI::Option* kind_opt = nullptr;
  CLI::Option* min_opt = nullptr;
  CLI::Option* max_opt = nullptr;
  CLI::Option* decimals_opt = nullptr;
};

std::string human(double x) {
  std::ostringstream os;
  os << std::setprecision(6) << x;
  return os.str();
}

void add_global_flags(CLI::App& app, GlobalOptions& g) {
  app.add_flag("--json", g.json, "Machine-readable JSON output");
  app.add_option("--tolerance", g.tolerance, "Relative tolerance for bound comparisons")
      ->check(CLI::PositiveNumber);
}

void add_source(CLI::App* cmd, DataSource& src) {
  cmd->add_option("file", src.path, "Input file (default: standard input)");
  auto* csv = cmd->add_flag("--csv", src.csv, "Read a headered CSV file");
  cmd->add_option("--column", src.column, "CSV column name")->needs(csv);
  csv->needs(cmd->get_option("--column"));
}

void add_summary_flags(CLI::App* cmd, SummaryFlags& f) {
  f.n_opt = cmd->add_option("--n", f.n, "Number of observations")->required();
  f.mean_opt = cmd->add_option("--mean", f.mean, "Reported mean")->required();
  f.sd_opt = cmd->add_option("--sd", f.sd, "Reported standard deviation (kind defaults to sample)");
  f.var_opt = cmd->add_option("--var", f.var, "Reported variance (kind defaults to population)");
  f.sd_opt->excludes(f.var_opt);
  f.kind_opt = cmd->add_option("--kind", f.kind, "population or sample")
                   ->check(CLI::IsMember({"population", "sample"}));
  f.min_opt = cmd->add_option("--min", f.min, "Reported minimum (an attained value)");
  f.max_opt = cmd->add_option("--max", f.max, "Reported maximum (an attained value)");
  f.decimals_opt = cmd->add_option("--decimals", f.decimals, "Decimal places figures were rounded to")
                       ->check(CLI::Range(0, 15));
  cmd->add_flag("--range-not-attained", f.range_not_attained,
                "min/max are bounds, not observed values; skip checks that need attainment");
}

ReportedSummary to_report(const SummaryFlags& f) {
  const bool have_sd = f.sd_opt->count() > 0;
  const bool have_var = f.var_opt->count() > 0;
  if (have_sd == have_var) {
    throw InputError("exactly one of --sd or --var is required");
  }
  std::string kind = f.kind;
  if (f.kind_opt->count() == 0) {
    kind = have_sd ? "sample" : "population";
  }
  ReportedSummary r;
  r.n = f.n;
  r.mean = f.mean;
  r.dispersion = have_sd ? f.sd : f.var;
  if (kind == "population") {
    r.kind = have_sd ? DispersionKind::population_sd : DispersionKind::population_variance;
  } else {
    r.kind = have_sd ? DispersionKind::sample_sd : DispersionKind::sample_variance;
  }
  if (f.min_opt->count() > 0) r.min = f.min;
  if (f.max_opt->count() > 0) r.max = f.max;
  if (f.decimals_opt->count() > 0) r.decimals = f.decimals;
  return r;
}

AuditOptions audit_options(const GlobalOptions& g, const SummaryFlags& f) {
  AuditOptions opts;
  opts.tolerance.relative = g.tolerance;
  opts.range_attained = !f.range_not_attained;
  return opts;
}

std::vector<double> read_values(const DataSource& src, std::istream& in) {
  std::ifstream file;
  std::istream* stream = &in;
  if (!src.path.empty() && src.path != "-") {
    file.open(src.path);
    if (!file) {
      throw InputError("cannot open '" + src.path + "'");
    }
    stream = &file;
  }
  std::vector<double> values = src.csv ? parse_csv_column(*stream, src.column) : parse_values(*stream);
  if (values.empty()) {
    throw InputError("no values in input");
  }
  return values;
}

int emit_verdict(const Verdict& v, const GlobalOptions& g, std::ostream& out) {
  if (g.json) {
    out << json(v).dump() << '\n';
  } else {
    if (v.feasible) {
      out << "verdict: no violation found (these are necessary conditions only; "
             "the report is not certified as genuine)\n";
    } else {
      out << "verdict: INFEASIBLE (no dataset can have these statistics)\n";
    }
    for (const auto& c : v.checks) {
      out << "  " << std::left << std::setw(20) << c.constraint << " bound=" << human(c.result.bound)
          << " observed=" << human(c.result.observed) << " slack=" << human(c.result.slack)
          << (c.result.satisfied ? "  ok" : "  VIOLATED") << '\n';
    }
  }
  return v.feasible ? kOk : kInfeasible;
}

int cmd_stats(const std::vector<double>& xs, const GlobalOptions& g, std::ostream& out) {
  const MomentAccumulator acc = from_values(xs);
  const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  std::optional<double> sample;
  if (acc.count() >= 2) sample = sample_variance(acc);
  if (g.json) {
    json j = {{"n", acc.count()},
              {"mean", acc.mean()},
              {"m2", acc.m2()},
              {"population_variance", population_variance(acc)},
              {"sample_variance", sample ? json(*sample) : json(nullptr)},
              {"min", *lo},
              {"max", *hi}};
    out << j.dump() << '\n';
  } else {
    out << "n                    " << acc.count() << '\n'
        << "mean                 " << human(acc.mean()) << '\n'
        << "population variance  " << human(population_variance(acc)) << '\n'
        << "sample variance      " << (sample ? human(*sample) : "n/a") << '\n'
        << "min                  " << human(*lo) << '\n'
        << "max                  " << human(*hi) << '\n';
  }
  return kOk;
}

struct BoundRow {
  std::string name;
  std::optional<std::uint64_t> k;     // order statistic index
  std::optional<std::uint64_t> size;  // subset size
  std::optional<BoundResult> result;  // empty when not applicable
  std::string reason;
};

std::vector<BoundRow> bound_catalog(std::vector<double> xs, Tolerance tol) {
  std::sort(xs.begin(), xs.end());
  const DataSummary s = DataSummary::of(xs);
  const std::uint64_t n = s.n;
  std::vector<BoundRow> rows;
  const auto na = [&](std::string name, std::string reason) {
    rows.push_back({std::move(name), std::nullopt, std::nullopt, std::nullopt, std::move(reason)});
  };

  if (n >= 2) {
    const Interval iv = samuelson_interval(s);
    rows.push_back({"samuelson_lower", {}, {}, BoundResult::lower(iv.lo, *s.min, tol), {}});
    rows.push_back({"samuelson_upper", {}, {}, BoundResult::upper(iv.hi, *s.max, tol), {}});
    const auto points = check_samuelson(xs, tol);
    const auto worst = std::min_element(points.begin(), points.end(),
                                        [](const auto& a, const auto& b) { return a.slack < b.slack; });
    rows.push_back({"samuelson", {}, {}, *worst, {}});
    rows.push_back({"nagy", {}, {}, nagy_bound(s, tol), {}});
  } else {
    for (const char* name : {"samuelson_lower", "samuelson_upper", "samuelson", "nagy"}) {
      na(name, "needs n >= 2");
    }
  }

  if (n >= 3) {
    rows.push_back({"refined_range", {}, {}, refined_range_bound(s, tol), {}});
  } else {
    na("refined_range", "needs n >= 3");
  }

  if (n >= 2) {
    // The r smallest or r largest values give the subset mean farthest from
    // the overall mean for each r; report the tightest of them.
    std::vector<long double> prefix(n + 1, 0.0L);
    for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + xs[i];
    const long double total = prefix[n];
    double best = -1.0;
    std::uint64_t best_r = 1;
    double best_gamma = s.mean;
    double best_rest = s.mean;
    for (std::uint64_t r = 1; r < n; ++r) {
      const double rd = static_cast<double>(r);
      const double low = static_cast<double>(prefix[r] / r);
      const double low_rest = static_cast<double>((total - prefix[r]) / (n - r));
      const double high = static_cast<double>((total - prefix[n - r]) / r);
      const double high_rest = static_cast<double>(prefix[n - r] / (n - r));
      for (const auto& [gamma, rest] : {std::pair{low, low_rest}, std::pair{high, high_rest}}) {
        const double value = rd / static_cast<double>(n - r) * (gamma - s.mean) * (gamma - s.mean);
        if (value > best) {
          best = value;
          best_r = r;
          best_gamma = gamma;
          best_rest = rest;
        }
      }
    }
    const SubsetSummary sub = SubsetSummary::make(best_r, best_gamma, std::nullopt);
    rows.push_back({"mallows_richter", {}, best_r, mallows_richter_bound(s, sub, tol), {}});
    rows.push_back({"split", {}, best_r,
                    BoundResult::lower(split_bound(best_r, n - best_r, best_gamma, best_rest), s.variance, tol),
                    {}});

    // Dropping the value nearest the mean leaves the largest (n-1)-subset variance.
    const auto nearest = std::min_element(xs.begin(), xs.end(), [&](double a, double b) {
      return std::abs(a - s.mean) < std::abs(b - s.mean);
    });
    std::vector<double> rest(xs.begin(), nearest);
    rest.insert(rest.end(), nearest + 1, xs.end());
    const SubsetSummary drop =
        SubsetSummary::make(n - 1, std::nullopt, population_variance(from_values(rest)));
    rows.push_back({"subset_variance", {}, n - 1, subset_variance_bound(s, drop, tol), {}});
  } else {
    for (const char* name : {"mallows_richter", "split", "subset_variance"}) na(name, "needs n >= 2");
  }

  for (std::uint64_t k = 1; k <= n; ++k) {
    const Interval iv = boyd_hawkins_interval(s, k);
    const double value = xs[k - 1];
    rows.push_back({"boyd_hawkins_lower", k, {}, BoundResult::lower(iv.lo, value, tol), {}});
    rows.push_back({"boyd_hawkins_upper", k, {}, BoundResult::upper(iv.hi, value, tol), {}});
  }
  return rows;
}

int cmd_bounds(const std::vector<double>& xs, const GlobalOptions& g, std::ostream& out) {
  const DataSummary s = DataSummary::of(xs);
  const auto rows = bound_catalog(xs, Tolerance{g.tolerance});
  if (g.json) {
    json jrows = json::array();
    for (const auto& row : rows) {
      json j = {{"name", row.name}, {"applicable", row.result.has_value()}};
      if (row.k) j["k"] = *row.k;
      if (row.size) j["size"] = *row.size;
      if (row.result) {
        j.update(json(*row.result));
      } else {
        j["reason"] = row.reason;
      }
      jrows.push_back(std::move(j));
    }
    out << json{{"summary", s}, {"rows", jrows}}.dump() << '\n';
    return kOk;
  }
  out << "n=" << s.n << " mean=" << human(s.mean) << " variance=" << human(s.variance) << '\n';
  out << std::left << std::setw(24) << "bound" << std::setw(14) << "value" << std::setw(14) << "observed"
      << std::setw(14) << "slack" << "status\n";
  for (const auto& row : rows) {
    std::string label = row.name;
    if (row.k) label += " k=" + std::to_string(*row.k);
    if (row.size) label += " size=" + std::to_string(*row.size);
    out << std::setw(24) << label;
    if (row.result) {
      out << std::setw(14) << human(row.result->bound) << std::setw(14) << human(row.result->observed)
          << std::setw(14) << human(row.result->slack) << (row.result->satisfied ? "ok" : "VIOLATED");
    } else {
      out << std::setw(42) << "n/a" << row.reason;
    }
    out << '\n';
  }
  return kOk;
}

struct ShardFlags {
  std::uint64_t shards = 8;
  std::uint64_t trials = 10;
  std::uint64_t seed = 0;
  std::string topology = "random_tree";
};

int cmd_shard_sim(const std::vector<double>& xs, const ShardFlags& f, const GlobalOptions& g,
                  std::ostream& out) {
  MergePlan plan;
  plan.shard_count = f.shards;
  plan.seed = f.seed;
  plan.topology = *parse_topology(f.topology);
  const DriftReport report = order_invariance_trial(xs, f.trials, plan);
  MergePlan first = plan;
  first.seed = trial_seed(plan.seed, 0);
  const PlanResult sample = run_plan(xs, first);
  const MomentAccumulator oracle = from_values(xs);
  if (g.json) {
    json j = {{"plan",
               {{"shards", f.shards}, {"trials", f.trials}, {"seed", f.seed}, {"topology", f.topology}}},
              {"oracle", oracle},
              {"merged", sample.merged},
              {"report", report}};
    out << j.dump() << '\n';
  } else {
    out << "shards=" << f.shards << " trials=" << f.trials << " seed=" << f.seed
        << " topology=" << f.topology << '\n'
        << "oracle   n=" << oracle.count() << " mean=" << human(oracle.mean())
        << " variance=" << human(population_variance(oracle)) << '\n'
        << "merged   n=" << sample.merged.count() << " mean=" << human(sample.merged.mean())
        << " variance=" << human(population_variance(sample.merged)) << '\n'
        << "max mean relative error  " << human(report.mean_rel_error) << '\n'
        << "max m2 relative error    " << human(report.m2_rel_error) << '\n'
        << "m2 spread across trials  " << human(report.m2_spread) << '\n';
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mergeable summary statistics and variance-bound auditing", "varbound"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions global;
  add_global_flags(app, global);

  DataSource stats_src;
  auto* stats = app.add_subcommand("stats", "n, mean, variance, min, max of a dataset");
  add_source(stats, stats_src);

  DataSource bounds_src;
  auto* bounds = app.add_subcommand("bounds", "Evaluate every variance and order-statistic bound on a dataset");
  add_source(bounds, bounds_src);

  SummaryFlags check_flags;
  auto* check = app.add_subcommand("check", "Audit reported n/mean/dispersion/min/max for feasibility");
  add_summary_flags(check, check_flags);

  SummaryFlags member_flags;
  double member_x = 0.0;
  auto* member = app.add_subcommand("member", "Could x be one of the observations?");
  add_summary_flags(member, member_flags);
  member->add_option("--x", member_x, "Candidate value")->required();

  SummaryFlags subset_flags;
  std::uint64_t subset_r = 0;
  std::uint64_t subset_m = 0;
  double subset_gamma = 0.0;
  double subset_var = 0.0;
  auto* subset = app.add_subcommand("subset", "Audit a subset mean (--r --gamma) or variance (--m --subvar)");
  add_summary_flags(subset, subset_flags);
  auto* r_opt = subset->add_option("--r", subset_r, "Subset size for --gamma");
  auto* gamma_opt = subset->add_option("--gamma", subset_gamma, "Subset mean");
  auto* m_opt = subset->add_option("--m", subset_m, "Subset size for --subvar");
  auto* subvar_opt = subset->add_option("--subvar", subset_var, "Subset population variance");
  r_opt->needs(gamma_opt);
  gamma_opt->needs(r_opt);
  m_opt->needs(subvar_opt);
  subvar_opt->needs(m_opt);
  r_opt->excludes(m_opt);

  SummaryFlags order_flags;
  std::uint64_t order_k = 0;
  double order_value = 0.0;
  auto* order = app.add_subcommand("order", "Could value be the k-th smallest observation?");
  add_summary_flags(order, order_flags);
  order->add_option("--k", order_k, "1-based rank")->required();
  order->add_option("--value", order_value, "Claimed k-th smallest value")->required();

  DataSource shard_src;
  ShardFlags shard_flags;
  auto* shard = app.add_subcommand("shard-sim", "Shard a dataset, merge partial moments, report drift");
  add_source(shard, shard_src);
  shard->add_option("--shards", shard_flags.shards, "Number of shards")->check(CLI::PositiveNumber);
  shard->add_option("--trials", shard_flags.trials, "Number of seeded trials")->check(CLI::PositiveNumber);
  shard->add_option("--seed", shard_flags.seed, "Seed for partitions and merge trees");
  shard->add_option("--topology", shard_flags.topology, "left_fold, balanced_tree or random_tree")
      ->check(CLI::IsMember({"left_fold", "balanced_tree", "random_tree"}));

  std::vector<const char*> argv{"varbound"};
  for (const auto& a : args) argv.push_back(a.c_str());

  std::ostringstream buffer;
  int code = kOk;
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    if (*stats) {
      code = cmd_stats(read_values(stats_src, in), global, buffer);
    } else if (*bounds) {
      code = cmd_bounds(read_values(bounds_src, in), global, buffer);
    } else if (*check) {
      code = emit_verdict(audit_summary(to_report(check_flags), audit_options(global, check_flags)),
                          global, buffer);
    } else if (*member) {
      code = emit_verdict(
          audit_member(member_x, to_report(member_flags), audit_options(global, member_flags)), global,
          buffer);
    } else if (*subset) {
      SubsetSummary sub;
      if (r_opt->count() > 0) {
        sub = SubsetSummary::make(subset_r, subset_gamma, std::nullopt);
      } else if (m_opt->count() > 0) {
        sub = SubsetSummary::make(subset_m, std::nullopt, subset_var);
      } else {
        throw InputError("subset needs --r with --gamma, or --m with --subvar");
      }
      code = emit_verdict(audit_subset(sub, to_report(subset_flags), audit_options(global, subset_flags)),
                          global, buffer);
    } else if (*order) {
      code = emit_verdict(audit_order_statistic(order_k, order_value, to_report(order_flags),
                                                audit_options(global, order_flags)),
                          global, buffer);
    } else if (*shard) {
      code = cmd_shard_sim(read_values(shard_src, in), shard_flags, global, buffer);
    }
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  out << buffer.str();
  out.flush();
  return code;
}

}  // namespace varbound::cli
