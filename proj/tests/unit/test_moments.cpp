#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "support/testing.hpp"
#include "varbound/error.hpp"
#include "varbound/moments.hpp"

using namespace varbound;
using varbound::testing::DataGen;
using varbound::testing::reference;
using varbound::testing::rel_err;

namespace {

MomentAccumulator push_all(std::span<const double> xs) {
  MomentAccumulator acc;
  for (const double x : xs) acc = push(acc, x);
  return acc;
}

// Relative error with the absolute floor used throughout the property tests.
bool m2_close(double got, double want, double rel) {
  return want < 1.0 ? std::abs(got - want) <= rel * 10.0 : rel_err(got, want) <= rel;
}

// |mean| / sd: rounding in (x - mean) limits relative m2 accuracy to about
// eps times this, so tolerances on offset, low-spread data scale with it.
double condition(const MomentAccumulator& acc) {
  if (acc.count() < 2 || acc.m2() == 0.0) return 1.0;
  return std::max(1.0, std::abs(acc.mean()) / std::sqrt(acc.m2() / static_cast<double>(acc.count())));
}

}  // namespace

TEST_CASE("reference oracle reproduces the hand-derived values") {
  const std::vector<double> xs{1, 2, 4, 6};
  const auto r = reference(xs);
  CHECK(r.mean == 3.25);
  CHECK(r.m2 == 14.75);
  CHECK(r.variance() == 3.6875);
  const std::vector<double> five_seven{5, 7};
  CHECK(reference(five_seven).m2 == 2.0);
  const std::vector<double> three{1, 2, 4};
  CHECK(reference(three).m2 == doctest::Approx(14.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("empty accumulator") {
  const MomentAccumulator e = empty_accumulator();
  CHECK(e.count() == 0);
  CHECK(e.mean() == 0.0);
  CHECK(e.m2() == 0.0);
  CHECK_THROWS_AS(population_variance(e), DomainError);
  CHECK_THROWS_AS(mean(e), DomainError);

  const std::vector<double> xs{1, 2, 4, 6};
  const auto a = from_values(xs);
  CHECK(merge(e, a) == a);
  CHECK(merge(a, e) == a);
}

TEST_CASE("push") {
  const auto one = push(empty_accumulator(), 5);
  CHECK(one == MomentAccumulator::from_state(1, 5, 0));
  const auto two = push(one, 7);
  CHECK(two.count() == 2);
  CHECK(two.mean() == 6.0);
  CHECK(two.m2() == 2.0);

  std::vector<double> xs{1, 2, 4, 6};
  do {
    const auto acc = push_all(xs);
    CHECK(acc.count() == 4);
    CHECK(acc.mean() == doctest::Approx(3.25).epsilon(1e-15));
    CHECK(acc.m2() == doctest::Approx(14.75).epsilon(1e-15));
  } while (std::next_permutation(xs.begin(), xs.end()));

  CHECK_THROWS_AS(push(one, std::numeric_limits<double>::quiet_NaN()), InputError);
  CHECK_THROWS_AS(push(one, std::numeric_limits<double>::infinity()), InputError);
}

TEST_CASE("remove") {
  const std::vector<double> xs{1, 2, 4, 6};
  const auto down = remove(from_values(xs), 6);
  CHECK(down.count() == 3);
  CHECK(down.mean() == doctest::Approx(7.0 / 3.0).epsilon(1e-15));
  CHECK(down.m2() == doctest::Approx(14.0 / 3.0).epsilon(1e-14));

  const auto a = from_values(xs);
  const auto back = remove(push(a, 3.7), 3.7);
  CHECK(back.count() == a.count());
  CHECK(rel_err(back.mean(), a.mean()) <= 1e-12);
  CHECK(rel_err(back.m2(), a.m2()) <= 1e-12);

  CHECK(remove(MomentAccumulator::from_state(1, 9, 0), 9) == empty_accumulator());
  CHECK_THROWS_AS(remove(empty_accumulator(), 1.0), DomainError);

  // Removing a value far outside a tight cluster would make m2 negative.
  const std::vector<double> tight{1.0, 1.0, 1.0};
  CHECK_THROWS_AS(remove(from_values(tight), 100.0), DomainError);
}

TEST_CASE("merge") {
  const auto a = MomentAccumulator::from_state(2, 1.5, 0.5);
  const auto b = MomentAccumulator::from_state(2, 5, 2);
  const auto ab = merge(a, b);
  CHECK(ab.count() == 4);
  CHECK(ab.mean() == 3.25);
  CHECK(ab.m2() == 14.75);
  CHECK(population_variance(ab) == 3.6875);
  CHECK(merge(a, b) == merge(b, a));

  const auto huge = MomentAccumulator::from_state(std::numeric_limits<std::uint64_t>::max(), 0, 0);
  CHECK_THROWS_AS(merge(huge, a), DomainError);
}

TEST_CASE("variance accessors") {
  const std::vector<double> xs{1, 2, 4, 6};
  const auto acc = from_values(xs);
  CHECK(population_variance(acc) == 3.6875);
  CHECK(sample_variance(acc) == doctest::Approx(14.75 / 3.0).epsilon(1e-15));
  CHECK(mean(acc) == 3.25);

  for (const double c : {-3.5, 0.0, 1e6, 123.456}) {
    const std::vector<double> same{c, c, c};
    CHECK(population_variance(from_values(same)) == 0.0);
    CHECK(population_variance(push_all(same)) == 0.0);
  }
  const std::vector<double> sym{-1, 1};
  CHECK(population_variance(from_values(sym)) == 1.0);
  CHECK_THROWS_AS(sample_variance(from_values(std::vector<double>{3.0})), DomainError);
}

TEST_CASE("from_values") {
  CHECK(from_values(std::vector<double>{}) == empty_accumulator());
  CHECK(from_values(std::vector<double>{2.5}) == MomentAccumulator::from_state(1, 2.5, 0));
  const std::vector<double> bad{1.0, 2.0, std::numeric_limits<double>::infinity()};
  try {
    (void)from_values(bad);
    FAIL("expected InputError");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("index 2") != std::string::npos);
  }
}

TEST_CASE("from_state rejects broken invariants") {
  CHECK_THROWS_AS(MomentAccumulator::from_state(0, 1.0, 0.0), InputError);
  CHECK_THROWS_AS(MomentAccumulator::from_state(1, 1.0, 2.0), InputError);
  CHECK_THROWS_AS(MomentAccumulator::from_state(3, 1.0, -1.0), InputError);
  CHECK_THROWS_AS(MomentAccumulator::from_state(3, std::nan(""), 1.0), InputError);
}

TEST_CASE("property: merge of parts equals the reference of the whole") {
  DataGen gen(0x5eed01);
  for (int trial = 0; trial < 300; ++trial) {
    const auto xs = gen.uniform_data(gen.size(1, 2000));
    const std::size_t parts = gen.size(1, 8);
    std::vector<std::vector<double>> chunks(parts);
    for (const double x : xs) chunks[gen.index(parts)].push_back(x);
    MomentAccumulator acc;
    for (const auto& c : chunks) acc = merge(acc, from_values(c));
    const auto want = reference(xs);
    REQUIRE(acc.count() == xs.size());
    CHECK(rel_err(acc.mean(), want.mean, varbound::testing::max_abs(xs)) <= 1e-10);
    CHECK(m2_close(acc.m2(), want.m2, 1e-10));
  }
}

TEST_CASE("property: associativity, push-as-merge, remove inverts push") {
  DataGen gen(0x5eed02);
  for (int trial = 0; trial < 500; ++trial) {
    const auto a = from_values(gen.any_data(gen.size(1, 200)));
    const auto b = from_values(gen.any_data(gen.size(1, 200)));
    const auto c = from_values(gen.any_data(gen.size(1, 200)));
    const auto left = merge(merge(a, b), c);
    const auto right = merge(a, merge(b, c));
    CHECK(left.count() == right.count());
    const double scale = std::max({std::abs(a.mean()), std::abs(b.mean()), std::abs(c.mean()), 1.0});
    CHECK(rel_err(left.mean(), right.mean(), scale) <= 1e-12);
    const double kappa = std::max({condition(a), condition(b), condition(c)});
    CHECK(m2_close(left.m2(), right.m2(), 1e-12 * kappa));

    // x drawn on the scale of a's own data; a downdate cannot recover an m2
    // much smaller than the rounding noise of the term it subtracts.
    const double spread = std::sqrt(a.m2() / static_cast<double>(a.count()));
    const double x = a.mean() + gen.uniform(-3.0, 3.0) * (spread > 0 ? spread : 1.0);
    const auto pushed = push(a, x);
    const auto merged = merge(a, from_values(std::vector<double>{x}));
    CHECK(rel_err(pushed.mean(), merged.mean(), std::max(std::abs(x), std::abs(a.mean()))) <= 1e-12);
    CHECK(m2_close(pushed.m2(), merged.m2(), 1e-12 * condition(merged)));

    const auto back = remove(pushed, x);
    CHECK(back.count() == a.count());
    CHECK(rel_err(back.mean(), a.mean(), std::max(std::abs(x), std::abs(a.mean()))) <= 1e-10);
    CHECK(m2_close(back.m2(), a.m2(), 1e-10 * condition(pushed)));
  }
}

TEST_CASE("property: m2 never negative along random operation sequences") {
  DataGen gen(0x5eed03);
  for (int trial = 0; trial < 200; ++trial) {
    const auto pool = gen.any_data(gen.size(2, 100));
    std::vector<double> members;
    MomentAccumulator acc;
    for (int step = 0; step < 300; ++step) {
      const auto op = gen.size(0, 2);
      if (op == 0 || members.empty()) {
        const double x = pool[gen.index(pool.size())];
        acc = push(acc, x);
        members.push_back(x);
      } else if (op == 1) {
        const std::size_t i = gen.index(members.size());
        acc = remove(acc, members[i]);
        members.erase(members.begin() + static_cast<std::ptrdiff_t>(i));
      } else {
        std::vector<double> other(gen.size(0, 5));
        for (auto& v : other) v = pool[gen.index(pool.size())];
        acc = merge(acc, from_values(other));
        members.insert(members.end(), other.begin(), other.end());
      }
      REQUIRE(acc.m2() >= 0.0);
      REQUIRE(acc.count() == members.size());
      if (acc.count() <= 1) REQUIRE(acc.m2() == 0.0);
      if (acc.count() == 0) REQUIRE(acc.mean() == 0.0);
    }
  }
}
