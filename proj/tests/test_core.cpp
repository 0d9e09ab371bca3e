#include <algorithm>
#include <random>

#include <doctest.h>

#include "helpers.hpp"
#include "nodeflow/types.hpp"

using namespace nodeflow;

namespace {

bool mentions(const ValidationReport& report, const std::string& needle) {
  return std::any_of(report.violations.begin(), report.violations.end(),
                     [&](const std::string& v) { return v.find(needle) != std::string::npos; });
}

}  // namespace

TEST_CASE("validate accepts a well-formed merge spec") {
  CHECK(validate(testutil::builtin("merge-a")).ok());
  for (const auto& spec : testutil::all_builtins()) CHECK(validate(spec).ok());
}

TEST_CASE("validate flags a short split row with positive demand") {
  NodeSpec spec = NodeSpec::with_dims(1, 2, 1);
  spec.demand = {10.0};
  spec.split = {0.5, 0.4};
  spec.supply = {5.0, 5.0};
  const auto report = validate(spec);
  CHECK_FALSE(report.ok());
  CHECK(mentions(report, "split ratios for input 1 class 1"));

  // Zero demand makes the same row acceptable.
  spec.demand = {0.0};
  CHECK(validate(spec).ok());
}

TEST_CASE("validate flags a partial diagonal restriction") {
  NodeSpec spec = NodeSpec::with_dims(1, 2, 1);
  spec.demand = {10.0};
  spec.split = {0.5, 0.5};
  spec.supply = {5.0, 5.0};
  spec.restriction_at(0, 1, 1) = Interval{0.0, 0.5};
  const auto report = validate(spec);
  CHECK_FALSE(report.ok());
  CHECK(mentions(report, "diagonal restriction"));
}

TEST_CASE("validate flags bad scalars") {
  NodeSpec spec = NodeSpec::with_dims(2, 1, 1);
  spec.demand = {10.0, -1.0};
  spec.split = {1.0, 1.0};
  spec.supply = {-3.0};
  spec.priority = {1.0, 0.0};
  const auto report = validate(spec);
  CHECK(mentions(report, "demand for input 2"));
  CHECK(mentions(report, "supply of output 1"));
  CHECK(mentions(report, "priority of input 2"));
}

TEST_CASE("oriented demand is demand times split") {
  NodeSpec spec = NodeSpec::with_dims(1, 2, 1);
  spec.demand = {10.0};
  spec.split = {0.6, 0.4};
  spec.supply = {100.0, 100.0};
  const OrientedDemand od = oriented_demand(spec);
  CHECK(od.at(0, 0, 0) == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(od.at(0, 1, 0) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(od.total_at(0, 0) == doctest::Approx(6.0));
  CHECK(od.input_total[0] == doctest::Approx(10.0));
}

TEST_CASE("oriented demand degenerate cases") {
  NodeSpec spec = NodeSpec::with_dims(1, 2, 1);
  spec.demand = {7.0};
  spec.split = {1.0, 0.0};  // identity routing
  spec.supply = {100.0, 100.0};
  OrientedDemand od = oriented_demand(spec);
  CHECK(od.at(0, 0, 0) == 7.0);
  CHECK(od.at(0, 1, 0) == 0.0);

  spec.demand = {0.0};
  od = oriented_demand(spec);
  CHECK(od.at(0, 0, 0) == 0.0);
  CHECK(od.input_total[0] == 0.0);
}

TEST_CASE("oriented priority apportions by oriented demand") {
  NodeSpec spec = NodeSpec::with_dims(1, 2, 1);
  spec.demand = {10.0};
  spec.split = {0.6, 0.4};
  spec.supply = {100.0, 100.0};
  spec.priority = {10.0};
  const OrientedDemand od = oriented_demand(spec);
  CHECK(oriented_priority(spec, od, 0, 0) == doctest::Approx(6.0));
  CHECK(oriented_priority(spec, od, 0, 1) == doctest::Approx(4.0));

  spec.split = {1.0, 0.0};
  const OrientedDemand od2 = oriented_demand(spec);
  CHECK(oriented_priority(spec, od2, 0, 0) == doctest::Approx(10.0));
  CHECK(oriented_priority(spec, od2, 0, 1) == 0.0);
}

TEST_CASE("oriented priority is zero for a demandless input") {
  NodeSpec spec = NodeSpec::with_dims(2, 1, 1);
  spec.demand = {0.0, 5.0};
  spec.split = {1.0, 1.0};
  spec.supply = {10.0};
  const OrientedDemand od = oriented_demand(spec);
  CHECK(oriented_priority(spec, od, 0, 0) == 0.0);
}

TEST_CASE("oriented quantities sum back to their inputs on random specs") {
  FuzzConfig config;
  config.seed = 42;
  for (std::uint64_t index = 0; index < 50; ++index) {
    const NodeSpec spec = generate_random(config, index);
    const OrientedDemand od = oriented_demand(spec);
    for (int i = 0; i < spec.inputs; ++i) {
      for (int c = 0; c < spec.classes; ++c) {
        if (spec.demand_at(i, c) <= 0.0) continue;
        double row = 0.0;
        for (int j = 0; j < spec.outputs; ++j) row += od.at(i, j, c);
        CHECK(row == doctest::Approx(spec.demand_at(i, c)).epsilon(1e-12));
      }
      if (od.input_total[i] > 0.0) {
        double p_sum = 0.0;
        for (int j = 0; j < spec.outputs; ++j) p_sum += oriented_priority(spec, od, i, j);
        CHECK(p_sum == doctest::Approx(spec.priority[i]).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("interval union measure on fixed cases") {
  CHECK(interval_union_measure({}) == 0.0);
  std::vector<Interval> full = {{0.0, 1.0}};
  CHECK(interval_union_measure(full) == 1.0);
  std::vector<Interval> overlap = {{0.0, 0.3}, {0.2, 0.6}};
  CHECK(interval_union_measure(overlap) == doctest::Approx(0.6).epsilon(1e-12));
  std::vector<Interval> disjoint = {{0.0, 0.1}, {0.5, 0.7}};
  CHECK(interval_union_measure(disjoint) == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("interval union measure properties") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Interval> a, b;
    const int na = int(rng() % 5), nb = int(rng() % 5);
    for (int k = 0; k < na; ++k) {
      double lo = unit(rng), hi = unit(rng);
      if (lo > hi) std::swap(lo, hi);
      a.push_back({lo, hi});
    }
    for (int k = 0; k < nb; ++k) {
      double lo = unit(rng), hi = unit(rng);
      if (lo > hi) std::swap(lo, hi);
      b.push_back({lo, hi});
    }
    const double ma = interval_union_measure(a);
    const double mb = interval_union_measure(b);
    std::vector<Interval> both = a;
    both.insert(both.end(), b.begin(), b.end());
    const double mboth = interval_union_measure(both);

    CHECK(ma <= 1.0 + 1e-12);
    CHECK(mboth >= ma - 1e-12);                    // monotone under adding intervals
    CHECK(mboth <= ma + mb + 1e-12);               // subadditive
    std::vector<Interval> doubled = a;
    doubled.insert(doubled.end(), a.begin(), a.end());
    CHECK(interval_union_measure(doubled) == doctest::Approx(ma).epsilon(1e-12));
    std::vector<Interval> shuffled = a;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(interval_union_measure(shuffled) == doctest::Approx(ma).epsilon(1e-12));
  }
}
