#include <doctest.h>

#include "helpers.hpp"
#include "nodeflow/fields.hpp"

using namespace nodeflow;

TEST_CASE("initial state starts at zero and pre-fills zero-supply outputs") {
  const NodeSpec spec = testutil::builtin("diverge-fifo");
  const HybridState state = initial_state(spec);
  CHECK(state.t == 0.0);
  CHECK(state.mode.count() == 0);
  for (double v : state.x) CHECK(v == 0.0);

  NodeSpec dead = spec;
  dead.supply[0] = 0.0;
  const HybridState state2 = initial_state(dead);
  CHECK(state2.mode.contains(0));
  CHECK_FALSE(state2.mode.contains(1));
}

TEST_CASE("input time limit is total demand over priority") {
  const NodeSpec spec = testutil::builtin("merge-a");
  const OrientedDemand od = oriented_demand(spec);
  CHECK(input_time_limit(spec, od, 0) == doctest::Approx(10.0));
  CHECK(input_time_limit(spec, od, 1) == doctest::Approx(20.0));

  const NodeSpec fig = testutil::builtin("fig1");
  const OrientedDemand odf = oriented_demand(fig);
  CHECK(input_time_limit(fig, odf, 0) == doctest::Approx(1.0));
}

TEST_CASE("active restriction measure counts filled outputs with residual demand") {
  const NodeSpec spec = testutil::builtin("fig1");
  const OrientedDemand od = oriented_demand(spec);
  HybridState state = initial_state(spec);

  // Nothing filled: no restriction anywhere.
  CHECK(active_restriction_measure(spec, od, state, 0, 1) == 0.0);

  // Output 1 filled with residual demand on its movement.
  state.t = 0.5;
  state.at(0, 0, 0) = 1.0;  // cap is 2, so residual remains
  state.at(0, 1, 0) = 2.5;
  state.at(0, 2, 0) = 1.5;
  state.mode.add(0);
  CHECK(active_restriction_measure(spec, od, state, 0, 1) == doctest::Approx(0.2));
  CHECK(active_restriction_measure(spec, od, state, 0, 2) == 0.0);

  // Both congested outputs filled: overlapping intervals union to 0.6.
  state.t = 0.6;
  state.at(0, 1, 0) = 2.9;
  state.at(0, 2, 0) = 1.8;
  state.mode.add(2);
  CHECK(active_restriction_measure(spec, od, state, 0, 1) == doctest::Approx(0.6));

  // A filled output whose movement demand is exhausted stops blocking.
  state.at(0, 0, 0) = 2.0;
  CHECK(active_restriction_measure(spec, od, state, 0, 1) == doctest::Approx(0.4));
}

TEST_CASE("merge field sends each input at its priority until done") {
  const NodeSpec spec = testutil::builtin("merge-a");
  const OrientedDemand od = oriented_demand(spec);
  HybridState state = initial_state(spec);
  RateMatrix rates = merge_field(spec, od, state);
  CHECK(rates.at(0, 0, 0) == doctest::Approx(1.0));
  CHECK(rates.at(1, 0, 0) == doctest::Approx(1.0));

  // An input with exhausted demand goes quiet.
  state.at(0, 0, 0) = 10.0;
  rates = merge_field(spec, od, state);
  CHECK(rates.at(0, 0, 0) == 0.0);
  CHECK(rates.at(1, 0, 0) == doctest::Approx(1.0));

  // Once the output fills everything stops.
  state.mode.add(0);
  rates = merge_field(spec, od, state);
  CHECK(rates.all_zero());
}

TEST_CASE("merge field rejects multi-output specs") {
  const NodeSpec spec = testutil::builtin("diverge-fifo");
  const OrientedDemand od = oriented_demand(spec);
  const HybridState state = initial_state(spec);
  CHECK_THROWS_AS((void)merge_field(spec, od, state), std::invalid_argument);
  CHECK_THROWS_AS((void)diverge_field(testutil::builtin("merge-a"),
                                      oriented_demand(testutil::builtin("merge-a")),
                                      initial_state(testutil::builtin("merge-a"))),
                  std::invalid_argument);
}

TEST_CASE("diverge field splits priority by oriented demand") {
  const NodeSpec spec = testutil::builtin("diverge-fifo");
  const OrientedDemand od = oriented_demand(spec);
  HybridState state = initial_state(spec);
  RateMatrix rates = diverge_field(spec, od, state);
  CHECK(rates.at(0, 0, 0) == doctest::Approx(6.0));
  CHECK(rates.at(0, 1, 0) == doctest::Approx(4.0));

  // Full FIFO: one output filling stops the whole input.
  state.t = 0.5;
  state.at(0, 0, 0) = 3.0;
  state.at(0, 1, 0) = 2.0;
  state.mode.add(0);
  rates = diverge_field(spec, od, state);
  CHECK(rates.all_zero());
}

TEST_CASE("relaxed restriction lets the unblocked lane share keep moving") {
  const NodeSpec spec = testutil::builtin("diverge-relaxed");
  const OrientedDemand od = oriented_demand(spec);
  HybridState state = initial_state(spec);
  state.t = 0.5;
  state.at(0, 0, 0) = 3.0;
  state.at(0, 1, 0) = 2.0;
  state.mode.add(0);
  const RateMatrix rates = diverge_field(spec, od, state);
  CHECK(rates.at(0, 0, 0) == 0.0);
  CHECK(rates.at(0, 1, 0) == doctest::Approx(3.2));  // 4 * (1 - 0.2)
}

TEST_CASE("rates stop at the input time limit") {
  const NodeSpec spec = testutil::builtin("diverge-fifo");
  const OrientedDemand od = oriented_demand(spec);
  HybridState state = initial_state(spec);
  state.t = 1.0;  // T_1 = 10 / 10
  const RateMatrix rates = diverge_field(spec, od, state);
  CHECK(rates.all_zero());
}

TEST_CASE("diverge field agrees with the general field on random single-input specs") {
  FuzzConfig config;
  config.seed = 99;
  config.max_inputs = 1;
  for (std::uint64_t index = 0; index < 40; ++index) {
    const NodeSpec spec = generate_random(config, index);
    REQUIRE(spec.inputs == 1);
    const OrientedDemand od = oriented_demand(spec);
    HybridState state = initial_state(spec);
    // Probe a few points along a crude forward march.
    for (int step = 0; step < 5; ++step) {
      const RateMatrix a = diverge_field(spec, od, state);
      const RateMatrix b = general_field(spec, od, state);
      for (size_t k = 0; k < a.rate.size(); ++k)
        CHECK(a.rate[k] == doctest::Approx(b.rate[k]).epsilon(1e-12));
      const double h = 0.05 * input_time_limit(spec, od, 0);
      for (size_t k = 0; k < a.rate.size(); ++k) {
        state.x[k] += a.rate[k] * h;
      }
      state.t += h;
    }
  }
}

TEST_CASE("general field rates respect priority and class proportions") {
  FuzzConfig config;
  config.seed = 123;
  for (std::uint64_t index = 0; index < 40; ++index) {
    const NodeSpec spec = generate_random(config, index);
    const OrientedDemand od = oriented_demand(spec);
    const HybridState state = initial_state(spec);
    const RateMatrix rates = general_field(spec, od, state);
    for (int i = 0; i < spec.inputs; ++i) {
      double out = 0.0;
      for (int j = 0; j < spec.outputs; ++j)
        for (int c = 0; c < spec.classes; ++c) out += rates.at(i, j, c);
      CHECK(out <= spec.priority[i] + kEps);
      // At x = 0 each movement's class mix matches its oriented demand mix.
      for (int j = 0; j < spec.outputs; ++j) {
        const double tot = od.total_at(i, j);
        if (tot <= kEps) continue;
        double movement = 0.0;
        for (int c = 0; c < spec.classes; ++c) movement += rates.at(i, j, c);
        if (movement <= kEps) continue;
        for (int c = 0; c < spec.classes; ++c) {
          CHECK(rates.at(i, j, c) / movement ==
                doctest::Approx(od.at(i, j, c) / tot).epsilon(1e-9));
        }
      }
    }
  }
}
