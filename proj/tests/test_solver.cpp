#include <doctest.h>

#include "helpers.hpp"
#include "nodeflow/solver.hpp"

using namespace nodeflow;

namespace {

std::vector<double> breakpoint_times(const Trajectory& traj) {
  std::vector<double> times;
  for (const auto& bp : traj.breakpoints) times.push_back(bp.t);
  return times;
}

}  // namespace

TEST_CASE("fill time under equal merge pressure") {
  const NodeSpec spec = testutil::builtin("merge-a");
  const OrientedDemand od = oriented_demand(spec);
  const HybridState state = initial_state(spec);
  const auto t = fill_time(spec, od, state, 0);
  REQUIRE(t.has_value());
  CHECK(*t == doctest::Approx(7.5));
}

TEST_CASE("fill time is empty when nothing flows toward the output") {
  NodeSpec spec = testutil::builtin("diverge-fifo");
  spec.split = {1.0, 0.0};
  require_valid(spec);
  const OrientedDemand od = oriented_demand(spec);
  const HybridState state = initial_state(spec);
  CHECK_FALSE(fill_time(spec, od, state, 1).has_value());
}

TEST_CASE("fill time rejects an already filled output") {
  const NodeSpec spec = testutil::builtin("diverge-fifo");
  const OrientedDemand od = oriented_demand(spec);
  HybridState state = initial_state(spec);
  state.mode.add(0);
  CHECK_THROWS_AS((void)fill_time(spec, od, state, 0), std::invalid_argument);
}

TEST_CASE("next event picks the earliest pending transition") {
  const NodeSpec spec = testutil::builtin("diverge-fifo");
  const OrientedDemand od = oriented_demand(spec);
  HybridState state = initial_state(spec);
  Event ev = next_event(spec, od, state);
  CHECK(ev.kind == EventKind::OutputFill);
  CHECK(ev.index == 0);
  CHECK(ev.time == doctest::Approx(0.5));

  // After the fill, the input's time limit is all that remains.
  state.t = 0.5;
  state.at(0, 0, 0) = 3.0;
  state.at(0, 1, 0) = 2.0;
  state.mode.add(0);
  ev = next_event(spec, od, state);
  CHECK(ev.kind == EventKind::InputTimeLimit);
  CHECK(ev.index == 0);
  CHECK(ev.time == doctest::Approx(1.0));

  // Past the limit there is nothing left.
  state.t = 1.0;
  ev = next_event(spec, od, state);
  CHECK(ev.kind == EventKind::Terminate);
  CHECK(ev.time == doctest::Approx(1.0));
}

TEST_CASE("advance integrates linearly and rejects negative steps") {
  const NodeSpec spec = testutil::builtin("diverge-fifo");
  const OrientedDemand od = oriented_demand(spec);
  const HybridState state = initial_state(spec);
  const RateMatrix rates = diverge_field(spec, od, state);

  const HybridState same = advance(spec, od, state, rates, 0.0);
  CHECK(same.x == state.x);
  CHECK(same.t == state.t);

  const HybridState later = advance(spec, od, state, rates, 0.25);
  CHECK(later.t == doctest::Approx(0.25));
  CHECK(later.at(0, 0, 0) == doctest::Approx(1.5));
  CHECK(later.at(0, 1, 0) == doctest::Approx(1.0));

  CHECK_THROWS_AS((void)advance(spec, od, state, rates, -1e-6), std::invalid_argument);
}

TEST_CASE("reset adds a filled output exactly once") {
  const NodeSpec spec = testutil::builtin("diverge-fifo");
  HybridState state = initial_state(spec);
  state.t = 0.5;
  const Event fill{0.5, EventKind::OutputFill, 0};
  state = apply_reset(state, fill);
  CHECK(state.mode.contains(0));
  CHECK_THROWS_AS((void)apply_reset(state, fill), std::invalid_argument);
  CHECK_THROWS_AS((void)apply_reset(state, Event{0.9, EventKind::OutputFill, 1}),
                  std::invalid_argument);

  const HybridState after = apply_reset(state, Event{0.5, EventKind::InputTimeLimit, 0});
  CHECK(after.x == state.x);
  CHECK(after.mode.filled == state.mode.filled);
}

TEST_CASE("solve: merge with equal priorities splits the supply") {
  const SolveResult result = solve(testutil::builtin("merge-a"));
  CHECK(result.flows.at(0, 0, 0) == doctest::Approx(7.5));
  CHECK(result.flows.at(1, 0, 0) == doctest::Approx(7.5));
  const auto times = breakpoint_times(result.trajectory);
  REQUIRE(times.size() == 2);
  CHECK(times[0] == 0.0);
  CHECK(times[1] == doctest::Approx(7.5));
  CHECK(result.trajectory.breakpoints[1].events[0].kind == EventKind::OutputFill);
}

TEST_CASE("solve: merge where one input runs dry midway") {
  const SolveResult result = solve(testutil::builtin("merge-b"));
  CHECK(result.flows.at(0, 0, 0) == doctest::Approx(2.0));
  CHECK(result.flows.at(1, 0, 0) == doctest::Approx(10.0));
  const auto times = breakpoint_times(result.trajectory);
  REQUIRE(times.size() == 3);
  CHECK(times[1] == doctest::Approx(2.0));
  CHECK(times[2] == doctest::Approx(10.0));
  CHECK(result.trajectory.breakpoints[1].events[0].kind == EventKind::InputTimeLimit);
  CHECK(result.trajectory.breakpoints[2].events[0].kind == EventKind::OutputFill);
}

TEST_CASE("solve: strict FIFO diverge freezes at the first fill") {
  const SolveResult result = solve(testutil::builtin("diverge-fifo"));
  CHECK(result.flows.at(0, 0, 0) == doctest::Approx(3.0));
  CHECK(result.flows.at(0, 1, 0) == doctest::Approx(2.0));
  const auto times = breakpoint_times(result.trajectory);
  REQUIRE(times.size() == 3);
  CHECK(times[1] == doctest::Approx(0.5));
  CHECK(times[2] == doctest::Approx(1.0));
}

TEST_CASE("solve: relaxed diverge keeps the free lane share moving") {
  const SolveResult result = solve(testutil::builtin("diverge-relaxed"));
  CHECK(result.flows.at(0, 0, 0) == doctest::Approx(3.0));
  CHECK(result.flows.at(0, 1, 0) == doctest::Approx(3.6));
}

TEST_CASE("solve: three-way diverge with overlapping restrictions") {
  const SolveResult result = solve(testutil::builtin("fig1"));
  CHECK(result.flows.at(0, 0, 0) == doctest::Approx(1.0));
  CHECK(result.flows.at(0, 1, 0) == doctest::Approx(3.7));
  CHECK(result.flows.at(0, 2, 0) == doctest::Approx(1.8));
  const auto times = breakpoint_times(result.trajectory);
  REQUIRE(times.size() == 4);
  CHECK(times[1] == doctest::Approx(0.5));
  CHECK(times[2] == doctest::Approx(0.6));
  CHECK(times[3] == doctest::Approx(1.0));
}

TEST_CASE("solve batches simultaneous fills into one breakpoint") {
  NodeSpec spec = NodeSpec::with_dims(1, 2, 1);
  spec.label = "twin-fill";
  spec.demand = {10.0};
  spec.split = {0.5, 0.5};
  spec.supply = {1.0, 1.0};
  spec.priority = {10.0};
  const SolveResult result = solve(spec);
  REQUIRE(result.trajectory.breakpoints.size() == 2);
  const auto& bp = result.trajectory.breakpoints[1];
  CHECK(bp.t == doctest::Approx(0.2));
  REQUIRE(bp.events.size() == 2);
  CHECK(bp.events[0].index == 0);
  CHECK(bp.events[1].index == 1);
  CHECK(result.flows.at(0, 0, 0) == doctest::Approx(1.0));
  CHECK(result.flows.at(0, 1, 0) == doctest::Approx(1.0));
}

TEST_CASE("solve handles zero demand and zero supply gracefully") {
  NodeSpec spec = NodeSpec::with_dims(2, 2, 1);
  spec.label = "dead-node";
  spec.demand = {0.0, 5.0};
  spec.split = {0.5, 0.5, 1.0, 0.0};
  spec.supply = {0.0, 100.0};
  spec.priority = {1.0, 1.0};
  const SolveResult result = solve(spec);
  CHECK(result.flows.total() == 0.0);  // input 2 only aims at the dead output
  CHECK(result.trajectory.breakpoints.front().mode.contains(0));
}

TEST_CASE("solve rejects an explicit automaton of the wrong shape") {
  CHECK_THROWS_AS((void)solve(testutil::builtin("diverge-fifo"), FieldKind::Merge),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)solve(testutil::builtin("merge-a"), FieldKind::Diverge),
                  std::invalid_argument);
}

TEST_CASE("solve rejects invalid specs") {
  NodeSpec spec = NodeSpec::with_dims(1, 1, 1);
  spec.demand = {-1.0};
  spec.split = {1.0};
  spec.supply = {1.0};
  CHECK_THROWS_AS((void)solve(spec), ValidationError);
}

TEST_CASE("breakpoint count never exceeds inputs + outputs + 1") {
  FuzzConfig config;
  config.seed = 5;
  for (std::uint64_t index = 0; index < 100; ++index) {
    const NodeSpec spec = generate_random(config, index);
    const SolveResult result = solve(spec);
    CHECK(int(result.trajectory.breakpoints.size()) <=
          spec.inputs + spec.outputs + 1);
    // Times are nondecreasing and the mode only grows.
    for (size_t k = 1; k < result.trajectory.breakpoints.size(); ++k) {
      const auto& prev = result.trajectory.breakpoints[k - 1];
      const auto& cur = result.trajectory.breakpoints[k];
      CHECK(cur.t >= prev.t - kEps);
      for (int j = 0; j < spec.outputs; ++j)
        if (prev.mode.contains(j)) CHECK(cur.mode.contains(j));
    }
  }
}
