#pragma once

#include <optional>

#include "nodeflow/fields.hpp"

namespace nodeflow {

enum class EventKind { Init, OutputFill, InputTimeLimit, Terminate };

struct Event {
  double time = 0.0;
  EventKind kind = EventKind::Terminate;
  int index = -1;  // output for OutputFill, input for InputTimeLimit, else -1
};

struct Breakpoint {
  double t = 0.0;
  ModeSet mode;
  std::vector<double> x;       // snapshot of continuous state
  std::vector<Event> events;   // events applied at this breakpoint
};

struct Trajectory {
  std::vector<Breakpoint> breakpoints;
};

struct SolveResult {
  FlowMatrix flows;
  Trajectory trajectory;
};

// Time at which output j fills under the current (general-field) rates, or
// nothing when no flow is directed at j.
std::optional<double> fill_time(const NodeSpec& spec, const OrientedDemand& od,
                                const HybridState& state, int j);

// Earliest pending event under the general field: the minimum over unfilled
// outputs' fill times and active inputs' time limits. Terminate when nothing
// remains.
Event next_event(const NodeSpec& spec, const OrientedDemand& od, const HybridState& state);

// Linear advance x' = x + rate * dt with clamping of accumulated round-off
// against demand and supply caps. Rejects dt < 0; drift beyond kDriftTol is
// an internal error.
HybridState advance(const NodeSpec& spec, const OrientedDemand& od, const HybridState& state,
                    const RateMatrix& rates, double dt);

// Discrete reset: OutputFill adds the output to the mode set, InputTimeLimit
// leaves the continuous state untouched. The event time must match the state
// clock.
HybridState apply_reset(const HybridState& state, const Event& event);

// Full event-triggered execution. FieldKind::Auto picks the merge automaton
// for N == 1, the diverge automaton for M == 1, and the general automaton
// otherwise.
SolveResult solve(const NodeSpec& spec, FieldKind kind = FieldKind::Auto);

}  // namespace nodeflow
