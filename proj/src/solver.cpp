#include "nodeflow/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nodeflow {

namespace {

FieldKind resolve_kind(const NodeSpec& spec, FieldKind kind) {
  if (kind == FieldKind::Auto) {
    if (spec.outputs == 1) return FieldKind::Merge;
    if (spec.inputs == 1) return FieldKind::Diverge;
    return FieldKind::General;
  }
  if (kind == FieldKind::Merge && spec.outputs != 1)
    throw std::invalid_argument("merge automaton requires a single output");
  if (kind == FieldKind::Diverge && spec.inputs != 1)
    throw std::invalid_argument("diverge automaton requires a single input");
  return kind;
}

RateMatrix eval_field(const NodeSpec& spec, const OrientedDemand& od, const HybridState& state,
                      FieldKind kind) {
  switch (kind) {
    case FieldKind::Merge:
      return merge_field(spec, od, state);
    case FieldKind::Diverge:
      return diverge_field(spec, od, state);
    default:
      return general_field(spec, od, state);
  }
}

std::optional<double> fill_time_from_rates(const NodeSpec& spec, const HybridState& state,
                                           const RateMatrix& rates, int j) {
  double inflow_rate = 0.0;
  for (int i = 0; i < rates.inputs; ++i)
    for (int c = 0; c < rates.classes; ++c) inflow_rate += rates.at(i, j, c);
  if (inflow_rate <= kEps) return std::nullopt;
  const double remaining = std::max(0.0, spec.supply[j] - state.output_total(j));
  return state.t + remaining / inflow_rate;
}

double input_residual(const OrientedDemand& od, const HybridState& state, int i) {
  double served = 0.0;
  for (int j = 0; j < state.outputs; ++j) served += state.movement_total(i, j);
  return od.input_total[i] - served;
}

// Event candidates under the given field kind. For the merge automaton the
// per-input event is demand exhaustion under the current rates; for the
// others it is the time limit T_i, proposed while the input still has
// residual demand and some output can still fill.
std::vector<Event> event_candidates(const NodeSpec& spec, const OrientedDemand& od,
                                    const HybridState& state, const RateMatrix& rates,
                                    FieldKind kind) {
  std::vector<Event> candidates;
  for (int j = 0; j < spec.outputs; ++j) {
    if (state.mode.contains(j)) continue;
    if (auto t = fill_time_from_rates(spec, state, rates, j)) {
      candidates.push_back(Event{*t, EventKind::OutputFill, j});
    }
  }
  if (kind == FieldKind::Merge) {
    for (int i = 0; i < spec.inputs; ++i) {
      double rate = 0.0;
      for (int c = 0; c < spec.classes; ++c) rate += rates.at(i, 0, c);
      if (rate <= kEps) continue;
      const double residual = std::max(0.0, input_residual(od, state, i));
      candidates.push_back(Event{state.t + residual / rate, EventKind::InputTimeLimit, i});
    }
  } else {
    const bool any_unfilled = !state.mode.all();
    if (any_unfilled) {
      for (int i = 0; i < spec.inputs; ++i) {
        if (od.input_total[i] <= 0.0) continue;
        if (input_residual(od, state, i) <= kEps) continue;
        const double limit = input_time_limit(spec, od, i);
        if (limit > state.t + kEps) {
          candidates.push_back(Event{limit, EventKind::InputTimeLimit, i});
        }
      }
    }
  }
  return candidates;
}

// Ascending time; fills before time limits at equal times, each by index.
bool event_order(const Event& a, const Event& b) {
  if (a.time != b.time) return a.time < b.time;
  if (a.kind != b.kind) return a.kind == EventKind::OutputFill;
  return a.index < b.index;
}

void record_breakpoint(Trajectory& traj, const HybridState& state, std::vector<Event> events) {
  Breakpoint bp;
  bp.t = state.t;
  bp.mode = state.mode;
  bp.x = state.x;
  bp.events = std::move(events);
  traj.breakpoints.push_back(std::move(bp));
}

}  // namespace

std::optional<double> fill_time(const NodeSpec& spec, const OrientedDemand& od,
                                const HybridState& state, int j) {
  if (state.mode.contains(j)) throw std::invalid_argument("output already filled");
  const RateMatrix rates = general_field(spec, od, state);
  return fill_time_from_rates(spec, state, rates, j);
}

Event next_event(const NodeSpec& spec, const OrientedDemand& od, const HybridState& state) {
  const RateMatrix rates = general_field(spec, od, state);
  auto candidates = event_candidates(spec, od, state, rates, FieldKind::General);
  if (candidates.empty()) return Event{state.t, EventKind::Terminate, -1};
  return *std::min_element(candidates.begin(), candidates.end(), event_order);
}

HybridState advance(const NodeSpec& spec, const OrientedDemand& od, const HybridState& state,
                    const RateMatrix& rates, double dt) {
  if (dt < 0.0) throw std::invalid_argument("advance requires dt >= 0");
  HybridState next = state;
  next.t = state.t + dt;
  for (size_t k = 0; k < next.x.size(); ++k) next.x[k] += rates.rate[k] * dt;

  // Absorb round-off against the demand caps.
  for (int i = 0; i < spec.inputs; ++i) {
    for (int j = 0; j < spec.outputs; ++j) {
      for (int c = 0; c < spec.classes; ++c) {
        const double cap = od.at(i, j, c);
        double& v = next.at(i, j, c);
        if (v > cap) {
          if (v - cap > kDriftTol) throw std::logic_error("demand cap drift exceeds tolerance");
          v = cap;
        }
      }
    }
  }

  // Absorb round-off against the supply caps, proportionally to this step's
  // contributions.
  for (int j = 0; j < spec.outputs; ++j) {
    const double sum = next.output_total(j);
    const double excess = sum - spec.supply[j];
    if (excess <= 0.0) continue;
    if (excess > kDriftTol) throw std::logic_error("supply cap drift exceeds tolerance");
    double step_sum = 0.0;
    for (int i = 0; i < spec.inputs; ++i)
      for (int c = 0; c < spec.classes; ++c) step_sum += rates.at(i, j, c) * dt;
    for (int i = 0; i < spec.inputs; ++i) {
      for (int c = 0; c < spec.classes; ++c) {
        const double weight =
            step_sum > 0.0 ? rates.at(i, j, c) * dt / step_sum : (sum > 0.0 ? next.at(i, j, c) / sum : 0.0);
        next.at(i, j, c) = std::max(0.0, next.at(i, j, c) - excess * weight);
      }
    }
  }
  return next;
}

HybridState apply_reset(const HybridState& state, const Event& event) {
  if (std::abs(event.time - state.t) > kEps + 1e-12 * std::abs(state.t))
    throw std::invalid_argument("reset applied at the wrong time");
  HybridState next = state;
  if (event.kind == EventKind::OutputFill) {
    if (next.mode.contains(event.index))
      throw std::invalid_argument("output already in the filled set");
    next.mode.add(event.index);
  }
  // InputTimeLimit leaves the continuous state untouched; the field's time
  // guard stops the input from here on.
  return next;
}

SolveResult solve(const NodeSpec& spec, FieldKind kind) {
  require_valid(spec);
  const FieldKind resolved = resolve_kind(spec, kind);
  const OrientedDemand od = oriented_demand(spec);

  HybridState state = initial_state(spec);
  Trajectory traj;
  record_breakpoint(traj, state, {Event{0.0, EventKind::Init, -1}});

  const int max_batches = spec.inputs + spec.outputs + 1;
  for (int iter = 0; iter <= max_batches; ++iter) {
    const RateMatrix rates = eval_field(spec, od, state, resolved);
    auto candidates = event_candidates(spec, od, state, rates, resolved);
    if (candidates.empty()) break;
    std::sort(candidates.begin(), candidates.end(), event_order);
    const double t_min = candidates.front().time;
    std::vector<Event> batch;
    for (const Event& ev : candidates)
      if (ev.time <= t_min + kEps) batch.push_back(ev);

    state = advance(spec, od, state, rates, t_min - state.t);
    state.t = t_min;
    for (Event& ev : batch) {
      ev.time = t_min;
      state = apply_reset(state, ev);
    }
    record_breakpoint(traj, state, batch);

    if (iter == max_batches)
      throw std::logic_error("event loop exceeded its termination bound");
  }

  SolveResult result;
  result.flows.inputs = spec.inputs;
  result.flows.outputs = spec.outputs;
  result.flows.classes = spec.classes;
  result.flows.flow = state.x;
  result.trajectory = std::move(traj);
  return result;
}

}  // namespace nodeflow
