#include "nodeflow/fields.hpp"

#include <algorithm>
#include <stdexcept>

namespace nodeflow {

int ModeSet::count() const {
  int n = 0;
  for (auto f : filled) n += f != 0;
  return n;
}

bool ModeSet::all() const { return count() == size(); }

double HybridState::movement_total(int i, int j) const {
  double tot = 0.0;
  for (int c = 0; c < classes; ++c) tot += at(i, j, c);
  return tot;
}

double HybridState::output_total(int j) const {
  double tot = 0.0;
  for (int i = 0; i < inputs; ++i) tot += movement_total(i, j);
  return tot;
}

bool RateMatrix::all_zero() const {
  for (double r : rate)
    if (r != 0.0) return false;
  return true;
}

RateMatrix RateMatrix::zeros(int m, int n, int c) {
  RateMatrix r;
  r.inputs = m;
  r.outputs = n;
  r.classes = c;
  r.rate.assign(size_t(m) * n * c, 0.0);
  return r;
}

HybridState initial_state(const NodeSpec& spec) {
  HybridState state;
  state.inputs = spec.inputs;
  state.outputs = spec.outputs;
  state.classes = spec.classes;
  state.t = 0.0;
  state.mode = ModeSet(spec.outputs);
  state.x.assign(size_t(spec.inputs) * spec.outputs * spec.classes, 0.0);
  for (int j = 0; j < spec.outputs; ++j)
    if (spec.supply[j] <= kEps) state.mode.add(j);
  return state;
}

double input_time_limit(const NodeSpec& spec, const OrientedDemand& od, int i) {
  return od.input_total[i] / spec.priority[i];
}

double active_restriction_measure(const NodeSpec& spec, const OrientedDemand& od,
                                  const HybridState& state, int i, int j) {
  std::vector<Interval> active;
  for (int jp = 0; jp < spec.outputs; ++jp) {
    if (!state.mode.contains(jp)) continue;
    const double tot = od.total_at(i, jp);
    if (state.movement_total(i, jp) < tot - kEps) {
      active.push_back(spec.restriction_at(i, jp, j));
    }
  }
  return std::min(1.0, interval_union_measure(active));
}

RateMatrix general_field(const NodeSpec& spec, const OrientedDemand& od,
                         const HybridState& state) {
  RateMatrix rates = RateMatrix::zeros(spec.inputs, spec.outputs, spec.classes);
  for (int i = 0; i < spec.inputs; ++i) {
    if (od.input_total[i] <= 0.0) continue;
    const double limit = input_time_limit(spec, od, i);
    if (state.t >= limit - kEps) continue;
    for (int j = 0; j < spec.outputs; ++j) {
      const double tot = od.total_at(i, j);
      if (tot <= 0.0) continue;
      const double factor = 1.0 - active_restriction_measure(spec, od, state, i, j);
      if (factor <= 0.0) continue;
      const double pij = oriented_priority(spec, od, i, j);
      for (int c = 0; c < spec.classes; ++c) {
        const double cap = od.at(i, j, c);
        if (state.at(i, j, c) < cap - kEps) {
          rates.at(i, j, c) = pij * (cap / tot) * factor;
        }
      }
    }
  }
  return rates;
}

RateMatrix merge_field(const NodeSpec& spec, const OrientedDemand& od,
                       const HybridState& state) {
  if (spec.outputs != 1) throw std::invalid_argument("merge field requires a single output");
  RateMatrix rates = RateMatrix::zeros(spec.inputs, 1, spec.classes);
  if (state.mode.contains(0)) return rates;
  for (int i = 0; i < spec.inputs; ++i) {
    const double tot = od.total_at(i, 0);
    if (tot <= 0.0) continue;
    for (int c = 0; c < spec.classes; ++c) {
      const double cap = od.at(i, 0, c);
      if (state.at(i, 0, c) < cap - kEps) {
        rates.at(i, 0, c) = spec.priority[i] * (cap / tot);
      }
    }
  }
  return rates;
}

RateMatrix diverge_field(const NodeSpec& spec, const OrientedDemand& od,
                         const HybridState& state) {
  if (spec.inputs != 1) throw std::invalid_argument("diverge field requires a single input");
  RateMatrix rates = RateMatrix::zeros(1, spec.outputs, spec.classes);
  if (od.input_total[0] <= 0.0) return rates;
  const double limit = input_time_limit(spec, od, 0);
  if (state.t >= limit - kEps) return rates;
  for (int j = 0; j < spec.outputs; ++j) {
    const double tot = od.total_at(0, j);
    if (tot <= 0.0) continue;
    const double factor = 1.0 - active_restriction_measure(spec, od, state, 0, j);
    if (factor <= 0.0) continue;
    const double p1j = oriented_priority(spec, od, 0, j);
    for (int c = 0; c < spec.classes; ++c) {
      const double cap = od.at(0, j, c);
      if (state.at(0, j, c) < cap - kEps) {
        rates.at(0, j, c) = p1j * (cap / tot) * factor;
      }
    }
  }
  return rates;
}

}  // namespace nodeflow
