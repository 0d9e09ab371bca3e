#pragma once

#include "nodeflow/types.hpp"

namespace nodeflow {

struct OracleConfig {
  double dt = 1e-4;
  // Integration horizon; 0 means twice the largest input time limit.
  double max_time = 0.0;
};

struct OracleResult {
  FlowMatrix flows;
  // Crossing time at which each output's supply saturated; < 0 if it never
  // did.
  std::vector<double> fill_time;
};

// Fixed-step forward integration of the node dynamics, independent of the
// event-triggered solver. Within a step, cap crossings are localized by a
// proportional partial step. Throws if the dynamics fail to die out before
// max_time.
OracleResult integrate(const NodeSpec& spec, const OracleConfig& config = {});

// Max-norm distance between two flow matrices of matching dimensions.
double flow_distance(const FlowMatrix& a, const FlowMatrix& b);

}  // namespace nodeflow
