#pragma once

#include <cstdint>

#include "nodeflow/solver.hpp"

namespace nodeflow {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parse a scenario document (JSON, schema version 1). Missing restrictions
// default to full FIFO; the diagonal is always forced to [0,1]. The result is
// validated before being returned.
NodeSpec parse_scenario(const std::string& text);

// Scenario document for a spec; parse_scenario(write_scenario(s)) == s.
std::string write_scenario(const NodeSpec& spec);

// Flow document: per-movement flows with aggregates, plus the trajectory
// breakpoints when given.
std::string write_flows(const NodeSpec& spec, const FlowMatrix& flows,
                        const Trajectory* trajectory = nullptr, bool pretty = true);

// Delimited trajectory rows: t, mode bitmask (bit k set iff output k+1 is
// filled), then the flattened continuous state.
std::string trajectory_csv(const Trajectory& trajectory);

// Read a flow matrix for the given spec back out of a flow document.
FlowMatrix parse_flows(const NodeSpec& spec, const std::string& text);

// Deterministic scenario generator. The same (config, index) pair always
// yields the same spec, independent of platform.
struct FuzzConfig {
  std::uint64_t seed = 1;
  int count = 500;
  int max_inputs = 4;
  int max_outputs = 4;
  int max_classes = 3;
  double demand_max = 5.0;      // per class, vehicles
  double priority_min = 2.0;    // vehicles per unit time
  double priority_max = 20.0;
  double supply_factor = 1.5;   // supplies drawn from [0, factor * directed demand]
  double relax_probability = 0.3;
};

NodeSpec generate_random(const FuzzConfig& config, std::uint64_t index);

// Built-in named scenarios (merge-a, merge-b, diverge-fifo, diverge-relaxed,
// fig1). Returns nullptr for unknown names.
const char* builtin_scenario(const std::string& name);
std::vector<std::string> builtin_names();

}  // namespace nodeflow
