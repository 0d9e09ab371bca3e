#pragma once

#include <cstdint>

#include "nodeflow/types.hpp"

namespace nodeflow {

// Set of filled output links (the discrete mode). Only ever grows during an
// execution.
struct ModeSet {
  std::vector<std::uint8_t> filled;  // one flag per output

  ModeSet() = default;
  explicit ModeSet(int outputs) : filled(size_t(outputs), 0) {}

  bool contains(int j) const { return filled[size_t(j)] != 0; }
  void add(int j) { filled[size_t(j)] = 1; }
  int count() const;
  bool all() const;
  int size() const { return int(filled.size()); }
};

// Continuous flows x_ij^c plus mode and clock.
struct HybridState {
  int inputs = 0;
  int outputs = 0;
  int classes = 0;
  double t = 0.0;
  ModeSet mode;
  std::vector<double> x;  // [(i*N + j)*C + c], vehicles

  double at(int i, int j, int c) const {
    return x[(size_t(i) * outputs + j) * classes + c];
  }
  double& at(int i, int j, int c) {
    return x[(size_t(i) * outputs + j) * classes + c];
  }
  double movement_total(int i, int j) const;
  double output_total(int j) const;
};

// Flow rates xdot_ij^c under the current mode.
struct RateMatrix {
  int inputs = 0;
  int outputs = 0;
  int classes = 0;
  std::vector<double> rate;  // [(i*N + j)*C + c], vehicles per unit time

  double at(int i, int j, int c) const {
    return rate[(size_t(i) * outputs + j) * classes + c];
  }
  double& at(int i, int j, int c) {
    return rate[(size_t(i) * outputs + j) * classes + c];
  }
  bool all_zero() const;

  static RateMatrix zeros(int m, int n, int c);
};

// State at t = 0: x = 0, with outputs of (near-)zero supply already filled.
HybridState initial_state(const NodeSpec& spec);

// Time limit T_i = sum_c S_i^c / p_i after which input i stops sending.
double input_time_limit(const NodeSpec& spec, const OrientedDemand& od, int i);

// Measure of the union of restriction intervals acting on movement (i,j):
// intervals eta[jp -> j] over filled outputs jp whose movement (i,jp) still
// has residual demand. A movement with no demand queues nothing and blocks
// nothing.
double active_restriction_measure(const NodeSpec& spec, const OrientedDemand& od,
                                  const HybridState& state, int i, int j);

// Vector field of the general M-to-N automaton.
RateMatrix general_field(const NodeSpec& spec, const OrientedDemand& od,
                         const HybridState& state);

// Vector field of the merge automaton (requires N == 1).
RateMatrix merge_field(const NodeSpec& spec, const OrientedDemand& od,
                       const HybridState& state);

// Vector field of the diverge automaton (requires M == 1).
RateMatrix diverge_field(const NodeSpec& spec, const OrientedDemand& od,
                         const HybridState& state);

enum class FieldKind { Auto, General, Merge, Diverge };

}  // namespace nodeflow
