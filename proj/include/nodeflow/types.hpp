#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace nodeflow {

// Absolute tolerance for comparisons of vehicle quantities.
inline constexpr double kEps = 1e-9;
// Relative tolerance for ratio checks.
inline constexpr double kRatioTol = 1e-6;
// Floating-point drift beyond this is an internal error, not clamp fodder.
inline constexpr double kDriftTol = 1e-6;

// Closed sub-interval of [0,1].
struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  double length() const { return hi - lo; }
  bool operator==(const Interval&) const = default;
};

// Lebesgue measure of the union of the given intervals.
double interval_union_measure(std::span<const Interval> intervals);

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

struct ValidationError : std::runtime_error {
  explicit ValidationError(ValidationReport r);
  ValidationReport report;
};

// Static snapshot of a junction: per-class demands, split ratios, supplies,
// input priorities, and mutual restriction intervals.
//
// Index convention: inputs i in [0,M), outputs j in [0,N), classes c in [0,C).
// restriction_at(i, jp, j) is the portion of input i's lanes serving output j
// that is blocked while output jp is congested. The diagonal (jp == j) is
// always the full interval [0,1].
struct NodeSpec {
  int inputs = 0;   // M
  int outputs = 0;  // N
  int classes = 0;  // C
  std::vector<double> demand;         // [i*C + c], vehicles
  std::vector<double> split;          // [(i*N + j)*C + c], fraction of demand
  std::vector<double> supply;         // [j], vehicles
  std::vector<double> priority;       // [i], vehicles per unit time
  std::vector<Interval> restriction;  // [(i*N + jp)*N + j]
  std::string label;

  double demand_at(int i, int c) const { return demand[size_t(i) * classes + c]; }
  double split_at(int i, int j, int c) const {
    return split[(size_t(i) * outputs + j) * classes + c];
  }
  const Interval& restriction_at(int i, int jp, int j) const {
    return restriction[(size_t(i) * outputs + jp) * outputs + j];
  }
  Interval& restriction_at(int i, int jp, int j) {
    return restriction[(size_t(i) * outputs + jp) * outputs + j];
  }

  // Zeroed spec of the given dimensions with full-FIFO restrictions.
  static NodeSpec with_dims(int m, int n, int c);
};

ValidationReport validate(const NodeSpec& spec);

// Throws ValidationError unless validate(spec) passes.
void require_valid(const NodeSpec& spec);

// Oriented demands S_ij^c = S_i^c * beta_ij^c plus their movement and
// per-input aggregates.
struct OrientedDemand {
  int inputs = 0;
  int outputs = 0;
  int classes = 0;
  std::vector<double> value;        // [(i*N + j)*C + c]
  std::vector<double> total;        // [i*N + j]
  std::vector<double> input_total;  // [i]

  double at(int i, int j, int c) const {
    return value[(size_t(i) * outputs + j) * classes + c];
  }
  double total_at(int i, int j) const { return total[size_t(i) * outputs + j]; }
};

OrientedDemand oriented_demand(const NodeSpec& spec);

// Input i's priority apportioned to output j in proportion to oriented
// demand. Zero when input i carries no demand at all.
double oriented_priority(const NodeSpec& spec, const OrientedDemand& od, int i, int j);

struct FlowMatrix {
  int inputs = 0;
  int outputs = 0;
  int classes = 0;
  std::vector<double> flow;  // [(i*N + j)*C + c]

  double at(int i, int j, int c) const {
    return flow[(size_t(i) * outputs + j) * classes + c];
  }
  double& at(int i, int j, int c) {
    return flow[(size_t(i) * outputs + j) * classes + c];
  }
  double movement_total(int i, int j) const;
  double input_total(int i) const;
  double output_total(int j) const;
  double total() const;

  static FlowMatrix zeros(int m, int n, int c);
};

}  // namespace nodeflow
