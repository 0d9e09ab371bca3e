#pragma once

#include "nodeflow/types.hpp"

namespace nodeflow {

// Axis-aligned rectangle: x in vehicles, y a lane fraction in [0,1].
struct Rect {
  double xlo = 0.0;
  double xhi = 0.0;
  double ylo = 0.0;
  double yhi = 0.0;
};

// Exact area of the union of axis-aligned rectangles (coordinate sweep).
double rect_union_area(std::span<const Rect> rects);

struct Check {
  std::string name;
  bool passed = false;
  double residual = 0.0;
};

struct VerificationReport {
  bool passed = false;
  std::vector<Check> checks;
  std::string summary() const;
};

// Nonnegativity, demand and supply feasibility, and class proportionality.
VerificationReport check_feasibility(const NodeSpec& spec, const FlowMatrix& f);

// Priority-proportional split among congested inputs plus the
// initial-portioning floor. Requires N == 1.
VerificationReport check_merge_priority(const NodeSpec& spec, const FlowMatrix& f);

// Rectangle-union area bound per output, with the served-fraction equality
// check in the full-FIFO special case. Requires M == 1.
VerificationReport check_relaxed_fifo(const NodeSpec& spec, const FlowMatrix& f);

// All applicable checks: feasibility always, merge priority when N == 1,
// relaxed FIFO when M == 1.
VerificationReport certify(const NodeSpec& spec, const FlowMatrix& f);

}  // namespace nodeflow
