#include "nodeflow/types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace nodeflow {

double interval_union_measure(std::span<const Interval> intervals) {
  if (intervals.empty()) return 0.0;
  std::vector<Interval> sorted(intervals.begin(), intervals.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  double measure = 0.0;
  double cur_lo = sorted.front().lo;
  double cur_hi = sorted.front().hi;
  for (size_t k = 1; k < sorted.size(); ++k) {
    const Interval& iv = sorted[k];
    if (iv.lo > cur_hi) {
      measure += cur_hi - cur_lo;
      cur_lo = iv.lo;
      cur_hi = iv.hi;
    } else {
      cur_hi = std::max(cur_hi, iv.hi);
    }
  }
  measure += cur_hi - cur_lo;
  return measure;
}

std::string ValidationReport::summary() const {
  if (ok()) return "ok";
  std::ostringstream os;
  os << violations.size() << " violation(s):";
  for (const auto& v : violations) os << "\n  - " << v;
  return os.str();
}

ValidationError::ValidationError(ValidationReport r)
    : std::runtime_error("invalid node spec: " + r.summary()), report(std::move(r)) {}

NodeSpec NodeSpec::with_dims(int m, int n, int c) {
  NodeSpec spec;
  spec.inputs = m;
  spec.outputs = n;
  spec.classes = c;
  spec.demand.assign(size_t(m) * c, 0.0);
  spec.split.assign(size_t(m) * n * c, 0.0);
  spec.supply.assign(size_t(n), 0.0);
  spec.priority.assign(size_t(m), 1.0);
  spec.restriction.assign(size_t(m) * n * n, Interval{0.0, 1.0});
  return spec;
}

namespace {

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

}  // namespace

ValidationReport validate(const NodeSpec& spec) {
  ValidationReport report;
  auto fail = [&report](const std::string& msg) { report.violations.push_back(msg); };

  const int m = spec.inputs, n = spec.outputs, c = spec.classes;
  if (m < 1 || n < 1 || c < 1) {
    fail("dimensions must be at least 1x1x1");
    return report;
  }
  if (spec.demand.size() != size_t(m) * c || spec.split.size() != size_t(m) * n * c ||
      spec.supply.size() != size_t(n) || spec.priority.size() != size_t(m) ||
      spec.restriction.size() != size_t(m) * n * n) {
    fail("array sizes do not match dimensions");
    return report;
  }

  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < c; ++k) {
      if (!finite_nonneg(spec.demand_at(i, k))) {
        std::ostringstream os;
        os << "demand for input " << i + 1 << " class " << k + 1 << " must be finite and >= 0";
        fail(os.str());
      }
    }
    if (!(std::isfinite(spec.priority[i]) && spec.priority[i] > 0.0)) {
      std::ostringstream os;
      os << "priority of input " << i + 1 << " must be finite and > 0";
      fail(os.str());
    }
  }
  for (int j = 0; j < n; ++j) {
    if (!finite_nonneg(spec.supply[j])) {
      std::ostringstream os;
      os << "supply of output " << j + 1 << " must be finite and >= 0";
      fail(os.str());
    }
  }

  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < c; ++k) {
      double row = 0.0;
      bool entries_ok = true;
      for (int j = 0; j < n; ++j) {
        const double b = spec.split_at(i, j, k);
        if (!(std::isfinite(b) && b >= 0.0 && b <= 1.0)) {
          std::ostringstream os;
          os << "split ratio for input " << i + 1 << " output " << j + 1 << " class " << k + 1
             << " must lie in [0,1]";
          fail(os.str());
          entries_ok = false;
        }
        row += b;
      }
      if (entries_ok && spec.demand_at(i, k) > 0.0 && std::abs(row - 1.0) > kEps) {
        std::ostringstream os;
        os << "split ratios for input " << i + 1 << " class " << k + 1 << " sum to " << row
           << " but demand is positive (must sum to 1)";
        fail(os.str());
      }
    }
  }

  for (int i = 0; i < m; ++i) {
    for (int jp = 0; jp < n; ++jp) {
      for (int j = 0; j < n; ++j) {
        const Interval& iv = spec.restriction_at(i, jp, j);
        if (!(std::isfinite(iv.lo) && std::isfinite(iv.hi) && 0.0 <= iv.lo && iv.lo <= iv.hi &&
              iv.hi <= 1.0)) {
          std::ostringstream os;
          os << "restriction interval for input " << i + 1 << " (blocker " << jp + 1
             << ", target " << j + 1 << ") must satisfy 0 <= lo <= hi <= 1";
          fail(os.str());
        } else if (jp == j && !(iv.lo == 0.0 && iv.hi == 1.0)) {
          std::ostringstream os;
          os << "diagonal restriction for input " << i + 1 << " output " << j + 1
             << " must be [0,1]";
          fail(os.str());
        }
      }
    }
  }

  return report;
}

void require_valid(const NodeSpec& spec) {
  ValidationReport report = validate(spec);
  if (!report.ok()) throw ValidationError(std::move(report));
}

OrientedDemand oriented_demand(const NodeSpec& spec) {
  OrientedDemand od;
  od.inputs = spec.inputs;
  od.outputs = spec.outputs;
  od.classes = spec.classes;
  od.value.assign(size_t(spec.inputs) * spec.outputs * spec.classes, 0.0);
  od.total.assign(size_t(spec.inputs) * spec.outputs, 0.0);
  od.input_total.assign(size_t(spec.inputs), 0.0);
  for (int i = 0; i < spec.inputs; ++i) {
    for (int j = 0; j < spec.outputs; ++j) {
      double tot = 0.0;
      for (int c = 0; c < spec.classes; ++c) {
        const double v = spec.demand_at(i, c) * spec.split_at(i, j, c);
        od.value[(size_t(i) * spec.outputs + j) * spec.classes + c] = v;
        tot += v;
      }
      od.total[size_t(i) * spec.outputs + j] = tot;
    }
    double in_tot = 0.0;
    for (int c = 0; c < spec.classes; ++c) in_tot += spec.demand_at(i, c);
    od.input_total[i] = in_tot;
  }
  return od;
}

double oriented_priority(const NodeSpec& spec, const OrientedDemand& od, int i, int j) {
  const double in_tot = od.input_total[i];
  if (in_tot <= 0.0) return 0.0;
  return od.total_at(i, j) / in_tot * spec.priority[i];
}

double FlowMatrix::movement_total(int i, int j) const {
  double tot = 0.0;
  for (int c = 0; c < classes; ++c) tot += at(i, j, c);
  return tot;
}

double FlowMatrix::input_total(int i) const {
  double tot = 0.0;
  for (int j = 0; j < outputs; ++j) tot += movement_total(i, j);
  return tot;
}

double FlowMatrix::output_total(int j) const {
  double tot = 0.0;
  for (int i = 0; i < inputs; ++i) tot += movement_total(i, j);
  return tot;
}

double FlowMatrix::total() const {
  return std::accumulate(flow.begin(), flow.end(), 0.0);
}

FlowMatrix FlowMatrix::zeros(int m, int n, int c) {
  FlowMatrix f;
  f.inputs = m;
  f.outputs = n;
  f.classes = c;
  f.flow.assign(size_t(m) * n * c, 0.0);
  return f;
}

}  // namespace nodeflow
