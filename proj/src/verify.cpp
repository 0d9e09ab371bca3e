#include "nodeflow/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace nodeflow {

namespace {

void require_dims(const NodeSpec& spec, const FlowMatrix& f) {
  if (f.inputs != spec.inputs || f.outputs != spec.outputs || f.classes != spec.classes)
    throw std::invalid_argument("flow matrix dimensions do not match the spec");
}

void add_check(VerificationReport& report, std::string name, double residual, double tol) {
  report.checks.push_back(Check{std::move(name), residual <= tol, residual});
}

void finalize(VerificationReport& report) {
  report.passed = std::all_of(report.checks.begin(), report.checks.end(),
                              [](const Check& c) { return c.passed; });
}

}  // namespace

std::string VerificationReport::summary() const {
  std::ostringstream os;
  os << (passed ? "PASS" : "FAIL");
  for (const auto& c : checks) {
    os << "\n  " << (c.passed ? "pass" : "FAIL") << "  " << c.name
       << "  residual=" << c.residual;
  }
  return os.str();
}

double rect_union_area(std::span<const Rect> rects) {
  std::vector<double> xs;
  for (const Rect& r : rects) {
    if (!(r.xlo <= r.xhi && r.ylo <= r.yhi))
      throw std::invalid_argument("rectangle extents must be ordered");
    if (r.xhi > r.xlo) {
      xs.push_back(r.xlo);
      xs.push_back(r.xhi);
    }
  }
  if (xs.empty()) return 0.0;
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  double area = 0.0;
  std::vector<Interval> spans;
  for (size_t k = 0; k + 1 < xs.size(); ++k) {
    const double width = xs[k + 1] - xs[k];
    if (width <= 0.0) continue;
    const double mid = 0.5 * (xs[k] + xs[k + 1]);
    spans.clear();
    for (const Rect& r : rects) {
      if (r.xlo <= mid && mid <= r.xhi && r.yhi > r.ylo) {
        spans.push_back(Interval{r.ylo, r.yhi});
      }
    }
    area += width * interval_union_measure(spans);
  }
  return area;
}

VerificationReport check_feasibility(const NodeSpec& spec, const FlowMatrix& f) {
  require_dims(spec, f);
  const OrientedDemand od = oriented_demand(spec);
  VerificationReport report;

  double neg = 0.0;
  for (double v : f.flow) neg = std::max(neg, -v);
  add_check(report, "flow-nonnegative", neg, kEps);

  double demand_over = 0.0;
  for (int i = 0; i < spec.inputs; ++i) {
    for (int c = 0; c < spec.classes; ++c) {
      double served = 0.0;
      for (int j = 0; j < spec.outputs; ++j) served += f.at(i, j, c);
      demand_over = std::max(demand_over, served - spec.demand_at(i, c));
    }
  }
  add_check(report, "demand-feasibility", demand_over, kEps);

  double supply_over = 0.0;
  for (int j = 0; j < spec.outputs; ++j)
    supply_over = std::max(supply_over, f.output_total(j) - spec.supply[j]);
  add_check(report, "supply-feasibility", supply_over, kEps);

  // f_ij^c * sum_c S_ij^c == S_ij^c * sum_c f_ij^c, scaled by the products'
  // magnitude.
  double prop = 0.0;
  double prop_tol = kEps;
  for (int i = 0; i < spec.inputs; ++i) {
    for (int j = 0; j < spec.outputs; ++j) {
      const double s_tot = od.total_at(i, j);
      if (s_tot <= 0.0) continue;
      const double f_tot = f.movement_total(i, j);
      for (int c = 0; c < spec.classes; ++c) {
        prop = std::max(prop, std::abs(f.at(i, j, c) * s_tot - od.at(i, j, c) * f_tot));
      }
      prop_tol = std::max(prop_tol, kEps * std::max(1.0, s_tot * std::max(1.0, f_tot)));
    }
  }
  add_check(report, "class-proportionality", prop, prop_tol);

  finalize(report);
  return report;
}

VerificationReport check_merge_priority(const NodeSpec& spec, const FlowMatrix& f) {
  require_dims(spec, f);
  if (spec.outputs != 1)
    throw std::invalid_argument("merge priority check requires a single output");
  const OrientedDemand od = oriented_demand(spec);
  VerificationReport report;

  const double r1 = spec.supply[0];
  add_check(report, "merge-supply", f.output_total(0) - r1, kEps);

  double p_sum = 0.0;
  for (int i = 0; i < spec.inputs; ++i) p_sum += spec.priority[i];

  std::vector<int> congested;
  for (int i = 0; i < spec.inputs; ++i) {
    if (od.input_total[i] <= 0.0) continue;
    if (f.movement_total(i, 0) < od.input_total[i] - kEps) congested.push_back(i);
  }

  double ratio_residual = 0.0;
  double ratio_tol = kRatioTol;
  for (size_t a = 0; a < congested.size(); ++a) {
    for (size_t b = a + 1; b < congested.size(); ++b) {
      const double ra = f.movement_total(congested[a], 0) / spec.priority[congested[a]];
      const double rb = f.movement_total(congested[b], 0) / spec.priority[congested[b]];
      ratio_residual = std::max(ratio_residual, std::abs(ra - rb));
      ratio_tol = std::max(ratio_tol, kRatioTol * std::max({1.0, ra, rb}));
    }
  }
  add_check(report, "merge-priority-ratio", ratio_residual, ratio_tol);

  double floor_residual = 0.0;
  for (int i : congested) {
    const double portion = spec.priority[i] / p_sum * r1;
    floor_residual = std::max(floor_residual, portion - f.movement_total(i, 0));
  }
  add_check(report, "merge-priority-floor", floor_residual, kEps);

  finalize(report);
  return report;
}

VerificationReport check_relaxed_fifo(const NodeSpec& spec, const FlowMatrix& f) {
  require_dims(spec, f);
  if (spec.inputs != 1)
    throw std::invalid_argument("relaxed FIFO check requires a single input");
  const OrientedDemand od = oriented_demand(spec);
  VerificationReport report;

  std::vector<char> output_filled(size_t(spec.outputs), 0);
  for (int j = 0; j < spec.outputs; ++j) {
    output_filled[j] = f.output_total(j) >= spec.supply[j] - kEps * std::max(1.0, spec.supply[j]);
  }

  // Reconstruct the normalized fill clocks. Served fractions advance at the
  // shared normalized rate scaled by each movement's restriction factor, so
  // the moment a blocker filled follows from the final flows alone. A
  // blocker's own served fraction understates that moment whenever the
  // blocker was itself slowed before filling, which would make its rectangle
  // too wide; when blockers fill unimpeded the clock equals the fraction.
  // Clock 1 is the input time limit; fractions at fill are nondecreasing in
  // time, so ascending served fraction recovers the fill order.
  struct Blocker {
    int j;
    double fraction;
  };
  std::vector<Blocker> order;
  for (int j = 0; j < spec.outputs; ++j) {
    const double s_j = od.total_at(0, j);
    if (!output_filled[j] || s_j <= 0.0) continue;
    order.push_back({j, std::clamp(f.movement_total(0, j) / s_j, 0.0, 1.0)});
  }
  std::sort(order.begin(), order.end(),
            [](const Blocker& a, const Blocker& b) { return a.fraction < b.fraction; });

  std::vector<double> fill_clock(size_t(spec.outputs), 2.0);  // > 1 means never
  std::vector<double> phi(size_t(spec.outputs), 0.0);
  std::vector<char> applied(size_t(spec.outputs), 0);
  const auto factor_for = [&](int target) {
    std::vector<Interval> active;
    for (const Blocker& a : order) {
      if (!applied[a.j] || a.j == target) continue;
      if (a.fraction < 1.0 - kRatioTol) active.push_back(spec.restriction_at(0, a.j, target));
    }
    return 1.0 - std::min(1.0, interval_union_measure(active));
  };
  double clock = 0.0;
  for (size_t k = 0; k < order.size(); ++k) {
    const Blocker& b = order[k];
    const double needed = b.fraction - phi[b.j];
    const double factor = factor_for(b.j);
    double dc = 0.0;
    if (needed > kRatioTol) {
      // A fully blocked movement cannot reach its fill fraction; such flows
      // are inconsistent with any execution, so push the fill past the
      // horizon and let the rectangle vanish.
      dc = factor > kRatioTol ? needed / factor : 2.0;
    }
    for (size_t later = k + 1; later < order.size(); ++later) {
      const Blocker& x = order[later];
      phi[x.j] = std::min(1.0, phi[x.j] + factor_for(x.j) * dc);
    }
    clock = std::min(clock + dc, 2.0);
    fill_clock[b.j] = clock;
    applied[b.j] = 1;
  }

  double bound_residual = 0.0;
  double bound_tol = kEps;
  for (int j = 0; j < spec.outputs; ++j) {
    const double s_j = od.total_at(0, j);
    if (s_j <= 0.0) continue;
    std::vector<Rect> rects;
    for (const Blocker& b : order) {
      if (b.j == j || b.fraction >= 1.0 - kRatioTol) continue;
      const Interval& eta = spec.restriction_at(0, b.j, j);
      rects.push_back(Rect{std::min(fill_clock[b.j], 1.0) * s_j, s_j, eta.lo, eta.hi});
    }
    const double area = rect_union_area(rects);
    bound_residual = std::max(bound_residual, f.movement_total(0, j) - (s_j - area));
    bound_tol = std::max(bound_tol, kEps * std::max(1.0, s_j));
  }
  add_check(report, "relaxed-fifo-bound", bound_residual, bound_tol);

  // With every restriction the full interval, the bound degenerates to the
  // classic served-fraction equality across movements.
  bool full_fifo = true;
  for (int jp = 0; jp < spec.outputs && full_fifo; ++jp)
    for (int j = 0; j < spec.outputs && full_fifo; ++j) {
      const Interval& eta = spec.restriction_at(0, jp, j);
      if (!(eta.lo <= 1e-12 && eta.hi >= 1.0 - 1e-12)) full_fifo = false;
    }
  if (full_fifo) {
    double lo = 1.0, hi = 0.0;
    bool any = false;
    for (int j = 0; j < spec.outputs; ++j) {
      const double s_j = od.total_at(0, j);
      if (s_j <= kEps) continue;
      const double fraction = f.movement_total(0, j) / s_j;
      lo = std::min(lo, fraction);
      hi = std::max(hi, fraction);
      any = true;
    }
    add_check(report, "fifo-served-fraction", any ? hi - lo : 0.0, kRatioTol);
  }

  finalize(report);
  return report;
}

VerificationReport certify(const NodeSpec& spec, const FlowMatrix& f) {
  require_dims(spec, f);
  VerificationReport report = check_feasibility(spec, f);
  if (spec.outputs == 1) {
    for (auto& c : check_merge_priority(spec, f).checks) report.checks.push_back(std::move(c));
  }
  if (spec.inputs == 1) {
    for (auto& c : check_relaxed_fifo(spec, f).checks) report.checks.push_back(std::move(c));
  }
  finalize(report);
  return report;
}

}  // namespace nodeflow
