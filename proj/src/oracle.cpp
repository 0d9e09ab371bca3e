#include "nodeflow/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#ifdef NODEFLOW_ORACLE_SHARED_FIELD
#include "nodeflow/fields.hpp"
#endif

namespace nodeflow {

namespace {

// Length of the union of [lo,hi] pairs. Re-stated here so the oracle does not
// lean on the solver-side implementation.
double union_length(std::vector<std::pair<double, double>> spans) {
  if (spans.empty()) return 0.0;
  std::sort(spans.begin(), spans.end());
  double len = 0.0;
  double lo = spans.front().first;
  double hi = spans.front().second;
  for (size_t k = 1; k < spans.size(); ++k) {
    if (spans[k].first > hi) {
      len += hi - lo;
      lo = spans[k].first;
      hi = spans[k].second;
    } else {
      hi = std::max(hi, spans[k].second);
    }
  }
  return len + (hi - lo);
}

// Dense-integration working set. All derived quantities are computed here
// from the spec arrays, not taken from the solver modules.
struct DenseRun {
  const NodeSpec& spec;
  int m, n, c;
  std::vector<double> sd;        // oriented demand per movement/class
  std::vector<double> sd_tot;    // per movement
  std::vector<double> s_in;      // per input
  std::vector<double> pij;       // oriented priorities
  std::vector<double> t_limit;   // per input

  double t = 0.0;
  std::vector<double> x;
  std::vector<char> filled;
  std::vector<double> fill_time;

  std::vector<double> rate;        // per movement/class
  std::vector<double> move_rate;   // per movement
  std::vector<double> inflow_rate; // per output
  bool rates_zero = true;

  explicit DenseRun(const NodeSpec& s)
      : spec(s), m(s.inputs), n(s.outputs), c(s.classes) {
    sd.assign(size_t(m) * n * c, 0.0);
    sd_tot.assign(size_t(m) * n, 0.0);
    s_in.assign(size_t(m), 0.0);
    pij.assign(size_t(m) * n, 0.0);
    t_limit.assign(size_t(m), 0.0);
    for (int i = 0; i < m; ++i) {
      for (int k = 0; k < c; ++k) s_in[i] += s.demand_at(i, k);
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < c; ++k) {
          const double v = s.demand_at(i, k) * s.split_at(i, j, k);
          sd[idx(i, j, k)] = v;
          sd_tot[size_t(i) * n + j] += v;
        }
        pij[size_t(i) * n + j] =
            s_in[i] > 0.0 ? sd_tot[size_t(i) * n + j] / s_in[i] * s.priority[i] : 0.0;
      }
      t_limit[i] = s_in[i] / s.priority[i];
    }
    x.assign(size_t(m) * n * c, 0.0);
    filled.assign(size_t(n), 0);
    fill_time.assign(size_t(n), -1.0);
    for (int j = 0; j < n; ++j) {
      if (s.supply[j] <= kEps) {
        filled[j] = 1;
        fill_time[j] = 0.0;
      }
    }
    rate.assign(size_t(m) * n * c, 0.0);
    move_rate.assign(size_t(m) * n, 0.0);
    inflow_rate.assign(size_t(n), 0.0);
  }

  size_t idx(int i, int j, int k) const { return (size_t(i) * n + j) * c + k; }

  double move_x(int i, int j) const {
    double tot = 0.0;
    for (int k = 0; k < c; ++k) tot += x[idx(i, j, k)];
    return tot;
  }

  double inflow(int j) const {
    double tot = 0.0;
    for (int i = 0; i < m; ++i) tot += move_x(i, j);
    return tot;
  }

  void recompute_rates() {
    std::fill(rate.begin(), rate.end(), 0.0);
    std::fill(move_rate.begin(), move_rate.end(), 0.0);
    std::fill(inflow_rate.begin(), inflow_rate.end(), 0.0);
    rates_zero = true;
#ifdef NODEFLOW_ORACLE_SHARED_FIELD
    HybridState state;
    state.inputs = m;
    state.outputs = n;
    state.classes = c;
    state.t = t;
    state.mode = ModeSet(n);
    for (int j = 0; j < n; ++j)
      if (filled[j]) state.mode.add(j);
    state.x = x;
    const OrientedDemand od = oriented_demand(spec);
    const RateMatrix shared = general_field(spec, od, state);
    rate = shared.rate;
#else
    for (int i = 0; i < m; ++i) {
      if (s_in[i] <= 0.0 || t >= t_limit[i] - kEps) continue;
      for (int j = 0; j < n; ++j) {
        const double tot = sd_tot[size_t(i) * n + j];
        if (tot <= 0.0) continue;
        std::vector<std::pair<double, double>> spans;
        for (int jp = 0; jp < n; ++jp) {
          if (!filled[jp]) continue;
          if (move_x(i, jp) < sd_tot[size_t(i) * n + jp] - kEps) {
            const Interval& eta = spec.restriction_at(i, jp, j);
            spans.emplace_back(eta.lo, eta.hi);
          }
        }
        const double factor = 1.0 - std::min(1.0, union_length(std::move(spans)));
        if (factor <= 0.0) continue;
        for (int k = 0; k < c; ++k) {
          const double cap = sd[idx(i, j, k)];
          if (x[idx(i, j, k)] < cap - kEps) {
            rate[idx(i, j, k)] = pij[size_t(i) * n + j] * (cap / tot) * factor;
          }
        }
      }
    }
#endif
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) {
        double mr = 0.0;
        for (int k = 0; k < c; ++k) mr += rate[idx(i, j, k)];
        move_rate[size_t(i) * n + j] = mr;
        inflow_rate[j] += mr;
        if (mr > 0.0) rates_zero = false;
      }
    }
  }
};

}  // namespace

OracleResult integrate(const NodeSpec& spec, const OracleConfig& config) {
  require_valid(spec);
  if (!(config.dt > 0.0)) throw std::invalid_argument("oracle dt must be positive");

  DenseRun run(spec);
  double max_limit = 0.0;
  for (int i = 0; i < run.m; ++i)
    if (run.s_in[i] > 0.0) max_limit = std::max(max_limit, run.t_limit[i]);
  const double horizon =
      config.max_time > 0.0 ? config.max_time : std::max(2.0 * max_limit, config.dt);
  if (horizon < max_limit)
    throw std::invalid_argument("oracle horizon is shorter than the longest time limit");

  std::vector<char> active(size_t(run.m), 0);
  for (int i = 0; i < run.m; ++i) active[i] = run.s_in[i] > 0.0;

  bool dirty = true;
  while (true) {
    if (dirty) {
      run.recompute_rates();
      dirty = false;
    }
    if (run.rates_zero) break;
    if (run.t >= horizon)
      throw std::runtime_error("dense integration did not settle before its horizon");

    // Align the step to the next input time limit so the time guard never
    // gets crossed mid-step.
    double h = std::min(config.dt, horizon - run.t);
    for (int i = 0; i < run.m; ++i) {
      if (run.s_in[i] > 0.0 && run.t < run.t_limit[i] - kEps) {
        h = std::min(h, run.t_limit[i] - run.t);
      }
    }

    // Localize the earliest cap crossing inside the step.
    double theta = 1.0;
    for (int i = 0; i < run.m; ++i) {
      for (int j = 0; j < run.n; ++j) {
        const double mr = run.move_rate[size_t(i) * run.n + j];
        if (mr <= 0.0) continue;
        const double room = run.sd_tot[size_t(i) * run.n + j] - run.move_x(i, j);
        theta = std::min(theta, std::max(0.0, room / (mr * h)));
      }
    }
    for (int j = 0; j < run.n; ++j) {
      if (run.filled[j] || run.inflow_rate[j] <= 0.0) continue;
      const double room = spec.supply[j] - run.inflow(j);
      theta = std::min(theta, std::max(0.0, room / (run.inflow_rate[j] * h)));
    }

    const double dt_eff = theta * h;
    for (size_t k = 0; k < run.x.size(); ++k) run.x[k] += run.rate[k] * dt_eff;
    run.t += dt_eff;

    // Settle any cap that is now binding.
    for (int i = 0; i < run.m; ++i) {
      for (int j = 0; j < run.n; ++j) {
        const double tot = run.sd_tot[size_t(i) * run.n + j];
        if (tot <= 0.0 || run.move_rate[size_t(i) * run.n + j] <= 0.0) continue;
        if (run.move_x(i, j) >= tot - kEps * std::max(1.0, tot)) {
          for (int k = 0; k < run.c; ++k) run.x[run.idx(i, j, k)] = run.sd[run.idx(i, j, k)];
          dirty = true;
        }
      }
    }
    for (int j = 0; j < run.n; ++j) {
      if (run.filled[j]) continue;
      const double r = spec.supply[j];
      if (run.inflow(j) >= r - kEps * std::max(1.0, r)) {
        run.filled[j] = 1;
        run.fill_time[j] = run.t;
        dirty = true;
      }
    }
    for (int i = 0; i < run.m; ++i) {
      if (active[i] && run.t >= run.t_limit[i] - kEps) {
        active[i] = 0;
        dirty = true;
      }
    }
    if (theta < 1.0) dirty = true;
  }

  OracleResult result;
  result.flows.inputs = run.m;
  result.flows.outputs = run.n;
  result.flows.classes = run.c;
  result.flows.flow = run.x;
  result.fill_time = run.fill_time;
  return result;
}

double flow_distance(const FlowMatrix& a, const FlowMatrix& b) {
  if (a.inputs != b.inputs || a.outputs != b.outputs || a.classes != b.classes)
    throw std::invalid_argument("flow matrix dimensions do not match");
  double dist = 0.0;
  for (size_t k = 0; k < a.flow.size(); ++k)
    dist = std::max(dist, std::abs(a.flow[k] - b.flow[k]));
  return dist;
}

}  // namespace nodeflow
