#include "nodeflow/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace nodeflow {

using nlohmann::json;

namespace {

[[noreturn]] void parse_fail(const std::string& msg) { throw ParseError("scenario: " + msg); }

int require_dim(const json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_number_integer())
    parse_fail(std::string("missing integer field '") + key + "'");
  const int v = doc[key].get<int>();
  if (v < 1) parse_fail(std::string("field '") + key + "' must be >= 1");
  return v;
}

double require_number(const json& v, const std::string& where) {
  if (!v.is_number()) parse_fail(where + " must be a number");
  return v.get<double>();
}

const json& require_array(const json& v, size_t size, const std::string& where) {
  if (!v.is_array() || v.size() != size) {
    std::ostringstream os;
    os << where << " must be an array of length " << size;
    parse_fail(os.str());
  }
  return v;
}

}  // namespace

NodeSpec parse_scenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("scenario: ") + e.what());
  }
  if (!doc.is_object()) parse_fail("document root must be an object");
  if (doc.contains("version") && doc["version"] != 1) parse_fail("unsupported schema version");

  const int m = require_dim(doc, "inputs");
  const int n = require_dim(doc, "outputs");
  const int c = require_dim(doc, "classes");
  NodeSpec spec = NodeSpec::with_dims(m, n, c);
  if (doc.contains("label")) {
    if (!doc["label"].is_string()) parse_fail("'label' must be a string");
    spec.label = doc["label"].get<std::string>();
  }

  if (!doc.contains("priority")) parse_fail("missing field 'priority'");
  const json& pr = require_array(doc["priority"], size_t(m), "'priority'");
  for (int i = 0; i < m; ++i) spec.priority[i] = require_number(pr[i], "'priority' entry");

  if (!doc.contains("demand")) parse_fail("missing field 'demand'");
  const json& dm = require_array(doc["demand"], size_t(m), "'demand'");
  for (int i = 0; i < m; ++i) {
    const json& row = require_array(dm[i], size_t(c), "'demand' row");
    for (int k = 0; k < c; ++k)
      spec.demand[size_t(i) * c + k] = require_number(row[k], "'demand' entry");
  }

  if (!doc.contains("split")) parse_fail("missing field 'split'");
  const json& sp = require_array(doc["split"], size_t(m), "'split'");
  for (int i = 0; i < m; ++i) {
    const json& row = require_array(sp[i], size_t(n), "'split' row");
    for (int j = 0; j < n; ++j) {
      const json& cell = require_array(row[j], size_t(c), "'split' cell");
      for (int k = 0; k < c; ++k)
        spec.split[(size_t(i) * n + j) * c + k] = require_number(cell[k], "'split' entry");
    }
  }

  if (!doc.contains("supply")) parse_fail("missing field 'supply'");
  const json& su = require_array(doc["supply"], size_t(n), "'supply'");
  for (int j = 0; j < n; ++j) spec.supply[j] = require_number(su[j], "'supply' entry");

  if (doc.contains("restriction")) {
    const json& re = require_array(doc["restriction"], size_t(m), "'restriction'");
    for (int i = 0; i < m; ++i) {
      const json& blockers = require_array(re[i], size_t(n), "'restriction' row");
      for (int jp = 0; jp < n; ++jp) {
        const json& targets = require_array(blockers[jp], size_t(n), "'restriction' blocker row");
        for (int j = 0; j < n; ++j) {
          const json& iv = require_array(targets[j], 2, "'restriction' interval");
          spec.restriction_at(i, jp, j) = Interval{require_number(iv[0], "interval bound"),
                                                   require_number(iv[1], "interval bound")};
        }
      }
    }
  }
  // The diagonal is total by construction regardless of what the file says.
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) spec.restriction_at(i, j, j) = Interval{0.0, 1.0};

  require_valid(spec);
  return spec;
}

std::string write_scenario(const NodeSpec& spec) {
  json doc;
  doc["version"] = 1;
  if (!spec.label.empty()) doc["label"] = spec.label;
  doc["inputs"] = spec.inputs;
  doc["outputs"] = spec.outputs;
  doc["classes"] = spec.classes;
  doc["priority"] = spec.priority;

  json demand = json::array();
  for (int i = 0; i < spec.inputs; ++i) {
    json row = json::array();
    for (int k = 0; k < spec.classes; ++k) row.push_back(spec.demand_at(i, k));
    demand.push_back(std::move(row));
  }
  doc["demand"] = std::move(demand);

  json split = json::array();
  for (int i = 0; i < spec.inputs; ++i) {
    json row = json::array();
    for (int j = 0; j < spec.outputs; ++j) {
      json cell = json::array();
      for (int k = 0; k < spec.classes; ++k) cell.push_back(spec.split_at(i, j, k));
      row.push_back(std::move(cell));
    }
    split.push_back(std::move(row));
  }
  doc["split"] = std::move(split);

  doc["supply"] = spec.supply;

  json restriction = json::array();
  for (int i = 0; i < spec.inputs; ++i) {
    json blockers = json::array();
    for (int jp = 0; jp < spec.outputs; ++jp) {
      json targets = json::array();
      for (int j = 0; j < spec.outputs; ++j) {
        const Interval& iv = spec.restriction_at(i, jp, j);
        targets.push_back(json::array({iv.lo, iv.hi}));
      }
      blockers.push_back(std::move(targets));
    }
    restriction.push_back(std::move(blockers));
  }
  doc["restriction"] = std::move(restriction);

  return doc.dump(2);
}

namespace {

std::string event_text(const Event& ev) {
  std::ostringstream os;
  switch (ev.kind) {
    case EventKind::Init:
      os << "init";
      break;
    case EventKind::OutputFill:
      os << "output " << ev.index + 1 << " filled";
      break;
    case EventKind::InputTimeLimit:
      os << "input " << ev.index + 1 << " time limit";
      break;
    case EventKind::Terminate:
      os << "terminate";
      break;
  }
  return os.str();
}

json breakpoint_json(const Breakpoint& bp) {
  json entry;
  entry["t"] = bp.t;
  json filled = json::array();
  for (int j = 0; j < bp.mode.size(); ++j)
    if (bp.mode.contains(j)) filled.push_back(j + 1);
  entry["filled"] = std::move(filled);
  json events = json::array();
  for (const Event& ev : bp.events) events.push_back(event_text(ev));
  entry["events"] = std::move(events);
  return entry;
}

}  // namespace

std::string write_flows(const NodeSpec& spec, const FlowMatrix& flows,
                        const Trajectory* trajectory, bool pretty) {
  json doc;
  doc["version"] = 1;
  if (!spec.label.empty()) doc["label"] = spec.label;
  doc["inputs"] = spec.inputs;
  doc["outputs"] = spec.outputs;
  doc["classes"] = spec.classes;

  json entries = json::array();
  for (int i = 0; i < spec.inputs; ++i)
    for (int j = 0; j < spec.outputs; ++j)
      for (int k = 0; k < spec.classes; ++k) {
        json e;
        e["input"] = i + 1;
        e["output"] = j + 1;
        e["class"] = k + 1;
        e["flow"] = flows.at(i, j, k);
        entries.push_back(std::move(e));
      }
  doc["flows"] = std::move(entries);

  json movement_totals = json::array();
  for (int i = 0; i < spec.inputs; ++i) {
    json row = json::array();
    for (int j = 0; j < spec.outputs; ++j) row.push_back(flows.movement_total(i, j));
    movement_totals.push_back(std::move(row));
  }
  doc["movement_totals"] = std::move(movement_totals);

  json input_totals = json::array();
  for (int i = 0; i < spec.inputs; ++i) input_totals.push_back(flows.input_total(i));
  doc["input_totals"] = std::move(input_totals);
  json output_totals = json::array();
  for (int j = 0; j < spec.outputs; ++j) output_totals.push_back(flows.output_total(j));
  doc["output_totals"] = std::move(output_totals);
  doc["total"] = flows.total();

  if (trajectory != nullptr) {
    json bps = json::array();
    for (const Breakpoint& bp : trajectory->breakpoints) bps.push_back(breakpoint_json(bp));
    doc["breakpoints"] = std::move(bps);
  }

  return pretty ? doc.dump(2) : doc.dump();
}

std::string trajectory_csv(const Trajectory& trajectory) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "t,mode";
  // The state is flattened input-major, then output, then class.
  for (size_t k = 0; !trajectory.breakpoints.empty() && k < trajectory.breakpoints.front().x.size();
       ++k) {
    os << ",x" << k + 1;
  }
  os << "\n";
  for (const Breakpoint& bp : trajectory.breakpoints) {
    unsigned long mask = 0;
    for (int j = 0; j < bp.mode.size(); ++j)
      if (bp.mode.contains(j)) mask |= 1ul << j;
    os << bp.t << "," << mask;
    for (double v : bp.x) os << "," << v;
    os << "\n";
  }
  return os.str();
}

FlowMatrix parse_flows(const NodeSpec& spec, const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("flows: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("flows") || !doc["flows"].is_array())
    throw ParseError("flows: document must contain a 'flows' array");
  FlowMatrix f = FlowMatrix::zeros(spec.inputs, spec.outputs, spec.classes);
  for (const json& e : doc["flows"]) {
    if (!e.is_object() || !e.contains("input") || !e.contains("output") ||
        !e.contains("class") || !e.contains("flow"))
      throw ParseError("flows: entries need input, output, class, and flow fields");
    const int i = e["input"].get<int>() - 1;
    const int j = e["output"].get<int>() - 1;
    const int k = e["class"].get<int>() - 1;
    if (i < 0 || i >= spec.inputs || j < 0 || j >= spec.outputs || k < 0 || k >= spec.classes)
      throw ParseError("flows: entry indices out of range");
    f.at(i, j, k) = e["flow"].get<double>();
  }
  return f;
}

namespace {

// splitmix64; fixed here so generated scenarios are reproducible across
// standard libraries.
struct Rng {
  std::uint64_t state;
  std::uint64_t next() {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  double uniform() { return double(next() >> 11) * 0x1.0p-53; }
  int range(int lo, int hi) {  // inclusive
    return lo + int(next() % std::uint64_t(hi - lo + 1));
  }
};

}  // namespace

NodeSpec generate_random(const FuzzConfig& config, std::uint64_t index) {
  Rng rng{config.seed ^ (0x9E3779B97F4A7C15ull * (index + 1))};
  for (int k = 0; k < 4; ++k) rng.next();

  const int m = rng.range(1, std::max(1, config.max_inputs));
  const int n = rng.range(1, std::max(1, config.max_outputs));
  const int c = rng.range(1, std::max(1, config.max_classes));
  NodeSpec spec = NodeSpec::with_dims(m, n, c);
  {
    std::ostringstream os;
    os << "fuzz-" << config.seed << "-" << index;
    spec.label = os.str();
  }

  for (int i = 0; i < m; ++i) {
    spec.priority[i] =
        config.priority_min + rng.uniform() * (config.priority_max - config.priority_min);
    for (int k = 0; k < c; ++k) {
      const double u = rng.uniform();
      spec.demand[size_t(i) * c + k] = u < 0.15 ? 0.0 : rng.uniform() * config.demand_max;
    }
    for (int k = 0; k < c; ++k) {
      double row = 0.0;
      std::vector<double> draws(size_t(n), 0.0);
      for (int j = 0; j < n; ++j) {
        const double u = rng.uniform();
        draws[j] = u < 0.25 ? 0.0 : u;  // leave some movements empty
        row += draws[j];
      }
      if (row <= 0.0) {
        draws[rng.range(0, n - 1)] = 1.0;
        row = 1.0;
      }
      for (int j = 0; j < n; ++j) spec.split[(size_t(i) * n + j) * c + k] = draws[j] / row;
    }
  }

  for (int j = 0; j < n; ++j) {
    double directed = 0.0;
    for (int i = 0; i < m; ++i)
      for (int k = 0; k < c; ++k)
        directed += spec.demand_at(i, k) * spec.split_at(i, j, k);
    spec.supply[j] = directed > 0.0 ? rng.uniform() * config.supply_factor * directed
                                    : rng.uniform();
  }

  for (int i = 0; i < m; ++i) {
    const bool relaxed = rng.uniform() < config.relax_probability;
    for (int jp = 0; jp < n; ++jp) {
      for (int j = 0; j < n; ++j) {
        if (jp == j) continue;
        Interval iv{0.0, 1.0};
        if (relaxed) {
          const double u = rng.uniform();
          if (u < 0.3) {
            iv = Interval{0.0, 0.0};
          } else if (u < 0.5) {
            iv = Interval{0.0, 1.0};
          } else {
            double a = rng.uniform(), b = rng.uniform();
            if (a > b) std::swap(a, b);
            iv = Interval{a, b};
          }
        }
        spec.restriction_at(i, jp, j) = iv;
      }
    }
  }

  require_valid(spec);
  return spec;
}

namespace {

const char* const kMergeA = R"({
  "version": 1,
  "label": "merge-a",
  "inputs": 2, "outputs": 1, "classes": 1,
  "priority": [1, 1],
  "demand": [[10], [20]],
  "split": [[[1.0]], [[1.0]]],
  "supply": [15]
})";

const char* const kMergeB = R"({
  "version": 1,
  "label": "merge-b",
  "inputs": 2, "outputs": 1, "classes": 1,
  "priority": [1, 1],
  "demand": [[2], [20]],
  "split": [[[1.0]], [[1.0]]],
  "supply": [12]
})";

const char* const kDivergeFifo = R"({
  "version": 1,
  "label": "diverge-fifo",
  "inputs": 1, "outputs": 2, "classes": 1,
  "priority": [10],
  "demand": [[10]],
  "split": [[[0.6], [0.4]]],
  "supply": [3, 100]
})";

const char* const kDivergeRelaxed = R"({
  "version": 1,
  "label": "diverge-relaxed",
  "inputs": 1, "outputs": 2, "classes": 1,
  "priority": [10],
  "demand": [[10]],
  "split": [[[0.6], [0.4]]],
  "supply": [3, 100],
  "restriction": [
    [
      [[0, 1], [0, 0.2]],
      [[0, 1], [0, 1]]
    ]
  ]
})";

const char* const kFig1 = R"({
  "version": 1,
  "label": "fig1",
  "inputs": 1, "outputs": 3, "classes": 1,
  "priority": [10],
  "demand": [[10]],
  "split": [[[0.2], [0.5], [0.3]]],
  "supply": [1, 100, 1.8],
  "restriction": [
    [
      [[0, 1], [0, 0.2], [0, 0]],
      [[0, 1], [0, 1], [0, 1]],
      [[0, 0], [0.6, 1], [0, 1]]
    ]
  ]
})";

}  // namespace

const char* builtin_scenario(const std::string& name) {
  if (name == "merge-a") return kMergeA;
  if (name == "merge-b") return kMergeB;
  if (name == "diverge-fifo") return kDivergeFifo;
  if (name == "diverge-relaxed") return kDivergeRelaxed;
  if (name == "fig1") return kFig1;
  return nullptr;
}

std::vector<std::string> builtin_names() {
  return {"merge-a", "merge-b", "diverge-fifo", "diverge-relaxed", "fig1"};
}

}  // namespace nodeflow
