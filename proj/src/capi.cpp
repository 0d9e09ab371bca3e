#include "nodeflow.h"

#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "nodeflow/oracle.hpp"
#include "nodeflow/scenario.hpp"
#include "nodeflow/solver.hpp"
#include "nodeflow/verify.hpp"

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

char* dup_string(const std::string& s) {
  char* out = new (std::nothrow) char[s.size() + 1];
  if (out != nullptr) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename Fn>
nf_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    return fn();
  } catch (const nodeflow::ParseError& e) {
    set_error(e.what());
    return NF_ERROR_PARSE;
  } catch (const nodeflow::ValidationError& e) {
    set_error(e.what());
    return NF_ERROR_VALIDATION;
  } catch (const std::invalid_argument& e) {
    set_error(e.what());
    return NF_ERROR_ARGUMENT;
  } catch (const std::exception& e) {
    set_error(e.what());
    return NF_ERROR_INTERNAL;
  }
}

}  // namespace

struct nf_spec {
  nodeflow::NodeSpec spec;
};

struct nf_result {
  nodeflow::SolveResult result;
};

struct nf_report {
  nodeflow::VerificationReport report;
};

extern "C" {

const char* nf_last_error(void) { return g_last_error.c_str(); }

void nf_string_free(char* s) { delete[] s; }

nf_status nf_spec_parse(const char* text, nf_spec** out) {
  if (text == nullptr || out == nullptr) {
    set_error("null argument");
    return NF_ERROR_ARGUMENT;
  }
  return guarded([&] {
    auto spec = std::make_unique<nf_spec>();
    spec->spec = nodeflow::parse_scenario(text);
    *out = spec.release();
    return NF_OK;
  });
}

void nf_spec_free(nf_spec* spec) { delete spec; }

int nf_spec_inputs(const nf_spec* spec) { return spec->spec.inputs; }
int nf_spec_outputs(const nf_spec* spec) { return spec->spec.outputs; }
int nf_spec_classes(const nf_spec* spec) { return spec->spec.classes; }
double nf_spec_supply(const nf_spec* spec, int output) { return spec->spec.supply[output]; }

char* nf_spec_write(const nf_spec* spec) {
  return dup_string(nodeflow::write_scenario(spec->spec));
}

const char* nf_builtin_scenario(const char* name) {
  if (name == nullptr) return nullptr;
  return nodeflow::builtin_scenario(name);
}

void nf_fuzz_config_default(nf_fuzz_config* config) {
  const nodeflow::FuzzConfig defaults;
  config->seed = defaults.seed;
  config->max_inputs = defaults.max_inputs;
  config->max_outputs = defaults.max_outputs;
  config->max_classes = defaults.max_classes;
  config->demand_max = defaults.demand_max;
  config->priority_min = defaults.priority_min;
  config->priority_max = defaults.priority_max;
  config->supply_factor = defaults.supply_factor;
  config->relax_probability = defaults.relax_probability;
}

nf_status nf_spec_random(const nf_fuzz_config* config, uint64_t index, nf_spec** out) {
  if (config == nullptr || out == nullptr) {
    set_error("null argument");
    return NF_ERROR_ARGUMENT;
  }
  return guarded([&] {
    nodeflow::FuzzConfig cfg;
    cfg.seed = config->seed;
    cfg.max_inputs = config->max_inputs;
    cfg.max_outputs = config->max_outputs;
    cfg.max_classes = config->max_classes;
    cfg.demand_max = config->demand_max;
    cfg.priority_min = config->priority_min;
    cfg.priority_max = config->priority_max;
    cfg.supply_factor = config->supply_factor;
    cfg.relax_probability = config->relax_probability;
    auto spec = std::make_unique<nf_spec>();
    spec->spec = nodeflow::generate_random(cfg, index);
    *out = spec.release();
    return NF_OK;
  });
}

nf_status nf_solve(const nf_spec* spec, nf_result** out) {
  return nf_solve_automaton(spec, NF_AUTOMATON_AUTO, out);
}

nf_status nf_solve_automaton(const nf_spec* spec, nf_automaton automaton, nf_result** out) {
  if (spec == nullptr || out == nullptr) {
    set_error("null argument");
    return NF_ERROR_ARGUMENT;
  }
  return guarded([&] {
    nodeflow::FieldKind kind = nodeflow::FieldKind::Auto;
    switch (automaton) {
      case NF_AUTOMATON_GENERAL:
        kind = nodeflow::FieldKind::General;
        break;
      case NF_AUTOMATON_MERGE:
        kind = nodeflow::FieldKind::Merge;
        break;
      case NF_AUTOMATON_DIVERGE:
        kind = nodeflow::FieldKind::Diverge;
        break;
      default:
        break;
    }
    auto result = std::make_unique<nf_result>();
    result->result = nodeflow::solve(spec->spec, kind);
    *out = result.release();
    return NF_OK;
  });
}

nf_status nf_oracle(const nf_spec* spec, double dt, double max_time, nf_result** out) {
  if (spec == nullptr || out == nullptr) {
    set_error("null argument");
    return NF_ERROR_ARGUMENT;
  }
  return guarded([&] {
    nodeflow::OracleConfig config;
    if (dt > 0.0) config.dt = dt;
    if (max_time > 0.0) config.max_time = max_time;
    nodeflow::OracleResult oracle = nodeflow::integrate(spec->spec, config);
    auto result = std::make_unique<nf_result>();
    result->result.flows = std::move(oracle.flows);
    *out = result.release();
    return NF_OK;
  });
}

void nf_result_free(nf_result* result) { delete result; }

double nf_result_flow(const nf_result* result, int input, int output, int cls) {
  return result->result.flows.at(input, output, cls);
}

nf_status nf_result_flows(const nf_result* result, double* out, size_t len) {
  if (result == nullptr || out == nullptr) {
    set_error("null argument");
    return NF_ERROR_ARGUMENT;
  }
  if (len != result->result.flows.flow.size()) {
    set_error("flow buffer length does not match dimensions");
    return NF_ERROR_DIMENSION;
  }
  std::memcpy(out, result->result.flows.flow.data(), len * sizeof(double));
  return NF_OK;
}

size_t nf_result_breakpoint_count(const nf_result* result) {
  return result->result.trajectory.breakpoints.size();
}

double nf_flow_distance(const nf_result* a, const nf_result* b) {
  try {
    return nodeflow::flow_distance(a->result.flows, b->result.flows);
  } catch (const std::exception& e) {
    set_error(e.what());
    return -1.0;
  }
}

char* nf_result_flows_text(const nf_spec* spec, const nf_result* result, int pretty) {
  const nodeflow::Trajectory* traj =
      result->result.trajectory.breakpoints.empty() ? nullptr : &result->result.trajectory;
  return dup_string(
      nodeflow::write_flows(spec->spec, result->result.flows, traj, pretty != 0));
}

char* nf_result_trajectory_csv(const nf_result* result) {
  return dup_string(nodeflow::trajectory_csv(result->result.trajectory));
}

nf_status nf_flows_parse(const nf_spec* spec, const char* text, double* out, size_t len) {
  if (spec == nullptr || text == nullptr || out == nullptr) {
    set_error("null argument");
    return NF_ERROR_ARGUMENT;
  }
  return guarded([&] {
    nodeflow::FlowMatrix f = nodeflow::parse_flows(spec->spec, text);
    if (len != f.flow.size()) {
      set_error("flow buffer length does not match dimensions");
      return NF_ERROR_DIMENSION;
    }
    std::memcpy(out, f.flow.data(), len * sizeof(double));
    return NF_OK;
  });
}

nf_status nf_certify(const nf_spec* spec, const double* flows, size_t len, nf_report** out) {
  if (spec == nullptr || flows == nullptr || out == nullptr) {
    set_error("null argument");
    return NF_ERROR_ARGUMENT;
  }
  return guarded([&] {
    nodeflow::FlowMatrix f = nodeflow::FlowMatrix::zeros(
        spec->spec.inputs, spec->spec.outputs, spec->spec.classes);
    if (len != f.flow.size()) {
      set_error("flow buffer length does not match dimensions");
      return NF_ERROR_DIMENSION;
    }
    std::memcpy(f.flow.data(), flows, len * sizeof(double));
    auto report = std::make_unique<nf_report>();
    report->report = nodeflow::certify(spec->spec, f);
    *out = report.release();
    return NF_OK;
  });
}

int nf_report_passed(const nf_report* report) { return report->report.passed ? 1 : 0; }

char* nf_report_text(const nf_report* report) {
  return dup_string(report->report.summary());
}

void nf_report_free(nf_report* report) { delete report; }

}  // extern "C"
