// Command-line front end for the node flow shared library. Talks to the
// solver exclusively through the C API in nodeflow.h.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nodeflow.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;    // verification or comparison failure
constexpr int kExitBadInput = 2;  // unreadable or invalid input

struct SpecDeleter {
  void operator()(nf_spec* s) const { nf_spec_free(s); }
};
struct ResultDeleter {
  void operator()(nf_result* r) const { nf_result_free(r); }
};
struct ReportDeleter {
  void operator()(nf_report* r) const { nf_report_free(r); }
};
using SpecPtr = std::unique_ptr<nf_spec, SpecDeleter>;
using ResultPtr = std::unique_ptr<nf_result, ResultDeleter>;
using ReportPtr = std::unique_ptr<nf_report, ReportDeleter>;

std::string owned_string(char* s) {
  std::string out = s != nullptr ? s : "";
  nf_string_free(s);
  return out;
}

bool read_text(const std::string& source, std::string& out) {
  constexpr const char* kBuiltinPrefix = "builtin:";
  if (source.rfind(kBuiltinPrefix, 0) == 0) {
    const char* text = nf_builtin_scenario(source.c_str() + std::strlen(kBuiltinPrefix));
    if (text == nullptr) {
      std::fprintf(stderr, "unknown built-in scenario '%s'\n", source.c_str());
      return false;
    }
    out = text;
    return true;
  }
  std::ifstream in(source);
  if (!in) {
    std::fprintf(stderr, "cannot open '%s'\n", source.c_str());
    return false;
  }
  std::ostringstream os;
  os << in.rdbuf();
  out = os.str();
  return true;
}

SpecPtr load_spec(const std::string& source) {
  std::string text;
  if (!read_text(source, text)) return nullptr;
  nf_spec* spec = nullptr;
  if (nf_spec_parse(text.c_str(), &spec) != NF_OK) {
    std::fprintf(stderr, "%s\n", nf_last_error());
    return nullptr;
  }
  return SpecPtr(spec);
}

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) {
    std::fprintf(stderr, "cannot write '%s'\n", path.c_str());
    return false;
  }
  out << text;
  return bool(out);
}

int run_solve(const std::string& file, const std::string& trajectory_out,
              const std::string& format, const std::string& automaton) {
  SpecPtr spec = load_spec(file);
  if (!spec) return kExitBadInput;

  nf_automaton kind = NF_AUTOMATON_AUTO;
  if (automaton == "general") kind = NF_AUTOMATON_GENERAL;
  else if (automaton == "merge") kind = NF_AUTOMATON_MERGE;
  else if (automaton == "diverge") kind = NF_AUTOMATON_DIVERGE;

  nf_result* raw = nullptr;
  if (nf_solve_automaton(spec.get(), kind, &raw) != NF_OK) {
    std::fprintf(stderr, "%s\n", nf_last_error());
    return kExitBadInput;
  }
  ResultPtr result(raw);

  std::printf("%s\n",
              owned_string(nf_result_flows_text(spec.get(), result.get(), format != "compact"))
                  .c_str());
  if (!trajectory_out.empty()) {
    if (!write_file(trajectory_out, owned_string(nf_result_trajectory_csv(result.get()))))
      return kExitBadInput;
  }
  return kExitOk;
}

int run_oracle(const std::string& file, double dt, double max_time, const std::string& format) {
  SpecPtr spec = load_spec(file);
  if (!spec) return kExitBadInput;
  nf_result* raw = nullptr;
  if (nf_oracle(spec.get(), dt, max_time, &raw) != NF_OK) {
    std::fprintf(stderr, "%s\n", nf_last_error());
    return kExitBadInput;
  }
  ResultPtr result(raw);
  std::printf("%s\n",
              owned_string(nf_result_flows_text(spec.get(), result.get(), format != "compact"))
                  .c_str());
  return kExitOk;
}

int run_verify(const std::string& file, const std::string& flows_file) {
  SpecPtr spec = load_spec(file);
  if (!spec) return kExitBadInput;
  std::string flows_text;
  if (!read_text(flows_file, flows_text)) return kExitBadInput;

  const size_t len = size_t(nf_spec_inputs(spec.get())) * nf_spec_outputs(spec.get()) *
                     nf_spec_classes(spec.get());
  std::vector<double> flows(len, 0.0);
  if (nf_flows_parse(spec.get(), flows_text.c_str(), flows.data(), len) != NF_OK) {
    std::fprintf(stderr, "%s\n", nf_last_error());
    return kExitBadInput;
  }
  nf_report* raw = nullptr;
  if (nf_certify(spec.get(), flows.data(), len, &raw) != NF_OK) {
    std::fprintf(stderr, "%s\n", nf_last_error());
    return kExitBadInput;
  }
  ReportPtr report(raw);
  std::printf("%s\n", owned_string(nf_report_text(report.get())).c_str());
  return nf_report_passed(report.get()) ? kExitOk : kExitFailed;
}

int run_fuzz(uint64_t seed, int count, double dt, double tol, int max_inputs, int max_outputs,
             int max_classes, double relax_probability) {
  nf_fuzz_config config;
  nf_fuzz_config_default(&config);
  config.seed = seed;
  config.max_inputs = max_inputs;
  config.max_outputs = max_outputs;
  config.max_classes = max_classes;
  config.relax_probability = relax_probability;

  int failures = 0;
  double worst_distance = 0.0;
  for (int index = 0; index < count; ++index) {
    nf_spec* raw_spec = nullptr;
    if (nf_spec_random(&config, uint64_t(index), &raw_spec) != NF_OK) {
      std::fprintf(stderr, "scenario %d: %s\n", index, nf_last_error());
      return kExitBadInput;
    }
    SpecPtr spec(raw_spec);

    nf_result* raw_solved = nullptr;
    nf_result* raw_dense = nullptr;
    if (nf_solve(spec.get(), &raw_solved) != NF_OK) {
      std::fprintf(stderr, "scenario %d: %s\n", index, nf_last_error());
      return kExitBadInput;
    }
    ResultPtr solved(raw_solved);
    if (nf_oracle(spec.get(), dt, 0.0, &raw_dense) != NF_OK) {
      std::fprintf(stderr, "scenario %d: %s\n", index, nf_last_error());
      return kExitBadInput;
    }
    ResultPtr dense(raw_dense);

    double supply_max = 0.0;
    for (int j = 0; j < nf_spec_outputs(spec.get()); ++j)
      supply_max = std::max(supply_max, nf_spec_supply(spec.get(), j));
    const double scenario_tol = tol * std::max(1.0, supply_max);

    const double distance = nf_flow_distance(solved.get(), dense.get());
    worst_distance = std::max(worst_distance, distance);
    bool scenario_ok = distance >= 0.0 && distance <= scenario_tol;

    const size_t len = size_t(nf_spec_inputs(spec.get())) * nf_spec_outputs(spec.get()) *
                       nf_spec_classes(spec.get());
    std::vector<double> flows(len, 0.0);
    nf_report* raw_report = nullptr;
    if (nf_result_flows(solved.get(), flows.data(), len) != NF_OK ||
        nf_certify(spec.get(), flows.data(), len, &raw_report) != NF_OK) {
      std::fprintf(stderr, "scenario %d: %s\n", index, nf_last_error());
      return kExitBadInput;
    }
    ReportPtr report(raw_report);
    if (nf_report_passed(report.get()) == 0) {
      scenario_ok = false;
      std::printf("scenario %d: certification failed\n%s\n", index,
                  owned_string(nf_report_text(report.get())).c_str());
    }
    if (distance < 0.0 || distance > scenario_tol) {
      std::printf("scenario %d: solver/oracle distance %.3e exceeds %.3e\n", index, distance,
                  scenario_tol);
    }
    if (!scenario_ok) ++failures;
  }

  std::printf("fuzz: %d scenario(s), %d failure(s), max solver/oracle distance %.3e\n", count,
              failures, worst_distance);
  return failures == 0 ? kExitOk : kExitFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Macroscopic road-junction flow solver"};
  app.require_subcommand(1);

  std::string file, trajectory_out, flows_file;
  std::string format = "pretty";
  std::string automaton = "auto";
  double dt = 1e-4, max_time = 0.0, tol = 1e-3, relax_probability = 0.3;
  uint64_t seed = 1;
  int count = 500, max_inputs = 4, max_outputs = 4, max_classes = 3;

  auto* solve = app.add_subcommand("solve", "Solve a scenario file");
  solve->add_option("file", file, "scenario file or builtin:NAME")->required();
  solve->add_option("--trajectory", trajectory_out, "write trajectory CSV to this path");
  solve->add_option("--format", format, "pretty or compact")
      ->check(CLI::IsMember({"pretty", "compact"}));
  solve->add_option("--automaton", automaton, "auto, general, merge, or diverge")
      ->check(CLI::IsMember({"auto", "general", "merge", "diverge"}));

  auto* oracle = app.add_subcommand("oracle", "Densely integrate a scenario file");
  oracle->add_option("file", file, "scenario file or builtin:NAME")->required();
  oracle->add_option("--dt", dt, "integration step");
  oracle->add_option("--max-time", max_time, "integration horizon (0 = automatic)");
  oracle->add_option("--format", format, "pretty or compact")
      ->check(CLI::IsMember({"pretty", "compact"}));

  auto* verify = app.add_subcommand("verify", "Certify a flow matrix against a scenario");
  verify->add_option("file", file, "scenario file or builtin:NAME")->required();
  verify->add_option("--flows", flows_file, "flow document to certify")->required();

  auto* fuzz = app.add_subcommand("fuzz", "Compare solver and oracle on random scenarios");
  fuzz->add_option("--seed", seed, "generator seed");
  fuzz->add_option("--count", count, "number of scenarios");
  fuzz->add_option("--dt", dt, "oracle integration step");
  fuzz->add_option("--tol", tol, "distance tolerance, scaled by max(1, max supply)");
  fuzz->add_option("--max-inputs", max_inputs, "dimension bound");
  fuzz->add_option("--max-outputs", max_outputs, "dimension bound");
  fuzz->add_option("--max-classes", max_classes, "dimension bound");
  fuzz->add_option("--relax-prob", relax_probability, "probability of relaxed restrictions");

  auto* builtins = app.add_subcommand("builtins", "List built-in scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitBadInput;
  }

  if (solve->parsed()) return run_solve(file, trajectory_out, format, automaton);
  if (oracle->parsed()) return run_oracle(file, dt, max_time, format);
  if (verify->parsed()) return run_verify(file, flows_file);
  if (fuzz->parsed())
    return run_fuzz(seed, count, dt, tol, max_inputs, max_outputs, max_classes,
                    relax_probability);
  if (builtins->parsed()) {
    for (const char* name : {"merge-a", "merge-b", "diverge-fifo", "diverge-relaxed", "fig1"})
      std::printf("%s\n", name);
    return kExitOk;
  }
  return kExitBadInput;
}
