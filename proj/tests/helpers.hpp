#pragma once

#include <string>
#include <vector>

#include <doctest.h>

#include "nodeflow/scenario.hpp"

namespace testutil {

inline nodeflow::NodeSpec builtin(const std::string& name) {
  const char* text = nodeflow::builtin_scenario(name);
  REQUIRE(text != nullptr);
  return nodeflow::parse_scenario(text);
}

inline std::vector<nodeflow::NodeSpec> all_builtins() {
  std::vector<nodeflow::NodeSpec> specs;
  for (const auto& name : nodeflow::builtin_names()) specs.push_back(builtin(name));
  return specs;
}

}  // namespace testutil
