#pragma once

#include <string_view>

#include "cli.hpp"
#include "json.hpp"

namespace bianchi::cli::detail {

using Json = nlohmann::ordered_json;

struct SuiteResult {
  Json report;
  bool passed = true;
};

/// Appends {"name", "pass", "value", "bound"} to report["properties"] and
/// folds the outcome into result.passed.
void add_property(SuiteResult& result, const std::string& name, bool pass, double value, double bound);

SuiteResult verify_mellin(const RunConfig& config);
SuiteResult verify_watson(const RunConfig& config);
SuiteResult verify_automorphy(const RunConfig& config);
SuiteResult verify_supnorm(const RunConfig& config);
SuiteResult verify_q1(const RunConfig& config);
SuiteResult verify_scattering(const RunConfig& config);

/// Throws ErrorCode::usage for an unknown suite name.
SuiteResult run_suite(std::string_view name, const RunConfig& config);

}  // namespace bianchi::cli::detail
