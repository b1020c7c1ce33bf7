#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "vdclab/error.hpp"
#include "vdclab/experiments.hpp"

namespace vdclab {

/// Every schema violation found in a config document, not just the first.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

using ExperimentParams = std::variant<VdcSuiteParams, WeightedVdcParams, OrthogonalityParams, NfParams,
                                      RecurrenceParams, RkParams, CounterexampleParams, SingleTParams, T1T2Params>;

struct ConfigDocument {
  std::string experiment;
  /// Declared irrationals, plus those pulled in by zoo references.
  SymbolTable symbols;
  RunOptions options;
  ExperimentParams params;
};

/// vdc_suite, weighted_vdc, orthogonality, nf, recurrence, rk,
/// counterexample, single_T, T1T2.
const std::vector<std::string>& experiment_names();

/// Parses and validates; throws ConfigError listing all violations.
ConfigDocument parse_config(std::string_view text);

/// Canonical form: every definition inline, irrationals and arcs as hex
/// fixed point. parse_config(serialize(doc).dump()) reproduces doc.
nlohmann::json serialize(const ConfigDocument& doc);

/// Runs the configured driver; the report echoes serialize(doc).
ExperimentReport run_experiment(const ConfigDocument& doc);

}  // namespace vdclab
