#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace vdclab {

enum class Verdict { pass, fail, abstain };
std::string to_string(Verdict v);

/// One measured value. aux is the lag h, the iterate n, or 0 when unused.
struct MetricRow {
  std::int64_t N = 0;
  std::int64_t aux = 0;
  std::string metric;
  double value = 0.0;
  double error_bound = 0.0;

  friend bool operator==(const MetricRow&, const MetricRow&) = default;
};

enum class Cmp { lt, le, gt, ge, eq };
std::string to_string(Cmp c);

/// "metric(N, aux) <cmp> bound". The checked value is looked up in the rows,
/// never stored separately, so an assertion can be re-derived from the report.
struct Assertion {
  std::string description;
  std::string metric;
  std::int64_t N = 0;
  std::int64_t aux = 0;
  Cmp cmp = Cmp::lt;
  double bound = 0.0;
  bool holds = false;
};

struct ExperimentReport {
  std::string name;
  nlohmann::json config = nlohmann::json::object();
  std::vector<MetricRow> rows;
  std::vector<Assertion> assertions;
  Verdict verdict = Verdict::abstain;
  std::string verdict_reason;
  std::map<std::string, double> tolerances;
  std::vector<std::string> notes;
  /// Metric plotted against N in decay.csv.
  std::string headline;
  std::optional<std::int64_t> required_resolution;
  /// Measured by the caller; never serialized into the report itself.
  double wall_clock_seconds = 0.0;

  MetricRow& add(std::int64_t N, std::int64_t aux, std::string metric, double value, double error_bound = 0.0);
  /// Value of the unique row (metric, N, aux); throws DomainError if absent.
  double value(const std::string& metric, std::int64_t N, std::int64_t aux = 0) const;
  /// Records and evaluates an assertion against an existing row.
  bool check(std::string description, const std::string& metric, std::int64_t N, std::int64_t aux, Cmp cmp,
             double bound);
  /// pass if every assertion holds (and there is at least one), fail otherwise.
  void conclude();
  void abstain(std::string reason);

  nlohmann::json to_json() const;
};

/// Re-evaluates every assertion from the rows and the verdict from the
/// assertions. Returns a description of each inconsistency; empty if none.
std::vector<std::string> audit(const ExperimentReport& report);

/// Shortest decimal with 17 significant digits, as used in the CSV outputs.
std::string format_double(double v);
/// N,aux,metric,value,error_bound
std::string metrics_csv(const ExperimentReport& report);
/// N,<headline> for the headline metric's rows with aux = 0.
std::string decay_csv(const ExperimentReport& report);

}  // namespace vdclab
