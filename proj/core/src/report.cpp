#include "vdclab/report.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "vdclab/error.hpp"

namespace vdclab {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::abstain: return "abstain";
  }
  return "?";
}

std::string to_string(Cmp c) {
  switch (c) {
    case Cmp::lt: return "<";
    case Cmp::le: return "<=";
    case Cmp::gt: return ">";
    case Cmp::ge: return ">=";
    case Cmp::eq: return "==";
  }
  return "?";
}

namespace {

bool compare(double v, Cmp c, double bound) {
  switch (c) {
    case Cmp::lt: return v < bound;
    case Cmp::le: return v <= bound;
    case Cmp::gt: return v > bound;
    case Cmp::ge: return v >= bound;
    case Cmp::eq: return v == bound;
  }
  return false;
}

const MetricRow* find_row(const ExperimentReport& r, const std::string& metric, std::int64_t N, std::int64_t aux) {
  const MetricRow* found = nullptr;
  for (const auto& row : r.rows) {
    if (row.metric == metric && row.N == N && row.aux == aux) {
      if (found) return nullptr;
      found = &row;
    }
  }
  return found;
}

}  // namespace

MetricRow& ExperimentReport::add(std::int64_t N, std::int64_t aux, std::string metric, double value,
                                 double error_bound) {
  rows.push_back({N, aux, std::move(metric), value, error_bound});
  return rows.back();
}

double ExperimentReport::value(const std::string& metric, std::int64_t N, std::int64_t aux) const {
  const MetricRow* row = find_row(*this, metric, N, aux);
  if (!row) {
    throw DomainError("report '" + name + "' has no unique row " + metric + "(N=" + std::to_string(N) +
                      ", aux=" + std::to_string(aux) + ")");
  }
  return row->value;
}

bool ExperimentReport::check(std::string description, const std::string& metric, std::int64_t N, std::int64_t aux,
                             Cmp cmp, double bound) {
  const double v = value(metric, N, aux);
  const bool ok = compare(v, cmp, bound);
  assertions.push_back({std::move(description), metric, N, aux, cmp, bound, ok});
  return ok;
}

void ExperimentReport::conclude() {
  if (assertions.empty()) {
    abstain("no assertion applies");
    return;
  }
  for (const auto& a : assertions) {
    if (!a.holds) {
      verdict = Verdict::fail;
      verdict_reason = "violated: " + a.description;
      return;
    }
  }
  verdict = Verdict::pass;
  verdict_reason = "all " + std::to_string(assertions.size()) + " assertions hold";
}

void ExperimentReport::abstain(std::string reason) {
  verdict = Verdict::abstain;
  verdict_reason = std::move(reason);
}

nlohmann::json ExperimentReport::to_json() const {
  using nlohmann::json;
  json j;
  j["name"] = name;
  j["config"] = config;
  j["verdict"] = to_string(verdict);
  j["verdict_reason"] = verdict_reason;
  j["headline"] = headline;
  j["tolerances"] = tolerances;
  j["notes"] = notes;
  if (required_resolution) j["required_resolution"] = *required_resolution;
  json as = json::array();
  for (const auto& a : assertions) {
    as.push_back({{"description", a.description},
                  {"metric", a.metric},
                  {"N", a.N},
                  {"aux", a.aux},
                  {"cmp", to_string(a.cmp)},
                  {"bound", a.bound},
                  {"holds", a.holds}});
  }
  j["assertions"] = as;
  json rs = json::array();
  for (const auto& r : rows) {
    rs.push_back({{"N", r.N}, {"aux", r.aux}, {"metric", r.metric}, {"value", r.value}, {"error_bound", r.error_bound}});
  }
  j["rows"] = rs;
  return j;
}

std::vector<std::string> audit(const ExperimentReport& report) {
  std::vector<std::string> issues;
  bool all = !report.assertions.empty();
  for (const auto& a : report.assertions) {
    const MetricRow* row = find_row(report, a.metric, a.N, a.aux);
    if (!row) {
      issues.push_back("assertion '" + a.description + "' has no unique row");
      all = false;
      continue;
    }
    const bool ok = compare(row->value, a.cmp, a.bound);
    if (ok != a.holds) issues.push_back("assertion '" + a.description + "' recorded wrongly");
    all = all && ok;
  }
  if (report.verdict == Verdict::pass && !all) issues.push_back("verdict pass without every assertion holding");
  if (report.verdict == Verdict::fail && all) issues.push_back("verdict fail although every assertion holds");
  return issues;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string metrics_csv(const ExperimentReport& report) {
  std::ostringstream os;
  os << "N,aux,metric,value,error_bound\n";
  for (const auto& r : report.rows) {
    os << r.N << ',' << r.aux << ',' << r.metric << ',' << format_double(r.value) << ','
       << format_double(r.error_bound) << '\n';
  }
  return os.str();
}

std::string decay_csv(const ExperimentReport& report) {
  std::ostringstream os;
  os << "N," << report.headline << '\n';
  for (const auto& r : report.rows) {
    if (r.metric == report.headline && r.aux == 0) os << r.N << ',' << format_double(r.value) << '\n';
  }
  return os.str();
}

}  // namespace vdclab
