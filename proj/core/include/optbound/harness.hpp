#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "optbound/baselines.hpp"
#include "optbound/bounds.hpp"
#include "optbound/intervals.hpp"
#include "optbound/pfoo.hpp"
#include "optbound/trace.hpp"

namespace optbound {

/// Method names accepted by the harness, in canonical order. "foo" yields
/// two rows, foo-l and foo-u.
inline constexpr std::string_view kMethodNames[] = {
    "foo", "pfoo-l", "pfoo-u", "belady", "belady-size", "freq-size",
    "lru", "gdsf", "infinite-cap", "brute-force"};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  /// Label written in the report's trace column.
  std::string trace_label;
  std::vector<std::uint64_t> capacities;
  std::vector<std::string> methods;
  SegmentPlan segment;
  /// kExactScan disables Belady-Size sampling.
  std::size_t sample_k = 64;
  std::uint64_t seed = 1;
  NumericMode mode = NumericMode::kFloat;
  std::size_t jobs = 1;
};

/// Sorts and deduplicates capacities, expands "all", deduplicates methods
/// and rejects unknown names, empty lists, zero capacities and jobs == 0.
RunConfig normalize(RunConfig config);

struct CurveRow {
  std::string trace;
  BoundResult result;
};

/// Rows sorted by method name, then capacity.
struct MissRatioCurve {
  std::vector<CurveRow> rows;
};

/// Runs every (method, capacity) job over `jobs` worker threads. Row order
/// does not depend on completion order. Throws ConfigError for an invalid
/// config and OracleGuardError when brute-force is requested on a trace
/// too large for it.
MissRatioCurve run(const RunConfig& config, const Trace& trace);

/// Methods whose miss ratio must not increase with capacity.
bool is_monotone_method(std::string_view method);

struct MonotonicityViolation {
  std::string method;
  std::uint64_t smaller_capacity = 0;
  std::uint64_t larger_capacity = 0;
};

std::vector<MonotonicityViolation> check_monotonicity(const MissRatioCurve& curve);

struct ScheduleVerdict {
  /// Request indices where the cached bytes exceed C.
  std::vector<std::size_t> violations;
  bool feasible() const { return violations.empty(); }
};

/// Replays integral decisions (one per interval): a cached interval holds
/// its bytes at requests start..end-1.
ScheduleVerdict verify_schedule(const std::vector<char>& cached, const IntervalSet& intervals,
                                std::uint64_t capacity);

enum class ReportFormat { kCsv, kJson };

ReportFormat parse_report_format(std::string_view text);

struct ReportOptions {
  /// Write 0 instead of measured runtimes so that reruns are byte-identical.
  bool omit_runtime = false;
};

inline constexpr std::string_view kCsvHeader =
    "trace,method,capacity_bytes,requests,misses,miss_ratio,bound_kind,runtime_ms";

/// Misses carry at most 6 fractional digits; all numbers are formatted
/// independently of the global locale.
void emit_report(std::ostream& out, const MissRatioCurve& curve, ReportFormat format,
                 const ReportOptions& options = {});

class ReportParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads a JSON report written by emit_report.
MissRatioCurve parse_json_report(std::istream& in);

/// Number formatting used by reports.
std::string format_misses(double misses);
std::string format_double(double value);

}  // namespace optbound
