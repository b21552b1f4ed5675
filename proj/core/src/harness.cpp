#include "optbound/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <exception>
#include <istream>
#include <map>
#include <ostream>
#include <thread>

#include "json.hpp"

#include "optbound/foo.hpp"

namespace optbound {

namespace {

__extension__ typedef __int128 Wide;

bool known_method(std::string_view name) {
  return std::find(std::begin(kMethodNames), std::end(kMethodNames), name) != std::end(kMethodNames);
}

}  // namespace

RunConfig normalize(RunConfig config) {
  if (config.capacities.empty()) throw ConfigError("no capacities given");
  for (std::uint64_t c : config.capacities) {
    if (c == 0) throw ConfigError("capacities must be positive");
  }
  std::sort(config.capacities.begin(), config.capacities.end());
  config.capacities.erase(std::unique(config.capacities.begin(), config.capacities.end()),
                          config.capacities.end());

  if (config.methods.empty()) throw ConfigError("no methods given");
  std::vector<std::string> methods;
  for (const std::string& m : config.methods) {
    if (m == "all") {
      methods.insert(methods.end(), std::begin(kMethodNames), std::end(kMethodNames));
    } else if (known_method(m)) {
      methods.push_back(m);
    } else {
      throw ConfigError("unknown method '" + m + "'");
    }
  }
  std::vector<std::string> unique;
  for (std::string_view name : kMethodNames) {
    if (std::find(methods.begin(), methods.end(), name) != methods.end()) unique.emplace_back(name);
  }
  config.methods = std::move(unique);

  if (config.jobs == 0) throw ConfigError("jobs must be at least 1");
  if (config.sample_k == 0) throw ConfigError("sample_k must be at least 1");
  if (config.segment.length < 2 || config.segment.length % 2 != 0) {
    throw ConfigError("segment size must be even and at least 2");
  }
  return config;
}

namespace {

std::vector<BoundResult> run_job(const RunConfig& config, const Trace& trace,
                                 const IntervalSet& intervals, std::string_view method,
                                 std::uint64_t capacity) {
  if (method == "foo") {
    FooOptions options;
    options.mode = config.mode;
    FooResult r = foo_bounds(trace, intervals, capacity, options);
    return {std::move(r.lower), std::move(r.upper)};
  }
  if (method == "pfoo-l") return {pfoo_lower(trace, intervals, capacity).bound};
  if (method == "pfoo-u") {
    PfooUpperOptions options;
    options.mode = config.mode;
    return {pfoo_upper(trace, intervals, capacity, config.segment, options).bound};
  }
  if (method == "belady") return {simulate_belady(trace, capacity)};
  if (method == "belady-size") {
    return {simulate_belady_size(trace, capacity, config.sample_k, config.seed)};
  }
  if (method == "freq-size") return {simulate_freq_size(trace, capacity)};
  if (method == "lru") return {simulate_lru(trace, capacity)};
  if (method == "gdsf") return {simulate_gdsf(trace, capacity)};
  if (method == "infinite-cap") {
    BoundResult r = infinite_cap(trace);
    r.capacity = capacity;
    return {r};
  }
  if (method == "brute-force") return {brute_force_opt(trace, capacity).bound};
  throw ConfigError("unknown method '" + std::string(method) + "'");
}

}  // namespace

MissRatioCurve run(const RunConfig& raw, const Trace& trace) {
  const RunConfig config = normalize(raw);
  const bool brute = std::find(config.methods.begin(), config.methods.end(), "brute-force") !=
                     config.methods.end();
  const IntervalSet intervals = build_intervals(trace);
  if (brute && intervals.size() > kBruteForceGuard) {
    throw OracleGuardError("brute-force requested on a trace with " +
                           std::to_string(intervals.size()) + " intervals (limit " +
                           std::to_string(kBruteForceGuard) + ")");
  }

  struct Job {
    std::string_view method;
    std::uint64_t capacity;
  };
  std::vector<Job> jobs;
  for (const std::string& m : config.methods) {
    for (std::uint64_t c : config.capacities) jobs.push_back({m, c});
  }
  std::vector<std::vector<BoundResult>> results(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      try {
        results[j] = run_job(config, trace, intervals, jobs[j].method, jobs[j].capacity);
      } catch (...) {
        errors[j] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min(config.jobs, jobs.size());
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  MissRatioCurve curve;
  for (auto& rs : results) {
    for (auto& r : rs) curve.rows.push_back(CurveRow{config.trace_label, std::move(r)});
  }
  std::stable_sort(curve.rows.begin(), curve.rows.end(), [](const CurveRow& a, const CurveRow& b) {
    if (a.result.method != b.result.method) return a.result.method < b.result.method;
    return a.result.capacity < b.result.capacity;
  });
  return curve;
}

bool is_monotone_method(std::string_view method) {
  return method == "foo-l" || method == "foo-u" || method == "pfoo-l" || method == "belady" ||
         method == "infinite-cap";
}

std::vector<MonotonicityViolation> check_monotonicity(const MissRatioCurve& curve) {
  std::map<std::string, std::vector<const BoundResult*>> by_method;
  for (const CurveRow& row : curve.rows) {
    if (is_monotone_method(row.result.method)) by_method[row.result.method].push_back(&row.result);
  }
  std::vector<MonotonicityViolation> out;
  for (auto& [method, results] : by_method) {
    std::sort(results.begin(), results.end(),
              [](const BoundResult* a, const BoundResult* b) { return a->capacity < b->capacity; });
    for (std::size_t i = 1; i < results.size(); ++i) {
      const BoundResult& lo = *results[i - 1];
      const BoundResult& hi = *results[i];
      const bool worse = lo.exact_misses && hi.exact_misses ? *hi.exact_misses > *lo.exact_misses
                                                            : hi.misses > lo.misses;
      if (worse) out.push_back({method, lo.capacity, hi.capacity});
    }
  }
  return out;
}

ScheduleVerdict verify_schedule(const std::vector<char>& cached, const IntervalSet& intervals,
                                std::uint64_t capacity) {
  ScheduleVerdict verdict;
  if (cached.empty()) return verdict;
  if (cached.size() != intervals.size()) {
    throw std::invalid_argument("schedule has " + std::to_string(cached.size()) +
                                " decisions for " + std::to_string(intervals.size()) +
                                " intervals");
  }
  // delta[t] changes the held bytes when moving onto request t.
  std::vector<Wide> delta(intervals.trace_length() + 1, 0);
  for (std::size_t k = 0; k < intervals.size(); ++k) {
    if (!cached[k]) continue;
    delta[intervals[k].start] += intervals[k].size;
    delta[intervals[k].end] -= intervals[k].size;
  }
  Wide held = 0;
  for (std::size_t t = 0; t < intervals.trace_length(); ++t) {
    held += delta[t];
    if (held > static_cast<Wide>(capacity)) verdict.violations.push_back(t);
  }
  return verdict;
}

ReportFormat parse_report_format(std::string_view text) {
  if (text == "csv") return ReportFormat::kCsv;
  if (text == "json") return ReportFormat::kJson;
  throw ConfigError("unknown report format '" + std::string(text) + "'");
}

std::string format_misses(double misses) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, misses, std::chars_format::fixed, 6);
  std::string s(buf, res.ptr);
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  if (s == "-0") s = "0";
  return s;
}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

namespace {

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + '"';
}

std::string runtime_text(const BoundResult& r, const ReportOptions& options) {
  if (options.omit_runtime) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, r.runtime_ms, std::chars_format::fixed, 3);
  return std::string(buf, res.ptr);
}

}  // namespace

void emit_report(std::ostream& out, const MissRatioCurve& curve, ReportFormat format,
                 const ReportOptions& options) {
  if (format == ReportFormat::kCsv) {
    out << kCsvHeader << '\n';
    for (const CurveRow& row : curve.rows) {
      const BoundResult& r = row.result;
      out << csv_field(row.trace) << ',' << csv_field(r.method) << ',' << r.capacity << ','
          << r.requests << ',' << format_misses(r.misses) << ',' << format_double(r.miss_ratio())
          << ',' << to_string(r.kind) << ',' << runtime_text(r, options) << '\n';
    }
  } else {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const CurveRow& row : curve.rows) {
      const BoundResult& r = row.result;
      nlohmann::ordered_json j;
      j["trace"] = row.trace;
      j["method"] = r.method;
      j["capacity_bytes"] = r.capacity;
      j["requests"] = r.requests;
      j["misses"] = r.misses;
      if (r.exact_misses) j["misses_exact"] = r.exact_misses->get_str();
      j["miss_ratio"] = r.miss_ratio();
      j["bound_kind"] = std::string(to_string(r.kind));
      j["runtime_ms"] = options.omit_runtime ? 0.0 : r.runtime_ms;
      rows.push_back(std::move(j));
    }
    nlohmann::ordered_json doc;
    doc["rows"] = std::move(rows);
    out << doc.dump(2) << '\n';
  }
  if (!out) throw std::ios_base::failure("failed to write report");
}

MissRatioCurve parse_json_report(std::istream& in) {
  MissRatioCurve curve;
  try {
    const nlohmann::json doc = nlohmann::json::parse(in);
    for (const auto& j : doc.at("rows")) {
      CurveRow row;
      row.trace = j.at("trace").get<std::string>();
      BoundResult& r = row.result;
      r.method = j.at("method").get<std::string>();
      r.capacity = j.at("capacity_bytes").get<std::uint64_t>();
      r.requests = j.at("requests").get<std::size_t>();
      r.misses = j.at("misses").get<double>();
      if (j.contains("misses_exact")) {
        r.exact_misses = Rational(j.at("misses_exact").get<std::string>());
        r.exact_misses->canonicalize();
      }
      r.kind = parse_bound_kind(j.at("bound_kind").get<std::string>());
      r.runtime_ms = j.at("runtime_ms").get<double>();
      curve.rows.push_back(std::move(row));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ReportParseError(std::string("malformed report: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ReportParseError(std::string("malformed report: ") + e.what());
  }
  return curve;
}

}  // namespace optbound
