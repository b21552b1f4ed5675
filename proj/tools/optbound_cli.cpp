// Command-line front end: miss ratio curves of bounds and reference policies.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "optbound/foo.hpp"
#include "optbound/harness.hpp"
#include "optbound/pfoo.hpp"

namespace {

using namespace optbound;

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, sep)) {
    if (!part.empty()) parts.push_back(part);
  }
  return parts;
}

std::uint64_t parse_u64(const std::string& text, const char* what) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty() || text[0] == '-') {
    throw ConfigError(std::string("invalid ") + what + " '" + text + "'");
  }
  return v;
}

IrmConfig parse_synth(const std::string& spec) {
  const auto f = split(spec, ',');
  if (f.size() != 6) throw ConfigError("--synth expects M,N,alpha,smin,smax,seed");
  IrmConfig c;
  c.num_objects = parse_u64(f[0], "object count");
  c.trace_length = parse_u64(f[1], "trace length");
  std::size_t used = 0;
  try {
    c.zipf_alpha = std::stod(f[2], &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != f[2].size()) throw ConfigError("invalid zipf alpha '" + f[2] + "'");
  c.size_min = parse_u64(f[3], "minimum size");
  c.size_max = parse_u64(f[4], "maximum size");
  c.rng_seed = parse_u64(f[5], "seed");
  return c;
}

template <typename Write>
void write_file(const std::string& path, Write write) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write(out);
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Offline bounds and reference policies for variable-size caching"};

  std::string trace_path, synth, capacities = "", methods = "all", output, format = "csv";
  std::string write_trace_path, intervals_path, decisions_path, pfoo_stats_path, dimacs_path;
  std::size_t segment = kDefaultSegmentLength, sample_k = 64, jobs = 1;
  std::uint64_t seed = 1;
  bool exact = false, omit_runtime = false;

  auto* source = app.add_option_group("source");
  source->add_option("--trace", trace_path, "Trace file: `<timestamp> <object> <size>` lines");
  source->add_option("--synth", synth, "IRM trace: M,N,alpha,smin,smax,seed");
  source->require_option(1);
  app.add_option("--capacities", capacities, "Comma-separated cache sizes in bytes")->required();
  app.add_option("--methods", methods,
                 "Comma-separated: foo, pfoo-l, pfoo-u, belady, belady-size, freq-size, lru, "
                 "gdsf, infinite-cap, brute-force, or all")
      ->capture_default_str();
  app.add_option("--segment-size", segment, "PFOO-U window length in requests")->capture_default_str();
  app.add_option("--sample-k", sample_k, "Belady-Size eviction sample size; 0 scans all residents")
      ->capture_default_str();
  app.add_flag("--exact-arith", exact, "Rational edge costs instead of doubles");
  app.add_option("--output", output, "Report path (default: stdout)");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--seed", seed, "Seed for Belady-Size sampling")->capture_default_str();
  app.add_flag("--omit-runtime", omit_runtime, "Report runtime_ms as 0 for byte-identical reruns");
  app.add_option("--write-trace", write_trace_path, "Also write the input trace in text format");
  app.add_option("--dump-intervals", intervals_path, "Write the interval set as CSV");
  app.add_option("--dump-decisions", decisions_path,
                 "Write FOO-L decisions as CSV (single capacity only)");
  app.add_option("--pfoo-stats", pfoo_stats_path,
                 "Write PFOO-U per-window statistics as JSON lines (single capacity only)");
  app.add_option("--dimacs", dimacs_path, "Write the FOO flow instance in DIMACS format "
                                          "(single capacity only)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    RunConfig config;
    Trace trace;
    if (!trace_path.empty()) {
      trace = read_trace_file(trace_path);
      config.trace_label = trace_path;
    } else {
      trace = generate_irm_trace(parse_synth(synth));
      config.trace_label = "synth:" + synth;
    }
    for (const auto& c : split(capacities, ',')) config.capacities.push_back(parse_u64(c, "capacity"));
    config.methods = split(methods, ',');
    config.segment.length = segment;
    config.sample_k = sample_k == 0 ? kExactScan : sample_k;
    config.seed = seed;
    config.mode = exact ? NumericMode::kExact : NumericMode::kFloat;
    config.jobs = jobs;
    config = normalize(config);

    const bool single = config.capacities.size() == 1;
    if (!single && (!decisions_path.empty() || !pfoo_stats_path.empty() || !dimacs_path.empty())) {
      throw ConfigError("--dump-decisions, --pfoo-stats and --dimacs need exactly one capacity");
    }

    const MissRatioCurve curve = run(config, trace);
    ReportOptions report;
    report.omit_runtime = omit_runtime;
    if (output.empty()) {
      emit_report(std::cout, curve, parse_report_format(format), report);
    } else {
      write_file(output, [&](std::ostream& out) {
        emit_report(out, curve, parse_report_format(format), report);
      });
    }

    if (!write_trace_path.empty()) {
      write_file(write_trace_path, [&](std::ostream& out) { write_trace(out, trace); });
    }
    const IntervalSet intervals = build_intervals(trace);
    if (!intervals_path.empty()) {
      write_file(intervals_path, [&](std::ostream& out) { write_intervals_csv(out, intervals, trace); });
    }
    const std::uint64_t capacity = config.capacities.front();
    if (!decisions_path.empty()) {
      FooOptions options;
      options.mode = config.mode;
      const FooResult r = foo_bounds(trace, intervals, capacity, options);
      write_file(decisions_path,
                 [&](std::ostream& out) { write_decisions_csv(out, r.decisions, intervals, trace); });
    }
    if (!pfoo_stats_path.empty()) {
      PfooUpperOptions options;
      options.mode = config.mode;
      const PfooUpperResult r = pfoo_upper(trace, intervals, capacity, config.segment, options);
      write_file(pfoo_stats_path, [&](std::ostream& out) { write_window_stats_jsonl(out, r.windows); });
    }
    if (!dimacs_path.empty()) {
      write_file(dimacs_path, [&](std::ostream& out) {
        if (config.mode == NumericMode::kExact) {
          write_dimacs(out, build_foo_graph<Rational>(trace, intervals, capacity));
        } else {
          write_dimacs(out, build_foo_graph<double>(trace, intervals, capacity));
        }
      });
    }
  } catch (const std::exception& e) {
    std::cerr << "optbound: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
