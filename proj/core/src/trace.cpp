#include "optbound/trace.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <unordered_set>

namespace optbound {

void TraceBuilder::add(std::string_view object_name, std::uint64_t size) {
  if (size == 0) throw std::invalid_argument("object size must be positive");
  auto [it, inserted] = ids_.try_emplace(std::string(object_name),
                                         static_cast<ObjectId>(trace_.names_.size()));
  if (inserted) {
    trace_.names_.emplace_back(object_name);
    trace_.sizes_.push_back(size);
  }
  const ObjectId id = it->second;
  const std::uint64_t fixed = trace_.sizes_[id];
  if (fixed != size) ++trace_.size_conflicts_;
  trace_.requests_.push_back(Request{trace_.requests_.size(), id, fixed});
}

Trace TraceBuilder::build() && { return std::move(trace_); }

namespace {

bool parse_u64(std::string_view field, std::uint64_t& out) {
  const char* first = field.data();
  const char* last = first + field.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

// Splits on runs of spaces/tabs.
std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i == line.size()) break;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    fields.push_back(line.substr(i, j - i));
    i = j;
  }
  return fields;
}

}  // namespace

Trace parse_trace(std::istream& in, TraceFormat format) {
  if (format != TraceFormat::kText) throw std::invalid_argument("unsupported trace format");
  TraceBuilder builder;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto fields = split_fields(line);
    if (fields.empty() || fields.front().front() == '#') continue;
    if (fields.size() != 3) {
      throw TraceParseError(line_no, "expected 3 fields `timestamp object_id size`, got " +
                                         std::to_string(fields.size()));
    }
    std::uint64_t size = 0;
    if (!parse_u64(fields[2], size)) {
      throw TraceParseError(line_no, "size is not an unsigned integer: '" +
                                         std::string(fields[2]) + "'");
    }
    if (size == 0) throw TraceParseError(line_no, "size must be positive");
    builder.add(fields[1], size);
  }
  if (in.bad()) throw std::runtime_error("I/O error while reading trace");
  return std::move(builder).build();
}

Trace read_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace file '" + path + "'");
  return parse_trace(in);
}

void write_trace(std::ostream& out, const Trace& trace) {
  for (const Request& r : trace.requests()) {
    out << r.index << ' ' << trace.object_name(r.object) << ' ' << r.size << '\n';
  }
}

namespace {

// Uniform double in [0, 1) from the top 53 bits; portable across standard
// libraries, unlike std::uniform_real_distribution.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

Trace generate_irm_trace(const IrmConfig& config) {
  if (config.num_objects < 1) throw IrmConfigError("num_objects must be >= 1");
  if (config.trace_length < 1) throw IrmConfigError("trace_length must be >= 1");
  if (config.size_min < 1 || config.size_min > config.size_max) {
    throw IrmConfigError("need 1 <= size_min <= size_max");
  }
  if (!(config.zipf_alpha >= 0.0)) throw IrmConfigError("zipf_alpha must be >= 0");
  const std::uint64_t span = config.size_max - config.size_min;
  if (span < config.num_objects - 1) {
    throw IrmConfigError("cannot draw " + std::to_string(config.num_objects) +
                         " distinct sizes from [" + std::to_string(config.size_min) + ", " +
                         std::to_string(config.size_max) + "]");
  }

  std::mt19937_64 rng(config.rng_seed);
  const std::size_t m = config.num_objects;

  std::vector<double> cdf(m);
  double total = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    total += std::pow(static_cast<double>(k + 1), -config.zipf_alpha);
    cdf[k] = total;
  }

  std::vector<std::uint64_t> sizes(m);
  std::unordered_set<std::uint64_t> used;
  used.reserve(m * 2);
  const double log_lo = std::log(static_cast<double>(config.size_min));
  const double log_hi = std::log(static_cast<double>(config.size_max) + 1.0);
  for (std::size_t k = 0; k < m; ++k) {
    const double draw = std::exp(log_lo + unit_uniform(rng) * (log_hi - log_lo));
    auto s = static_cast<std::uint64_t>(draw);
    s = std::clamp(s, config.size_min, config.size_max);
    while (used.count(s) != 0) s = (s == config.size_max) ? config.size_min : s + 1;
    used.insert(s);
    sizes[k] = s;
  }

  TraceBuilder builder;
  for (std::size_t i = 0; i < config.trace_length; ++i) {
    const double u = unit_uniform(rng) * total;
    auto k = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    if (k >= m) k = m - 1;
    builder.add(std::to_string(k + 1), sizes[k]);
  }
  return std::move(builder).build();
}

TraceStats trace_stats(const Trace& trace) {
  TraceStats stats;
  stats.requests = trace.size();
  stats.objects = trace.num_objects();
  std::vector<std::size_t> counts(trace.num_objects(), 0);
  for (const Request& r : trace.requests()) ++counts[r.object];
  for (ObjectId id = 0; id < trace.num_objects(); ++id) {
    const std::uint64_t s = trace.object_size(id);
    stats.size_min = (id == 0) ? s : std::min(stats.size_min, s);
    stats.size_max = std::max(stats.size_max, s);
    stats.unique_bytes += s;
    ++stats.requests_per_object[counts[id]];
  }
  return stats;
}

}  // namespace optbound
