#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace optbound {

/// Dense object index, assigned in order of first appearance within a trace.
using ObjectId = std::uint32_t;

struct Request {
  std::size_t index = 0;
  ObjectId object = 0;
  std::uint64_t size = 0;

  friend bool operator==(const Request&, const Request&) = default;
};

/// Immutable request sequence. Every request to an object carries the size
/// recorded on that object's first request.
class Trace {
 public:
  Trace() = default;

  std::size_t size() const { return requests_.size(); }
  bool empty() const { return requests_.empty(); }
  std::size_t num_objects() const { return names_.size(); }

  std::span<const Request> requests() const { return requests_; }
  const Request& operator[](std::size_t i) const { return requests_[i]; }

  const std::string& object_name(ObjectId id) const { return names_[id]; }
  std::uint64_t object_size(ObjectId id) const { return sizes_[id]; }

  /// Number of requests whose size disagreed with the object's first size.
  std::size_t size_conflicts() const { return size_conflicts_; }

  friend bool operator==(const Trace& a, const Trace& b) {
    return a.names_ == b.names_ && a.sizes_ == b.sizes_ &&
           a.requests_ == b.requests_;
  }

 private:
  friend class TraceBuilder;

  std::vector<Request> requests_;
  std::vector<std::string> names_;
  std::vector<std::uint64_t> sizes_;
  std::size_t size_conflicts_ = 0;
};

/// Accumulates requests and resolves object names to dense ids.
class TraceBuilder {
 public:
  /// Appends a request. Throws std::invalid_argument if size is zero.
  void add(std::string_view object_name, std::uint64_t size);

  Trace build() &&;

 private:
  Trace trace_;
  std::unordered_map<std::string, ObjectId> ids_;
};

class TraceParseError : public std::runtime_error {
 public:
  TraceParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

enum class TraceFormat {
  /// `<timestamp> <object_id> <size_bytes>` per line, `#` comments.
  kText,
};

Trace parse_trace(std::istream& in, TraceFormat format = TraceFormat::kText);
Trace read_trace_file(const std::string& path);

/// Writes the text format; the request index is used as the timestamp.
void write_trace(std::ostream& out, const Trace& trace);

struct IrmConfig {
  std::size_t num_objects = 1;
  std::size_t trace_length = 1;
  double zipf_alpha = 1.0;
  std::uint64_t size_min = 1;
  std::uint64_t size_max = 1;
  std::uint64_t rng_seed = 0;
};

class IrmConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Independent reference model trace: requests are i.i.d. with
/// P(object k) proportional to 1/k^alpha (k = 1..M). Object sizes are drawn
/// log-uniformly, then bumped by +1 (wrapping) until pairwise distinct.
Trace generate_irm_trace(const IrmConfig& config);

struct TraceStats {
  std::size_t requests = 0;
  std::size_t objects = 0;
  std::uint64_t size_min = 0;
  std::uint64_t size_max = 0;
  /// Sum of distinct object sizes (the working-set footprint).
  std::uint64_t unique_bytes = 0;
  /// requests-per-object -> number of objects with that count.
  std::map<std::size_t, std::size_t> requests_per_object;
};

TraceStats trace_stats(const Trace& trace);

}  // namespace optbound
