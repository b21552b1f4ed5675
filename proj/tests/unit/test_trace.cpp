#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "generators.hpp"
#include "optbound/trace.hpp"

namespace optbound {
namespace {

Trace parse(const std::string& text) {
  std::istringstream in(text);
  return parse_trace(in);
}

TEST(ParseTrace, MapsFieldsAndFirstSizes) {
  const Trace t = parse("1 a 3\n2 b 1\n3 a 3\n");
  ASSERT_EQ(t.size(), 3u);
  EXPECT_EQ(t.num_objects(), 2u);
  EXPECT_EQ(t.object_size(t[0].object), 3u);
  EXPECT_EQ(t.object_size(t[1].object), 1u);
  EXPECT_EQ(t[0].object, t[2].object);
  EXPECT_EQ(t[2].index, 2u);
}

TEST(ParseTrace, EmptyInput) {
  const Trace t = parse("");
  EXPECT_EQ(t.size(), 0u);
  EXPECT_EQ(t.num_objects(), 0u);
}

TEST(ParseTrace, CommentsAndBlankLinesAreSkipped) {
  const Trace t = parse("# header\n\n1 a 3\n  # indented\n2 a 3\n");
  EXPECT_EQ(t.size(), 2u);
}

TEST(ParseTrace, RunningExampleEncoding) {
  std::ostringstream text;
  const std::string seq = "abcbdacdabba";
  const std::map<char, int> size{{'a', 3}, {'b', 1}, {'c', 1}, {'d', 2}};
  for (std::size_t i = 0; i < seq.size(); ++i) {
    text << i + 100 << ' ' << seq[i] << ' ' << size.at(seq[i]) << '\n';
  }
  const Trace t = parse(text.str());
  EXPECT_EQ(t.size(), 12u);
  EXPECT_EQ(t.num_objects(), 4u);
  EXPECT_EQ(t, testing::running_example());
}

TEST(ParseTrace, TimestampsDoNotReorder) {
  const Trace t = parse("9 a 1\n1 b 2\n");
  EXPECT_EQ(t.object_name(t[0].object), "a");
  EXPECT_EQ(t.object_name(t[1].object), "b");
}

TEST(ParseTrace, ConflictingSizeKeepsFirstAndCounts) {
  const Trace t = parse("1 a 3\n2 a 7\n3 a 3\n4 a 9\n");
  EXPECT_EQ(t.object_size(0), 3u);
  EXPECT_EQ(t[1].size, 3u);
  EXPECT_EQ(t[3].size, 3u);
  EXPECT_EQ(t.size_conflicts(), 2u);
}

TEST(ParseTrace, ErrorsCarryLineNumbers) {
  const auto line_of = [](const std::string& text) -> std::size_t {
    try {
      parse(text);
    } catch (const TraceParseError& e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(line_of("1 a 3\n2 b\n"), 2u);
  EXPECT_EQ(line_of("1 a x\n"), 1u);
  EXPECT_EQ(line_of("1 a 3\n# c\n3 b 0\n"), 3u);
  EXPECT_EQ(line_of("1 a -4\n"), 1u);
  EXPECT_EQ(line_of("1 a 2.5\n"), 1u);
  EXPECT_EQ(line_of("1 a 3 extra\n"), 1u);
}

TEST(ParseTrace, MissingFileIsAnError) {
  EXPECT_THROW(read_trace_file("/nonexistent/trace.tr"), std::runtime_error);
}

TEST(TraceBuilder, RejectsZeroSize) {
  TraceBuilder b;
  EXPECT_THROW(b.add("a", 0), std::invalid_argument);
}

TEST(WriteTrace, RoundTripsRandomTraces) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    const Trace t = testing::random_tiny_instance(rng).trace;
    std::stringstream buf;
    write_trace(buf, t);
    EXPECT_EQ(parse_trace(buf), t);
  }
}

TEST(WriteTrace, RoundTripsIrmTrace) {
  const Trace t = generate_irm_trace({200, 5000, 0.9, 1, 1000, 3});
  std::stringstream buf;
  write_trace(buf, t);
  EXPECT_EQ(parse_trace(buf), t);
}

TEST(GenerateIrm, SingleObject) {
  const Trace t = generate_irm_trace({1, 5, 1.0, 4, 4, 7});
  ASSERT_EQ(t.size(), 5u);
  EXPECT_EQ(t.num_objects(), 1u);
  for (const Request& r : t.requests()) EXPECT_EQ(r.size, 4u);
}

TEST(GenerateIrm, DeterministicForSeed) {
  const IrmConfig c{100, 10000, 0.9, 1, 1u << 20, 1};
  std::ostringstream a, b;
  write_trace(a, generate_irm_trace(c));
  write_trace(b, generate_irm_trace(c));
  EXPECT_EQ(a.str(), b.str());
  IrmConfig other = c;
  other.rng_seed = 2;
  EXPECT_NE(generate_irm_trace(other), generate_irm_trace(c));
}

TEST(GenerateIrm, SizesPairwiseDistinctAndInRange) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const IrmConfig c{50, 2000, 0.8, 10, 59, seed};  // 50 objects, 50 possible sizes
    const Trace t = generate_irm_trace(c);
    std::set<std::uint64_t> sizes;
    for (ObjectId o = 0; o < t.num_objects(); ++o) {
      EXPECT_GE(t.object_size(o), c.size_min);
      EXPECT_LE(t.object_size(o), c.size_max);
      sizes.insert(t.object_size(o));
    }
    EXPECT_EQ(sizes.size(), t.num_objects());
  }
}

TEST(GenerateIrm, RejectsInvalidConfigs) {
  EXPECT_THROW(generate_irm_trace({0, 5, 1.0, 1, 9, 0}), IrmConfigError);
  EXPECT_THROW(generate_irm_trace({5, 0, 1.0, 1, 9, 0}), IrmConfigError);
  EXPECT_THROW(generate_irm_trace({5, 5, 1.0, 0, 9, 0}), IrmConfigError);
  EXPECT_THROW(generate_irm_trace({5, 5, 1.0, 9, 3, 0}), IrmConfigError);
  EXPECT_THROW(generate_irm_trace({5, 5, -0.5, 1, 9, 0}), IrmConfigError);
  EXPECT_THROW(generate_irm_trace({11, 5, 1.0, 1, 10, 0}), IrmConfigError);
  EXPECT_NO_THROW(generate_irm_trace({10, 5, 1.0, 1, 10, 0}));
}

TEST(GenerateIrm, TopObjectFrequencyMatchesZipf) {
  const std::size_t m = 1000;
  const double log_m = std::log(1000.0);
  const std::size_t n = static_cast<std::size_t>(std::ceil(m * log_m * log_m));
  const Trace t = generate_irm_trace({m, n, 0.9, 1, 1u << 24, 5});
  double norm = 0;
  for (std::size_t k = 1; k <= m; ++k) norm += std::pow(static_cast<double>(k), -0.9);
  const double p = 1.0 / norm;
  // The most popular object is requested first with overwhelming probability,
  // but count by rank-1 popularity rather than by id to stay assumption-free.
  const TraceStats stats = trace_stats(t);
  std::vector<std::size_t> counts(t.num_objects(), 0);
  for (const Request& r : t.requests()) ++counts[r.object];
  const double top = static_cast<double>(*std::max_element(counts.begin(), counts.end()));
  const double sigma = std::sqrt(static_cast<double>(n) * p * (1 - p));
  EXPECT_NEAR(top, static_cast<double>(n) * p, 3 * sigma);
  EXPECT_EQ(stats.requests, n);
}

TEST(TraceStats, RunningExample) {
  const TraceStats s = trace_stats(testing::running_example());
  EXPECT_EQ(s.requests, 12u);
  EXPECT_EQ(s.objects, 4u);
  EXPECT_EQ(s.size_min, 1u);
  EXPECT_EQ(s.size_max, 3u);
  EXPECT_EQ(s.unique_bytes, 7u);
  // a: 4 requests, b: 4, c: 2, d: 2.
  const std::map<std::size_t, std::size_t> hist{{2, 2}, {4, 2}};
  EXPECT_EQ(s.requests_per_object, hist);
}

TEST(TraceStats, EmptyTraceIsAllZero) {
  const TraceStats s = trace_stats(Trace{});
  EXPECT_EQ(s.requests, 0u);
  EXPECT_EQ(s.objects, 0u);
  EXPECT_EQ(s.size_min, 0u);
  EXPECT_EQ(s.size_max, 0u);
  EXPECT_EQ(s.unique_bytes, 0u);
  EXPECT_TRUE(s.requests_per_object.empty());
}

TEST(TraceStats, HistogramConservesRequests) {
  const Trace t = generate_irm_trace({100, 10000, 0.9, 1, 1000, 4});
  const TraceStats s = trace_stats(t);
  std::size_t total = 0, objects = 0;
  for (auto [count, num] : s.requests_per_object) {
    total += count * num;
    objects += num;
  }
  EXPECT_EQ(total, s.requests);
  EXPECT_EQ(objects, s.objects);
  EXPECT_EQ(s.objects, 100u);
}

}  // namespace
}  // namespace optbound
