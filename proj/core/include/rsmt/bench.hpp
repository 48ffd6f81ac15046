#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rsmt/geometry.hpp"
#include "rsmt/pipeline.hpp"
#include "rsmt/solvers.hpp"

namespace rsmt {

/// `degree` points drawn uniformly from [0,1)^2.
///
/// Stream: std::mt19937_64 seeded with `seed ^ (degree * 0x9E3779B97F4A7C15)`.
/// Each coordinate consumes one 64-bit draw r and is (r >> 11) * 2^-53; points
/// are produced in order, x before y. Both pieces are fully specified by the
/// C++ standard, so any implementation can reproduce the nets.
std::vector<Point> generate_net(std::size_t degree, std::uint64_t seed);

/// 100 * (length - reference) / reference. Throws InvalidInput when
/// reference <= 0.
double relative_error(double length, double reference);

/// One benchmarked method: a whole-net solver, or the partitioned pipeline
/// over a block solver.
struct MethodSpec {
  std::string label;
  bool partitioned = false;
  SolverSpec solver;
  std::size_t block_size = 100;
};

/// Label grammar:
///   rmst | i1s | exact | external:<command>            whole net
///   bvh+<one of the above>[@B]                          partitioned
/// Without @B the block size defaults by solver class: exact uses its cap,
/// i1s and external 50, rmst 100. Throws InvalidInput listing the valid
/// forms on anything else.
MethodSpec parse_method(std::string_view label);

/// Block size used for `kind` when none is given.
std::size_t default_block_size(SolverKind kind, std::size_t exact_cap = 7);

struct BenchRecord {
  std::size_t degree = 0;
  std::uint64_t seed = 0;
  std::string method;
  double wall_time_s = 0.0;
  std::optional<double> length;           // absent when the method failed
  std::optional<double> rel_error_pct;    // absent without a usable reference
  double half_perimeter = 0.0;
  std::string error;
};

struct SuiteConfig {
  std::vector<std::size_t> degrees;
  std::size_t seeds = 10;
  std::uint64_t first_seed = 0;
  std::vector<MethodSpec> methods;
  /// A method label, or "best" for the shortest successful length per instance.
  std::string reference = "best";
};

struct DegreeAggregate {
  std::size_t degree = 0;
  std::string method;
  std::size_t succeeded = 0;
  std::size_t failed = 0;
  double mean_time_s = 0.0;
  std::optional<double> mean_length;
  std::optional<double> mean_rel_error_pct;
};

struct SuiteResult {
  std::vector<BenchRecord> records;       // degree-major, then seed, then method
  std::vector<DegreeAggregate> aggregates;  // degree-major, then method
};

/// Runs every (degree, seed, method) sequentially and timing only the method
/// call. Method failures become failed records. `on_record`, when set, sees
/// each record as it completes (before relative errors are filled in).
SuiteResult run_suite(const SuiteConfig& config,
                      const std::function<void(const BenchRecord&)>& on_record = {});

/// Header plus one row per record:
/// degree,seed,method,wall_time_s,length,rel_error_pct
void write_csv(std::span<const BenchRecord> records, std::ostream& out);

/// Per-degree table with "length (error%)" and time columns per method.
void write_summary(const SuiteResult& result, std::span<const MethodSpec> methods,
                   std::ostream& out);

struct TrendCheck {
  std::size_t adjacent_pairs = 0;
  std::size_t inversions = 0;
  std::vector<std::string> flagged;
  /// Fails only when more than 10% of adjacent degree pairs invert.
  bool ok() const noexcept { return inversions * 10 <= adjacent_pairs; }
};

/// Mean length per method should not drop as degree grows.
TrendCheck check_length_trend(std::span<const DegreeAggregate> aggregates);

/// Parses "a..b:step", "a..b" (step 50) or a single degree "a".
std::vector<std::size_t> parse_degree_range(std::string_view text);

}  // namespace rsmt
