#include "rsmt_cli/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <ostream>

#include "CLI11.hpp"
#include "rsmt/abvh.hpp"
#include "rsmt/bench.hpp"
#include "rsmt/error.hpp"
#include "rsmt/io.hpp"
#include "rsmt/pipeline.hpp"
#include "rsmt/solvers.hpp"
#include "rsmt/svg.hpp"

namespace rsmt::cli {

namespace {

// Bad flags or input: reported as usage errors.
constexpr int kExitUsage = 2;
constexpr int kExitFailure = 1;

std::string shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::vector<Point> load_net(const std::string& path) {
  if (path == "-") return read_net(std::cin);
  return read_net_file(path);
}

// Opens `path` for writing, or returns `fallback` for "-".
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : out_(&fallback) {
    if (path == "-") return;
    file_.open(path, std::ios::binary);
    if (!file_) throw InvalidInput("cannot write '" + path + "'");
    out_ = &file_;
    path_ = path;
  }
  std::ostream& stream() { return *out_; }
  void close() {
    if (!path_.empty()) {
      file_.close();
      if (!file_) throw Error("failed writing '" + path_ + "'");
    } else {
      out_->flush();
    }
  }

 private:
  std::ofstream file_;
  std::ostream* out_;
  std::string path_;
};

struct SolveOptions {
  std::string input;
  std::string solver = "rmst";
  std::optional<std::size_t> block_size;
  bool no_partition = false;
  std::string external;
  double timeout = 60.0;
  std::size_t exact_cap = 7;
  std::string output;
  std::string svg;
};

SolverSpec make_solver(const std::string& name, const std::string& external, double timeout,
                       std::size_t exact_cap) {
  SolverSpec spec;
  const auto kind = parse_solver_kind(name);
  if (!kind) {
    throw InvalidInput("unknown solver '" + name + "'; valid solvers: rmst, i1s, exact, external");
  }
  spec.kind = *kind;
  spec.exact_cap = exact_cap;
  spec.external_timeout = std::chrono::duration<double>(timeout);
  if (spec.kind == SolverKind::external) {
    if (external.empty()) throw InvalidInput("--solver external needs --external <command>");
    spec.external_command = external;
  } else if (!external.empty()) {
    throw InvalidInput("--external is only used with --solver external");
  }
  return spec;
}

int cmd_solve(const SolveOptions& opt, std::ostream& out, std::ostream& err) {
  const SolverSpec spec = make_solver(opt.solver, opt.external, opt.timeout, opt.exact_cap);
  const std::size_t block =
      opt.block_size.value_or(default_block_size(spec.kind, spec.exact_cap));
  if (block < 1) throw InvalidInput("--block-size must be at least 1");

  const auto points = load_net(opt.input);
  if (points.empty()) throw InvalidInput(opt.input + ": net has no points");

  const std::size_t distinct = canonical_points(points).size();
  const bool whole = opt.no_partition || block >= distinct;

  const auto start = std::chrono::steady_clock::now();
  std::optional<PipelineResult> piped;
  RectilinearTree tree;
  std::size_t blocks = 1;
  if (whole) {
    tree = solve_rsmt(spec, points);
  } else {
    PipelineConfig config;
    config.block_size = block;
    config.solver = spec;
    piped = run_pipeline(points, config);
    tree = piped->tree;
    blocks = piped->report.block_count;
    if (piped->report.external_fallbacks > 0) {
      err << "warning: " << piped->report.external_fallbacks
          << " block(s) fell back to rmst after external solver errors\n";
    }
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const ValidationReport report = validate_tree(tree, points);
  if (!report.ok()) throw SolverError("solver produced an invalid tree: " + report.summary());

  if (!opt.output.empty()) {
    Sink sink(opt.output, out);
    write_edge_list(tree.edges, sink.stream());
    sink.close();
  }
  if (!opt.svg.empty()) {
    Sink sink(opt.svg, out);
    if (piped) {
      write_pipeline_svg(*piped, sink.stream());
    } else {
      write_tree_svg(tree, sink.stream());
    }
    sink.close();
  }

  // Keep stdout clean when the tree itself goes there.
  std::ostream& summary = (opt.output == "-" || opt.svg == "-") ? err : out;
  char time_buf[32];
  std::snprintf(time_buf, sizeof time_buf, "%.6f", seconds);
  summary << "n=" << distinct << " blocks=" << blocks << " length=" << shortest(tree.length)
          << " time=" << time_buf << '\n';
  return 0;
}

struct PartitionOptions {
  std::string input;
  std::size_t block_size = 100;
  std::string dump;
  std::string svg;
};

int cmd_partition(const PartitionOptions& opt, std::ostream& out, std::ostream& err) {
  if (opt.block_size < 1) throw InvalidInput("--block-size must be at least 1");
  const auto points = load_net(opt.input);
  if (points.empty()) throw InvalidInput(opt.input + ": net has no points");
  const Abvh abvh = Abvh::build(points, opt.block_size);

  if (!opt.dump.empty()) {
    Sink sink(opt.dump, out);
    write_debug_dump(abvh, sink.stream());
    sink.close();
  }
  if (!opt.svg.empty()) {
    Sink sink(opt.svg, out);
    write_partition_svg(abvh, sink.stream());
    sink.close();
  }
  const AbvhStats stats = abvh.stats();
  std::ostream& summary = (opt.dump == "-" || opt.svg == "-") ? err : out;
  summary << "leaves=" << stats.leaf_count << " segments=" << stats.interior_segment_count
          << " height=" << stats.height << '\n';
  return 0;
}

struct BenchOptions {
  std::string degrees = "50..1000:50";
  std::size_t seeds = 10;
  std::uint64_t first_seed = 0;
  std::vector<std::string> methods{"rmst", "bvh+rmst", "bvh+i1s"};
  std::string reference = "best";
  std::string csv;
  double timeout = 60.0;
  bool quiet = false;
};

int cmd_bench(const BenchOptions& opt, std::ostream& out, std::ostream& err) {
  SuiteConfig config;
  config.degrees = parse_degree_range(opt.degrees);
  config.seeds = opt.seeds;
  config.first_seed = opt.first_seed;
  config.reference = opt.reference;
  for (const std::string& label : opt.methods) {
    MethodSpec m = parse_method(label);
    m.solver.external_timeout = std::chrono::duration<double>(opt.timeout);
    config.methods.push_back(std::move(m));
  }

  std::map<std::string, std::size_t> failures;
  const SuiteResult result = run_suite(config, [&](const BenchRecord& r) {
    if (r.length) return;
    if (failures[r.method]++ == 0) {
      err << "warning: method '" << r.method << "' failed (degree " << r.degree << ", seed "
          << r.seed << "): " << r.error << '\n';
    }
  });
  for (const auto& [method, count] : failures) {
    err << "warning: method '" << method << "' failed on " << count << " instance(s)\n";
  }

  if (!opt.csv.empty()) {
    Sink sink(opt.csv, out);
    write_csv(result.records, sink.stream());
    sink.close();
  }
  if (!opt.quiet) {
    write_summary(result, config.methods, out);
  }
  const TrendCheck trend = check_length_trend(result.aggregates);
  if (!trend.ok()) {
    for (const std::string& f : trend.flagged) err << "warning: trend: " << f << '\n';
  }
  return 0;
}

struct GenerateOptions {
  std::size_t degree = 50;
  std::uint64_t seed = 0;
  std::string output = "-";
};

int cmd_generate(const GenerateOptions& opt, std::ostream& out) {
  const auto points = generate_net(opt.degree, opt.seed);
  Sink sink(opt.output, out);
  sink.stream() << "# degree " << opt.degree << " seed " << opt.seed << '\n';
  write_net(points, sink.stream());
  sink.close();
  return 0;
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rectilinear Steiner trees over an augmented BVH partition", "rsmt"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "rsmt 0.1.0");

  SolveOptions solve;
  auto* solve_cmd = app.add_subcommand("solve", "Solve one net and write its tree");
  solve_cmd->add_option("input", solve.input, "Net file ('-' for stdin)")->required();
  solve_cmd->add_option("--solver", solve.solver, "rmst, i1s, exact or external")
      ->capture_default_str();
  solve_cmd->add_option("--block-size,-B", solve.block_size,
                        "Block size cap (default: exact cap, 50 i1s/external, 100 rmst)");
  solve_cmd->add_flag("--no-partition", solve.no_partition, "Solve the whole net at once");
  solve_cmd->add_option("--external", solve.external, "Command for --solver external");
  solve_cmd->add_option("--timeout", solve.timeout, "External solver timeout in seconds")
      ->capture_default_str();
  solve_cmd->add_option("--exact-cap", solve.exact_cap, "Largest net the exact solver accepts")
      ->capture_default_str();
  solve_cmd->add_option("-o,--output", solve.output, "Tree file to write ('-' for stdout)");
  solve_cmd->add_option("--svg", solve.svg, "SVG figure to write");

  PartitionOptions part;
  auto* part_cmd = app.add_subcommand("partition", "Build the partition only");
  part_cmd->add_option("input", part.input, "Net file ('-' for stdin)")->required();
  part_cmd->add_option("--block-size,-B", part.block_size, "Block size cap")
      ->capture_default_str();
  part_cmd->add_option("--dump", part.dump, "Text dump of leaves and segments ('-' for stdout)");
  part_cmd->add_option("--svg", part.svg, "SVG figure to write");

  BenchOptions bench;
  auto* bench_cmd = app.add_subcommand("bench", "Run a seeded degree sweep");
  bench_cmd->add_option("--degrees", bench.degrees, "a..b:step, a..b or a")
      ->capture_default_str();
  bench_cmd->add_option("--seeds", bench.seeds, "Instances per degree")->capture_default_str();
  bench_cmd->add_option("--first-seed", bench.first_seed, "First seed")->capture_default_str();
  bench_cmd
      ->add_option("--methods", bench.methods,
                   "Comma-separated: rmst, i1s, exact, external:<cmd>, bvh+<method>[@B]")
      ->delimiter(',')
      ->capture_default_str();
  bench_cmd->add_option("--reference", bench.reference, "Reference method label or 'best'")
      ->capture_default_str();
  bench_cmd->add_option("--csv", bench.csv, "CSV file to write ('-' for stdout)");
  bench_cmd->add_option("--timeout", bench.timeout, "External solver timeout in seconds")
      ->capture_default_str();
  bench_cmd->add_flag("--quiet", bench.quiet, "Skip the summary table");

  GenerateOptions gen;
  auto* gen_cmd = app.add_subcommand("generate", "Write a seeded random net");
  gen_cmd->add_option("--degree,-n", gen.degree, "Number of points")->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "Seed")->capture_default_str();
  gen_cmd->add_option("-o,--output", gen.output, "Net file ('-' for stdout)")
      ->capture_default_str();

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*solve_cmd) return cmd_solve(solve, out, err);
    if (*part_cmd) return cmd_partition(part, out, err);
    if (*bench_cmd) return cmd_bench(bench, out, err);
    if (*gen_cmd) return cmd_generate(gen, out);
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace rsmt::cli
