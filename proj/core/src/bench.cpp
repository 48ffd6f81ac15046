#include "rsmt/bench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <map>
#include <ostream>
#include <random>

#include "rsmt/error.hpp"
#include "text.hpp"

namespace rsmt {

namespace {

constexpr std::string_view kMethodHelp =
    "valid methods: rmst, i1s, exact, external:<command>, and bvh+<method>[@B] "
    "(e.g. bvh+i1s@30)";

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

bool parse_size(std::string_view text, std::size_t& out) {
  if (text.empty()) return false;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), out);
  return res.ec == std::errc{} && res.ptr == text.data() + text.size();
}

}  // namespace

std::vector<Point> generate_net(std::size_t degree, std::uint64_t seed) {
  if (degree < 1) throw InvalidInput("generate_net: degree must be at least 1");
  std::mt19937_64 rng(seed ^ (static_cast<std::uint64_t>(degree) * 0x9E3779B97F4A7C15ULL));
  constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
  std::vector<Point> points(degree);
  for (Point& p : points) {
    p.x = static_cast<double>(rng() >> 11) * kScale;
    p.y = static_cast<double>(rng() >> 11) * kScale;
  }
  return points;
}

double relative_error(double length, double reference) {
  if (!(reference > 0.0)) throw InvalidInput("relative_error: reference must be positive");
  return 100.0 * (length - reference) / reference;
}

std::size_t default_block_size(SolverKind kind, std::size_t exact_cap) {
  switch (kind) {
    case SolverKind::exact: return exact_cap;
    case SolverKind::iterated_one_steiner:
    case SolverKind::external: return 50;
    case SolverKind::rmst: return 100;
  }
  return 100;
}

MethodSpec parse_method(std::string_view label) {
  MethodSpec spec;
  spec.label = std::string(label);
  std::string_view rest = label;
  auto fail = [&]() -> MethodSpec {
    throw InvalidInput("unknown method '" + std::string(label) + "'; " + std::string(kMethodHelp));
  };

  constexpr std::string_view kBvh = "bvh+";
  std::optional<std::size_t> block;
  if (rest.starts_with(kBvh)) {
    spec.partitioned = true;
    rest.remove_prefix(kBvh.size());
    const auto at = rest.rfind('@');
    if (at != std::string_view::npos) {
      std::size_t b = 0;
      if (parse_size(rest.substr(at + 1), b)) {
        if (b < 1) fail();
        block = b;
        rest = rest.substr(0, at);
      }
    }
  }

  constexpr std::string_view kExternal = "external:";
  if (rest.starts_with(kExternal)) {
    spec.solver.kind = SolverKind::external;
    spec.solver.external_command = std::string(rest.substr(kExternal.size()));
    if (spec.solver.external_command.empty()) fail();
  } else if (rest == "external") {
    fail();
  } else if (const auto kind = parse_solver_kind(rest)) {
    spec.solver.kind = *kind;
  } else {
    fail();
  }
  spec.block_size = block.value_or(default_block_size(spec.solver.kind, spec.solver.exact_cap));
  return spec;
}

SuiteResult run_suite(const SuiteConfig& config,
                      const std::function<void(const BenchRecord&)>& on_record) {
  if (config.methods.empty()) throw InvalidInput("run_suite: no methods");
  const bool reference_is_best = config.reference == "best";
  if (!reference_is_best &&
      std::none_of(config.methods.begin(), config.methods.end(),
                   [&](const MethodSpec& m) { return m.label == config.reference; })) {
    throw InvalidInput("run_suite: reference '" + config.reference + "' is not among the methods");
  }

  SuiteResult result;
  for (std::size_t degree : config.degrees) {
    for (std::size_t s = 0; s < config.seeds; ++s) {
      const std::uint64_t seed = config.first_seed + s;
      const auto net = generate_net(degree, seed);
      const double bound = half_perimeter(net);
      const std::size_t first = result.records.size();

      for (const MethodSpec& method : config.methods) {
        BenchRecord rec;
        rec.degree = degree;
        rec.seed = seed;
        rec.method = method.label;
        rec.half_perimeter = bound;
        const auto start = std::chrono::steady_clock::now();
        try {
          if (method.partitioned) {
            PipelineConfig pc;
            pc.block_size = method.block_size;
            pc.solver = method.solver;
            pc.parallel_blocks = false;
            rec.length = run_pipeline(net, pc).tree.length;
          } else {
            rec.length = solve_rsmt(method.solver, net).length;
          }
        } catch (const std::exception& e) {
          rec.error = e.what();
        }
        rec.wall_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (on_record) on_record(rec);
        result.records.push_back(std::move(rec));
      }

      // Relative errors for this instance.
      const auto instance = std::span(result.records).subspan(first);
      std::optional<double> reference;
      for (const BenchRecord& r : instance) {
        if (!r.length) continue;
        if (reference_is_best) {
          reference = reference ? std::min(*reference, *r.length) : *r.length;
        } else if (r.method == config.reference) {
          reference = r.length;
        }
      }
      if (reference && *reference > 0.0) {
        for (BenchRecord& r : instance) {
          if (!r.length) continue;
          r.rel_error_pct = relative_error(*r.length, *reference);
        }
      }
    }

    for (const MethodSpec& method : config.methods) {
      DegreeAggregate agg;
      agg.degree = degree;
      agg.method = method.label;
      double time = 0.0, length = 0.0, error = 0.0;
      std::size_t with_error = 0, total = 0;
      for (const BenchRecord& r : result.records) {
        if (r.degree != degree || r.method != method.label) continue;
        ++total;
        time += r.wall_time_s;
        if (!r.length) {
          ++agg.failed;
          continue;
        }
        ++agg.succeeded;
        length += *r.length;
        if (r.rel_error_pct) {
          error += *r.rel_error_pct;
          ++with_error;
        }
      }
      if (total > 0) agg.mean_time_s = time / static_cast<double>(total);
      if (agg.succeeded > 0) agg.mean_length = length / static_cast<double>(agg.succeeded);
      if (with_error > 0) agg.mean_rel_error_pct = error / static_cast<double>(with_error);
      result.aggregates.push_back(std::move(agg));
    }
  }
  return result;
}

void write_csv(std::span<const BenchRecord> records, std::ostream& out) {
  std::string buf = "degree,seed,method,wall_time_s,length,rel_error_pct\n";
  for (const BenchRecord& r : records) {
    buf += std::to_string(r.degree);
    buf += ',';
    buf += std::to_string(r.seed);
    buf += ',';
    buf += csv_field(r.method);
    buf += ',';
    buf += fixed(r.wall_time_s, 6);
    buf += ',';
    if (r.length) detail::append_double(buf, *r.length);
    buf += ',';
    if (r.rel_error_pct) buf += fixed(*r.rel_error_pct, 6);
    buf += '\n';
  }
  out << buf;
}

void write_summary(const SuiteResult& result, std::span<const MethodSpec> methods,
                   std::ostream& out) {
  std::map<std::pair<std::size_t, std::string>, const DegreeAggregate*> index;
  std::vector<std::size_t> degrees;
  for (const DegreeAggregate& a : result.aggregates) {
    index[{a.degree, a.method}] = &a;
    if (degrees.empty() || degrees.back() != a.degree) degrees.push_back(a.degree);
  }

  auto table = [&](const char* title, auto cell) {
    out << title << '\n';
    std::string line = "degree";
    for (const MethodSpec& m : methods) line += "\t" + m.label;
    out << line << '\n';
    for (std::size_t d : degrees) {
      line = std::to_string(d);
      for (const MethodSpec& m : methods) {
        const auto it = index.find({d, m.label});
        line += '\t';
        line += it == index.end() ? std::string("-") : cell(*it->second);
      }
      out << line << '\n';
    }
  };

  table("Time (seconds)", [](const DegreeAggregate& a) {
    return fixed(a.mean_time_s, 4) + (a.failed > 0 ? " [" + std::to_string(a.failed) + " failed]"
                                                   : std::string());
  });
  out << '\n';
  table("Length and Relative Error", [](const DegreeAggregate& a) {
    if (!a.mean_length) return std::string("failed");
    std::string cell = fixed(*a.mean_length, 2);
    if (a.mean_rel_error_pct) cell += " (" + fixed(*a.mean_rel_error_pct, 2) + ")";
    return cell;
  });
}

TrendCheck check_length_trend(std::span<const DegreeAggregate> aggregates) {
  TrendCheck check;
  std::map<std::string, std::vector<const DegreeAggregate*>> by_method;
  for (const DegreeAggregate& a : aggregates) {
    if (a.mean_length) by_method[a.method].push_back(&a);
  }
  for (auto& [method, rows] : by_method) {
    std::sort(rows.begin(), rows.end(),
              [](const DegreeAggregate* x, const DegreeAggregate* y) { return x->degree < y->degree; });
    for (std::size_t i = 1; i < rows.size(); ++i) {
      ++check.adjacent_pairs;
      if (*rows[i]->mean_length < *rows[i - 1]->mean_length) {
        ++check.inversions;
        check.flagged.push_back(method + ": degree " + std::to_string(rows[i - 1]->degree) +
                                " -> " + std::to_string(rows[i]->degree) + " length drops");
      }
    }
  }
  return check;
}

std::vector<std::size_t> parse_degree_range(std::string_view text) {
  auto fail = [&]() -> std::vector<std::size_t> {
    throw InvalidInput("bad degree range '" + std::string(text) +
                       "'; expected a..b:step, a..b or a");
  };
  std::size_t lo = 0, hi = 0, step = 50;
  const auto dots = text.find("..");
  if (dots == std::string_view::npos) {
    if (!parse_size(text, lo) || lo < 1) fail();
    return {lo};
  }
  std::string_view upper = text.substr(dots + 2);
  const auto colon = upper.find(':');
  if (colon != std::string_view::npos) {
    if (!parse_size(upper.substr(colon + 1), step) || step < 1) fail();
    upper = upper.substr(0, colon);
  }
  if (!parse_size(text.substr(0, dots), lo) || !parse_size(upper, hi) || lo < 1 || hi < lo) fail();
  std::vector<std::size_t> out;
  for (std::size_t d = lo; d <= hi; d += step) out.push_back(d);
  return out;
}

}  // namespace rsmt
