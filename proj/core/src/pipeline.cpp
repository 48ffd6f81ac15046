#include "rsmt/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <map>
#include <numeric>
#include <queue>
#include <thread>
#include <tuple>

#include "disjoint_sets.hpp"
#include "rsmt/error.hpp"

namespace rsmt {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Stable dedupe: keeps the first occurrence of each point.
std::vector<Point> dedupe_stable(std::span<const Point> points) {
  std::vector<std::uint32_t> order(points.size());
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t i, std::uint32_t j) { return points[i] < points[j]; });
  std::vector<bool> keep(points.size(), false);
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k == 0 || points[order[k]] != points[order[k - 1]]) keep[order[k]] = true;
  }
  std::vector<Point> out;
  out.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i)
    if (keep[i]) out.push_back(points[i]);
  return out;
}

std::size_t env_worker_cap() {
  const char* raw = std::getenv("RSMT_BLOCK_WORKERS");
  if (raw == nullptr || *raw == '\0') return 0;
  char* end = nullptr;
  const long v = std::strtol(raw, &end, 10);
  if (end == raw || *end != '\0' || v < 1) return 0;
  return static_cast<std::size_t>(v);
}

}  // namespace

InterBlockDistance inter_block_distance(const RectilinearTree& a, const RectilinearTree& b) {
  const auto va = a.vertices();
  const auto vb = b.vertices();
  if (va.empty() || vb.empty()) throw InvalidInput("inter_block_distance: tree without vertices");
  InterBlockDistance best{l1(va[0], vb[0]), va[0], vb[0]};
  for (const Point& p : va) {
    for (const Point& q : vb) {
      const double d = l1(p, q);
      if (d < best.distance ||
          (d == best.distance && std::tie(p, q) < std::tie(best.from, best.to))) {
        best = {d, p, q};
      }
    }
  }
  return best;
}

BlockGraph neighbor_block_graph(std::span<const RectilinearTree> blocks,
                                const NeighborList& neighbors) {
  BlockGraph g;
  g.block_count = blocks.size();
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  pairs.reserve(neighbors.pairs.size());
  for (const Adjacency& adj : neighbors.pairs) {
    auto a = static_cast<std::uint32_t>(adj.back_block);
    auto b = static_cast<std::uint32_t>(adj.front_block);
    if (a > b) std::swap(a, b);
    pairs.emplace_back(a, b);
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  g.edges.reserve(pairs.size());
  for (const auto& [a, b] : pairs) {
    g.edges.push_back({a, b, inter_block_distance(blocks[a], blocks[b])});
  }
  return g;
}

BlockGraph dense_block_graph(std::span<const RectilinearTree> blocks) {
  BlockGraph g;
  g.block_count = blocks.size();
  for (std::uint32_t a = 0; a < blocks.size(); ++a) {
    for (std::uint32_t b = a + 1; b < blocks.size(); ++b) {
      g.edges.push_back({a, b, inter_block_distance(blocks[a], blocks[b])});
    }
  }
  return g;
}

bool is_connected(const BlockGraph& graph) {
  detail::DisjointSets sets(graph.block_count);
  for (const BlockEdge& e : graph.edges) sets.unite(e.a, e.b);
  return sets.components() <= 1;
}

StitchResult stitch(std::span<const RectilinearTree> blocks, const BlockGraph& graph) {
  StitchResult out;
  const std::size_t n = graph.block_count;
  if (n != blocks.size()) throw InvalidInput("stitch: block graph does not match block list");
  if (n == 0) return out;

  std::vector<std::vector<std::uint32_t>> incident(n);
  for (std::uint32_t i = 0; i < graph.edges.size(); ++i) {
    incident[graph.edges[i].a].push_back(i);
    incident[graph.edges[i].b].push_back(i);
  }

  using Entry = std::tuple<double, std::uint32_t, std::uint32_t, std::uint32_t>;  // w, a, b, edge
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  std::vector<bool> attached(n, false);
  auto attach = [&](std::uint32_t block) {
    attached[block] = true;
    out.order.push_back(block);
    for (std::uint32_t i : incident[block]) {
      const BlockEdge& e = graph.edges[i];
      const std::uint32_t other = e.a == block ? e.b : e.a;
      if (!attached[other]) heap.emplace(e.link.distance, e.a, e.b, i);
    }
  };

  attach(0);
  while (!heap.empty() && out.order.size() < n) {
    const auto [w, a, b, index] = heap.top();
    heap.pop();
    if (attached[a] && attached[b]) continue;
    const BlockEdge& e = graph.edges[index];
    const bool from_a = attached[a];
    const Point from = from_a ? e.link.from : e.link.to;
    const Point to = from_a ? e.link.to : e.link.from;
    append_l_path(from, to, out.connectors);
    out.chosen.push_back(e);
    out.weight += w;
    attach(from_a ? b : a);
  }
  if (out.order.size() != n) throw InvalidInput("stitch: block graph is disconnected");
  return out;
}

std::size_t block_worker_count(const PipelineConfig& config, std::size_t block_count) {
  if (!config.parallel_blocks || block_count <= 1) return 1;
  std::size_t cap = config.max_workers;
  if (cap == 0) cap = env_worker_cap();
  if (cap == 0) cap = std::max(1u, std::thread::hardware_concurrency());
  return std::max<std::size_t>(1, std::min(cap, block_count));
}

PipelineResult run_pipeline(std::span<const Point> points, const PipelineConfig& config) {
  if (points.empty()) throw InvalidInput("pipeline: empty point set");
  if (config.block_size < 1) throw InvalidInput("pipeline: block size must be at least 1");

  PipelineResult result;
  PipelineReport& report = result.report;
  const std::vector<Point> net = dedupe_stable(points);
  report.point_count = net.size();
  report.duplicate_count = points.size() - net.size();

  auto start = Clock::now();
  const Abvh abvh = Abvh::build(net, config.block_size);
  report.build_seconds = seconds_since(start);
  report.block_count = abvh.stats().leaf_count;
  report.segment_count = abvh.stats().segment_count;
  report.height = abvh.stats().height;

  // Solve blocks.
  start = Clock::now();
  const std::size_t block_count = abvh.leaves().size();
  result.blocks.resize(block_count);
  std::vector<std::exception_ptr> failures(block_count);
  std::vector<char> fell_back(block_count, 0);
  for (std::size_t i = 0; i < block_count; ++i) {
    const NodeRef leaf = abvh.leaves()[i];
    result.blocks[i].region = abvh.node(leaf).region;
    const auto pts = abvh.points_of(leaf);
    result.blocks[i].points.assign(pts.begin(), pts.end());
  }

  auto solve_block = [&](std::size_t i) {
    BlockSolution& block = result.blocks[i];
    try {
      block.tree = solve_rsmt(config.solver, block.points);
    } catch (const ExternalSolverError&) {
      if (config.solver.kind == SolverKind::external && config.fallback_on_external_error) {
        block.tree = rmst(block.points);
        fell_back[i] = 1;
      } else {
        failures[i] = std::current_exception();
      }
    } catch (...) {
      failures[i] = std::current_exception();
    }
  };

  report.workers = block_worker_count(config, block_count);
  if (report.workers <= 1) {
    for (std::size_t i = 0; i < block_count; ++i) solve_block(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(report.workers);
    for (std::size_t w = 0; w < report.workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < block_count; i = next++) solve_block(i);
      });
    }
  }
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }
  report.external_fallbacks =
      static_cast<std::size_t>(std::count(fell_back.begin(), fell_back.end(), 1));
  report.solve_seconds = seconds_since(start);

  // Stitch.
  start = Clock::now();
  std::vector<RectilinearTree> trees;
  trees.reserve(block_count);
  for (const BlockSolution& b : result.blocks) trees.push_back(b.tree);

  const NeighborList adjacency = neighbors(abvh);
  report.neighbor_pairs = adjacency.pairs.size();
  BlockGraph graph = neighbor_block_graph(trees, adjacency);
  if (!is_connected(graph)) {
    report.dense_fallback = true;
    graph = dense_block_graph(trees);
  }
  StitchResult joined = stitch(trees, graph);
  report.stitch_seconds = seconds_since(start);

  // Assemble.
  RectilinearTree& tree = result.tree;
  tree.terminals = net;
  std::vector<Point> steiner;
  for (const RectilinearTree& t : trees) {
    steiner.insert(steiner.end(), t.steiner.begin(), t.steiner.end());
    tree.edges.insert(tree.edges.end(), t.edges.begin(), t.edges.end());
    report.block_lengths.push_back(t.length);
  }
  steiner = canonical_points(steiner);
  const auto sorted_terminals = canonical_points(net);
  std::set_difference(steiner.begin(), steiner.end(), sorted_terminals.begin(),
                      sorted_terminals.end(), std::back_inserter(tree.steiner));
  tree.edges.insert(tree.edges.end(), joined.connectors.begin(), joined.connectors.end());
  tree.length = tree_length(tree);

  report.connector_count = joined.chosen.size();
  report.connector_length = edges_length(joined.connectors);
  report.final_length = tree.length;
  result.connectors = std::move(joined.connectors);
  return result;
}

}  // namespace rsmt
