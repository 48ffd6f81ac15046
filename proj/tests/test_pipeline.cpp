#include <cstdlib>
#include <numeric>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "rsmt/bench.hpp"
#include "rsmt/error.hpp"
#include "rsmt/pipeline.hpp"

using namespace rsmt;

namespace {

RectilinearTree single(Point p) {
  RectilinearTree t;
  t.terminals = {p};
  return t;
}

PipelineConfig config_for(SolverKind kind, std::size_t block) {
  PipelineConfig c;
  c.block_size = block;
  c.solver.kind = kind;
  return c;
}

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("inter block distance") {
  RectilinearTree b;
  b.terminals = {{5, 3}, {9, 9}};
  const auto d = inter_block_distance(single({0, 0}), b);
  CHECK(d.distance == 8);
  CHECK(d.from == Point{0, 0});
  CHECK(d.to == Point{5, 3});

  RectilinearTree shared;
  shared.terminals = {{1, 1}};
  shared.steiner = {{0, 0}};
  CHECK(inter_block_distance(single({0, 0}), shared).distance == 0);

  CHECK_THROWS_AS(inter_block_distance(RectilinearTree{}, b), InvalidInput);
}

TEST_CASE("inter block distance matches the reference on random trees") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto a = iterated_one_steiner(oracle::grid_net(10, 8, seed));
    const auto b = iterated_one_steiner(oracle::grid_net(10, 8, seed + 1000));
    const auto got = inter_block_distance(a, b);
    const auto want = oracle::closest_vertices(a.vertices(), b.vertices());
    CHECK(got.distance == want.d);
    CHECK(got.from == want.a);
    CHECK(got.to == want.b);
  }
}

TEST_CASE("stitch") {
  SUBCASE("one block") {
    const std::vector<RectilinearTree> blocks{single({0, 0})};
    const auto s = stitch(blocks, dense_block_graph(blocks));
    CHECK(s.connectors.empty());
    CHECK(s.order == std::vector<std::uint32_t>{0});
  }
  SUBCASE("path of three") {
    const std::vector<RectilinearTree> blocks{single({0, 0}), single({1, 0}), single({2, 0})};
    BlockGraph g;
    g.block_count = 3;
    g.edges = {{0, 1, inter_block_distance(blocks[0], blocks[1])},
               {1, 2, inter_block_distance(blocks[1], blocks[2])}};
    const auto s = stitch(blocks, g);
    CHECK(s.connectors ==
          std::vector<RectEdge>{{{0, 0}, {1, 0}}, {{1, 0}, {2, 0}}});
    CHECK(s.weight == 2);
  }
  SUBCASE("disconnected graph") {
    const std::vector<RectilinearTree> blocks{single({0, 0}), single({1, 0})};
    BlockGraph g;
    g.block_count = 2;
    CHECK_FALSE(is_connected(g));
    CHECK_THROWS_AS(stitch(blocks, g), InvalidInput);
  }
  SUBCASE("random 20 blocks against Kruskal") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      std::vector<RectilinearTree> blocks;
      for (std::uint64_t b = 0; b < 20; ++b) blocks.push_back(rmst(generate_net(3, seed * 100 + b)));
      const BlockGraph g = dense_block_graph(blocks);
      std::vector<std::tuple<double, std::size_t, std::size_t>> edges;
      for (const BlockEdge& e : g.edges) edges.emplace_back(e.link.distance, e.a, e.b);
      const auto s = stitch(blocks, g);
      CHECK(s.chosen.size() == 19);
      CHECK(lengths_equal(s.weight, oracle::mst_weight(20, edges)));
      CHECK(lengths_equal(edges_length(s.connectors), s.weight));
    }
  }
}

TEST_CASE("single block equals the whole-net solver") {
  for (SolverKind kind : {SolverKind::rmst, SolverKind::iterated_one_steiner, SolverKind::exact}) {
    const auto pts = generate_net(kind == SolverKind::exact ? 6 : 30, 4);
    const auto r = run_pipeline(pts, config_for(kind, 64));
    CHECK(r.report.block_count == 1);
    CHECK(r.connectors.empty());
    SolverSpec spec;
    spec.kind = kind;
    CHECK(r.tree.length == solve_rsmt(spec, pts).length);
  }
}

TEST_CASE("two points, B=1") {
  const std::vector<Point> pts{{0, 0}, {2, 3}};
  const auto r = run_pipeline(pts, config_for(SolverKind::rmst, 1));
  CHECK(r.report.block_count == 2);
  CHECK(r.report.connector_count == 1);
  CHECK(r.tree.length == 5);
  CHECK(validate_tree(r.tree, pts).ok());
}

TEST_CASE("1000 points, i1s blocks of 50") {
  const auto pts = generate_net(1000, 12);
  const auto r = run_pipeline(pts, config_for(SolverKind::iterated_one_steiner, 50));
  const auto report = validate_tree(r.tree, pts);
  CHECK_MESSAGE(report.ok(), report.summary());
  CHECK(r.tree.length <= rmst(pts).length);
  CHECK(r.report.block_count == 32);
  CHECK_FALSE(r.report.dense_fallback);
}

TEST_CASE("report accounting and neighbour restriction") {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const auto pts = generate_net(100 + seed * 40, seed);
    const auto r = run_pipeline(pts, config_for(SolverKind::rmst, 1 + seed * 3));
    const double blocks = std::accumulate(r.report.block_lengths.begin(),
                                          r.report.block_lengths.end(), 0.0);
    CHECK(lengths_equal(blocks + r.report.connector_length, r.report.final_length));
    CHECK(r.report.final_length == r.tree.length);
    CHECK(r.report.connector_count + 1 == r.report.block_count);
    CHECK_FALSE(r.report.dense_fallback);
    CHECK(validate_tree(r.tree, pts).ok());

    std::vector<RectilinearTree> trees;
    for (const auto& b : r.blocks) trees.push_back(b.tree);
    const double dense = stitch(trees, dense_block_graph(trees)).weight;
    CHECK(r.report.connector_length >= dense * (1 - 1e-12));
  }
}

TEST_CASE("parallel and sequential runs agree bit for bit") {
  const auto pts = generate_net(800, 21);
  auto seq = config_for(SolverKind::iterated_one_steiner, 30);
  seq.parallel_blocks = false;
  auto par = seq;
  par.parallel_blocks = true;
  par.max_workers = 4;
  const auto a = run_pipeline(pts, seq);
  const auto b = run_pipeline(pts, par);
  CHECK(b.report.workers == 4);
  CHECK(a.tree.length == b.tree.length);
  CHECK(a.tree.edges == b.tree.edges);
}

TEST_CASE("duplicates are merged") {
  auto pts = generate_net(100, 2);
  const auto copy = pts;
  pts.insert(pts.end(), copy.begin(), copy.begin() + 30);
  const auto r = run_pipeline(pts, config_for(SolverKind::rmst, 10));
  CHECK(r.report.duplicate_count == 30);
  CHECK(r.report.point_count == 100);
  CHECK(validate_tree(r.tree, pts).ok());
  CHECK(r.tree.length == run_pipeline(copy, config_for(SolverKind::rmst, 10)).tree.length);
}

TEST_CASE("heavy duplication on a coarse grid") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto pts = oracle::grid_net(200, 5, seed);
    const auto r = run_pipeline(pts, config_for(SolverKind::iterated_one_steiner, 3));
    CHECK(validate_tree(r.tree, pts).ok());
    CHECK_FALSE(r.report.dense_fallback);
  }
}

TEST_CASE("bad configuration") {
  CHECK_THROWS_AS(run_pipeline(std::vector<Point>{}, PipelineConfig{}), InvalidInput);
  const std::vector<Point> pts{{0, 0}};
  CHECK_THROWS_AS(run_pipeline(pts, config_for(SolverKind::rmst, 0)), InvalidInput);
}

TEST_CASE("worker count") {
  PipelineConfig c;
  c.parallel_blocks = false;
  CHECK(block_worker_count(c, 10) == 1);
  c.parallel_blocks = true;
  c.max_workers = 3;
  CHECK(block_worker_count(c, 10) == 3);
  CHECK(block_worker_count(c, 2) == 2);
  c.max_workers = 0;
  ::setenv("RSMT_BLOCK_WORKERS", "5", 1);
  CHECK(block_worker_count(c, 10) == 5);
  ::unsetenv("RSMT_BLOCK_WORKERS");
}

}  // TEST_SUITE
