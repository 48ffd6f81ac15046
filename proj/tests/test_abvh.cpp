#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "rsmt/abvh.hpp"
#include "rsmt/bench.hpp"
#include "rsmt/error.hpp"

using namespace rsmt;

namespace {

using PairSet = std::set<std::pair<int, int>>;

PairSet neighbor_pairs(const Abvh& h) {
  PairSet out;
  for (const Adjacency& a : neighbors(h).pairs) {
    out.emplace(std::min(a.back_block, a.front_block), std::max(a.back_block, a.front_block));
  }
  return out;
}

PairSet oracle_pairs(const Abvh& h) {
  std::vector<RegionBox> boxes;
  for (NodeRef ref : h.leaves()) boxes.push_back(h.node(ref).region);
  return oracle::touching_pairs(boxes);
}

int block_of(const Abvh& h, const Point& p) {
  for (NodeRef ref : h.leaves()) {
    const auto pts = h.points_of(ref);
    if (std::find(pts.begin(), pts.end(), p) != pts.end()) return h.node(ref).block_id;
  }
  return -1;
}

void check_structure(const Abvh& h, std::span<const Point> input) {
  CHECK(check_tiling(h).empty());
  CHECK(check_segments(h).empty());
  CHECK(check_ranges(h).empty());
  // Repeated points with a small B force zero-extent leaves; boxes on either
  // side of one touch geometrically but are separated in the hierarchy.
  const double root_area = h.node(h.root()).region.area();
  bool flat_leaf = false;
  for (NodeRef ref : h.leaves()) flat_leaf |= root_area > 0 && h.node(ref).region.area() == 0;
  const PairSet fast = neighbor_pairs(h);
  const PairSet slow = oracle_pairs(h);
  if (flat_leaf) {
    CHECK(std::includes(slow.begin(), slow.end(), fast.begin(), fast.end()));
  } else {
    CHECK(fast == slow);
  }

  auto a = std::vector<Point>(input.begin(), input.end());
  auto b = std::vector<Point>(h.points().begin(), h.points().end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  CHECK(a == b);

  for (NodeRef ref : h.leaves()) {
    CHECK(h.node(ref).size() >= 1);
    CHECK(h.node(ref).size() <= h.max_block());
  }
  for (std::uint32_t i = 1; i <= h.node_count(); ++i) {
    const NodeRef ref{i};
    if (!h.node(ref).is_leaf()) CHECK(h.segments_of(ref).empty());
  }
  for (const Segment& s : h.segments()) CHECK(s.a < s.b);
}

}  // namespace

TEST_SUITE("abvh") {

TEST_CASE("single point") {
  const std::vector<Point> one{{0.25, 0.75}};
  const Abvh h = Abvh::build(one, 1);
  CHECK(h.stats().leaf_count == 1);
  CHECK(h.stats().interior_segment_count == 0);
  // The root box has zero extent, so none of its edges is stored.
  CHECK(h.stats().segment_count == 0);
  CHECK(neighbors(h).pairs.empty());
}

TEST_CASE("unit square corners, B=2") {
  const std::vector<Point> pts{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  const Abvh h = Abvh::build(pts, 2);
  CHECK(h.stats().leaf_count == 2);
  CHECK(h.stats().interior_segment_count == 1);
  CHECK(h.stats().segment_count == 7);
  CHECK(h.stats().height == 2);
  check_structure(h, pts);

  CHECK(block_of(h, {0, 0}) == 0);
  CHECK(block_of(h, {0, 1}) == 0);
  CHECK(block_of(h, {1, 0}) == 1);

  const auto adj = neighbors(h);
  REQUIRE(adj.pairs.size() == 1);
  const Segment& s = h.segments()[adj.pairs[0].segment];
  CHECK(s.axis == Axis::vertical);
  CHECK(s.c == 0.5);
  CHECK(s.a == 0);
  CHECK(s.b == 1);
  CHECK(adj.pairs[0].back_block == 0);
  CHECK(adj.pairs[0].front_block == 1);
  CHECK(adj.connected);

  std::ostringstream dump;
  write_debug_dump(h, dump);
  CHECK(dump.str() ==
        "abvh leaves=2 segments=7 interior=1 height=2\n"
        "leaf 0 0 0 0.5 1 2\n"
        "leaf 1 0.5 0 1 1 2\n"
        "segment H 0 0 0.5 NIL 0\n"
        "segment V 0 0 1 NIL 0\n"
        "segment H 1 0 0.5 NIL 0\n"
        "segment V 1 0 1 NIL 1\n"
        "segment H 1 0.5 1 NIL 1\n"
        "segment H 0 0.5 1 NIL 1\n"
        "segment V 0.5 0 1 0 1\n");
}

TEST_CASE("crossing segment is split and the far side is updated") {
  // Root cuts at x=2. The left child then cuts at y=2, splitting the x=2
  // segment while the right child still holds it; the right child later cuts
  // at y=2.5 and splits the upper piece again.
  const std::vector<Point> pts{{0, 0}, {1, 3}, {0.5, 1}, {4, 0}, {3, 3}, {3.5, 2}};
  const Abvh h = Abvh::build(pts, 2);
  check_structure(h, pts);
  CHECK(h.stats().leaf_count == 4);
  CHECK(h.stats().height == 3);
  CHECK(h.stats().interior_segment_count == 5);

  const int ll = block_of(h, {0, 0});
  const int lh = block_of(h, {1, 3});
  const int rl = block_of(h, {4, 0});
  const int rh = block_of(h, {3, 3});
  CHECK(h.leaf(ll).region == RegionBox{{0, 0}, {2, 2}});
  CHECK(h.leaf(lh).region == RegionBox{{0, 2}, {2, 3}});
  CHECK(h.leaf(rl).region == RegionBox{{2, 0}, {4, 2.5}});
  CHECK(h.leaf(rh).region == RegionBox{{2, 2.5}, {4, 3}});

  std::vector<std::tuple<double, double, int, int>> pieces;
  for (const Adjacency& a : neighbors(h).pairs) {
    const Segment& s = h.segments()[a.segment];
    if (s.axis == Axis::vertical && s.c == 2) pieces.emplace_back(s.a, s.b, a.back_block, a.front_block);
  }
  std::sort(pieces.begin(), pieces.end());
  const std::vector<std::tuple<double, double, int, int>> expected{
      {0, 2, ll, rl}, {2, 2.5, lh, rl}, {2.5, 3, lh, rh}};
  CHECK(pieces == expected);

  const PairSet want{{std::min(ll, lh), std::max(ll, lh)}, {std::min(rl, rh), std::max(rl, rh)},
                     {std::min(ll, rl), std::max(ll, rl)}, {std::min(lh, rl), std::max(lh, rl)},
                     {std::min(lh, rh), std::max(lh, rh)}};
  CHECK(neighbor_pairs(h) == want);
}

TEST_CASE("split axis follows the longer side of the region") {
  SUBCASE("identical x splits on y") {
    const std::vector<Point> pts{{1, 0}, {1, 1}, {1, 2}, {1, 3}};
    const Abvh h = Abvh::build(pts, 2);
    check_structure(h, pts);
    REQUIRE(h.stats().leaf_count == 2);
    CHECK(h.leaf(0).region == RegionBox{{1, 0}, {1, 1.5}});
    CHECK(h.leaf(1).region == RegionBox{{1, 1.5}, {1, 3}});
  }
  SUBCASE("square prefers x") {
    const std::vector<Point> pts{{0, 0}, {2, 2}};
    const Abvh h = Abvh::build(pts, 1);
    CHECK(h.leaf(0).region == RegionBox{{0, 0}, {1, 2}});
  }
}

TEST_CASE("duplicated median coordinate") {
  const std::vector<Point> pts{{0, 0}, {1, 0}, {1, 1}, {1, 2}, {3, 0}};
  const Abvh h = Abvh::build(pts, 3);
  check_structure(h, pts);
  REQUIRE(h.stats().leaf_count == 2);
  CHECK(h.leaf(0).region.hi.x == 1);
  CHECK(h.leaf(0).size() == 3);
  CHECK(h.leaf(1).size() == 2);
}

TEST_CASE("all points identical") {
  const std::vector<Point> pts(10, Point{0.5, 0.5});
  const Abvh h = Abvh::build(pts, 1);
  CHECK(h.stats().leaf_count == 10);
  CHECK(check_ranges(h).empty());
  CHECK(h.stats().segment_count == 0);
  CHECK(neighbors(h).pairs.empty());
}

TEST_CASE("4x4 grid with B=1 gives the grid adjacency") {
  std::vector<Point> pts;
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y) pts.push_back({double(x), double(y)});
  const Abvh h = Abvh::build(pts, 1);
  check_structure(h, pts);
  CHECK(h.stats().leaf_count == 16);
  CHECK(neighbor_pairs(h).size() == 24);
  const int a = block_of(h, {0, 0});
  const int b = block_of(h, {3, 3});
  CHECK_FALSE(neighbor_pairs(h).count({std::min(a, b), std::max(a, b)}));
}

TEST_CASE("1000 uniform points, B=50") {
  const auto pts = generate_net(1000, 5);
  const Abvh h = Abvh::build(pts, 50);
  check_structure(h, pts);
  CHECK(h.stats().leaf_count == 32);
  CHECK(neighbors(h).connected);
}

TEST_CASE("random instances match the oracles") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    for (std::size_t block : {1, 3, 7, 25}) {
      const std::size_t n = 10 + (seed * 37) % 400;
      const auto uniform = generate_net(n, seed);
      const Abvh a = Abvh::build(uniform, block);
      check_structure(a, uniform);
      const std::size_t leaves = (n + block - 1) / block;
      CHECK(a.stats().height <= std::size_t(std::ceil(std::log2(double(leaves)))) + 1);

      const auto grid = oracle::grid_net(n, 6 + int(seed % 10), seed);
      const Abvh g = Abvh::build(grid, block);
      check_structure(g, grid);

      // Distinct points never produce zero-extent leaves.
      const auto distinct = oracle::distinct(grid);
      const Abvh d = Abvh::build(distinct, block);
      check_structure(d, distinct);
      for (NodeRef ref : d.leaves()) {
        if (d.node(d.root()).region.area() > 0) CHECK(d.node(ref).region.area() > 0);
      }
      CHECK(neighbor_pairs(d) == oracle_pairs(d));
    }
  }
}

TEST_CASE("brute force adjacency") {
  std::vector<LeafRegion> side{{0, {{0, 0}, {1, 1}}}, {1, {{1, 0}, {2, 1}}}};
  CHECK(brute_force_adjacency(side).size() == 1);
  std::vector<LeafRegion> corner{{0, {{0, 0}, {1, 1}}}, {1, {{1, 1}, {2, 2}}}};
  CHECK(brute_force_adjacency(corner).empty());

  const auto pts = generate_net(500, 1);
  const Abvh h = Abvh::build(pts, 5);
  PairSet brute;
  for (auto [a, b] : brute_force_adjacency(leaf_regions(h))) brute.emplace(a, b);
  CHECK(brute == oracle_pairs(h));
  CHECK(brute == neighbor_pairs(h));
}

TEST_CASE("build rejects bad input") {
  CHECK_THROWS_AS(Abvh::build(std::vector<Point>{}, 1), InvalidInput);
  const std::vector<Point> pts{{0, 0}};
  CHECK_THROWS_AS(Abvh::build(pts, 0), InvalidInput);
  const std::vector<Point> nan{{0, std::numeric_limits<double>::quiet_NaN()}};
  CHECK_THROWS_AS(Abvh::build(nan, 1), InvalidInput);
}

}  // TEST_SUITE
