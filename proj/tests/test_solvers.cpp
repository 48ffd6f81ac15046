#include <algorithm>
#include <limits>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "rsmt/bench.hpp"
#include "rsmt/error.hpp"
#include "rsmt/solvers.hpp"

using namespace rsmt;

namespace {

SolverSpec spec_of(SolverKind kind) {
  SolverSpec s;
  s.kind = kind;
  return s;
}

const SolverKind kBuiltin[] = {SolverKind::exact, SolverKind::rmst,
                               SolverKind::iterated_one_steiner};

void check_valid(const RectilinearTree& t, std::span<const Point> terms) {
  const auto report = validate_tree(t, terms);
  CHECK_MESSAGE(report.ok(), report.summary());
  CHECK(t.length >= half_perimeter(terms) * (1 - 1e-12));
}

bool has_point(std::span<const Point> pts, Point p) {
  return std::find(pts.begin(), pts.end(), p) != pts.end();
}

}  // namespace

TEST_SUITE("solvers") {

TEST_CASE("trivial nets") {
  for (SolverKind kind : kBuiltin) {
    CAPTURE(to_string(kind));
    const std::vector<Point> one{{0.5, 0.5}};
    const auto t1 = solve_rsmt(spec_of(kind), one);
    CHECK(t1.edges.empty());
    CHECK(t1.length == 0);

    const std::vector<Point> two{{0, 0}, {3, 4}};
    const auto t2 = solve_rsmt(spec_of(kind), two);
    CHECK(t2.length == 7);
    check_valid(t2, two);

    CHECK(solve_rsmt(spec_of(kind), std::vector<Point>{}).edges.empty());
  }
}

TEST_CASE("exact solver") {
  const std::vector<Point> tri{{0, 0}, {2, 0}, {1, 3}};
  const auto t = exact_rsmt(tri);
  CHECK(t.length == 5);
  CHECK(has_point(t.steiner, {1, 0}));
  check_valid(t, tri);

  const std::vector<Point> square{{0, 0}, {2, 0}, {0, 2}, {2, 2}};
  CHECK(exact_rsmt(square).length == 6);

  const std::vector<Point> two{{1, 1}, {4, 5}};
  const auto t2 = exact_rsmt(two);
  CHECK(t2.length == 7);
  CHECK(t2.steiner.size() <= 1);  // only the bend of the L

  const auto eight = generate_net(8, 1);
  CHECK_THROWS_WITH_AS(exact_rsmt(eight, 7), doctest::Contains("7"), SolverError);
  CHECK_THROWS_AS(exact_rsmt(std::vector<Point>{}), InvalidInput);
  SolverSpec capped = spec_of(SolverKind::exact);
  CHECK_THROWS_AS(solve_rsmt(capped, eight), SolverError);
  std::vector<Point> row8;
  for (int i = 0; i < 8; ++i) row8.push_back({double(i), 0});
  CHECK_THROWS_AS(solve_rsmt(capped, row8), SolverError);
  capped.exact_cap = 8;
  CHECK(solve_rsmt(capped, row8).length == 7);
}

TEST_CASE("rmst") {
  const std::vector<Point> row{{0, 0}, {1, 0}, {2, 0}};
  CHECK(rmst(row).length == 2);
  const std::vector<Point> tri{{0, 0}, {4, 0}, {2, 2}};
  CHECK(rmst(tri).length == 8);
  const std::vector<Point> one{{1, 2}};
  CHECK(rmst(one).length == 0);

  const std::vector<Point> two{{0, 0}, {3, 4}};
  const auto t = rmst(two);
  REQUIRE(t.edges.size() == 2);
  CHECK(t.edges[0] == RectEdge{{0, 0}, {0, 4}});
  CHECK(t.edges[1] == RectEdge{{0, 4}, {3, 4}});
}

TEST_CASE("prim ties prefer the lower pair") {
  const std::vector<Point> pts{{0, 0}, {1, 0}, {0, 1}};
  const auto edges = prim_mst(pts);
  REQUIRE(edges.size() == 2);
  CHECK(edges[0].from == 0);
  CHECK(edges[0].to == 1);
  CHECK(edges[1].from == 0);
  CHECK(edges[1].to == 2);
}

TEST_CASE("iterated 1-Steiner") {
  const std::vector<Point> tri{{0, 0}, {4, 0}, {2, 2}};
  const auto t = iterated_one_steiner(tri);
  CHECK(t.length == 6);
  CHECK(has_point(t.steiner, {2, 0}));
  check_valid(t, tri);

  const std::vector<Point> row{{0, 0}, {1, 0}, {2, 0}};
  CHECK(iterated_one_steiner(row).length == 2);
  const std::vector<Point> square{{0, 0}, {2, 0}, {0, 2}, {2, 2}};
  CHECK(iterated_one_steiner(square).length == 6);
}

TEST_CASE("exact matches Dreyfus-Wagner and rmst matches spanning tree enumeration") {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const std::size_t n = 2 + seed % 6;
    const auto pts = seed % 2 ? generate_net(n, seed) : oracle::grid_net(n, 5, seed);
    CAPTURE(seed);
    const double exact = exact_rsmt(pts).length;
    CHECK(lengths_equal(exact, oracle::steiner_length(pts)));
    const double spanning = oracle::spanning_tree_minimum(pts);
    CHECK(lengths_equal(rmst(pts).length, spanning));
    CHECK(lengths_equal(mst_weight(oracle::distinct(pts)), spanning));
  }
}

TEST_CASE("exact length is invariant under translation and axis swap") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto pts = generate_net(2 + seed % 6, seed + 100);
    const double base = exact_rsmt(pts).length;
    std::vector<Point> moved, swapped;
    for (const Point& p : pts) {
      moved.push_back({p.x + 3.25, p.y - 7.5});
      swapped.push_back({p.y, p.x});
    }
    CHECK(lengths_equal(exact_rsmt(moved).length, base, 1e-9));
    CHECK(lengths_equal(exact_rsmt(swapped).length, base));
  }
}

TEST_CASE("solvers are order independent and produce valid trees") {
  std::mt19937_64 rng(3);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const std::size_t n = 2 + seed % 6;
    auto pts = generate_net(n, seed);
    for (SolverKind kind : kBuiltin) {
      const auto t = solve_rsmt(spec_of(kind), pts);
      check_valid(t, pts);
      auto shuffled = pts;
      std::shuffle(shuffled.begin(), shuffled.end(), rng);
      shuffled.push_back(shuffled.front());
      CHECK(solve_rsmt(spec_of(kind), shuffled).length == t.length);
    }
  }
}

TEST_CASE("iterated 1-Steiner never loses to rmst on larger nets") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto pts = generate_net(10 + seed * 3, seed);
    const auto s = iterated_one_steiner(pts);
    check_valid(s, pts);
    CHECK(s.length <= rmst(pts).length * (1 + 1e-9));
  }
}

TEST_CASE("non-finite coordinates are rejected") {
  const std::vector<Point> bad{{0, 0}, {std::numeric_limits<double>::infinity(), 1}};
  CHECK_THROWS_AS(solve_rsmt(spec_of(SolverKind::rmst), bad), InvalidInput);
}

TEST_CASE("solver labels") {
  CHECK(parse_solver_kind("i1s") == SolverKind::iterated_one_steiner);
  CHECK(parse_solver_kind("iterated_one_steiner") == SolverKind::iterated_one_steiner);
  CHECK(parse_solver_kind("exact") == SolverKind::exact);
  CHECK(parse_solver_kind("rmst") == SolverKind::rmst);
  CHECK_FALSE(parse_solver_kind("flute").has_value());
  CHECK(to_string(SolverKind::iterated_one_steiner) == "i1s");
}

}  // TEST_SUITE
