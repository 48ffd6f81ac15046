#include "rsmt/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "disjoint_sets.hpp"
#include "exact_sum.hpp"
#include "rsmt/error.hpp"
#include "text.hpp"

namespace rsmt {

using detail::DisjointSets;
using detail::format_double;

bool is_finite(const Point& p) noexcept { return std::isfinite(p.x) && std::isfinite(p.y); }

RegionBox bounding_box(std::span<const Point> points) {
  if (points.empty()) throw InvalidInput("bounding_box: empty point set");
  RegionBox box{points.front(), points.front()};
  for (const Point& p : points) {
    box.lo.x = std::min(box.lo.x, p.x);
    box.lo.y = std::min(box.lo.y, p.y);
    box.hi.x = std::max(box.hi.x, p.x);
    box.hi.y = std::max(box.hi.y, p.y);
  }
  return box;
}

std::vector<Point> RectilinearTree::vertices() const {
  std::vector<Point> out;
  out.reserve(terminals.size() + steiner.size());
  out.insert(out.end(), terminals.begin(), terminals.end());
  out.insert(out.end(), steiner.begin(), steiner.end());
  return out;
}

double l1(const Point& p, const Point& q) noexcept {
  return std::abs(p.x - q.x) + std::abs(p.y - q.y);
}

double half_perimeter(std::span<const Point> points) {
  if (points.empty()) throw InvalidInput("half_perimeter: empty point set");
  const RegionBox box = bounding_box(points);
  detail::ExactSum sum;
  sum.add_distance(box.lo.x, box.hi.x);
  sum.add_distance(box.lo.y, box.hi.y);
  return sum.value();
}

std::vector<Point> hanan_grid(std::span<const Point> points) {
  if (points.empty()) throw InvalidInput("hanan_grid: empty point set");
  std::vector<double> xs, ys;
  xs.reserve(points.size());
  ys.reserve(points.size());
  for (const Point& p : points) {
    xs.push_back(p.x);
    ys.push_back(p.y);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());

  std::vector<Point> grid;
  grid.reserve(xs.size() * ys.size());
  for (double x : xs)
    for (double y : ys) grid.push_back({x, y});
  return grid;
}

double edges_length(std::span<const RectEdge> edges) {
  detail::ExactSum sum;
  for (const RectEdge& e : edges) {
    sum.add_distance(e.a.x, e.b.x);
    sum.add_distance(e.a.y, e.b.y);
  }
  return sum.value();
}

double tree_length(const RectilinearTree& tree) { return edges_length(tree.edges); }

void append_l_path(const Point& from, const Point& to, std::vector<RectEdge>& out) {
  const Point corner{from.x, to.y};
  if (from != corner) out.push_back({from, corner});
  if (corner != to) out.push_back({corner, to});
}

std::vector<Point> canonical_points(std::span<const Point> points) {
  std::vector<Point> out(points.begin(), points.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool lengths_equal(double a, double b, double rel_tol) noexcept {
  return std::abs(a - b) <= rel_tol * std::max(std::abs(a), std::abs(b));
}

bool ValidationReport::has(ViolationKind kind) const noexcept {
  return std::any_of(violations.begin(), violations.end(),
                     [kind](const Violation& v) { return v.kind == kind; });
}

std::string ValidationReport::summary() const {
  if (ok()) return "ok";
  std::string out;
  for (const Violation& v : violations) {
    if (!out.empty()) out += "; ";
    out += to_string(v.kind);
    if (!v.detail.empty()) out += ": " + v.detail;
  }
  return out;
}

ValidationReport validate_tree(const RectilinearTree& tree, std::span<const Point> terminals) {
  ValidationReport report;
  auto add = [&report](ViolationKind kind, std::string detail) {
    report.violations.push_back({kind, std::move(detail)});
  };

  for (const RectEdge& e : tree.edges) {
    if (e.a == e.b) {
      add(ViolationKind::degenerate_edge, to_string(e.a));
    } else if (e.a.x != e.b.x && e.a.y != e.b.y) {
      add(ViolationKind::non_axis_aligned, to_string(e.a) + "-" + to_string(e.b));
    }
  }

  std::map<Point, std::size_t> index;
  auto id_of = [&index](const Point& p) {
    return index.emplace(p, index.size()).first->second;
  };
  for (const RectEdge& e : tree.edges) {
    id_of(e.a);
    id_of(e.b);
  }

  const auto distinct_terminals = canonical_points(terminals);
  if (tree.edges.empty()) {
    // A lone vertex needs no edges.
    if (distinct_terminals.size() > 1) {
      add(ViolationKind::disconnected,
          std::to_string(distinct_terminals.size()) + " terminals but no edges");
    }
  } else {
    DisjointSets sets(index.size());
    for (const RectEdge& e : tree.edges) sets.unite(index.at(e.a), index.at(e.b));
    const std::size_t components = sets.components();
    if (components > 1) {
      add(ViolationKind::disconnected, std::to_string(components) + " components");
    }
    for (const Point& t : distinct_terminals) {
      if (!index.contains(t)) add(ViolationKind::missing_terminal, to_string(t));
    }
  }

  for (const Point& s : tree.steiner) {
    if (!index.contains(s)) add(ViolationKind::orphan_steiner, to_string(s));
  }

  const double recomputed = tree_length(tree);
  if (!lengths_equal(recomputed, tree.length)) {
    add(ViolationKind::length_mismatch,
        "stored " + format_double(tree.length) + " vs edges " + format_double(recomputed));
  }
  return report;
}

std::string to_string(const Point& p) {
  return "(" + format_double(p.x) + "," + format_double(p.y) + ")";
}

const char* to_string(ViolationKind kind) noexcept {
  switch (kind) {
    case ViolationKind::non_axis_aligned: return "non-axis-aligned edge";
    case ViolationKind::degenerate_edge: return "zero-length edge";
    case ViolationKind::disconnected: return "disconnected";
    case ViolationKind::missing_terminal: return "missing terminal";
    case ViolationKind::orphan_steiner: return "steiner point not on any edge";
    case ViolationKind::length_mismatch: return "length mismatch";
  }
  return "unknown";
}

}  // namespace rsmt
