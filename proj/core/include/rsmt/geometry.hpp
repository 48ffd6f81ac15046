#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace rsmt {

/// Relative tolerance used for all length comparisons.
inline constexpr double kLengthRelTol = 1e-9;

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend auto operator<=>(const Point&, const Point&) = default;
};

bool is_finite(const Point& p) noexcept;

/// Closed axis-aligned rectangle. lo <= hi componentwise.
struct RegionBox {
  Point lo;
  Point hi;

  double width() const noexcept { return hi.x - lo.x; }
  double height() const noexcept { return hi.y - lo.y; }
  double area() const noexcept { return width() * height(); }
  bool contains(const Point& p) const noexcept {
    return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
  }

  friend bool operator==(const RegionBox&, const RegionBox&) = default;
};

/// Tight bounding box of a nonempty point set. Throws InvalidInput when empty.
RegionBox bounding_box(std::span<const Point> points);

/// Axis-aligned edge with distinct endpoints.
struct RectEdge {
  Point a;
  Point b;

  friend bool operator==(const RectEdge&, const RectEdge&) = default;
};

struct RectilinearTree {
  std::vector<Point> terminals;
  std::vector<Point> steiner;  // every non-terminal edge endpoint, bends included
  std::vector<RectEdge> edges;
  double length = 0.0;

  /// Terminals followed by Steiner points.
  std::vector<Point> vertices() const;
};

double l1(const Point& p, const Point& q) noexcept;

/// (max x - min x) + (max y - min y), rounded once. Lower bound on any
/// spanning rectilinear tree.
double half_perimeter(std::span<const Point> points);

/// Cartesian product of distinct x and distinct y coordinates, sorted by (x, y).
std::vector<Point> hanan_grid(std::span<const Point> points);

/// Sum of L1 edge lengths; overlapping edges are counted once per edge. The
/// sum is exact before its final rounding, so it does not depend on edge
/// order.
double tree_length(const RectilinearTree& tree);
double edges_length(std::span<const RectEdge> edges);

/// Appends the L-shaped path from `from` to `to` bending at (from.x, to.y).
/// Zero-length pieces are dropped, so a coincident pair appends nothing.
void append_l_path(const Point& from, const Point& to, std::vector<RectEdge>& out);

/// Sorted copy with exact duplicates removed.
std::vector<Point> canonical_points(std::span<const Point> points);

bool lengths_equal(double a, double b, double rel_tol = kLengthRelTol) noexcept;

enum class ViolationKind {
  non_axis_aligned,
  degenerate_edge,
  disconnected,
  missing_terminal,
  orphan_steiner,
  length_mismatch,
};

struct Violation {
  ViolationKind kind;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
  bool has(ViolationKind kind) const noexcept;
  std::string summary() const;
};

/// Checks that `tree` is a connected rectilinear tree spanning `terminals`.
/// Connectivity counts only exactly coincident endpoints; crossing edges do
/// not join components.
ValidationReport validate_tree(const RectilinearTree& tree, std::span<const Point> terminals);

std::string to_string(const Point& p);
const char* to_string(ViolationKind kind) noexcept;

}  // namespace rsmt
