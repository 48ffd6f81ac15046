#pragma once

// Text formats.
//
// Net file / solver request:
//   n
//   x y        (n lines)
// Net files may contain '#' comment lines and blank lines anywhere.
//
// Tree file / solver reply:
//   m
//   x1 y1 x2 y2   (m lines, each edge axis-aligned)
//
// Numbers are written in the shortest decimal form that reads back to the
// same double, so files round-trip exactly.

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "rsmt/geometry.hpp"

namespace rsmt {

std::vector<Point> read_net(std::istream& in);
std::vector<Point> read_net_file(const std::filesystem::path& path);
void write_net(std::span<const Point> points, std::ostream& out);

std::vector<RectEdge> read_edge_list(std::istream& in);
void write_edge_list(std::span<const RectEdge> edges, std::ostream& out);
void write_tree_file(const RectilinearTree& tree, const std::filesystem::path& path);
std::vector<RectEdge> read_tree_file(const std::filesystem::path& path);

/// Tree over `terminals` built from a bare edge list: every edge endpoint that
/// is not a terminal becomes a Steiner point.
RectilinearTree tree_from_edges(std::span<const Point> terminals, std::vector<RectEdge> edges);

}  // namespace rsmt
