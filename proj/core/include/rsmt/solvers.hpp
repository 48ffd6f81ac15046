#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rsmt/geometry.hpp"

namespace rsmt {

enum class SolverKind { exact, rmst, iterated_one_steiner, external };

struct SolverSpec {
  SolverKind kind = SolverKind::rmst;
  std::size_t exact_cap = 7;
  std::string external_command;
  std::chrono::duration<double> external_timeout{60.0};
};

/// Short label used on the command line: exact, rmst, i1s, external.
std::string_view to_string(SolverKind kind) noexcept;
/// Accepts the short labels plus "iterated_one_steiner".
std::optional<SolverKind> parse_solver_kind(std::string_view name) noexcept;

/// Solves one RSMT instance with the solver named by `spec`. Duplicate points
/// are merged and the result does not depend on input order. Fewer than two
/// distinct points give a tree without edges.
RectilinearTree solve_rsmt(const SolverSpec& spec, std::span<const Point> points);

/// Optimal tree by enumerating Hanan-grid Steiner sets of size <= n-2 and
/// taking the smallest L1 MST. Throws InvalidInput when empty and SolverError
/// when more than `cap` distinct points are given.
RectilinearTree exact_rsmt(std::span<const Point> points, std::size_t cap = 7);

/// Rectilinear minimum spanning tree (Prim, O(n^2)), each MST edge laid out as
/// an L-path bending at (attached.x, new.y).
RectilinearTree rmst(std::span<const Point> points);

/// Iterated 1-Steiner: greedily add the Hanan candidate with the largest MST
/// gain until no candidate saves more than 1e-12, then drop added points of
/// MST degree <= 2 in a single pass.
RectilinearTree iterated_one_steiner(std::span<const Point> points);

/// Runs `command` through /bin/sh, sends the points on stdin and reads an
/// edge list back (see io.hpp for the format). Throws ExternalSolverError on
/// launch failure, nonzero exit, timeout, malformed reply or a reply that does
/// not span the points.
RectilinearTree external_solve(const std::string& command, std::span<const Point> points,
                               std::chrono::duration<double> timeout = std::chrono::seconds(60));

/// Weight of the L1 minimum spanning tree.
double mst_weight(std::span<const Point> points);

struct MstEdge {
  std::uint32_t from;  // attached earlier
  std::uint32_t to;
};

/// Prim order MST edges. Among equal weights the lower index pair wins.
std::vector<MstEdge> prim_mst(std::span<const Point> points);

/// Tree over `terminals` and `steiner` joined by their L1 MST. The bends of
/// the L-paths are added to the Steiner points.
RectilinearTree mst_tree(std::span<const Point> terminals, std::span<const Point> steiner);

}  // namespace rsmt
